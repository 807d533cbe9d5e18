#include "markov_embed/dispatch.hpp"

#include "markov_embed/classes3.hpp"
#include "markov_embed/kendall2.hpp"
#include "markov_embed/linalg.hpp"

namespace markov {

ClassTags detect_classes(const StochasticMatrix& m) {
    ClassTags t;
    t.equal_input = detect_equal_input(m, m.tol());
    t.circulant = detect_circulant(m, m.tol());
    const StructureFlags f = structure_flags(m);
    t.symmetric = f.symmetric;
    t.doubly_stochastic = f.doubly_stochastic;
    return t;
}

namespace {

EmbedVerdict solve(const StochasticMatrix& m, const ClassTags& tags, const EmbedOptions& opt,
                   std::vector<std::string>& notes) {
    const int d = m.dim();
    if (d == 2) return embed_2x2(m);
    if (tags.equal_input) {
        EmbedVerdict v = ei_embed(m);
        if (v.verdict != Verdict::Undecided) return v;
        for (auto& r : v.reasons) notes.push_back(std::move(r));
    }
    // Every 3x3 circulant is doubly stochastic, and the d = 3 solver is complete there.
    if (d == 3 && tags.symmetric) return sym_embed(m);
    if (d == 3 && tags.doubly_stochastic) return dstoch_embed(m);
    if (tags.circulant) {
        EmbedVerdict v = circ_general_embed(*tags.circulant);
        if (v.verdict != Verdict::Undecided) return v;
        for (auto& r : v.reasons) notes.push_back(std::move(r));
    }
    if (!is_cyclic(m.mat())) {
        return EmbedVerdict::undecided("repeated eigenvalues outside the supported matrix classes");
    }
    return branch_search(m, opt.window, opt.tol);
}

}  // namespace

EmbedReport embed(const StochasticMatrix& m, const EmbedOptions& opt) {
    EmbedReport rep;
    rep.classes = detect_classes(m);
    rep.necessity = necessary_conditions(m);
    if (!rep.necessity.overall) {
        rep.verdict.verdict = Verdict::NotEmbeddable;
        rep.verdict.reasons = rep.necessity.failures;
        return rep;
    }
    std::vector<std::string> notes;
    try {
        rep.verdict = solve(m, rep.classes, opt, notes);
    } catch (const EmbedError& e) {
        if (e.code() != ErrorCode::ConvergenceFailure && e.code() != ErrorCode::NotCyclic) throw;
        rep.verdict = EmbedVerdict::undecided(e.what());
    }
    notes.insert(notes.end(), rep.verdict.notes.begin(), rep.verdict.notes.end());
    rep.verdict.notes = std::move(notes);

    auto& gens = rep.verdict.generators;
    const auto before = gens.size();
    std::erase_if(gens, [](const Generator& g) { return !(g.residual <= 1e-8); });
    if (gens.size() != before) {
        rep.verdict.notes.push_back(std::to_string(before - gens.size()) +
                                    " candidate generator(s) dropped for round-trip residual above 1e-8");
    }
    if (rep.verdict.verdict == Verdict::Embeddable && gens.empty()) {
        rep.verdict.verdict = Verdict::Undecided;
        rep.verdict.reasons.push_back("no candidate generator passed the round-trip check");
    }
    if (rep.verdict.verdict == Verdict::Undecided && rep.necessity.elving_borderline) {
        rep.verdict.reasons.push_back("an eigenvalue other than 1 lies within tol of the unit circle");
    }
    return rep;
}

}  // namespace markov
