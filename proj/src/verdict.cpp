#include "markov_embed/verdict.hpp"

#include "markov_embed/linalg.hpp"

namespace markov {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Embeddable: return "embeddable";
        case Verdict::NotEmbeddable: return "not_embeddable";
        case Verdict::Undecided: return "undecided";
    }
    return "undecided";
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::Kendall: return "kendall";
        case Provenance::EqualInput: return "equal_input";
        case Provenance::Circulant: return "circulant";
        case Provenance::Symmetric: return "symmetric";
        case Provenance::DoublyStochastic: return "doubly_stochastic";
        case Provenance::BranchSearch: return "branch_search";
    }
    return "branch_search";
}

EmbedVerdict EmbedVerdict::not_embeddable(std::string reason) {
    EmbedVerdict v;
    v.verdict = Verdict::NotEmbeddable;
    v.reasons.push_back(std::move(reason));
    return v;
}

EmbedVerdict EmbedVerdict::undecided(std::string reason) {
    EmbedVerdict v;
    v.verdict = Verdict::Undecided;
    v.reasons.push_back(std::move(reason));
    return v;
}

Generator make_generator(const Matrix& m, Matrix q, Provenance p,
                         std::vector<std::pair<std::string, double>> params) {
    Generator g{std::move(q), p, 0.0, std::move(params)};
    g.residual = norm_inf(expm(g.q) - m);
    return g;
}

EmbedVerdict embeddable_with(Generator g) {
    EmbedVerdict v;
    v.verdict = Verdict::Embeddable;
    v.generators.push_back(std::move(g));
    return v;
}

}  // namespace markov
