#include "markov_embed/logsearch.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "markov_embed/linalg.hpp"

namespace markov {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Decomposition {
    CMatrix vecs;
    CMatrix inv;
    std::vector<cd> values;
    std::vector<std::size_t> real_idx;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (Im > 0, partner)
};

Decomposition decompose(const Matrix& m) {
    const auto d = m.rows();
    if (!is_cyclic(m)) throw EmbedError(ErrorCode::NotCyclic, "M does not have a cyclic (simple) spectrum");
    Eigen::EigenSolver<Matrix> es(m, true);
    if (es.info() != Eigen::Success) throw EmbedError(ErrorCode::ConvergenceFailure, "eigen decomposition failed");
    Decomposition dec;
    dec.vecs = es.eigenvectors();
    for (Eigen::Index j = 0; j < d; ++j) dec.vecs.col(j).normalize();
    Eigen::JacobiSVD<CMatrix> svd(dec.vecs);
    const auto& s = svd.singularValues();
    const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
    if (cond > 1e12) {
        std::ostringstream os;
        os << "eigenvector matrix condition number " << cond << " exceeds 1e12";
        throw EmbedError(ErrorCode::NotCyclic, os.str());
    }
    dec.inv = dec.vecs.inverse();
    const auto& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < d; ++j) {
        if (std::abs(ev(j)) <= 1e-14 * scale) throw EmbedError(ErrorCode::Singular, "M has a zero eigenvalue");
        dec.values.push_back(ev(j));
    }
    // Eigen returns each complex pair as adjacent entries, positive imaginary part first.
    for (Eigen::Index j = 0; j < d; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (ev(j).imag() == 0.0) {
            dec.real_idx.push_back(uj);
        } else if (ev(j).imag() > 0.0) {
            dec.pairs.emplace_back(uj, uj + 1);
            ++j;
        }
    }
    return dec;
}

}  // namespace

std::vector<SquareMatrix> real_log_branches(const StochasticMatrix& sm, const BranchWindow& w, double imag_bound) {
    if (w.k_max < 0 || w.k_max > 64) throw EmbedError(ErrorCode::OutOfDomain, "k_max must lie in [0, 64]");
    const Matrix& m = sm.mat();
    const auto d = m.rows();
    const Decomposition dec = decompose(m);
    for (const auto i : dec.real_idx)
        if (dec.values[i].real() < 0.0) return {};

    std::vector<cd> mu(dec.values.size());
    for (const auto i : dec.real_idx) mu[i] = std::log(dec.values[i].real());
    std::vector<std::vector<int>> choices;
    for (const auto& [p, q] : dec.pairs) {
        const cd base = std::log(dec.values[p]);
        std::vector<int> ks;
        for (int k = -w.k_max; k <= w.k_max; ++k)
            if (std::abs(base.imag() + kTwoPi * k) <= imag_bound) ks.push_back(k);
        if (ks.empty()) return {};
        choices.push_back(std::move(ks));
    }

    std::vector<SquareMatrix> out;
    std::vector<std::size_t> odometer(choices.size(), 0);
    const double m_scale = std::max(1.0, norm_inf(m));
    while (true) {
        for (std::size_t c = 0; c < dec.pairs.size(); ++c) {
            const auto [p, q] = dec.pairs[c];
            const cd l = std::log(dec.values[p]) + cd(0.0, kTwoPi * choices[c][odometer[c]]);
            mu[p] = l;
            mu[q] = std::conj(l);
        }
        CVector muv(d);
        for (Eigen::Index j = 0; j < d; ++j) muv(j) = mu[static_cast<std::size_t>(j)];
        const CMatrix lc = dec.vecs * muv.asDiagonal() * dec.inv;
        const double imag = lc.imag().cwiseAbs().maxCoeff();
        const double lscale = std::max(1.0, lc.real().cwiseAbs().maxCoeff());
        Matrix l = lc.real();
        if (imag <= 1e-10 * lscale) {
            if (norm_inf(expm(l) - m) <= 1e-8 * m_scale) out.emplace_back(std::move(l));
        }
        std::size_t c = 0;
        for (; c < choices.size(); ++c) {
            if (++odometer[c] < choices[c].size()) break;
            odometer[c] = 0;
        }
        if (c == choices.size()) break;
    }
    return out;
}

std::vector<RateMatrix> filter_generators(const std::vector<SquareMatrix>& cands, double tol) {
    std::vector<RateMatrix> out;
    for (const auto& c : cands) {
        try {
            out.push_back(validate_generator(c, tol));
        } catch (const EmbedError&) {
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RateMatrix& a, const RateMatrix& b) { return norm_inf(a.mat()) < norm_inf(b.mat()); });
    return out;
}

EmbedVerdict branch_search(const StochasticMatrix& m, const BranchWindow& w, double tol) {
    const double det = m.mat().determinant();
    if (!(det > 0.0)) return EmbedVerdict::not_embeddable("(2) det(M) is not positive");
    // Gershgorin: sigma(Q) lies in the disk of radius max |Q_ii| <= -tr Q = -log det M.
    const double bound = -std::log(det);
    const double imag_bound = bound * (1.0 + 1e-9) + 1e-12;
    std::vector<SquareMatrix> cands;
    try {
        cands = real_log_branches(m, w, imag_bound);
    } catch (const EmbedError& e) {
        if (e.code() == ErrorCode::NotCyclic) return EmbedVerdict::undecided(std::string("branch search: ") + e.what());
        throw;
    }
    const auto gens = filter_generators(cands, std::max(tol, 1e-10 * (1.0 + bound)));
    if (!gens.empty()) {
        EmbedVerdict v;
        v.verdict = Verdict::Embeddable;
        for (const auto& g : gens) v.generators.push_back(make_generator(m.mat(), g.mat(), Provenance::BranchSearch));
        return v;
    }
    const bool complete = bound <= kTwoPi * w.k_max - std::numbers::pi;
    std::ostringstream os;
    os.precision(10);
    if (complete) {
        os << "no real logarithm is a generator; every branch with |Im| <= -log det M = " << bound
           << " was checked";
        return EmbedVerdict::not_embeddable(os.str());
    }
    os << "no generator among branches |k| <= " << w.k_max << ", but the generator bound " << bound
       << " reaches beyond the window";
    return EmbedVerdict::undecided(os.str());
}

}  // namespace markov
