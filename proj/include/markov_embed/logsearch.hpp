#pragma once

#include <limits>
#include <vector>

#include "markov_embed/matrix.hpp"
#include "markov_embed/verdict.hpp"

namespace markov {

struct BranchWindow {
    /// Largest |k| in the branch offset 2 pi i k per conjugate pair; at most 64.
    int k_max = 8;
};

/// All real logarithms of a cyclic M whose conjugate-pair branch indices lie in
/// the window, skipping branches whose eigenvalue has |Im| > imag_bound.
/// Empty when M has a simple negative eigenvalue.
/// Throws NotCyclic (repeated or numerically defective spectrum) and Singular.
std::vector<SquareMatrix> real_log_branches(const StochasticMatrix& m, const BranchWindow& w = {},
                                            double imag_bound = std::numeric_limits<double>::infinity());

/// Candidates that validate as generators at tol, sorted by ascending ||.||_inf.
std::vector<RateMatrix> filter_generators(const std::vector<SquareMatrix>& cands, double tol = kDefaultTol);

/// Branch search for a generator. Any generator Q of M has |Im mu| <= -log det M
/// for every eigenvalue mu, so when that bound fits inside the window an empty
/// result proves M is not embeddable.
EmbedVerdict branch_search(const StochasticMatrix& m, const BranchWindow& w = {}, double tol = kDefaultTol);

}  // namespace markov
