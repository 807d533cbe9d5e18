#pragma once

#include "markov_embed/matrix.hpp"
#include "markov_embed/verdict.hpp"

namespace markov {

/// M = ((1-a, a), (b, 1-b)).
struct TwoByTwoParams {
    double a = 0.0;
    double b = 0.0;
};

TwoByTwoParams two_by_two_params(const StochasticMatrix& m);

/// Complete answer for d = 2: embeddable iff a + b < 1, and then the
/// generator Q = -(log(1 - a - b) / (a + b)) (M - 1) is unique.
/// a + b within m.tol() of 1 counts as det M = 0 and is rejected.
EmbedVerdict embed_2x2(const StochasticMatrix& m);

/// e^{tQ} for Q = ((-alpha, alpha), (beta, -beta)), via e^{tQ} = 1 + phi(t) Q.
StochasticMatrix exp_2x2(double alpha, double beta, double t);

}  // namespace markov
