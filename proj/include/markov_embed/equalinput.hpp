#pragma once

#include <optional>

#include "markov_embed/matrix.hpp"
#include "markov_embed/verdict.hpp"

namespace markov {

/// Column parameters of an equal-input matrix M_C = (1 - c) 1 + C, where every
/// row of C equals c_vec. The same record describes the generator Q = C - c 1.
struct EqualInputParams {
    Vector c_vec;
    double c_sum = 0.0;
    bool constant_input = false;

    int dim() const noexcept { return static_cast<int>(c_vec.size()); }
};

/// Throws OutOfDomain on negative entries or fewer than two entries.
EqualInputParams make_equal_input(Vector c_vec);

/// M_C and Q_C for the given parameters.
Matrix ei_matrix(const EqualInputParams& p);
Matrix ei_generator(const EqualInputParams& p);

std::optional<EqualInputParams> detect_equal_input(const StochasticMatrix& m, double tol = kDefaultTol);

/// e^Q = 1 + ((1 - e^{-c}) / c) Q for Q = C - c 1.
StochasticMatrix ei_exp(const EqualInputParams& q);

/// Embeddable with an equal-input generator iff 0 <= c < 1. For c >= 1 the
/// verdict is NotEmbeddable when d is even and Undecided when d is odd.
/// Throws NotEqualInput.
EmbedVerdict ei_embed(const StochasticMatrix& m);

/// Parameters of M_p M_q: C'' = (1 - c') C + C'.
EqualInputParams ei_compose(const EqualInputParams& p, const EqualInputParams& q);

/// Equal-input generator of e^Q e^{Q2}. Throws DegenerateSum if c + c2 = 0.
RateMatrix ei_product_generator(const EqualInputParams& q, const EqualInputParams& q2);

/// True iff ||(c_1, ..., c_d) X||_inf <= tol, i.e. X commutes with Q = C - c 1.
bool commutes_with_ei(const Matrix& x, const EqualInputParams& q, double tol = 1e-10);

}  // namespace markov
