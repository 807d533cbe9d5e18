#pragma once

#include <vector>

#include "markov_embed/matrix.hpp"
#include "markov_embed/verdict.hpp"

namespace markov {

/// Symmetric 3x3 generator with Q_12 = alpha, Q_13 = beta, Q_23 = gamma.
struct SymRates {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

/// Doubly stochastic 3x3 generator: the symmetric part above plus eps times
/// the antisymmetric E = ((0,1,-1),(-1,0,1),(1,-1,0)).
/// Metzler iff |eps| <= min(alpha, beta, gamma).
struct DStochRates {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double eps = 0.0;
};

/// Off-diagonal parameters of a 3x3 doubly stochastic Markov matrix:
/// M_12 = a + e, M_21 = a - e, M_13 = b - e, M_31 = b + e, M_23 = c + e, M_32 = c - e.
struct DStochParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double e = 0.0;
};

Matrix sym_generator(const SymRates& r);
Matrix dstoch_generator(const DStochRates& r);
/// Inverse of dstoch_generator on doubly stochastic 3x3 matrices with zero row sums.
DStochRates dstoch_rates_of(const Matrix& q);
DStochParams dstoch_params_of(const Matrix& m);
Matrix dstoch_matrix(const DStochParams& p);

/// Antisymmetric E above and the all-1/3 matrix minus 1 (J_3).
Matrix antisym_e3();
Matrix j3();

/// Closed-form e^Q for a symmetric generator.
StochasticMatrix sym_exp(double alpha, double beta, double gamma);
/// Closed-form e^Q for a doubly stochastic generator; trigonometric when
/// s_eps^2 < 0. Throws ConstraintViolation if |eps| > min(alpha, beta, gamma).
StochasticMatrix dstoch_exp(double alpha, double beta, double gamma, double eps);
/// Imaginary part left when the closed form is evaluated in complex arithmetic.
double dstoch_exp_imag_residue(double alpha, double beta, double gamma, double eps);

/// sinh(s)/s and cosh(s) as functions of s^2, valid for either sign of s^2.
struct HypPair {
    double sinhc;
    double cosh;
};
HypPair hyp_of_square(double s2);

struct SymNecessary {
    bool det_ok = false;      // 2(a+b+c) < 1 + 3(ab+bc+ca)
    bool lower_ok = false;    // 3(ab+bc+ca) <= 2(a+b+c)
    bool trace_ok = false;    // a + b + c < 1
    bool product_ok = false;  // 0 <= 3(ab+bc+ca) < 1
    bool all() const noexcept { return det_ok && lower_ok && trace_ok && product_ok; }
};
/// a = M_12, b = M_13, c = M_23 of a symmetric Markov matrix.
SymNecessary sym_necessary(double a, double b, double c);

/// Exact criterion for symmetric matrices with a zero entry: ab + bc + ca = 0
/// and max(a, b, c) < 1/2.
bool sym_zero_pattern_embeddable(double a, double b, double c);

/// Symmetric 3x3 M. Positive spectrum with a Metzler principal logarithm gives
/// a symmetric generator; every other case is handed to dstoch_embed.
EmbedVerdict sym_embed(const StochasticMatrix& m);

/// Doubly stochastic 3x3 M. Complete: every doubly stochastic generator is a
/// real logarithm of M restricted to the plane orthogonal to (1,1,1), and all
/// such logarithms satisfying the generator bound are enumerated.
/// Throws NotDoublyStochastic.
EmbedVerdict dstoch_embed(const StochasticMatrix& m);

/// M = 1 + c_M J_3 with c_M > 1: embeddable iff c_M <= 1 + e^{-pi sqrt 3}.
/// Throws OutOfDomain for c_M <= 1.
EmbedVerdict const_input_exceptional(double c_m);

/// Generators 3 alpha J_3 + n T, T = (pi/sqrt 3) E, of M = 1 + c_M J_3 with
/// even n = 2m (c_M < 1) or odd n = 2k+1 (c_M > 1), branch index up to k_max.
/// Each is verified by the exponential round trip. Throws OutOfDomain.
std::vector<Matrix> multi_embeddings(double c_m, int k_max);

enum class MinPolyCase { Deg1, Deg2Double1, Deg2Simple1, Deg3 };
std::string_view to_string(MinPolyCase c);
/// Throws InternalConsistency if the degree-2 simple-1 case is not equal-input.
MinPolyCase min_poly_case(const StochasticMatrix& m);

}  // namespace markov
