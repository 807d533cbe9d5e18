#pragma once

#include <array>
#include <optional>
#include <utility>

#include "markov_embed/matrix.hpp"
#include "markov_embed/verdict.hpp"

namespace markov {

/// M = 1 + sum_r x_r K_r with K_r = P^r - 1 and P the cyclic shift.
struct CirculantCoeffs {
    int dim = 0;
    Vector x;  // x_1 .. x_{d-1}
};

/// Q = sum_i alpha_i K_i.
struct CirculantRates {
    int dim = 0;
    Vector alpha;  // alpha_1 .. alpha_{d-1}
};

/// K_r = P^r - 1.
Matrix circulant_basis(int dim, int r);
Matrix circulant_matrix(const CirculantCoeffs& c);
Matrix circulant_generator(const CirculantRates& r);

/// Coefficients iff each row is the cyclic right shift of the previous one.
std::optional<CirculantCoeffs> detect_circulant(const StochasticMatrix& m, double tol = kDefaultTol);

/// f_m^(d)(t) = sum_{l >= 0} t^{ld+m} / (ld+m)!, via the character sum
/// (1/d) sum_l omega^{-ml} exp(omega^l t).
double f_char(int d, int m, double t);
/// Same function by direct summation of the Taylor series.
double f_char_taylor(int d, int m, double t);
/// Imaginary part left over by the character sum; zero in exact arithmetic.
double f_char_imag_residue(int d, int m, double t);

/// (x, y) with exp(alpha K_1 + beta K_2) = 1 + x K_1 + y K_2.
std::pair<double, double> circ3_exp(double alpha, double beta);
/// (x, y, z) with exp(alpha K_1 + beta K_2 + gamma K_3) = 1 + x K_1 + y K_2 + z K_3.
std::array<double, 3> circ4_exp(double alpha, double beta, double gamma);

/// exp(sum alpha_i K_i) through the cyclic-group convolution of f-functions.
/// Throws DimensionTooLarge for d > 12.
CirculantCoeffs circ_general_exp(const CirculantRates& r);

/// Inverts circ_general_exp from a starting guess by damped Newton steps with
/// the analytic Jacobian. Returns the rates and the final max-abs residual.
std::pair<CirculantRates, double> circ_newton(const CirculantCoeffs& target, const CirculantRates& start);

struct CirculantOptions {
    /// Eigenvalues with modulus below this are treated as zero (envelope).
    double envelope_tol = 1e-9;
    /// Admissible negative slack on recovered rates before rejection.
    double rate_tol = 1e-9;
    /// Enumeration cap; beyond it the verdict is Undecided.
    long long max_branches = 2'000'000;
};

/// Decides embeddability of a circulant Markov matrix. Every generator found
/// is circulant with non-negative rates; all of them are listed, smallest first.
EmbedVerdict circ_general_embed(const CirculantCoeffs& c, const CirculantOptions& opt = {});
EmbedVerdict circ3_embed(double x, double y, const CirculantOptions& opt = {});
EmbedVerdict circ4_embed(double x, double y, double z, const CirculantOptions& opt = {});

}  // namespace markov
