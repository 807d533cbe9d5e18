#pragma once

#include <complex>
#include <vector>

#include "markov_embed/matrix.hpp"

namespace markov {

/// Numerical equality thresholds used by the spectral routines. The defaults
/// are conservative for d <= 16 and unit-scale entries.
struct SpectralTolerances {
    /// Two eigenvalues are equal iff |a - b| <= cluster * (1 + max |lambda|).
    double cluster = 1e-8;
    /// Singular values below rank * max(1, sigma_max) count as zero.
    double rank = 1e-8;
};

struct Eigenvalue {
    std::complex<double> value;
    int multiplicity = 1;
};

struct Spectrum {
    /// Clustered eigenvalues, sorted by descending real part then imaginary part.
    std::vector<Eigenvalue> eigenvalues;
    bool diagonalizable = true;
    int min_poly_degree = 1;

    int dim() const;
    /// All eigenvalues with multiplicity expanded.
    std::vector<std::complex<double>> expanded() const;
};

/// e^{tA} via scaling and squaring with a degree-13 diagonal Pade approximant.
Matrix expm(const Matrix& a, double t = 1.0);
SquareMatrix expm(const SquareMatrix& a, double t = 1.0);

/// Principal matrix logarithm by inverse scaling and squaring.
/// Throws SpectrumOnCut for eigenvalues on (-inf, 0) and Singular for a zero eigenvalue.
Matrix principal_log(const Matrix& m);
SquareMatrix principal_log(const SquareMatrix& m);

/// Principal square root via the Denman-Beavers iteration.
Matrix sqrtm_db(const Matrix& m);

/// Raw (unclustered) eigenvalues.
std::vector<std::complex<double>> eigenvalues(const Matrix& a);

Spectrum spectrum(const Matrix& a, const SpectralTolerances& tol = {});
Spectrum spectrum(const SquareMatrix& a, const SpectralTolerances& tol = {});

int numerical_rank(const Matrix& a, double rel_tol = 1e-8);
int numerical_rank(const CMatrix& a, double rel_tol = 1e-8);

/// Dimension of span{Q, Q^2, ..., Q^{d-1}}.
int alg_dimension(const Matrix& q, double rel_tol = 1e-8);
int alg_dimension(const RateMatrix& q, double rel_tol = 1e-8);

/// True iff the minimal polynomial has degree d. Decided by Krylov rank on
/// three fixed pseudo-random start vectors (majority vote).
bool is_cyclic(const Matrix& a, double rel_tol = 1e-8);
bool is_cyclic(const SquareMatrix& a, double rel_tol = 1e-8);

/// Least-squares projection of `target` onto span{basis^1, ..., basis^{d-1}};
/// returns the max-abs residual.
double power_span_residual(const Matrix& basis, const Matrix& target);

}  // namespace markov
