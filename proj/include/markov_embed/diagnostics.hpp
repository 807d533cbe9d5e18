#pragma once

#include <string>
#include <vector>

#include "markov_embed/linalg.hpp"
#include "markov_embed/matrix.hpp"

namespace markov {

/// Outcome of the necessary-condition battery. Conditions are numbered as in
/// the README:
///   (1) sigma(M) = exp(sigma(Q)), not testable on M alone;
///   (2) 0 < det M <= 1, with det M = 1 only for the identity;
///   (3) every eigenvalue other than 1 lies strictly inside the unit disk;
///   (4) negative real eigenvalues have even algebraic multiplicity;
///   (5) M is reducible or strictly positive;
///   (6) M_ij > 0 and M_jk > 0 imply M_ik > 0.
/// overall == false proves M is not embeddable; overall == true proves nothing.
struct NecessityReport {
    double det = 0.0;
    bool det_ok = false;
    bool no_zero_eigenvalue = false;
    bool elving_ok = false;
    /// Some eigenvalue other than 1 sits within tol of the unit circle.
    bool elving_borderline = false;
    bool negative_real_even_multiplicity = false;
    bool positivity_or_reducible = false;
    bool transitivity_ok = false;
    bool overall = false;
    std::vector<std::string> failures;
    std::vector<std::string> notes;
};

struct StructureFlags {
    bool positive = false;
    bool irreducible = false;
    bool primitive = false;
    bool doubly_stochastic = false;
    bool symmetric = false;
};

NecessityReport necessary_conditions(const StochasticMatrix& m, const SpectralTolerances& tol = {});

/// Graph flags from the zero pattern; entries <= m.tol() count as zero.
StructureFlags structure_flags(const StochasticMatrix& m);

/// lim M^n by repeated squaring. Throws PeripheralSpectrum if some eigenvalue
/// other than 1 has modulus 1.
StochasticMatrix limit_matrix(const StochasticMatrix& m);

/// Checks that R = M_inf - 1 lies in alg(Q) and alg(M - 1) (residual <= 1e-7).
/// Throws OracleMismatch unless ||e^Q - M||_inf <= 1e-8.
bool check_R_in_alg(const StochasticMatrix& m, const RateMatrix& q);

}  // namespace markov
