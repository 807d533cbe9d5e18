#include "markov_embed/diagnostics.hpp"

#include <cmath>
#include <sstream>

namespace markov {

namespace {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

BoolMatrix pattern(const Matrix& m, double tol) { return (m.array() > tol).matrix(); }

BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
    const auto d = a.rows();
    BoolMatrix out = BoolMatrix::Constant(d, d, false);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index k = 0; k < d; ++k)
            if (a(i, k))
                for (Eigen::Index j = 0; j < d; ++j) out(i, j) = out(i, j) || b(k, j);
    return out;
}

bool strongly_connected(const BoolMatrix& g) {
    const auto d = g.rows();
    // Reachability closure of I + G.
    BoolMatrix reach = g;
    for (Eigen::Index i = 0; i < d; ++i) reach(i, i) = true;
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index i = 0; i < d; ++i)
            if (reach(i, k))
                for (Eigen::Index j = 0; j < d; ++j) reach(i, j) = reach(i, j) || reach(k, j);
    return reach.all();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

StructureFlags structure_flags(const StochasticMatrix& sm) {
    const Matrix& m = sm.mat();
    const double tol = sm.tol();
    const auto d = m.rows();
    const BoolMatrix g = pattern(m, tol);
    StructureFlags f;
    f.positive = g.all();
    f.irreducible = strongly_connected(g);
    if (f.irreducible) {
        // Wielandt: an irreducible primitive matrix has G^k > 0 for k = (d-1)^2 + 1.
        const auto bound = (d - 1) * (d - 1) + 1;
        BoolMatrix power = g;
        for (Eigen::Index k = 1; k <= bound && !f.primitive; ++k) {
            if (power.all()) f.primitive = true;
            power = bool_product(power, g);
        }
    }
    const double sym_tol = std::max(tol, 1e-12);
    f.doubly_stochastic = (m.colwise().sum().array() - 1.0).abs().maxCoeff() <= sym_tol;
    f.symmetric = (m - m.transpose()).cwiseAbs().maxCoeff() <= sym_tol;
    return f;
}

NecessityReport necessary_conditions(const StochasticMatrix& sm, const SpectralTolerances& tol) {
    const Matrix& m = sm.mat();
    const auto d = m.rows();
    NecessityReport r;
    const Spectrum sp = spectrum(m, tol);
    double max_abs = 0.0;
    for (const auto& e : sp.eigenvalues) max_abs = std::max(max_abs, std::abs(e.value));
    const double eq_tol = tol.cluster * (1.0 + max_abs);

    r.det = m.determinant();
    const bool is_identity = (m - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= sm.tol();
    const double det_floor = 1e-14;
    r.det_ok = r.det > det_floor && r.det <= 1.0 + 1e-12 && (r.det < 1.0 - 1e-12 || is_identity);
    if (!r.det_ok) {
        if (r.det <= det_floor) {
            r.failures.push_back("(2) det(M) = " + fmt(r.det) + " is not positive");
        } else {
            r.failures.push_back("(2) det(M) = 1 but M is not the identity");
        }
    }

    r.no_zero_eigenvalue = true;
    r.elving_ok = true;
    r.negative_real_even_multiplicity = true;
    const double band = std::max(sm.tol(), 1e-12);
    for (const auto& e : sp.eigenvalues) {
        const auto z = e.value;
        if (std::abs(z) <= eq_tol) r.no_zero_eigenvalue = false;
        if (std::abs(z - 1.0) > eq_tol) {
            const double mod = std::abs(z);
            if (mod > 1.0 + band) {
                r.elving_ok = false;
            } else if (mod >= 1.0 - band) {
                r.elving_borderline = true;
            }
        }
        if (z.imag() == 0.0 && z.real() < -eq_tol && e.multiplicity % 2 != 0) {
            r.negative_real_even_multiplicity = false;
            r.failures.push_back("(4) negative eigenvalue " + fmt(z.real()) + " has odd multiplicity " +
                                 std::to_string(e.multiplicity));
        }
    }
    if (!r.no_zero_eigenvalue) r.failures.push_back("(2) M has a zero eigenvalue");
    if (!r.elving_ok) r.failures.push_back("(3) an eigenvalue other than 1 lies outside the unit disk");
    if (r.elving_borderline) {
        r.notes.push_back("(3) an eigenvalue other than 1 lies within tol of the unit circle; left undecided");
    }

    const StructureFlags flags = structure_flags(sm);
    r.positivity_or_reducible = flags.positive || !flags.irreducible;
    if (!r.positivity_or_reducible) {
        r.failures.push_back(flags.primitive ? "(5) M is primitive but not positive"
                                             : "(5) M is irreducible but not positive");
    }

    const BoolMatrix g = pattern(m, sm.tol());
    r.transitivity_ok = true;
    for (Eigen::Index i = 0; i < d && r.transitivity_ok; ++i)
        for (Eigen::Index j = 0; j < d && r.transitivity_ok; ++j)
            for (Eigen::Index k = 0; k < d; ++k)
                if (g(i, j) && g(j, k) && !g(i, k)) {
                    r.transitivity_ok = false;
                    r.failures.push_back("(6) M(" + std::to_string(i) + "," + std::to_string(j) + ") > 0 and M(" +
                                         std::to_string(j) + "," + std::to_string(k) + ") > 0 but M(" +
                                         std::to_string(i) + "," + std::to_string(k) + ") = 0");
                    break;
                }

    r.overall = r.det_ok && r.no_zero_eigenvalue && r.elving_ok && r.negative_real_even_multiplicity &&
                r.positivity_or_reducible && r.transitivity_ok;
    return r;
}

StochasticMatrix limit_matrix(const StochasticMatrix& sm) {
    const Matrix& m = sm.mat();
    const double eq_tol = 1e-8 * 2.0;
    for (const auto& z : eigenvalues(m)) {
        if (std::abs(z - 1.0) > eq_tol && std::abs(z) >= 1.0 - 1e-9) {
            throw EmbedError(ErrorCode::PeripheralSpectrum,
                             "eigenvalue " + fmt(z.real()) + (z.imag() >= 0 ? "+" : "") + fmt(z.imag()) +
                                 "i has unit modulus");
        }
    }
    Matrix x = m;
    for (int k = 0; k <= 60; ++k) {
        Matrix y = x * x;
        if (norm_inf(y - x) < 1e-12) return validate_stochastic(SquareMatrix(std::move(y)), 1e-8);
        x = std::move(y);
    }
    throw EmbedError(ErrorCode::PeripheralSpectrum, "powers of M did not converge");
}

bool check_R_in_alg(const StochasticMatrix& m, const RateMatrix& q) {
    const double mismatch = norm_inf(expm(q.mat()) - m.mat());
    if (mismatch > 1e-8) {
        throw EmbedError(ErrorCode::OracleMismatch, "||e^Q - M|| = " + fmt(mismatch));
    }
    const auto d = m.dim();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix r = limit_matrix(m).mat() - id;
    return power_span_residual(q.mat(), r) <= 1e-7 && power_span_residual(m.mat() - id, r) <= 1e-7;
}

}  // namespace markov
