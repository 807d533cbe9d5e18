#include "markov_embed/classes3.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "markov_embed/equalinput.hpp"
#include "markov_embed/linalg.hpp"

namespace markov {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

Matrix ones3() { return Matrix::Constant(3, 3, 1.0 / 3.0); }

// Orthonormal basis of the plane orthogonal to (1, 1, 1).
Matrix plane_basis() {
    Matrix u(3, 2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0), -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0), 0.0,
        -2.0 / std::sqrt(6.0);
    return u;
}

// e^{-delta} sinh(s)/s and e^{-delta} cosh(s) for s = sqrt(s2), computed
// without overflow when s and delta are both large.
HypPair damped_hyp(double s2, double delta) {
    if (s2 > 0.25) {
        const double s = std::sqrt(s2);
        const double up = std::exp(s - delta);
        const double down = std::exp(-s - delta);
        return {(up - down) / (2.0 * s), (up + down) / 2.0};
    }
    const HypPair h = hyp_of_square(s2);
    const double damp = std::exp(-delta);
    return {damp * h.sinhc, damp * h.cosh};
}

Matrix closed_form_exp(const Matrix& q, double delta, double s2) {
    // With N = Q + delta 1 and E = (1/3) ones:
    // e^Q = E + e^{-delta} (cosh(s) (1 - E) + (sinh(s)/s) (N - delta E)).
    const Matrix e = ones3();
    const Matrix n = q + delta * Matrix::Identity(3, 3);
    const HypPair h = damped_hyp(s2, delta);
    return e + h.cosh * (Matrix::Identity(3, 3) - e) + h.sinhc * (n - delta * e);
}

void require_admissible(const DStochRates& r) {
    const double lo = std::min({r.alpha, r.beta, r.gamma});
    if (lo < 0.0 || std::abs(r.eps) > lo + 1e-12 * (1.0 + lo)) {
        throw EmbedError(ErrorCode::ConstraintViolation,
                         "need alpha, beta, gamma >= 0 and |eps| <= min(alpha, beta, gamma)");
    }
}

double s_eps_squared(const DStochRates& r) {
    const double a = r.alpha;
    const double b = r.beta;
    const double g = r.gamma;
    return a * a + b * b + g * g - a * b - b * g - g * a - 3.0 * r.eps * r.eps;
}

// Constant-input generator 3 alpha J_3 + n T with tiny negative rates from
// rounding at the admissibility boundary set to zero.
Matrix exceptional_generator(double alpha, int n) {
    Matrix q = 3.0 * alpha * j3() + n * (kPi / kSqrt3) * antisym_e3();
    for (int i = 0; i < 3; ++i) {
        double off = 0.0;
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            q(i, j) = std::max(q(i, j), 0.0);
            off += q(i, j);
        }
        q(i, i) = -off;
    }
    return q;
}

bool is_doubly_stochastic3(const StochasticMatrix& m) {
    return m.dim() == 3 &&
           (m.mat().colwise().sum().array() - 1.0).abs().maxCoeff() <= std::max(m.tol(), 1e-12) * 3.0;
}

}  // namespace

Matrix antisym_e3() {
    Matrix e(3, 3);
    e << 0, 1, -1, -1, 0, 1, 1, -1, 0;
    return e;
}

Matrix j3() { return ones3() - Matrix::Identity(3, 3); }

Matrix sym_generator(const SymRates& r) { return dstoch_generator({r.alpha, r.beta, r.gamma, 0.0}); }

Matrix dstoch_generator(const DStochRates& r) {
    Matrix q(3, 3);
    q << 0, r.alpha + r.eps, r.beta - r.eps,  //
        r.alpha - r.eps, 0, r.gamma + r.eps,  //
        r.beta + r.eps, r.gamma - r.eps, 0;
    for (int i = 0; i < 3; ++i) q(i, i) = -q.row(i).sum();
    return q;
}

DStochRates dstoch_rates_of(const Matrix& q) {
    DStochRates r;
    r.alpha = 0.5 * (q(0, 1) + q(1, 0));
    r.beta = 0.5 * (q(0, 2) + q(2, 0));
    r.gamma = 0.5 * (q(1, 2) + q(2, 1));
    r.eps = ((q(0, 1) - q(1, 0)) + (q(2, 0) - q(0, 2)) + (q(1, 2) - q(2, 1))) / 6.0;
    return r;
}

DStochParams dstoch_params_of(const Matrix& m) {
    const DStochRates r = dstoch_rates_of(m);
    return {r.alpha, r.beta, r.gamma, r.eps};
}

Matrix dstoch_matrix(const DStochParams& p) {
    return Matrix::Identity(3, 3) + dstoch_generator({p.a, p.b, p.c, p.e});
}

HypPair hyp_of_square(double s2) {
    if (std::abs(s2) < 0.25) {
        // Even power series; 12 terms reach double precision for |s2| < 0.25.
        double sinhc = 0.0;
        double cosh = 0.0;
        double term_c = 1.0;  // s2^k / (2k)!
        double term_s = 1.0;  // s2^k / (2k+1)!
        for (int k = 0; k < 12; ++k) {
            cosh += term_c;
            sinhc += term_s;
            term_c *= s2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
            term_s *= s2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        }
        return {sinhc, cosh};
    }
    if (s2 > 0.0) {
        const double s = std::sqrt(s2);
        return {std::sinh(s) / s, std::cosh(s)};
    }
    const double w = std::sqrt(-s2);
    return {std::sin(w) / w, std::cos(w)};
}

StochasticMatrix sym_exp(double alpha, double beta, double gamma) {
    if (!(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0)) {
        throw EmbedError(ErrorCode::ConstraintViolation, "symmetric rates must be non-negative");
    }
    return dstoch_exp(alpha, beta, gamma, 0.0);
}

StochasticMatrix dstoch_exp(double alpha, double beta, double gamma, double eps) {
    const DStochRates r{alpha, beta, gamma, eps};
    require_admissible(r);
    Matrix m = closed_form_exp(dstoch_generator(r), alpha + beta + gamma, s_eps_squared(r));
    return validate_stochastic(SquareMatrix(std::move(m)), 1e-10);
}

double dstoch_exp_imag_residue(double alpha, double beta, double gamma, double eps) {
    const DStochRates r{alpha, beta, gamma, eps};
    require_admissible(r);
    using cd = std::complex<double>;
    const double delta = alpha + beta + gamma;
    const cd s = std::sqrt(cd(s_eps_squared(r), 0.0));
    const cd sinhc = std::abs(s) < 1e-8 ? cd(1.0) : std::sinh(s) / s;
    const cd ch = std::cosh(s);
    const Matrix e = ones3();
    const Matrix n = dstoch_generator(r) + delta * Matrix::Identity(3, 3);
    const CMatrix out = e.cast<cd>() + std::exp(-delta) * (ch * (Matrix::Identity(3, 3) - e).cast<cd>() +
                                                          sinhc * (n - delta * e).cast<cd>());
    return out.imag().cwiseAbs().maxCoeff();
}

SymNecessary sym_necessary(double a, double b, double c) {
    const double s = a + b + c;
    const double p = a * b + b * c + c * a;
    SymNecessary r;
    r.det_ok = 2.0 * s < 1.0 + 3.0 * p;
    r.lower_ok = 3.0 * p <= 2.0 * s;
    r.trace_ok = s < 1.0;
    r.product_ok = 0.0 <= 3.0 * p && 3.0 * p < 1.0;
    return r;
}

bool sym_zero_pattern_embeddable(double a, double b, double c) {
    return a * b + b * c + c * a <= 1e-15 && std::max({a, b, c}) < 0.5;
}

EmbedVerdict sym_embed(const StochasticMatrix& m) {
    if (m.dim() != 3) throw EmbedError(ErrorCode::DimensionMismatch, "sym_embed needs d = 3");
    if ((m.mat() - m.mat().transpose()).cwiseAbs().maxCoeff() > std::max(m.tol(), 1e-12)) {
        throw EmbedError(ErrorCode::ConstraintViolation, "matrix is not symmetric");
    }
    const Matrix sym = 0.5 * (m.mat() + m.mat().transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    std::string why;
    if (es.eigenvalues().minCoeff() > 1e-12) {
        Matrix l = principal_log(sym);
        l = 0.5 * (l + l.transpose());
        const double floor = -1e-10 * (1.0 + l.cwiseAbs().maxCoeff());
        const SymRates r{l(0, 1), l(0, 2), l(1, 2)};
        if (std::min({r.alpha, r.beta, r.gamma}) >= floor) {
            const SymRates clean{std::max(r.alpha, 0.0), std::max(r.beta, 0.0), std::max(r.gamma, 0.0)};
            return embeddable_with(make_generator(m.mat(), sym_generator(clean), Provenance::Symmetric,
                                                  {{"alpha", clean.alpha}, {"beta", clean.beta}, {"gamma", clean.gamma}}));
        }
        why = "symmetric logarithm has a negative off-diagonal entry";
    } else {
        why = "spectrum is not positive, so no symmetric generator exists";
    }
    EmbedVerdict v = dstoch_embed(m);
    v.notes.insert(v.notes.begin(), why);
    return v;
}

EmbedVerdict const_input_exceptional(double c_m) {
    if (!(c_m > 1.0)) throw EmbedError(ErrorCode::OutOfDomain, "const_input_exceptional needs c_M > 1");
    const double threshold = std::exp(-kPi * kSqrt3);
    const Matrix m = Matrix::Identity(3, 3) + c_m * j3();
    if (c_m - 1.0 > threshold + 1e-12) {
        return EmbedVerdict::not_embeddable("constant-input c_M = " + fmt(c_m) + " exceeds 1 + e^{-pi sqrt 3} = " +
                                            fmt(1.0 + threshold));
    }
    const double alpha = -std::log(c_m - 1.0) / 3.0;
    return embeddable_with(
        make_generator(m, exceptional_generator(alpha, 1), Provenance::DoublyStochastic, {{"alpha", alpha}, {"n", 1.0}}));
}

std::vector<Matrix> multi_embeddings(double c_m, int k_max) {
    if (!(c_m > 0.0) || c_m == 1.0 || c_m > 1.0 + std::exp(-kPi * kSqrt3) + 1e-12 || k_max < 0) {
        throw EmbedError(ErrorCode::OutOfDomain, "c_M must lie in (0, 1) or (1, 1 + e^{-pi sqrt 3}]");
    }
    const bool above = c_m > 1.0;
    const double alpha = -std::log(std::abs(1.0 - c_m)) / 3.0;
    const Matrix m = Matrix::Identity(3, 3) + c_m * j3();
    std::vector<Matrix> out;
    for (int k = 0; k <= k_max; ++k) {
        const int n = above ? 2 * k + 1 : 2 * k;
        if (alpha < n * kPi / kSqrt3 - 1e-12 * (1.0 + alpha)) break;
        Matrix q = exceptional_generator(alpha, n);
        if (norm_inf(expm(q) - m) <= 1e-9) out.push_back(std::move(q));
    }
    return out;
}

std::string_view to_string(MinPolyCase c) {
    switch (c) {
        case MinPolyCase::Deg1: return "deg1";
        case MinPolyCase::Deg2Double1: return "deg2_double1";
        case MinPolyCase::Deg2Simple1: return "deg2_simple1";
        case MinPolyCase::Deg3: return "deg3";
    }
    return "deg3";
}

MinPolyCase min_poly_case(const StochasticMatrix& m) {
    if (m.dim() != 3) throw EmbedError(ErrorCode::DimensionMismatch, "min_poly_case needs d = 3");
    const Spectrum sp = spectrum(m.mat());
    if (sp.min_poly_degree <= 1) return MinPolyCase::Deg1;
    if (sp.min_poly_degree >= 3) return MinPolyCase::Deg3;
    for (const auto& e : sp.eigenvalues) {
        if (std::abs(e.value - 1.0) <= 2e-8 && e.multiplicity == 2) return MinPolyCase::Deg2Double1;
    }
    if (!detect_equal_input(m, 1e-7)) {
        throw EmbedError(ErrorCode::InternalConsistency,
                         "minimal polynomial of degree 2 with simple eigenvalue 1, but M is not equal-input");
    }
    return MinPolyCase::Deg2Simple1;
}

EmbedVerdict dstoch_embed(const StochasticMatrix& sm) {
    if (sm.dim() != 3) throw EmbedError(ErrorCode::DimensionMismatch, "dstoch_embed needs d = 3");
    if (!is_doubly_stochastic3(sm)) throw EmbedError(ErrorCode::NotDoublyStochastic, "column sums differ from 1");
    const Matrix& m = sm.mat();
    const Matrix u = plane_basis();
    const Matrix mt = u.transpose() * m * u;
    const double tr = mt.trace();
    const double det = mt.determinant();
    const double half = 0.5 * tr;
    const double disc = half * half - det;
    const double scale = 1.0 + mt.cwiseAbs().maxCoeff();

    // The plane block is a multiple of the identity: M = 1 + c_M J_3.
    if ((mt - half * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
        const double c_m = 1.0 - half;
        if (std::abs(half) <= 1e-12) {
            return EmbedVerdict::not_embeddable("(2) constant-input with c_M = 1 has det(M) = 0");
        }
        if (std::abs(c_m) <= 1e-15) {
            return embeddable_with(make_generator(m, Matrix::Zero(3, 3), Provenance::DoublyStochastic,
                                                  {{"alpha", 0.0}, {"beta", 0.0}, {"gamma", 0.0}, {"eps", 0.0}}));
        }
        if (c_m > 1.0 + std::exp(-kPi * kSqrt3) + 1e-12) {
            EmbedVerdict v = const_input_exceptional(c_m);
            return v;
        }
        EmbedVerdict v;
        v.verdict = Verdict::Embeddable;
        for (Matrix& q : multi_embeddings(c_m, 64)) {
            const DStochRates r = dstoch_rates_of(q);
            v.generators.push_back(make_generator(m, std::move(q), Provenance::DoublyStochastic,
                                                  {{"alpha", r.alpha}, {"beta", r.beta}, {"gamma", r.gamma}, {"eps", r.eps}}));
        }
        if (v.generators.empty()) return EmbedVerdict::undecided("constant-input family produced no verified generator");
        v.notes.push_back("constant-input case: generators listed are those of the families 3 alpha J_3 + n T");
        return v;
    }

    std::vector<Matrix> logs;  // real logarithms of the plane block
    std::string none_reason;
    if (disc < -1e-14 * scale * scale) {
        const double r = std::sqrt(det);
        const double theta = std::atan2(std::sqrt(-disc), half);
        const Matrix jm = (mt - half * Matrix::Identity(2, 2)) / std::sqrt(-disc);
        // A doubly stochastic generator has |Im| of its eigenvalues at most Delta / sqrt 3.
        const double bound = -std::log(r) / kSqrt3;
        const int reach = static_cast<int>(std::ceil(bound / (2.0 * kPi))) + 1;
        for (int k = -reach; k <= reach; ++k) {
            const double phi = theta + 2.0 * kPi * k;
            if (std::abs(phi) <= bound + 1e-9 * (1.0 + bound)) {
                logs.push_back(std::log(r) * Matrix::Identity(2, 2) + phi * jm);
            }
        }
        if (logs.empty()) none_reason = "no logarithm branch of the complex eigenvalue pair satisfies |Im| <= Delta/sqrt 3";
    } else {
        const double root = std::sqrt(std::max(disc, 0.0));
        const double lo = half - root;
        if (lo <= 1e-14) {
            none_reason = lo < -1e-14 ? "(4) a negative eigenvalue is simple or defective, so no real logarithm exists"
                                      : "(2) M has a zero eigenvalue";
        } else {
            logs.push_back(principal_log(mt));
        }
    }

    EmbedVerdict v;
    for (const Matrix& l : logs) {
        Matrix q = u * l * u.transpose();
        const double floor = -1e-9 * (1.0 + q.cwiseAbs().maxCoeff());
        bool metzler = true;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j && q(i, j) < floor) metzler = false;
        if (!metzler) continue;
        DStochRates r = dstoch_rates_of(q);
        r.alpha = std::max(r.alpha, 0.0);
        r.beta = std::max(r.beta, 0.0);
        r.gamma = std::max(r.gamma, 0.0);
        const double lim = std::min({r.alpha, r.beta, r.gamma});
        r.eps = std::clamp(r.eps, -lim, lim);
        v.generators.push_back(make_generator(m, dstoch_generator(r), Provenance::DoublyStochastic,
                                              {{"alpha", r.alpha}, {"beta", r.beta}, {"gamma", r.gamma}, {"eps", r.eps}}));
    }
    if (v.generators.empty()) {
        return EmbedVerdict::not_embeddable(
            none_reason.empty() ? "no real logarithm within the doubly stochastic generator bound is Metzler"
                                : none_reason);
    }
    v.verdict = Verdict::Embeddable;
    std::stable_sort(v.generators.begin(), v.generators.end(),
                     [](const Generator& a, const Generator& b) { return norm_inf(a.q) < norm_inf(b.q); });
    return v;
}

}  // namespace markov
