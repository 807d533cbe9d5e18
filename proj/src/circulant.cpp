#include "markov_embed/circulant.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "markov_embed/linalg.hpp"

namespace markov {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

cd root_of_unity(int d, long long k) {
    const double ang = 2.0 * kPi * static_cast<double>(k % d) / d;
    return {std::cos(ang), std::sin(ang)};
}

void check_dim(int d) {
    if (d < kMinDim || d > kMaxDim) {
        throw EmbedError(ErrorCode::InvalidDimension, "circulant dimension " + std::to_string(d) + " outside [2, 16]");
    }
}

// First row (c_0, x_1, ..., x_{d-1}) of a circulant Markov matrix.
Vector first_row(const CirculantCoeffs& c) {
    Vector row(c.dim);
    row(0) = 1.0 - c.x.sum();
    row.tail(c.dim - 1) = c.x;
    return row;
}

Vector forward_row(const CirculantRates& r) {
    if (r.dim <= 12) return first_row(circ_general_exp(r));
    return expm(circulant_generator(r)).row(0).transpose();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

Matrix circulant_basis(int dim, int r) {
    check_dim(dim);
    Matrix k = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) k(i, (i + r) % dim) += 1.0;
    k -= Matrix::Identity(dim, dim);
    return k;
}

Matrix circulant_matrix(const CirculantCoeffs& c) {
    check_dim(c.dim);
    Matrix m = Matrix::Identity(c.dim, c.dim);
    for (int r = 1; r < c.dim; ++r) m += c.x(r - 1) * circulant_basis(c.dim, r);
    return m;
}

Matrix circulant_generator(const CirculantRates& r) {
    check_dim(r.dim);
    Matrix q = Matrix::Zero(r.dim, r.dim);
    for (int i = 1; i < r.dim; ++i) q += r.alpha(i - 1) * circulant_basis(r.dim, i);
    return q;
}

std::optional<CirculantCoeffs> detect_circulant(const StochasticMatrix& sm, double tol) {
    const Matrix& m = sm.mat();
    const int d = sm.dim();
    for (int i = 1; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (std::abs(m(i, j) - m(0, (j - i + d) % d)) > tol) return std::nullopt;
    CirculantCoeffs c{d, m.row(0).tail(d - 1).transpose()};
    c.x = c.x.cwiseMax(0.0);
    return c;
}

double f_char(int d, int m, double t) {
    if (d < 1 || m < 0 || m >= d) throw EmbedError(ErrorCode::OutOfDomain, "f_char needs 0 <= m < d");
    double sum = 0.0;
    for (int l = 0; l < d; ++l) {
        const cd w = root_of_unity(d, l);
        sum += (std::conj(root_of_unity(d, static_cast<long long>(m) * l)) * std::exp(w * t)).real();
    }
    return sum / d;
}

double f_char_imag_residue(int d, int m, double t) {
    if (d < 1 || m < 0 || m >= d) throw EmbedError(ErrorCode::OutOfDomain, "f_char needs 0 <= m < d");
    cd sum = 0.0;
    for (int l = 0; l < d; ++l) {
        sum += std::conj(root_of_unity(d, static_cast<long long>(m) * l)) * std::exp(root_of_unity(d, l) * t);
    }
    return std::abs(sum.imag()) / d;
}

double f_char_taylor(int d, int m, double t) {
    if (d < 1 || m < 0 || m >= d) throw EmbedError(ErrorCode::OutOfDomain, "f_char needs 0 <= m < d");
    // term = t^n / n!, advanced one factor at a time.
    double term = 1.0;
    for (int n = 1; n <= m; ++n) term *= t / n;
    double sum = 0.0;
    for (int n = m;; n += d) {
        sum += term;
        if (n > std::abs(t) && std::abs(term) <= 1e-18 * std::abs(sum)) break;
        if (n > 2000) break;
        for (int k = n + 1; k <= n + d; ++k) term *= t / k;
    }
    return sum;
}

std::pair<double, double> circ3_exp(double alpha, double beta) {
    auto x_of = [](double a, double b) {
        const double gamma = 1.5 * (a + b);
        const double delta = std::sqrt(3.0) / 2.0 * (a - b);
        // 1 + 2 e^{-g} cos(d - 2pi/3), rewritten without cancellation near the identity.
        const double e = std::exp(-gamma);
        const double h = std::sin(0.5 * delta);
        return (-std::expm1(-gamma) + 2.0 * e * h * h + std::sqrt(3.0) * e * std::sin(delta)) / 3.0;
    };
    return {x_of(alpha, beta), x_of(beta, alpha)};
}

std::array<double, 3> circ4_exp(double alpha, double beta, double gamma) {
    const double pre = 0.5 * std::exp(-(alpha + gamma));
    const double sh = std::sinh(alpha + gamma);
    const double ch = std::cosh(alpha + gamma);
    const double damp = std::exp(-2.0 * beta);
    return {pre * (sh + damp * std::sin(alpha - gamma)), pre * (ch - damp * std::cos(alpha - gamma)),
            pre * (sh - damp * std::sin(alpha - gamma))};
}

CirculantCoeffs circ_general_exp(const CirculantRates& r) {
    check_dim(r.dim);
    const int d = r.dim;
    if (d > 12) throw EmbedError(ErrorCode::DimensionTooLarge, "circ_general_exp supports d <= 12");
    // exp(alpha_j K_j) = e^{-alpha_j} sum_m f_m(alpha_j) P^{jm}; multiply these
    // out as a convolution over residues mod d.
    Vector dp = Vector::Zero(d);
    dp(0) = 1.0;
    for (int j = 1; j < d; ++j) {
        const double a = r.alpha(j - 1);
        if (a == 0.0) continue;
        Vector f(d);
        for (int m = 0; m < d; ++m) f(m) = f_char(d, m, a);
        Vector next = Vector::Zero(d);
        for (int s = 0; s < d; ++s)
            for (int m = 0; m < d; ++m) next((s + j * m) % d) += dp(s) * f(m);
        dp = next;
    }
    const double scale = std::exp(-r.alpha.sum());
    return {d, scale * dp.tail(d - 1)};
}

std::pair<CirculantRates, double> circ_newton(const CirculantCoeffs& target, const CirculantRates& start) {
    const int d = target.dim;
    CirculantRates cur = start;
    cur.alpha = cur.alpha.cwiseMax(0.0);
    auto residual_of = [&](const CirculantRates& r, Vector& row) {
        row = forward_row(r);
        return (row.tail(d - 1) - target.x).cwiseAbs().maxCoeff();
    };
    Vector row;
    double res = residual_of(cur, row);
    for (int it = 0; it < 200 && res > 1e-15; ++it) {
        // d x_r / d alpha_j = m_{(r - j) mod d} - m_r, with m the first row of e^Q.
        Matrix jac(d - 1, d - 1);
        for (int r = 1; r < d; ++r)
            for (int j = 1; j < d; ++j) jac(r - 1, j - 1) = row((r - j + d) % d) - row(r);
        const Vector step = jac.partialPivLu().solve(target.x - row.tail(d - 1));
        double lambda = 1.0;
        bool improved = false;
        for (int h = 0; h < 30; ++h, lambda *= 0.5) {
            CirculantRates trial{d, (cur.alpha + lambda * step).cwiseMax(0.0)};
            Vector trial_row;
            const double trial_res = residual_of(trial, trial_row);
            if (trial_res < res) {
                cur = trial;
                row = trial_row;
                res = trial_res;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return {cur, res};
}

EmbedVerdict circ_general_embed(const CirculantCoeffs& c, const CirculantOptions& opt) {
    check_dim(c.dim);
    const int d = c.dim;
    if (c.x.size() != d - 1) throw EmbedError(ErrorCode::DimensionMismatch, "expected d - 1 coefficients");
    if (c.x.minCoeff() < -kDefaultTol || c.x.sum() > 1.0 + kDefaultTol) {
        throw EmbedError(ErrorCode::OutOfDomain, "coefficients do not define a Markov matrix");
    }
    const Vector row = first_row(c);
    const Matrix m = circulant_matrix(c);

    // Eigenvalues lambda_m = sum_k row_k omega^{km}.
    std::vector<cd> lambda(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        cd s = 0.0;
        for (int j = 0; j < d; ++j) s += row(j) * root_of_unity(d, static_cast<long long>(j) * k);
        lambda[static_cast<std::size_t>(k)] = s;
    }
    double log_sum = 0.0;
    for (int k = 1; k < d; ++k) {
        const double mod = std::abs(lambda[static_cast<std::size_t>(k)]);
        if (mod <= opt.envelope_tol) {
            EmbedVerdict v = EmbedVerdict::not_embeddable("(2) circulant eigenvalue " + std::to_string(k) +
                                                          " vanishes, det(M) = 0");
            v.notes.push_back("envelope-adjacent: |lambda| = " + fmt(mod));
            return v;
        }
        log_sum += std::log(mod);
    }
    // A circulant generator sum alpha_i K_i has |Im mu| <= sum alpha_i = -(1/d) log det M.
    const double bound = -log_sum / d;
    const double slack = 1e-9 * (1.0 + bound);

    // Principal choice for every mode; conjugate modes mirror.
    std::vector<cd> mu(static_cast<std::size_t>(d), 0.0);
    std::vector<int> pair_modes;
    std::vector<std::vector<int>> choices;
    for (int k = 1; k < d; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        const cd l = lambda[idx];
        if (2 * k == d) {
            if (l.real() <= 0.0) {
                return EmbedVerdict::not_embeddable("(4) self-conjugate circulant eigenvalue " + fmt(l.real()) +
                                                    " is not positive");
            }
            mu[idx] = std::log(l.real());
            continue;
        }
        if (2 * k > d) continue;
        const double theta = std::arg(l);
        mu[idx] = {std::log(std::abs(l)), theta};
        std::vector<int> ks;
        const int reach = static_cast<int>(std::ceil((bound + std::abs(theta)) / (2.0 * kPi))) + 1;
        for (int b = -reach; b <= reach; ++b)
            if (std::abs(theta + 2.0 * kPi * b) <= bound + slack) ks.push_back(b);
        if (ks.empty()) {
            std::ostringstream os;
            os << "no logarithm branch of circulant eigenvalue " << k << " has |Im| <= " << bound;
            EmbedVerdict v = EmbedVerdict::not_embeddable(os.str());
            v.notes.push_back("complete branch enumeration over circulant generators");
            return v;
        }
        pair_modes.push_back(k);
        choices.push_back(std::move(ks));
    }
    for (int k = 1; k < d; ++k)
        if (2 * k > d) mu[static_cast<std::size_t>(k)] = std::conj(mu[static_cast<std::size_t>(d - k)]);

    long long combos = 1;
    for (const auto& ks : choices) {
        combos *= static_cast<long long>(ks.size());
        if (combos > opt.max_branches) {
            return EmbedVerdict::undecided("circulant branch enumeration exceeds " +
                                           std::to_string(opt.max_branches) + " combinations");
        }
    }

    // Principal rates and the shift per unit branch index of each pair:
    // raising k_m adds (4 pi / d) sin(2 pi r m / d) to alpha_r.
    Vector base(d - 1);
    double imag_residue = 0.0;
    for (int r = 1; r < d; ++r) {
        cd s = 0.0;
        for (int k = 0; k < d; ++k) s += mu[static_cast<std::size_t>(k)] * std::conj(root_of_unity(d, static_cast<long long>(r) * k));
        base(r - 1) = s.real() / d;
        imag_residue = std::max(imag_residue, std::abs(s.imag()) / d);
    }
    std::vector<Vector> shift;
    for (const int k : pair_modes) {
        Vector v(d - 1);
        for (int r = 1; r < d; ++r) v(r - 1) = 4.0 * kPi / d * std::sin(2.0 * kPi * r * k / d);
        shift.push_back(v);
    }

    std::vector<Generator> found;
    std::vector<std::size_t> odometer(choices.size(), 0);
    const double rate_floor = -opt.rate_tol * (1.0 + bound);
    for (long long n = 0; n < combos; ++n) {
        Vector alpha = base;
        for (std::size_t p = 0; p < choices.size(); ++p) alpha += choices[p][odometer[p]] * shift[p];
        if (alpha.minCoeff() >= rate_floor) {
            CirculantRates rates{d, alpha.cwiseMax(0.0)};
            Matrix q = circulant_generator(rates);
            double res = norm_inf(expm(q) - m);
            if (res > 1e-12 && d <= 12) {
                auto [polished, pres] = circ_newton(c, rates);
                Matrix q2 = circulant_generator(polished);
                const double res2 = norm_inf(expm(q2) - m);
                if (res2 < res) {
                    rates = polished;
                    q = std::move(q2);
                }
            }
            std::vector<std::pair<std::string, double>> params;
            for (int i = 1; i < d; ++i) params.emplace_back("alpha" + std::to_string(i), rates.alpha(i - 1));
            found.push_back(make_generator(m, std::move(q), Provenance::Circulant, std::move(params)));
        }
        for (std::size_t p = 0; p < choices.size(); ++p) {
            if (++odometer[p] < choices[p].size()) break;
            odometer[p] = 0;
        }
    }

    if (found.empty()) {
        EmbedVerdict v = EmbedVerdict::not_embeddable(
            "no branch of the circulant logarithm has non-negative rates (complete enumeration within |Im mu| <= " +
            fmt(bound) + ")");
        return v;
    }
    std::stable_sort(found.begin(), found.end(), [](const Generator& a, const Generator& b) {
        return norm_inf(a.q) < norm_inf(b.q);
    });
    EmbedVerdict v;
    v.verdict = Verdict::Embeddable;
    v.generators = std::move(found);
    if (imag_residue > 1e-10) v.notes.push_back("imaginary residue of inverse DFT " + fmt(imag_residue));
    if (v.generators.front().residual > 1e-8) {
        v.notes.push_back("round-trip residual " + fmt(v.generators.front().residual) + " exceeds 1e-8");
    }
    return v;
}

EmbedVerdict circ3_embed(double x, double y, const CirculantOptions& opt) {
    Vector coeffs(2);
    coeffs << x, y;
    EmbedVerdict v = circ_general_embed({3, coeffs}, opt);
    for (auto& g : v.generators) {
        g.params = {{"alpha", g.params[0].second}, {"beta", g.params[1].second}};
    }
    return v;
}

EmbedVerdict circ4_embed(double x, double y, double z, const CirculantOptions& opt) {
    Vector coeffs(3);
    coeffs << x, y, z;
    EmbedVerdict v = circ_general_embed({4, coeffs}, opt);
    for (auto& g : v.generators) {
        g.params = {{"alpha", g.params[0].second}, {"beta", g.params[1].second}, {"gamma", g.params[2].second}};
    }
    return v;
}

}  // namespace markov
