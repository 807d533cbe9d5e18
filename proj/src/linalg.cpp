#include "markov_embed/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace markov {

namespace {

double norm_1(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

// Pade coefficients and theta bounds for the 1-norm backward error analysis
// of the diagonal approximants r_m(A) to e^A.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                           30270240.0,    2162160.0,    110880.0,     3960.0,
                                           90.0,          1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0,
                                          5.371920351148152e0};

template <std::size_t N>
Matrix pade_low(const Matrix& a, const std::array<double, N>& b) {
    const auto d = a.rows();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix a2 = a * a;
    Matrix u_inner = b[1] * id;
    Matrix v = b[0] * id;
    Matrix power = id;
    for (std::size_t k = 2; k < N; k += 2) {
        power = power * a2;
        v += b[k] * power;
        u_inner += b[k + 1] * power;
    }
    const Matrix u = a * u_inner;
    return (v - u).partialPivLu().solve(v + u);
}

Matrix pade13(const Matrix& a) {
    const auto& b = kPade13;
    const auto d = a.rows();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                          b[3] * a2 + b[1] * id);
    const Matrix v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return (v - u).partialPivLu().solve(v + u);
}

struct GaussLegendre {
    Vector nodes;    // on [0, 1]
    Vector weights;  // sum to 1
};

// Golub-Welsch on the Legendre Jacobi matrix.
GaussLegendre gauss_legendre(int n) {
    Matrix jac = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        jac(k, k - 1) = beta;
        jac(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(jac);
    GaussLegendre gl;
    gl.nodes = (es.eigenvalues().array() + 1.0) / 2.0;
    gl.weights = es.eigenvectors().row(0).transpose().array().square();
    return gl;
}

// log(I + y) as the [m/m] Pade approximant in partial-fraction form.
Matrix log1p_pade(const Matrix& y) {
    static const GaussLegendre gl = gauss_legendre(10);
    const auto d = y.rows();
    const Matrix id = Matrix::Identity(d, d);
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index j = 0; j < gl.nodes.size(); ++j) {
        out += gl.weights(j) * (id + gl.nodes(j) * y).partialPivLu().solve(y);
    }
    return out;
}

int rank_abs(const CMatrix& a, double threshold) {
    Eigen::JacobiSVD<CMatrix> svd(a);
    const auto& s = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > threshold) ++r;
    return r;
}

bool eigen_order(const std::complex<double>& a, const std::complex<double>& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

}  // namespace

Matrix expm(const Matrix& a_in, double t) {
    if (!std::isfinite(t)) throw EmbedError(ErrorCode::NonFinite, "expm: t must be finite");
    const Matrix a = a_in * t;
    const double n1 = a.size() == 0 ? 0.0 : norm_1(a);
    if (n1 <= kTheta[0]) return pade_low(a, kPade3);
    if (n1 <= kTheta[1]) return pade_low(a, kPade5);
    if (n1 <= kTheta[2]) return pade_low(a, kPade7);
    if (n1 <= kTheta[3]) return pade_low(a, kPade9);
    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(n1 / kTheta[4]))));
    Matrix r = pade13(a / std::ldexp(1.0, s));
    for (int k = 0; k < s; ++k) r = r * r;
    return r;
}

SquareMatrix expm(const SquareMatrix& a, double t) { return SquareMatrix(expm(a.mat(), t)); }

Matrix sqrtm_db(const Matrix& m) {
    const auto d = m.rows();
    Matrix y = m;
    Matrix z = Matrix::Identity(d, d);
    for (int it = 0; it < 100; ++it) {
        // Determinant scaling speeds up the early iterations.
        const double det_y = y.determinant();
        const double det_z = z.determinant();
        double g = 1.0;
        const double prod = std::abs(det_y * det_z);
        if (it < 6 && prod > 0.0 && std::isfinite(prod)) g = std::pow(prod, -1.0 / (2.0 * static_cast<double>(d)));
        const Matrix y_inv = y.inverse();
        const Matrix z_inv = z.inverse();
        const Matrix y_next = 0.5 * (g * y + z_inv / g);
        const Matrix z_next = 0.5 * (g * z + y_inv / g);
        const double change = norm_1(y_next - y);
        y = y_next;
        z = z_next;
        if (change <= 1e-15 * std::max(1.0, norm_1(y))) return y;
    }
    const double residual = norm_1(y * y - m);
    if (residual > 1e-10 * std::max(1.0, norm_1(m))) {
        std::ostringstream os;
        os << "Denman-Beavers square root did not converge, residual " << residual;
        throw EmbedError(ErrorCode::ConvergenceFailure, os.str());
    }
    return y;
}

Matrix principal_log(const Matrix& m) {
    const auto d = m.rows();
    const double scale = std::max(1.0, norm_1(m));
    for (const auto& lambda : eigenvalues(m)) {
        if (std::abs(lambda) <= 1e-14 * scale) {
            throw EmbedError(ErrorCode::Singular, "matrix has a zero eigenvalue");
        }
        if (lambda.real() < 0.0 && std::abs(lambda.imag()) <= 1e-12 * scale) {
            std::ostringstream os;
            os << "eigenvalue " << lambda.real() << " lies on the closed negative real axis";
            throw EmbedError(ErrorCode::SpectrumOnCut, os.str());
        }
    }
    const Matrix id = Matrix::Identity(d, d);
    Matrix x = m;
    int k = 0;
    while (norm_1(x - id) >= 0.5) {
        if (++k > 64) throw EmbedError(ErrorCode::ConvergenceFailure, "too many square roots in principal_log");
        x = sqrtm_db(x);
    }
    return std::ldexp(1.0, k) * log1p_pade(x - id);
}

SquareMatrix principal_log(const SquareMatrix& m) { return SquareMatrix(principal_log(m.mat())); }

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
    Eigen::EigenSolver<Matrix> es(a, false);
    if (es.info() != Eigen::Success) {
        throw EmbedError(ErrorCode::ConvergenceFailure, "shifted QR iteration did not converge");
    }
    std::vector<std::complex<double>> out(es.eigenvalues().data(),
                                          es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end(), eigen_order);
    return out;
}

int Spectrum::dim() const {
    int n = 0;
    for (const auto& e : eigenvalues) n += e.multiplicity;
    return n;
}

std::vector<std::complex<double>> Spectrum::expanded() const {
    std::vector<std::complex<double>> out;
    for (const auto& e : eigenvalues)
        for (int i = 0; i < e.multiplicity; ++i) out.push_back(e.value);
    return out;
}

Spectrum spectrum(const Matrix& a, const SpectralTolerances& tol) {
    const auto raw = eigenvalues(a);
    const int n = static_cast<int>(raw.size());
    double max_abs = 0.0;
    for (const auto& z : raw) max_abs = std::max(max_abs, std::abs(z));
    const double eq_tol = tol.cluster * (1.0 + max_abs);

    // Single-linkage clustering under the declared equality predicate.
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(raw[static_cast<std::size_t>(i)] - raw[static_cast<std::size_t>(j)]) <= eq_tol)
                parent[static_cast<std::size_t>(find(j))] = find(i);

    std::vector<std::complex<double>> sums(static_cast<std::size_t>(n), 0.0);
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(find(i));
        sums[r] += raw[static_cast<std::size_t>(i)];
        ++counts[r];
    }

    Spectrum sp;
    for (int i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(i);
        if (counts[c] == 0) continue;
        auto value = sums[c] / static_cast<double>(counts[c]);
        if (std::abs(value.imag()) <= eq_tol) value = {value.real(), 0.0};
        sp.eigenvalues.push_back({value, counts[c]});
    }
    std::sort(sp.eigenvalues.begin(), sp.eigenvalues.end(),
              [](const Eigenvalue& x, const Eigenvalue& y) { return eigen_order(x.value, y.value); });

    // Index of each eigenvalue: smallest k with rank((A - lambda)^k) = d - multiplicity.
    const CMatrix ac = a.cast<std::complex<double>>();
    const CMatrix id = CMatrix::Identity(n, n);
    const double a_scale = std::max(1.0, a.norm());
    sp.diagonalizable = true;
    sp.min_poly_degree = 0;
    for (const auto& e : sp.eigenvalues) {
        const CMatrix b = ac - e.value * id;
        CMatrix power = b;
        int index = e.multiplicity;
        for (int k = 1; k <= e.multiplicity; ++k) {
            const double threshold = tol.rank * std::pow(a_scale, k);
            if (rank_abs(power, threshold) <= n - e.multiplicity) {
                index = k;
                break;
            }
            power = power * b;
        }
        if (index > 1) sp.diagonalizable = false;
        sp.min_poly_degree += index;
    }
    return sp;
}

Spectrum spectrum(const SquareMatrix& a, const SpectralTolerances& tol) { return spectrum(a.mat(), tol); }

int numerical_rank(const Matrix& a, double rel_tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    const double threshold = rel_tol * std::max(1.0, s(0));
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > threshold) ++r;
    return r;
}

int numerical_rank(const CMatrix& a, double rel_tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    const auto& s = svd.singularValues();
    return rank_abs(a, rel_tol * std::max(1.0, s(0)));
}

namespace {

// Columns vec(B), vec(B^2), ..., vec(B^{d-1}), each scaled to unit norm; zero
// columns are dropped.
Matrix power_stack(const Matrix& b) {
    const auto d = b.rows();
    Matrix cols(d * d, d - 1);
    Eigen::Index used = 0;
    Matrix power = b;
    for (Eigen::Index k = 1; k < d; ++k) {
        const double nrm = power.norm();
        if (nrm > 0.0) {
            cols.col(used++) = Eigen::Map<const Vector>(power.data(), d * d) / nrm;
        }
        power = power * b;
    }
    return cols.leftCols(used);
}

}  // namespace

int alg_dimension(const Matrix& q, double rel_tol) { return numerical_rank(power_stack(q), rel_tol); }

int alg_dimension(const RateMatrix& q, double rel_tol) { return alg_dimension(q.mat(), rel_tol); }

double power_span_residual(const Matrix& basis, const Matrix& target) {
    const auto d = basis.rows();
    const Matrix cols = power_stack(basis);
    const Vector rhs = Eigen::Map<const Vector>(target.data(), d * d);
    if (cols.cols() == 0) return rhs.cwiseAbs().maxCoeff();
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(cols);
    cod.setThreshold(1e-10);
    const Vector coeff = cod.solve(rhs);
    return (rhs - cols * coeff).cwiseAbs().maxCoeff();
}

bool is_cyclic(const Matrix& a, double rel_tol) {
    const auto d = a.rows();
    Matrix b = a - (a.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
    const double nb = b.norm();
    if (nb == 0.0) return false;
    b /= nb;

    // Arnoldi on three fixed start vectors; a breakdown before step d means
    // the Krylov space is a proper subspace.
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    int full = 0;
    for (int draw = 0; draw < 3; ++draw) {
        Matrix basis(d, d);
        Vector u(d);
        for (Eigen::Index i = 0; i < d; ++i) u(i) = normal(rng);
        basis.col(0) = u.normalized();
        bool breakdown = false;
        for (Eigen::Index k = 1; k < d && !breakdown; ++k) {
            Vector w = b * basis.col(k - 1);
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index j = 0; j < k; ++j) w -= basis.col(j).dot(w) * basis.col(j);
            }
            const double h = w.norm();
            if (h <= rel_tol) {
                breakdown = true;
            } else {
                basis.col(k) = w / h;
            }
        }
        if (!breakdown) ++full;
    }
    return full >= 2;
}

bool is_cyclic(const SquareMatrix& a, double rel_tol) { return is_cyclic(a.mat(), rel_tol); }

}  // namespace markov
