#include "markov_embed/equalinput.hpp"

#include <cmath>
#include <sstream>

#include "markov_embed/linalg.hpp"

namespace markov {

namespace {

// (1 - e^{-c}) / c with the removable singularity filled in.
double phi(double c) { return c == 0.0 ? 1.0 : -std::expm1(-c) / c; }

}  // namespace

EqualInputParams make_equal_input(Vector c_vec) {
    if (c_vec.size() < kMinDim || c_vec.size() > kMaxDim) {
        throw EmbedError(ErrorCode::InvalidDimension, "equal-input parameters need 2..16 entries");
    }
    if (!c_vec.allFinite() || c_vec.minCoeff() < 0.0) {
        throw EmbedError(ErrorCode::OutOfDomain, "equal-input parameters must be finite and non-negative");
    }
    EqualInputParams p;
    p.c_sum = c_vec.sum();
    p.constant_input = (c_vec.array() - c_vec(0)).abs().maxCoeff() <= 1e-12 * std::max(1.0, c_vec(0));
    p.c_vec = std::move(c_vec);
    return p;
}

Matrix ei_matrix(const EqualInputParams& p) {
    const auto d = p.c_vec.size();
    return (1.0 - p.c_sum) * Matrix::Identity(d, d) + Vector::Ones(d) * p.c_vec.transpose();
}

Matrix ei_generator(const EqualInputParams& p) {
    const auto d = p.c_vec.size();
    return Vector::Ones(d) * p.c_vec.transpose() - p.c_sum * Matrix::Identity(d, d);
}

std::optional<EqualInputParams> detect_equal_input(const StochasticMatrix& sm, double tol) {
    const Matrix& m = sm.mat();
    const auto d = m.rows();
    Vector c(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < d; ++i)
            if (i != j) sum += m(i, j);
        c(j) = sum / static_cast<double>(d - 1);
        for (Eigen::Index i = 0; i < d; ++i)
            if (i != j && std::abs(m(i, j) - c(j)) > tol) return std::nullopt;
    }
    c = c.cwiseMax(0.0);
    const double c_sum = c.sum();
    for (Eigen::Index i = 0; i < d; ++i)
        if (std::abs(m(i, i) - (1.0 - c_sum + c(i))) > tol * static_cast<double>(d)) return std::nullopt;
    return make_equal_input(std::move(c));
}

StochasticMatrix ei_exp(const EqualInputParams& q) {
    const auto d = q.c_vec.size();
    Matrix m = Matrix::Identity(d, d) + phi(q.c_sum) * ei_generator(q);
    return validate_stochastic(SquareMatrix(std::move(m)), 1e-10);
}

EmbedVerdict ei_embed(const StochasticMatrix& m) {
    const auto p = detect_equal_input(m, m.tol());
    if (!p) throw EmbedError(ErrorCode::NotEqualInput, "off-diagonal columns are not constant");
    const double c = p->c_sum;
    const int d = m.dim();
    std::ostringstream os;
    os.precision(12);
    if (std::abs(c - 1.0) <= m.tol()) {
        os << "(2) equal-input with c = " << c << " has det(M) = (1 - c)^(d-1) = 0";
        return EmbedVerdict::not_embeddable(os.str());
    }
    if (c > 1.0) {
        if (d % 2 == 0) {
            os << "equal-input with c = " << c << " >= 1 in even dimension d = " << d
               << " has det(M) = (1 - c)^(d-1) < 0";
            return EmbedVerdict::not_embeddable(os.str());
        }
        os << "equal-input with c = " << c << " > 1 in odd dimension d = " << d
           << "; no equal-input generator exists, other generators are not ruled out";
        return EmbedVerdict::undecided(os.str());
    }
    // log M = -(log(1 - c) / c) (M - 1), with the ratio tending to 1 as c -> 0.
    const double scale = c == 0.0 ? 1.0 : -std::log1p(-c) / c;
    Matrix q = scale * (m.mat() - Matrix::Identity(d, d));
    std::vector<std::pair<std::string, double>> params;
    params.emplace_back("c", c);
    for (int i = 0; i < d; ++i) params.emplace_back("c" + std::to_string(i + 1), scale * p->c_vec(i));
    return embeddable_with(make_generator(m.mat(), std::move(q), Provenance::EqualInput, std::move(params)));
}

EqualInputParams ei_compose(const EqualInputParams& p, const EqualInputParams& q) {
    if (p.dim() != q.dim()) throw EmbedError(ErrorCode::DimensionMismatch, "parameter vectors differ in length");
    return make_equal_input((1.0 - q.c_sum) * p.c_vec + q.c_vec);
}

RateMatrix ei_product_generator(const EqualInputParams& q, const EqualInputParams& q2) {
    if (q.dim() != q2.dim()) throw EmbedError(ErrorCode::DimensionMismatch, "parameter vectors differ in length");
    const double total = q.c_sum + q2.c_sum;
    if (!(total > 0.0)) throw EmbedError(ErrorCode::DegenerateSum, "c + c' = 0");
    // e^Q and e^{Q2} are equal-input with C-hat = phi(c) C; compose those and
    // take the logarithm of the product, whose summatory parameter is 1 - e^{-(c+c')}.
    const Vector c_hat = std::exp(-q2.c_sum) * phi(q.c_sum) * q.c_vec + phi(q2.c_sum) * q2.c_vec;
    const Vector c_gen = c_hat / phi(total);
    const auto d = c_gen.size();
    Matrix out = Vector::Ones(d) * c_gen.transpose() - c_gen.sum() * Matrix::Identity(d, d);
    return validate_generator(SquareMatrix(std::move(out)), 1e-10);
}

bool commutes_with_ei(const Matrix& x, const EqualInputParams& q, double tol) {
    if (x.rows() != q.dim() || x.cols() != q.dim()) {
        throw EmbedError(ErrorCode::DimensionMismatch, "matrix and parameters differ in dimension");
    }
    return (q.c_vec.transpose() * x).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace markov
