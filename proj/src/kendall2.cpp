#include "markov_embed/kendall2.hpp"

#include <cmath>
#include <sstream>

namespace markov {

TwoByTwoParams two_by_two_params(const StochasticMatrix& m) {
    if (m.dim() != 2) {
        throw EmbedError(ErrorCode::DimensionMismatch, "expected a 2x2 matrix, got d = " + std::to_string(m.dim()));
    }
    return {m(0, 1), m(1, 0)};
}

EmbedVerdict embed_2x2(const StochasticMatrix& m) {
    const auto [a, b] = two_by_two_params(m);
    const double s = a + b;
    const double det = 1.0 - s;
    if (det <= m.tol()) {
        std::ostringstream os;
        os << "(2) det(M) = 1 - a - b = " << det << " is not positive";
        return EmbedVerdict::not_embeddable(os.str());
    }
    const Matrix a_mat = m.mat() - Matrix::Identity(2, 2);
    const double scale = s == 0.0 ? 1.0 : -std::log1p(-s) / s;
    return embeddable_with(make_generator(m.mat(), scale * a_mat, Provenance::Kendall,
                                          {{"alpha", scale * a}, {"beta", scale * b}}));
}

StochasticMatrix exp_2x2(double alpha, double beta, double t) {
    if (!(alpha >= 0.0 && beta >= 0.0 && t >= 0.0)) {
        throw EmbedError(ErrorCode::OutOfDomain, "exp_2x2 needs alpha, beta, t >= 0");
    }
    const double s = alpha + beta;
    // phi(t) = (1 - e^{-st}) / s, which tends to t as s -> 0.
    const double phi = s == 0.0 ? t : -std::expm1(-s * t) / s;
    Matrix m(2, 2);
    m << 1.0 - phi * alpha, phi * alpha, phi * beta, 1.0 - phi * beta;
    return validate_stochastic(SquareMatrix(std::move(m)), 1e-12);
}

}  // namespace markov
