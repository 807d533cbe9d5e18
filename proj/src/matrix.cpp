#include "markov_embed/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace markov {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::InvalidDimension: return "InvalidDimension";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::RowSumViolation: return "RowSumViolation";
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::MetzlerViolation: return "MetzlerViolation";
        case ErrorCode::SpectrumOnCut: return "SpectrumOnCut";
        case ErrorCode::Singular: return "Singular";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::PeripheralSpectrum: return "PeripheralSpectrum";
        case ErrorCode::OracleMismatch: return "OracleMismatch";
        case ErrorCode::NotEqualInput: return "NotEqualInput";
        case ErrorCode::DegenerateSum: return "DegenerateSum";
        case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
        case ErrorCode::ConstraintViolation: return "ConstraintViolation";
        case ErrorCode::NotDoublyStochastic: return "NotDoublyStochastic";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::NotCyclic: return "NotCyclic";
        case ErrorCode::InternalConsistency: return "InternalConsistency";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

SquareMatrix::SquareMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
        std::ostringstream os;
        os << "matrix is " << m_.rows() << "x" << m_.cols() << ", expected square";
        throw EmbedError(ErrorCode::DimensionMismatch, os.str());
    }
    if (m_.rows() < kMinDim || m_.rows() > kMaxDim) {
        std::ostringstream os;
        os << "dimension " << m_.rows() << " outside [" << kMinDim << ", " << kMaxDim << "]";
        throw EmbedError(ErrorCode::InvalidDimension, os.str());
    }
    if (!m_.allFinite()) throw EmbedError(ErrorCode::NonFinite, "matrix has NaN or Inf entries");
}

SquareMatrix SquareMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.emplace_back(r);
    return from_rows(v);
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n) {
            std::ostringstream os;
            os << "row " << i << " has " << rows[i].size() << " entries, expected " << n;
            throw EmbedError(ErrorCode::DimensionMismatch, os.str());
        }
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return SquareMatrix(std::move(m));
}

SquareMatrix SquareMatrix::from_row_major(int dim, std::span<const double> entries) {
    if (dim < 0 || entries.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
        throw EmbedError(ErrorCode::DimensionMismatch, "entry count does not equal dim^2");
    }
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = entries[static_cast<std::size_t>(i * dim + j)];
    return SquareMatrix(std::move(m));
}

SquareMatrix SquareMatrix::identity(int dim) { return SquareMatrix(Matrix::Identity(dim, dim)); }

SquareMatrix SquareMatrix::zero(int dim) { return SquareMatrix(Matrix::Zero(dim, dim)); }

std::vector<double> SquareMatrix::row_major() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m_.size()));
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
        for (Eigen::Index j = 0; j < m_.cols(); ++j) out.push_back(m_(i, j));
    return out;
}

StochasticMatrix validate_stochastic(const SquareMatrix& raw, double tol) {
    if (!(tol >= 0.0)) throw EmbedError(ErrorCode::OutOfDomain, "tolerance must be non-negative");
    Matrix m = raw.mat();
    const int d = raw.dim();
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (m(i, j) < -tol) {
                std::ostringstream os;
                os << "entry (" << i << "," << j << ") = " << m(i, j) << " < -" << tol;
                throw EmbedError(ErrorCode::NegativeEntry, os.str());
            }
        }
        const double s = m.row(i).sum();
        if (std::abs(s - 1.0) > tol) {
            std::ostringstream os;
            os.precision(17);
            os << "row " << i << " sums to " << s;
            throw EmbedError(ErrorCode::RowSumViolation, os.str());
        }
    }
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = std::clamp(m(i, j), 0.0, 1.0);
        const double s = m.row(i).sum();
        if (s != 1.0) m.row(i) /= s;
    }
    return StochasticMatrix(SquareMatrix(std::move(m)), tol);
}

RateMatrix validate_generator(const SquareMatrix& raw, double tol) {
    if (!(tol >= 0.0)) throw EmbedError(ErrorCode::OutOfDomain, "tolerance must be non-negative");
    Matrix m = raw.mat();
    const int d = raw.dim();
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i != j && m(i, j) < -tol) {
                std::ostringstream os;
                os << "off-diagonal entry (" << i << "," << j << ") = " << m(i, j) << " < -" << tol;
                throw EmbedError(ErrorCode::MetzlerViolation, os.str());
            }
        }
        const double s = m.row(i).sum();
        if (std::abs(s) > tol) {
            std::ostringstream os;
            os.precision(17);
            os << "row " << i << " sums to " << s;
            throw EmbedError(ErrorCode::RowSumViolation, os.str());
        }
    }
    for (int i = 0; i < d; ++i) {
        double off = 0.0;
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            m(i, j) = std::max(m(i, j), 0.0);
            off += m(i, j);
        }
        m(i, i) = -off;
    }
    return RateMatrix(SquareMatrix(std::move(m)), tol);
}

bool is_stochastic(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (std::abs(m.row(i).sum() - 1.0) > tol) return false;
        if (m.row(i).minCoeff() < -tol) return false;
    }
    return true;
}

bool is_generator(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (std::abs(m.row(i).sum()) > tol) return false;
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && m(i, j) < -tol) return false;
    }
    return true;
}

double norm_inf(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix cyclic_permutation(int dim) {
    Matrix p = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) p(i, (i + 1) % dim) = 1.0;
    return p;
}

}  // namespace markov
