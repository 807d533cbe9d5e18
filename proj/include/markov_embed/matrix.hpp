#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "markov_embed/error.hpp"

namespace markov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 16;

/// Default tolerance used when validating stochastic and rate matrices.
inline constexpr double kDefaultTol = 1e-9;

/// Dense real d x d matrix with 2 <= d <= 16 and finite entries.
class SquareMatrix {
public:
    explicit SquareMatrix(Matrix m);

    static SquareMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);
    /// Row-major entries; `entries.size()` must equal `dim * dim`.
    static SquareMatrix from_row_major(int dim, std::span<const double> entries);
    static SquareMatrix identity(int dim);
    static SquareMatrix zero(int dim);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const Matrix& mat() const noexcept { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    std::vector<double> row_major() const;

private:
    Matrix m_;
};

/// Markov matrix: non-negative entries, unit row sums.
class StochasticMatrix {
public:
    const SquareMatrix& square() const noexcept { return inner_; }
    const Matrix& mat() const noexcept { return inner_.mat(); }
    int dim() const noexcept { return inner_.dim(); }
    double tol() const noexcept { return tol_; }
    double operator()(int i, int j) const { return inner_(i, j); }

private:
    StochasticMatrix(SquareMatrix inner, double tol) : inner_(std::move(inner)), tol_(tol) {}
    friend StochasticMatrix validate_stochastic(const SquareMatrix&, double);

    SquareMatrix inner_;
    double tol_;
};

/// Markov generator: Metzler (non-negative off-diagonal) with zero row sums.
class RateMatrix {
public:
    const SquareMatrix& square() const noexcept { return inner_; }
    const Matrix& mat() const noexcept { return inner_.mat(); }
    int dim() const noexcept { return inner_.dim(); }
    double tol() const noexcept { return tol_; }
    double operator()(int i, int j) const { return inner_(i, j); }

private:
    RateMatrix(SquareMatrix inner, double tol) : inner_(std::move(inner)), tol_(tol) {}
    friend RateMatrix validate_generator(const SquareMatrix&, double);

    SquareMatrix inner_;
    double tol_;
};

/// Clamps entries into [0,1] and renormalises rows whose sums are within tol of 1.
/// Throws RowSumViolation or NegativeEntry.
StochasticMatrix validate_stochastic(const SquareMatrix& raw, double tol = kDefaultTol);

/// Clamps slightly negative off-diagonal entries to zero and re-centres the
/// diagonal so rows sum to exactly zero. Throws RowSumViolation or MetzlerViolation.
RateMatrix validate_generator(const SquareMatrix& raw, double tol = kDefaultTol);

bool is_stochastic(const Matrix& m, double tol = kDefaultTol);
bool is_generator(const Matrix& m, double tol = kDefaultTol);

// Small helpers shared across modules.
double norm_inf(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);
Matrix commutator(const Matrix& a, const Matrix& b);
/// Cyclic permutation matrix with P(i, i+1 mod d) = 1.
Matrix cyclic_permutation(int dim);

}  // namespace markov
