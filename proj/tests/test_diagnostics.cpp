#include <random>

#include "doctest.h"
#include "markov_embed/diagnostics.hpp"
#include "markov_embed/equalinput.hpp"
#include "markov_embed/kendall2.hpp"
#include "oracle.hpp"

using namespace markov;

namespace {

StochasticMatrix sto(std::initializer_list<std::initializer_list<double>> rows) {
    return validate_stochastic(SquareMatrix::from_rows(rows));
}

StochasticMatrix sto(const Matrix& m) { return validate_stochastic(SquareMatrix(m), 1e-9); }

bool cites(const NecessityReport& r, const std::string& item) {
    for (const auto& f : r.failures)
        if (f.rfind(item, 0) == 0) return true;
    return false;
}

}  // namespace

TEST_CASE("necessary conditions on the swap matrix") {
    const auto r = necessary_conditions(sto({{0, 1}, {1, 0}}));
    CHECK_FALSE(r.overall);
    CHECK(r.det == doctest::Approx(-1.0));
    CHECK_FALSE(r.det_ok);
    CHECK_FALSE(r.negative_real_even_multiplicity);
    CHECK_FALSE(r.positivity_or_reducible);
    CHECK(cites(r, "(2)"));
    CHECK(cites(r, "(4)"));
    CHECK(cites(r, "(5)"));
}

TEST_CASE("primitive but not positive fails condition 5") {
    const auto r = necessary_conditions(sto({{0.5, 0.5}, {1, 0}}));
    CHECK_FALSE(r.positivity_or_reducible);
    CHECK(cites(r, "(5) M is primitive"));
    CHECK_FALSE(r.overall);
}

TEST_CASE("identity passes everything") {
    const auto r = necessary_conditions(validate_stochastic(SquareMatrix::identity(4)));
    CHECK(r.overall);
    CHECK(r.failures.empty());
    CHECK(r.det == 1.0);
}

TEST_CASE("symmetric 2x2 with a = 0.75") {
    const auto r = necessary_conditions(sto({{0.25, 0.75}, {0.75, 0.25}}));
    CHECK_FALSE(r.det_ok);
    CHECK_FALSE(r.negative_real_even_multiplicity);
    CHECK_FALSE(r.overall);
}

TEST_CASE("det = 1 only for the identity") {
    // Cyclic 3-permutation: det 1, eigenvalues on the unit circle.
    const auto r = necessary_conditions(sto(oracle::shift(3)));
    CHECK_FALSE(r.det_ok);
    CHECK(r.elving_borderline);
    CHECK_FALSE(r.overall);
}

TEST_CASE("transitivity failure on a reducible pattern") {
    // Reducible (state 2 absorbing), 0 -> 1 -> 2 but not 0 -> 2.
    const auto r = necessary_conditions(sto({{0.5, 0.5, 0}, {0, 0.5, 0.5}, {0, 0, 1}}));
    CHECK(r.positivity_or_reducible);
    CHECK_FALSE(r.transitivity_ok);
    CHECK(cites(r, "(6)"));
}

TEST_CASE("structure flags") {
    const auto pos = structure_flags(sto({{0.2, 0.3, 0.5}, {0.4, 0.4, 0.2}, {0.1, 0.1, 0.8}}));
    CHECK(pos.positive);
    CHECK(pos.primitive);
    CHECK(pos.irreducible);
    CHECK_FALSE(pos.symmetric);

    Matrix block = Matrix::Zero(4, 4);
    block.topLeftCorner(2, 2) << 0.7, 0.3, 0.4, 0.6;
    block.bottomRightCorner(2, 2) << 0.5, 0.5, 0.1, 0.9;
    CHECK_FALSE(structure_flags(sto(block)).irreducible);

    // Product of two reducible embeddable blocks: primitive, one zero entry.
    const double a = 0.3, b = 0.4, c = 0.2, d = 0.6;
    Matrix left(3, 3), right(3, 3);
    left << 1 - a, a, 0, b, 1 - b, 0, 0, 0, 1;
    right << 1, 0, 0, 0, 1 - c, c, 0, d, 1 - d;
    const auto prod = sto(Matrix(left * right));
    const auto f = structure_flags(prod);
    CHECK(f.primitive);
    CHECK_FALSE(f.positive);
    CHECK_FALSE(necessary_conditions(prod).overall);
    CHECK(necessary_conditions(sto(left)).overall);
    CHECK(necessary_conditions(sto(right)).overall);

    const auto sym = structure_flags(sto({{0.5, 0.25, 0.25}, {0.25, 0.5, 0.25}, {0.25, 0.25, 0.5}}));
    CHECK(sym.symmetric);
    CHECK(sym.doubly_stochastic);
}

TEST_CASE("property: flags are nested") {
    std::mt19937_64 rng(43);
    std::bernoulli_distribution zero(0.3);
    for (int n = 0; n < 300; ++n) {
        const int d = 2 + n % 4;
        Matrix m = oracle::random_markov(rng, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j)
                if (zero(rng) && i != j) m(i, j) = 0.0;
            m.row(i) /= m.row(i).sum();
        }
        const auto f = structure_flags(sto(m));
        if (f.positive) CHECK(f.primitive);
        if (f.primitive) CHECK(f.irreducible);
    }
}

TEST_CASE("property: no false negatives on exponentials of rate matrices") {
    std::mt19937_64 rng(47);
    for (int n = 0; n < 1000; ++n) {
        const int d = 2 + n % 3;
        const Matrix q = oracle::random_generator(rng, d, 2.0);
        const auto r = necessary_conditions(sto(oracle::taylor_expm(q)));
        CHECK(r.overall);
    }
}

TEST_CASE("property: transitivity holds on reducible embeddable products") {
    std::mt19937_64 rng(53);
    for (int n = 0; n < 100; ++n) {
        Matrix q = Matrix::Zero(4, 4);
        q.topLeftCorner(2, 2) = oracle::random_generator(rng, 2, 1.0);
        q.bottomRightCorner(2, 2) = oracle::random_generator(rng, 2, 1.0);
        q(0, 3) = 0.3;  // one-way coupling keeps the matrix reducible
        q(0, 0) -= 0.3;
        const auto m = sto(oracle::taylor_expm(q));
        CHECK_FALSE(structure_flags(m).irreducible);
        CHECK(necessary_conditions(m).transitivity_ok);
    }
}

TEST_CASE("limit_matrix") {
    CHECK(oracle::max_abs(limit_matrix(validate_stochastic(SquareMatrix::identity(3))).mat() - Matrix::Identity(3, 3)) == 0.0);
    const auto lim = limit_matrix(sto({{0.75, 0.25}, {0.25, 0.75}}));
    CHECK(oracle::max_abs(lim.mat() - Matrix::Constant(2, 2, 0.5)) <= 1e-12);
    try {
        limit_matrix(sto({{0, 1}, {1, 0}}));
        FAIL("expected PeripheralSpectrum");
    } catch (const EmbedError& e) {
        CHECK(e.code() == ErrorCode::PeripheralSpectrum);
    }
}

TEST_CASE("property: limit matrix is the long-time limit and a projector") {
    std::mt19937_64 rng(59);
    for (int n = 0; n < 60; ++n) {
        const int d = 2 + n % 4;
        const Matrix q = oracle::random_generator(rng, d, 1.0);
        const auto lim = limit_matrix(sto(expm(q)));
        const Matrix far = oracle::taylor_expm(200.0 * q);
        CHECK(oracle::max_abs(lim.mat() - far) <= 1e-7);
        CHECK(norm_inf(lim.mat() * lim.mat() - lim.mat()) <= 1e-8);
        const Matrix r = lim.mat() - Matrix::Identity(d, d);
        CHECK(norm_inf(r * r + r) <= 1e-8);
        for (const auto& z : eigenvalues(lim.mat())) {
            CHECK(std::min(std::abs(z), std::abs(z - 1.0)) <= 1e-8);
        }
    }
}

TEST_CASE("check_R_in_alg") {
    Vector cv(3);
    cv << 0.2, 0.1, 0.3;
    const auto p = make_equal_input(cv);
    const auto m_ei = ei_exp(p);
    const auto q_ei = validate_generator(SquareMatrix(ei_generator(p)));
    CHECK(check_R_in_alg(m_ei, q_ei));

    Matrix q2(2, 2);
    q2 << -0.4, 0.4, 0.9, -0.9;
    const auto m2 = sto(expm(q2));
    CHECK(check_R_in_alg(m2, validate_generator(SquareMatrix(q2))));

    Matrix wrong(2, 2);
    wrong << -1, 1, 1, -1;
    try {
        check_R_in_alg(m2, validate_generator(SquareMatrix(wrong)));
        FAIL("expected OracleMismatch");
    } catch (const EmbedError& e) {
        CHECK(e.code() == ErrorCode::OracleMismatch);
    }

    std::mt19937_64 rng(61);
    for (int n = 0; n < 30; ++n) {
        const Matrix q = oracle::random_generator(rng, 3 + n % 2, 1.0);
        CHECK(check_R_in_alg(sto(expm(q)), validate_generator(SquareMatrix(q))));
    }
}
