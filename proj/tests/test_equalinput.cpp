#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "markov_embed/diagnostics.hpp"
#include "markov_embed/equalinput.hpp"
#include "markov_embed/linalg.hpp"
#include "markov_embed/logsearch.hpp"
#include "oracle.hpp"

using namespace markov;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

StochasticMatrix sto(const Matrix& m) { return validate_stochastic(SquareMatrix(m)); }

// Random admissible parameters with prescribed sum c: c_i >= 0, c <= 1 + min c_i.
Vector random_params(std::mt19937_64& rng, int d, double c) {
    std::exponential_distribution<double> e(1.0);
    const double floor = std::max(0.0, c - 1.0);
    if (d * floor > c) throw std::invalid_argument("no admissible parameters");
    Vector w(d);
    for (int i = 0; i < d; ++i) w(i) = e(rng);
    return Vector::Constant(d, floor) + (c - d * floor) * w / w.sum();
}

// Generator rates only need c_i >= 0.
Vector random_rates(std::mt19937_64& rng, int d, double c) {
    std::exponential_distribution<double> e(1.0);
    Vector w(d);
    for (int i = 0; i < d; ++i) w(i) = e(rng);
    return c * w / w.sum();
}

Matrix j3() { return Matrix::Constant(3, 3, 1.0 / 3.0) - Matrix::Identity(3, 3); }

}  // namespace

TEST_CASE("detect_equal_input") {
    const auto id = detect_equal_input(validate_stochastic(SquareMatrix::identity(3)));
    REQUIRE(id.has_value());
    CHECK(id->c_sum == 0.0);
    CHECK(id->c_vec.isZero());

    const double delta = std::exp(-std::numbers::pi * std::sqrt(3.0)) / 3.0;
    const double c = 1.0 + 3.0 * delta;
    const auto ex = detect_equal_input(sto(Matrix::Identity(3, 3) + c * j3()));
    REQUIRE(ex.has_value());
    CHECK(ex->constant_input);
    CHECK(ex->c_sum == doctest::Approx(c).epsilon(1e-14));

    std::mt19937_64 rng(67);
    CHECK_FALSE(detect_equal_input(sto(oracle::random_markov(rng, 4))).has_value());
}

TEST_CASE("ei_exp") {
    const auto zero = make_equal_input(Vector::Zero(3));
    CHECK(oracle::max_abs(ei_exp(zero).mat() - Matrix::Identity(3, 3)) == 0.0);

    // Q = 3 J_3 from c_vec = (1, 1, 1).
    const auto q = make_equal_input(Vector::Ones(3));
    CHECK(oracle::max_abs(ei_generator(q) - 3.0 * j3()) <= 1e-15);
    const Matrix want = Matrix::Identity(3, 3) + (1.0 - std::exp(-3.0)) * j3();
    CHECK(oracle::max_abs(ei_exp(q).mat() - want) <= 1e-15);
    CHECK(oracle::max_abs(ei_exp(q).mat() - oracle::taylor_expm(3.0 * j3())) <= 1e-14);

    // c = ln 2 gives c-hat = 1/2.
    const auto half = make_equal_input(vec({std::log(2.0) / 2, std::log(2.0) / 2}));
    const auto p = detect_equal_input(ei_exp(half));
    REQUIRE(p.has_value());
    CHECK(p->c_sum == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("ei_embed") {
    std::mt19937_64 rng(71);
    const Vector cv = random_params(rng, 4, 0.5);
    const auto m = sto(ei_matrix(make_equal_input(cv)));
    const auto v = ei_embed(m);
    REQUIRE(v.embeddable());
    const Matrix want = -(std::log(0.5) / 0.5) * (m.mat() - Matrix::Identity(4, 4));
    CHECK(oracle::max_abs(v.generators[0].q - want) <= 1e-14);
    CHECK(oracle::max_abs(oracle::taylor_expm(v.generators[0].q) - m.mat()) <= 1e-13);

    const auto high = sto(ei_matrix(make_equal_input(random_params(rng, 4, 1.2))));
    CHECK(ei_embed(high).verdict == Verdict::NotEmbeddable);

    const double delta = std::exp(-std::numbers::pi * std::sqrt(3.0)) / 3.0;
    const auto ex = sto(Matrix::Identity(3, 3) + (1.0 + 3.0 * delta) * j3());
    CHECK(ei_embed(ex).verdict == Verdict::Undecided);

    const auto one = sto(ei_matrix(make_equal_input(random_params(rng, 3, 1.0))));
    CHECK(ei_embed(one).verdict == Verdict::NotEmbeddable);

    CHECK_THROWS_AS(ei_embed(sto(oracle::random_markov(rng, 3))), EmbedError);
}

TEST_CASE("ei_compose") {
    std::mt19937_64 rng(73);
    const auto p = make_equal_input(random_params(rng, 3, 0.6));
    const auto id = make_equal_input(Vector::Zero(3));
    CHECK(oracle::max_abs(ei_compose(p, id).c_vec - p.c_vec) <= 1e-15);

    const auto a = make_equal_input(random_params(rng, 3, 0.5));
    const auto b = make_equal_input(random_params(rng, 3, 0.5));
    const auto ab = ei_compose(a, b);
    CHECK(ab.c_sum == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(oracle::max_abs(ei_matrix(ab) - ei_matrix(a) * ei_matrix(b)) <= 1e-15);
}

TEST_CASE("property: composition stays in [0, 1)") {
    std::mt19937_64 rng(79);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const double c1 = i / 20.0, c2 = j / 20.0;
            const auto r = ei_compose(make_equal_input(random_params(rng, 4, c1)),
                                      make_equal_input(random_params(rng, 4, c2)));
            CHECK(r.c_sum >= 0.0);
            CHECK(r.c_sum < 1.0);
            CHECK(r.c_sum <= 1.0 + r.c_vec.minCoeff());
            CHECK(r.c_sum == doctest::Approx(c1 + c2 - c1 * c2).epsilon(1e-12));
        }
}

TEST_CASE("ei_product_generator") {
    // Commuting pair: c' C = c C'.
    const auto q = make_equal_input(vec({0.2, 0.5, 0.3}));
    const auto q2 = make_equal_input(vec({0.4, 1.0, 0.6}));
    const auto prod = ei_product_generator(q, q2);
    CHECK(oracle::max_abs(prod.mat() - (ei_generator(q) + ei_generator(q2))) <= 1e-14);

    std::mt19937_64 rng(83);
    for (int n = 0; n < 50; ++n) {
        const auto a = make_equal_input(random_rates(rng, 3, 0.1 + 0.05 * n));
        const auto b = make_equal_input(random_rates(rng, 3, 2.0 - 0.03 * n));
        const auto g = ei_product_generator(a, b);
        const Matrix lhs = oracle::taylor_expm(g.mat());
        const Matrix rhs = oracle::taylor_expm(ei_generator(a)) * oracle::taylor_expm(ei_generator(b));
        CHECK(oracle::max_abs(lhs - rhs) <= 1e-10);
        const auto chat = detect_equal_input(sto(lhs), 1e-10);
        REQUIRE(chat.has_value());
        CHECK(chat->c_sum == doctest::Approx(1.0 - std::exp(-(a.c_sum + b.c_sum))).epsilon(1e-10));
    }
    const auto z = make_equal_input(Vector::Zero(3));
    CHECK_THROWS_AS(ei_product_generator(z, z), EmbedError);
}

TEST_CASE("commutes_with_ei") {
    const auto q = make_equal_input(vec({0.2, 0.5, 0.3}));
    CHECK(commutes_with_ei(ei_generator(q), q));
    const auto ci = make_equal_input(Vector::Constant(3, 0.4));
    CHECK(commutes_with_ei(j3(), ci));
    Matrix x(3, 3);
    x << -1, 1, 0, 0, -1, 1, 0, 0, 0;
    CHECK_FALSE(commutes_with_ei(x, ci));
    CHECK(norm_inf(commutator(x, ei_generator(ci))) > 1e-3);

    std::mt19937_64 rng(89);
    for (int n = 0; n < 50; ++n) {
        const Matrix r = oracle::random_generator(rng, 3, 1.0);
        const auto p = make_equal_input(random_params(rng, 3, 0.7));
        CHECK(commutes_with_ei(r, p, 1e-10) == (norm_inf(commutator(r, ei_generator(p))) <= 1e-10));
    }
}

TEST_CASE("property: det(M_C) = (1 - c)^(d-1)") {
    std::mt19937_64 rng(97);
    for (int n = 0; n < 200; ++n) {
        const int d = 2 + n % 6;
        const double c = 0.01 + 0.99 * (n % 50) / 50.0 * 1.5;
        Vector cv;
        try {
            cv = random_params(rng, d, std::min(c, d / (d - 1.0) - 1e-3));
        } catch (...) {
            continue;
        }
        const auto p = make_equal_input(cv);
        const double want = std::pow(1.0 - p.c_sum, d - 1);
        CHECK(std::abs(ei_matrix(p).determinant() - want) <= 1e-10 * std::max(std::abs(want), 1e-300) + 1e-15);
    }
}

TEST_CASE("property: the equal-input generator is unique") {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> nrm(0.0, 1e-3);
    for (int n = 0; n < 50; ++n) {
        const auto p = make_equal_input(random_params(rng, 4, 0.05 + 0.018 * n));
        const auto m = sto(ei_matrix(p));
        const auto v = ei_embed(m);
        REQUIRE(v.embeddable());
        const auto gen = detect_equal_input(sto(Matrix::Identity(4, 4) + 1e-3 * v.generators[0].q), 1e-9);
        REQUIRE(gen.has_value());
        Vector perturbed = gen->c_vec * 1e3;
        for (int i = 0; i < 4; ++i) perturbed(i) = std::max(0.0, perturbed(i) + nrm(rng));
        const Matrix other = ei_generator(make_equal_input(perturbed));
        CHECK(oracle::max_abs(oracle::taylor_expm(other) - m.mat()) > 1e-9);
    }
}

TEST_CASE("property: even d with c >= 1 has no generator") {
    std::mt19937_64 rng(103);
    for (int n = 0; n < 40; ++n) {
        const int d = n % 2 == 0 ? 2 : 4;
        const double c = 1.0 + 0.3 * (n % 7) / 7.0 + 0.01;
        const double cmax = d / (d - 1.0);
        const auto m = sto(ei_matrix(make_equal_input(random_params(rng, d, std::min(c, cmax - 1e-3)))));
        const bool necessary = necessary_conditions(m).overall;
        bool generator_found = false;
        if (necessary) {
            try {
                generator_found = !filter_generators(real_log_branches(m, {8})).empty();
            } catch (const EmbedError&) {
            }
        }
        CHECK_FALSE(generator_found);
        CHECK(ei_embed(m).verdict == Verdict::NotEmbeddable);
    }
}
