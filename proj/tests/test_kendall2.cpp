#include <cmath>

#include "doctest.h"
#include "markov_embed/kendall2.hpp"
#include "markov_embed/linalg.hpp"
#include "markov_embed/logsearch.hpp"
#include "oracle.hpp"

using namespace markov;

namespace {

StochasticMatrix two(double a, double b) {
    return validate_stochastic(SquareMatrix::from_rows({{1 - a, a}, {b, 1 - b}}));
}

}  // namespace

TEST_CASE("embed_2x2 symmetric quarter") {
    const auto v = embed_2x2(two(0.25, 0.25));
    REQUIRE(v.embeddable());
    REQUIRE(v.generators.size() == 1);
    // log(2) / (1/2) * 1/4 = 0.34657359...
    const double rate = std::log(2.0) / 2.0;
    Matrix want(2, 2);
    want << -rate, rate, rate, -rate;
    CHECK(oracle::max_abs(v.generators[0].q - want) <= 1e-15);
    CHECK(oracle::max_abs(oracle::taylor_expm(v.generators[0].q) - two(0.25, 0.25).mat()) <= 1e-14);
    CHECK(v.generators[0].provenance == Provenance::Kendall);
}

TEST_CASE("embed_2x2 trivial and rejected cases") {
    const auto id = embed_2x2(two(0, 0));
    REQUIRE(id.embeddable());
    CHECK(oracle::max_abs(id.generators[0].q) == 0.0);

    const auto bad = embed_2x2(validate_stochastic(SquareMatrix::from_rows({{0.5, 0.5}, {1, 0}})));
    CHECK(bad.verdict == Verdict::NotEmbeddable);
    CHECK_FALSE(bad.reasons.empty());

    // det within tol of zero is rejected.
    CHECK(embed_2x2(two(0.5, 0.5 - 1e-12)).verdict == Verdict::NotEmbeddable);
    CHECK_THROWS_AS(embed_2x2(validate_stochastic(SquareMatrix::identity(3))), EmbedError);
}

TEST_CASE("square of a non-embeddable matrix and its other root") {
    const auto m2 = validate_stochastic(SquareMatrix::from_rows({{0.75, 0.25}, {0.5, 0.5}}));
    const auto v = embed_2x2(m2);
    REQUIRE(v.embeddable());
    Matrix root(2, 2);
    root << 5.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 2.0 / 3.0;
    CHECK(oracle::max_abs(oracle::taylor_expm(0.5 * v.generators[0].q) - root) <= 1e-12);
    CHECK(oracle::max_abs(root * root - m2.mat()) <= 1e-15);
}

TEST_CASE("exp_2x2") {
    CHECK(oracle::max_abs(exp_2x2(0, 0, 3.0).mat() - Matrix::Identity(2, 2)) == 0.0);
    Matrix want(2, 2);
    want << std::exp(-1.0), 1 - std::exp(-1.0), 0, 1;
    CHECK(oracle::max_abs(exp_2x2(1, 0, 1).mat() - want) <= 1e-15);
    CHECK(oracle::max_abs(exp_2x2(1, 1, 60).mat() - Matrix::Constant(2, 2, 0.5)) <= 1e-15);
}

TEST_CASE("property: exp_2x2 matches expm on a grid") {
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j)
            for (double t : {0.0, 0.5, 2.0}) {
                const double a = 0.3 * i, b = 0.25 * j;
                Matrix q(2, 2);
                q << -a, a, b, -b;
                CHECK(oracle::max_abs(exp_2x2(a, b, t).mat() - expm(q, t)) <= 1e-12);
            }
}

TEST_CASE("property: equivalent characterisations on a grid") {
    const int n = 60;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const double a = static_cast<double>(i) / n;
            const double b = static_cast<double>(j) / n;
            const auto m = two(a, b);
            const bool emb = embed_2x2(m).embeddable();
            const double det = m.mat().determinant();
            const double tr = m.mat().trace();
            const double lam2 = 1.0 - a - b;
            const bool det_in = det > 1e-9 && det <= 1.0;
            const bool tr_in = tr > 1.0 + 1e-9 && tr <= 2.0;
            CHECK(emb == det_in);
            CHECK(emb == tr_in);
            CHECK(emb == (lam2 > 1e-9));
        }
}

TEST_CASE("property: the Kendall generator is the only Metzler logarithm") {
    for (int i = 1; i <= 9; ++i)
        for (int j = 1; j <= 9; ++j) {
            const double a = 0.05 * i, b = 0.04 * j;
            if (a + b >= 1.0 || std::abs(a - b) < 1e-12) continue;
            const auto m = two(a, b);
            const auto v = embed_2x2(m);
            REQUIRE(v.embeddable());
            const auto gens = filter_generators(real_log_branches(m, {8}));
            REQUIRE(gens.size() == 1);
            CHECK(oracle::max_abs(gens[0].mat() - v.generators[0].q) <= 1e-9);
        }
}
