#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gramdet/errors.hpp"
#include "gramdet/mat.hpp"
#include "gramdet/rng.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace gramdet;
using Kind = StructuralPredicate::Kind;

TEST_CASE("det on fixed matrices") {
    CHECK(det(Mat::identity(3)) == 1.0);
    CHECK(det(Mat::diag({2.0, 3.0})) == 6.0);

    // 3x3 experiment used throughout; cofactor oracle gives exactly 12/25.
    const Mat p{{0.1, 0.1, 0.7}, {0.9, 0.1, 0.2}, {0.0, 0.8, 0.1}};
    CHECK(det(p) == doctest::Approx(0.48).epsilon(1e-12));
    CHECK(det(p) == doctest::Approx(oracles::cofactor_det(p)).epsilon(1e-12));
}

TEST_CASE("det errors and exact zeros") {
    CHECK_THROWS_AS(det(Mat(2, 3)), DimensionError);
    const Mat singular{{1.0, 2.0}, {2.0, 4.0}};
    CHECK(det(singular) == 0.0);
    CHECK(det(Mat(3, 3)) == 0.0);
}

TEST_CASE("inverse on fixed matrices") {
    CHECK(inverse(Mat::identity(4)).max_abs_diff(Mat::identity(4)) == 0.0);
    CHECK(inverse(Mat::diag({2.0, 4.0})).max_abs_diff(Mat::diag({0.5, 0.25})) <= 1e-15);

    const Mat a{{2, 1, 0}, {1, 3, 1}, {0, 1, 2}};
    const Mat expect{{0.625, -0.25, 0.125}, {-0.25, 0.5, -0.25}, {0.125, -0.25, 0.625}};
    CHECK(inverse(a).max_abs_diff(expect) <= 1e-12);
    CHECK(inverse(a).max_abs_diff(oracles::adjugate_inverse(a)) <= 1e-12);

    CHECK_THROWS_AS(inverse(Mat{{1.0, 2.0}, {2.0, 4.0}}), SingularMatrixError);
}

TEST_CASE("spectral norm on fixed matrices") {
    CHECK(spectral_norm(Mat::identity(2)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(spectral_norm(Mat::diag({2.0, 3.0})) == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(spectral_norm(Mat{{0.0, 1.0}, {0.0, 0.0}}) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(spectral_norm(Mat(3, 2)) == 0.0);
    // start vector exactly orthogonal to the range
    CHECK(spectral_norm(Mat{{1.0, -1.0}, {1.0, -1.0}}) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("singular values on fixed matrices") {
    const auto id3 = singular_values(Mat::identity(3));
    REQUIRE(id3.size() == 3);
    for (double s : id3) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

    const auto d3 = singular_values(Mat::diag({3.0, 2.0, 0.0}));
    CHECK(d3[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(d3[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d3[2] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));

    // whitened matrix of the perfectly correlated 2x2 joint (1/2) I
    const Mat w{{0.5, -0.5}, {-0.5, 0.5}};
    const auto sv = singular_values(w);
    CHECK(sv[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sv[1] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));

    const auto rect = singular_values(Mat{{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}});
    CHECK(rect.size() == 2);
    CHECK(rect[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("structural predicates") {
    CHECK(matches(Mat::identity(3), {Kind::ColumnStochastic, 1e-9}));
    CHECK_FALSE(matches(Mat{{0.5, 0.5}, {0.5, 0.5}}, {Kind::Permutation, 1e-9}));
    // 3 * Q1 from the Hamming counterexample fixtures
    const Mat q1_scaled{{0.8, 0.0, 0.2}, {0.2, 0.8, 0.0}, {0.0, 0.2, 0.8}};
    CHECK(matches(q1_scaled, {Kind::RowDiagonallyDominant, 1e-9}));
    CHECK(matches(q1_scaled, {Kind::RowDiagonallyMaximal, 1e-9}));
    CHECK(matches(Mat{{0.0, 1.0}, {1.0, 0.0}}, {Kind::Permutation, 1e-9}));
    CHECK_FALSE(matches(Mat{{0.0, 1.0}, {1.0, 0.0}}, {Kind::Identity, 1e-9}));
    CHECK_THROWS_AS(matches(Mat(2, 3), {Kind::Permutation, 1e-9}), DimensionError);
}

TEST_CASE("property: det is multiplicative") {
    Rng rng(101);
    for (int trial = 0; trial < 800; ++trial) {
        const int d = 2 + rng.uniform_int(5);
        const Mat a = gen::random_square(d, rng);
        const Mat b = gen::random_square(d, rng);
        const double lhs = det(a * b);
        const double rhs = det(a) * det(b);
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-12});
        CHECK(std::abs(lhs - rhs) / scale <= 1e-9);
    }
}

TEST_CASE("property: det(m^T m) equals product of squared singular values") {
    Rng rng(102);
    int tested = 0;
    while (tested < 400) {
        const int d = 2 + rng.uniform_int(4);
        const Mat m = gen::random_square(d, rng);
        const auto sv = singular_values(m);
        // a relative comparison is meaningless when the determinant vanishes
        // into roundoff, so keep only moderately conditioned draws
        if (sv.back() <= 0.0 || sv.front() / sv.back() > 1e4) continue;
        ++tested;
        double prod = 1.0;
        for (double s : sv) prod *= s * s;
        const double reference = det(m.transposed() * m);
        const double scale = std::max({std::abs(prod), std::abs(reference), 1e-12});
        CHECK(std::abs(prod - reference) / scale <= 1e-8);
    }
}

TEST_CASE("property: spectral norm equals the top singular value") {
    Rng rng(103);
    for (int trial = 0; trial < 300; ++trial) {
        const int rows = 2 + rng.uniform_int(5);
        const int cols = 2 + rng.uniform_int(5);
        Mat m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = 2.0 * rng.uniform01() - 1.0;
        const double top = singular_values(m)[0];
        CHECK(spectral_norm(m) == doctest::Approx(top).epsilon(1e-7));
    }
}

TEST_CASE("property: inverse round-trip within 1e-9 for moderate condition numbers") {
    Rng rng(104);
    int tested = 0;
    while (tested < 300) {
        const int d = 2 + rng.uniform_int(5);
        const Mat m = gen::random_square(d, rng);
        const auto sv = singular_values(m);
        if (sv.back() <= 0.0 || sv.front() / sv.back() > 1e6) continue;
        ++tested;
        const Mat round_trip = m * inverse(m);
        CHECK(round_trip.max_abs_diff(Mat::identity(d)) <= 1e-9);
    }
}

TEST_CASE("property: column-stochastic non-permutation matrices have |det| < 1") {
    Rng rng(105);
    for (int trial = 0; trial < 400; ++trial) {
        const int d = 2 + rng.uniform_int(5);
        const Mat t = gen::random_garbling(d, rng);
        CHECK(std::abs(det(t)) < 1.0);
    }
}
