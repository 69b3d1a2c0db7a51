#include <doctest.h>

#include <algorithm>

#include "common.hpp"
#include "refinery/errors.hpp"
#include "refinery/expression.hpp"

using namespace refinery;

namespace {

const double s3 = std::sqrt(3.0);

PointSet range1(int a, int b) {
    PointSet s;
    for (int k = a; k <= b; ++k) s.insert(Point{k});
    return s;
}

}  // namespace

TEST_CASE("coefficient expressions") {
    CHECK(parse_expression("(1+sqrt(3))/4").real() == doctest::Approx((1 + s3) / 4).epsilon(1e-15));
    CHECK(parse_expression("2/3").real() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(parse_expression("-0.25e1").real() == doctest::Approx(-2.5));
    CHECK(parse_expression("1-2*i") == cplx(1, -2));
    CHECK(parse_expression("2*(3-1)/-4").real() == doctest::Approx(-1.0));
    CHECK_THROWS_AS(parse_expression("1+"), SpecError);
    CHECK_THROWS_AS(parse_expression("sqrt(2"), SpecError);
    CHECK_THROWS_AS(parse_expression("x"), SpecError);
}

TEST_CASE("mask keeps the given text and value") {
    fixture::Setup s("d4");
    CHECK(s.mask.at(Point{0}).real() == doctest::Approx((1 + s3) / 4).epsilon(1e-15));
    CHECK(s.mask.text.at(Point{3}) == "(1-sqrt(3))/4");
    CHECK(s.mask.at(Point{7}) == 0.0);
    CHECK(std::abs(s.mask.sum() - 2.0) < 1e-15);
}

TEST_CASE("D4 scale matrix entries") {
    fixture::Setup s("d4");
    CHECK(s.T.at(Point{0}, Point{0}).real() == doctest::Approx((1 + s3) / 4));
    CHECK(s.T.at(Point{0}, Point{1}) == 0.0);
    CHECK(L_entry(s.mask, Point{0}, Point{1}) == 0.0);
    CHECK(L_entry(s.mask, Point{0}, Point{-1}) == s.mask.at(Point{1}));
    ScaleMatrix T1 = build_T_digit(s.mask, range1(-1, 3), Point{1});
    CHECK(T1.at(Point{0}, Point{0}).real() == doctest::Approx((3 + s3) / 4));
}

TEST_CASE("classic D4 matrix on 0..3") {
    fixture::Setup s("d4");
    ScaleMatrix T = build_T(s.mask, range1(0, 3));
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j) CHECK(T.at(Point{i}, Point{j}) == s.mask.at(Point{2 * i - j}));
}

TEST_CASE("Haar scale matrix rows") {
    fixture::Setup s("haar");
    double want[3][3] = {{0, 0, 0}, {1, 1, 0}, {0, 0, 1}};
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) CHECK(s.T.at(Point{i}, Point{j}).real() == want[i + 1][j + 1]);
    ScaleMatrix T1 = build_T_digit(s.mask, s.chain.omega_n0(), Point{1});
    CHECK(T1.at(Point{0}, Point{1}) == 1.0);
    CHECK(T1.at(Point{0}, Point{0}) == 1.0);
    CHECK(T1.at(Point{0}, Point{-1}) == 0.0);
}

TEST_CASE("restriction to a smaller admissible set is a submatrix") {
    fixture::Setup s("ex2");
    for (int i = 0; i + 1 < s.chain.size(); ++i) {
        ScaleMatrix a = build_T(s.mask, s.chain.omega(i)), b = build_T(s.mask, s.chain.omega(i + 1));
        for (const auto& p : s.chain.omega(i))
            for (const auto& q : s.chain.omega(i)) CHECK(a.at(p, q) == b.at(p, q));
    }
}

TEST_CASE("columns outside an admissible set vanish on it") {
    fixture::Setup s("quincunx");
    const PointSet& om = s.chain.omega_n0();
    for (int a = -6; a <= 6; ++a)
        for (int b = -6; b <= 6; ++b) {
            Point i{a, b};
            if (om.count(i)) continue;
            for (const auto& j : om) CHECK(L_entry(s.mask, i, j) == 0.0);
        }
}

TEST_CASE("matrix CSV lists the index then the rows") {
    fixture::Setup s("haar");
    std::string csv = matrix_csv(s.T);
    CHECK(csv.find('\n') != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 3);
}
