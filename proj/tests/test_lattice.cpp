#include <doctest.h>

#include <algorithm>
#include <random>

#include "common.hpp"
#include "refinery/errors.hpp"

using namespace refinery;

namespace {

Dilation quincunx() { return Dilation(IntMatrix::from_rows({{1, 1}, {-1, 1}})); }

}  // namespace

TEST_CASE("integer matrix determinant and adjugate agree with floating point") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> u(-4, 4);
    for (int t = 0; t < 50; ++t) {
        int n = 1 + t % 4;
        IntMatrix A(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = u(rng);
        Eigen::MatrixXd Ad = A.to_eigen();
        CHECK(static_cast<double>(A.det()) == doctest::Approx(Ad.determinant()).epsilon(1e-9));
        Eigen::MatrixXd prod = A.adjugate().to_eigen() * Ad;
        CHECK((prod - static_cast<double>(A.det()) * Eigen::MatrixXd::Identity(n, n)).norm() < 1e-9);
    }
}

TEST_CASE("quincunx coset of (1,1)") {
    Dilation dil = quincunx();
    DigitSet D(dil, {Point{0, 0}, Point{1, 0}});
    Coset c = coset_decompose(Point{1, 1}, dil, D);
    CHECK(c.digit == 0);
    CHECK(c.quotient == Point{0, 1});
    Coset e = coset_decompose(Point{1, 0}, dil, D);
    CHECK(e.digit == 1);
    CHECK(e.quotient.is_zero());
}

TEST_CASE("coset recomposition in both sign conventions") {
    for (const auto& M : {IntMatrix::from_rows({{2}}), IntMatrix::from_rows({{3}}),
                          IntMatrix::from_rows({{1, 1}, {-1, 1}}), IntMatrix::from_rows({{2, 1}, {0, 2}})}) {
        Dilation dil(M);
        std::vector<Point> digits;
        // digits found by search: one representative per class
        std::set<int> seen;
        for (int a = -3; a <= 3 && digits.size() < static_cast<size_t>(dil.m()); ++a)
            for (int b = -3; b <= 3 && digits.size() < static_cast<size_t>(dil.m()); ++b) {
                Point p = dil.dim() == 1 ? Point{a} : Point{a, b};
                if (dil.dim() == 1 && b != 0) continue;
                bool fresh = true;
                for (const auto& q : digits)
                    if (dil.solve(p - q)) fresh = false;
                if (fresh && (digits.empty() ? p.is_zero() : true)) digits.push_back(p);
            }
        DigitSet D(dil, digits);
        for (int a = -5; a <= 5; ++a)
            for (int b = -5; b <= 5; ++b) {
                if (dil.dim() == 1 && b != 0) continue;
                Point k = dil.dim() == 1 ? Point{a} : Point{a, b};
                Coset p = coset_decompose(k, dil, D, Sign::plus);
                Coset m = coset_decompose(k, dil, D, Sign::minus);
                CHECK(dil.apply(p.quotient) + D[p.digit] == k);
                CHECK(dil.apply(m.quotient) - D[m.digit] == k);
            }
    }
}

TEST_CASE("coset decomposition rejects non-lattice coordinates") {
    Dilation dil(IntMatrix::from_rows({{2}}));
    DigitSet D(dil, {Point{0}, Point{1}});
    Eigen::VectorXd x(1);
    x << 0.5;
    CHECK_THROWS_AS(coset_decompose(x, dil, D), NotALatticePoint);
}

TEST_CASE("digit expansion and Horner are inverse") {
    Dilation dil = quincunx();
    DigitSet D(dil, {Point{0, 0}, Point{1, 0}});
    std::mt19937 rng(3);
    for (int t = 0; t < 200; ++t) {
        int r = 1 + t % 10;
        std::vector<int> digits(r);
        for (auto& x : digits) x = static_cast<int>(rng() % 2);
        Point g = horner(digits, dil, D);
        CHECK(digit_expansion(g, r, dil, D) == digits);
    }
}

TEST_CASE("digit expansion of a point outside the tile") {
    Dilation dil(IntMatrix::from_rows({{2}}));
    DigitSet D(dil, {Point{0}, Point{1}});
    CHECK(digit_expansion(Point{5}, 3, dil, D) == std::vector<int>{1, 0, 1});
    CHECK_THROWS_AS(digit_expansion(Point{9}, 3, dil, D), NotInTile);
    CHECK_THROWS_AS(digit_expansion(Point{-1}, 3, dil, D), NotInTile);
}

TEST_CASE("digit set validation") {
    Dilation dil(IntMatrix::from_rows({{2}}));
    CHECK_THROWS_AS(DigitSet(dil, {Point{0}, Point{2}}), InvalidDigitSet);
    CHECK_THROWS_AS(DigitSet(dil, {Point{0}}), InvalidDigitSet);
    CHECK_THROWS_AS(DigitSet(dil, {Point{1}, Point{2}}), InvalidDigitSet);
    CHECK_NOTHROW(DigitSet(dil, {Point{0}, Point{-1}}));
}

TEST_CASE("non-expansive dilations are rejected") {
    CHECK_THROWS_AS(Dilation(IntMatrix::from_rows({{1, 0}, {0, 2}})), NotExpansive);
    CHECK_THROWS_AS(Dilation(IntMatrix::from_rows({{1}})), NotExpansive);
    // rotation by 90 degrees times 1: eigenvalues on the unit circle
    CHECK_THROWS_AS(Dilation(IntMatrix::from_rows({{0, -1}, {1, 0}})), NotExpansive);
}

TEST_CASE("dilation must map the lattice into itself") {
    Eigen::MatrixXd G(2, 2);
    G << 1, 0.5, 0, std::sqrt(3.0) / 2;
    Lattice hex(G);
    Eigen::MatrixXd A = 2.0 * Eigen::MatrixXd::Identity(2, 2);
    Dilation dil(hex, A);
    CHECK(dil.M() == IntMatrix::from_rows({{2, 0}, {0, 2}}));
    Eigen::MatrixXd R(2, 2);
    R << 1.5, 0, 0, 2;
    CHECK_THROWS_AS(Dilation(hex, R), InvalidDilation);
}

TEST_CASE("locate recovers lattice coordinates") {
    Eigen::MatrixXd G(2, 2);
    G << 1, 0.5, 0, std::sqrt(3.0) / 2;
    Lattice hex(G);
    Point p{3, -2};
    CHECK(hex.locate(hex.embed(p)) == p);
    Eigen::VectorXd off = hex.embed(p);
    off(0) += 0.25;
    CHECK_THROWS_AS(hex.locate(off), NotALatticePoint);
}

TEST_CASE("point order is independent of input order") {
    std::vector<Point> pts;
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b) pts.push_back(Point{a, b});
    std::vector<Point> ref = order_points(pts);
    std::mt19937 rng(11);
    for (int t = 0; t < 10; ++t) {
        std::shuffle(pts.begin(), pts.end(), rng);
        CHECK(order_points(pts) == ref);
    }
    CHECK(ref.front() == Point{0, 0});
    for (size_t i = 1; i < ref.size(); ++i) CHECK(ref[i - 1].norm_inf() <= ref[i].norm_inf());
}
