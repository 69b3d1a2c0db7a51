#include <doctest.h>

#include <random>

#include "common.hpp"

using namespace refinery;

namespace {

PointSet pts1(std::initializer_list<int> xs) {
    PointSet s;
    for (int x : xs) s.insert(Point{x});
    return s;
}

bool subset(const PointSet& a, const PointSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end(), PointOrderLess{});
}

}  // namespace

TEST_CASE("Haar chain ends") {
    fixture::Setup s("haar");
    CHECK(s.chain.omega(0) == pts1({0, 1}));
    CHECK(s.chain.omega_n0() == pts1({-1, 0, 1}));
    CHECK(s.chain.size() == s.chain.n0 + 1 + 4);
}

TEST_CASE("D4 chain reaches the enlarged support") {
    fixture::Setup s("d4");
    CHECK(s.chain.omega(0) == pts1({0, 1, 2, 3}));
    CHECK(s.chain.omega_n0() == pts1({-1, 0, 1, 2, 3}));
}

TEST_CASE("omega is the integer points of the interval attractor") {
    Dilation dil(IntMatrix::from_rows({{2}}));
    // K for H = {0,..,N} under x -> (x+h)/2 is [0, N]
    for (int N = 1; N <= 6; ++N) {
        std::vector<Point> H;
        PointSet want;
        for (int k = 0; k <= N; ++k) {
            H.push_back(Point{k});
            want.insert(Point{k});
        }
        CHECK(omega_of(H, dil) == want);
    }
}

TEST_CASE("admissibility detects a missing point") {
    Dilation dil(IntMatrix::from_rows({{2}}));
    std::vector<Point> H{Point{0}, Point{1}, Point{2}};
    CHECK(is_admissible(pts1({0, 1, 2}), H, dil));
    CHECK_FALSE(is_admissible(pts1({0, 2}), H, dil));
}

TEST_CASE("chains are strictly nested and admissible for random supports") {
    std::mt19937 rng(17);
    for (const auto& M : {IntMatrix::from_rows({{2}}), IntMatrix::from_rows({{3}}),
                          IntMatrix::from_rows({{1, 1}, {-1, 1}}), IntMatrix::from_rows({{2, 0}, {0, 2}})}) {
        Dilation dil(M);
        const int d = dil.dim();
        std::vector<Point> digits;
        if (d == 1)
            for (int k = 0; k < dil.m(); ++k) digits.push_back(Point{k});
        else if (dil.m() == 2)
            digits = {Point{0, 0}, Point{1, 0}};
        else
            digits = {Point{0, 0}, Point{1, 0}, Point{0, 1}, Point{1, 1}};
        DigitSet D(dil, digits);
        for (int t = 0; t < 5; ++t) {
            std::vector<Point> lambda{Point(d)};
            std::uniform_int_distribution<int> u(-2, 3);
            for (int k = 0; k < 3; ++k) {
                Point p(d);
                for (int i = 0; i < d; ++i) p[i] = u(rng);
                lambda.push_back(p);
            }
            lambda = order_points(lambda);
            AdmissibleChain ch = admissible_chain(lambda, dil, D, 2);
            CHECK(ch.size() == ch.n0 + 3);
            for (int i = 0; i < ch.size(); ++i) {
                CHECK(is_admissible(ch.omega(i), ch.H, dil));
                if (i + 1 < ch.size()) {
                    CHECK(subset(ch.omega(i), ch.omega(i + 1)));
                    CHECK(ch.omega(i).size() < ch.omega(i + 1).size());
                }
            }
            CHECK(ch.omega(0) == omega_of(ch.H, dil));
            CHECK(ch.omega_n0() == omega_of(ch.Hprime, dil));
        }
    }
}

TEST_CASE("contraction of the next set stays inside the previous one") {
    fixture::Setup s("quincunx");
    for (int i = 0; i + 1 < s.chain.size(); ++i)
        CHECK(subset(contract_step(s.chain.omega(i + 1), s.chain.H, s.mask.dil), s.chain.omega(i)));
}

TEST_CASE("Minkowski difference") {
    Dilation dil(IntMatrix::from_rows({{2}}));
    DigitSet D(dil, {Point{0}, Point{1}});
    auto out = minkowski_difference({Point{0}, Point{1}}, D);
    CHECK(out == std::vector<Point>{Point{0}, Point{-1}, Point{1}});
}
