#include <doctest.h>

#include <random>

#include <Eigen/SVD>

#include "common.hpp"

using namespace refinery;

namespace {

double spec_norm(const Eigen::MatrixXd& X) { return Eigen::JacobiSVD<Eigen::MatrixXd>(X).singularValues()(0); }

// brute force: smallest p with ||M^{-p}||_2 < 1
int brute_p(const Dilation& dil) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(dil.dim(), dil.dim());
    for (int p = 1; p < 1000; ++p) {
        P = dil.Minv() * P;
        if (spec_norm(P) < 1.0) return p;
    }
    return -1;
}

}  // namespace

TEST_CASE("adapted norm exponent matches brute force") {
    for (const auto& M : {IntMatrix::from_rows({{2}}), IntMatrix::from_rows({{1, 1}, {-1, 1}}),
                          IntMatrix::from_rows({{2, 5}, {0, 2}}), IntMatrix::from_rows({{2, 9}, {0, 3}}),
                          IntMatrix::from_rows({{0, 2}, {1, 0}}), IntMatrix::from_rows({{1, -1, 0}, {1, 1, 0}, {0, 0, 2}})}) {
        Dilation dil(M);
        AdaptedNorm n = adapted_norm(dil);
        CHECK(n.p == brute_p(dil));
        CHECK(n.theta < 1.0);
        CHECK(n.c == doctest::Approx(1.0 / n.theta));
    }
}

TEST_CASE("quincunx adapted norm") {
    AdaptedNorm n = adapted_norm(Dilation(IntMatrix::from_rows({{1, 1}, {-1, 1}})));
    CHECK(n.p == 1);
    CHECK(n.theta == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("adapted norm contracts under the inverse dilation") {
    Dilation dil(IntMatrix::from_rows({{2, 9}, {0, 3}}));
    AdaptedNorm n = adapted_norm(dil);
    std::mt19937 rng(5);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 200; ++t) {
        Eigen::VectorXd x(2);
        x << nd(rng), nd(rng);
        CHECK(n(dil.Minv() * x) <= n.theta * n(x) * (1 + 1e-12));
    }
}

TEST_CASE("Haar attractor fills the unit interval") {
    Dilation dil(IntMatrix::from_rows({{2}}));
    AttractorCloud c = attractor_cloud({Point{0}, Point{1}}, 10, dil);
    CHECK(c.points.size() == 1024);
    double lo = 1, hi = 0;
    for (const auto& p : c.points) {
        lo = std::min(lo, p(0));
        hi = std::max(hi, p(0));
    }
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(1.0 - 1.0 / 1024));
    CHECK(c.hausdorff_bound == doctest::Approx(std::pow(0.5, 10) / 0.5));
}

TEST_CASE("attractor cloud is invariant under the contractions") {
    Dilation dil(IntMatrix::from_rows({{1, 1}, {-1, 1}}));
    std::vector<Point> D{Point{0, 0}, Point{1, 0}};
    AttractorCloud c8 = attractor_cloud(D, 8, dil), c9 = attractor_cloud(D, 9, dil);
    std::vector<Eigen::VectorXd> img;
    for (const auto& p : c8.points)
        for (const auto& h : D) img.push_back(dil.Minv() * (p + h.to_vector()));
    CHECK(hausdorff_distance(img, c9.points) < 1e-12);
}

TEST_CASE("sampling kicks in above the cap and is reproducible") {
    Dilation dil(IntMatrix::from_rows({{3}}));
    std::vector<Point> D{Point{0}, Point{1}, Point{2}};
    CloudOptions opt;
    opt.cap = 1000;
    AttractorCloud a = attractor_cloud(D, 10, dil, opt), b = attractor_cloud(D, 10, dil, opt);
    CHECK(a.sampled);
    CHECK(a.points.size() <= 1000);
    CHECK(a.points == b.points);
    opt.allow_sampling = false;
    CHECK_THROWS(attractor_cloud(D, 10, dil, opt));
}

TEST_CASE("tile multiplicity separates tiles from a triple cover") {
    Dilation dil(IntMatrix::from_rows({{2}}));
    DigitSet haar(dil, {Point{0}, Point{1}});
    DigitSet d03(dil, {Point{0}, Point{3}});
    TileStats a = tile_multiplicity(attractor_cloud(haar.digits(), 16, dil), dil, haar, 2000, 1);
    TileStats b = tile_multiplicity(attractor_cloud(d03.digits(), 16, dil), dil, d03, 2000, 1);
    CHECK(a.mean == doctest::Approx(1.0).epsilon(0.02));
    CHECK(b.mean == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("twin dragon is a tile") {
    Dilation dil(IntMatrix::from_rows({{1, 1}, {-1, 1}}));
    DigitSet D(dil, {Point{0, 0}, Point{1, 0}});
    TileStats s = tile_multiplicity(attractor_cloud(D.digits(), 16, dil), dil, D, 10000, 1);
    CHECK(s.mean >= 0.98);
    CHECK(s.mean <= 1.02);
}
