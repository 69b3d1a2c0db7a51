#include <doctest.h>

#include <random>

#include "common.hpp"
#include "refinery/errors.hpp"

using namespace refinery;

namespace {

struct Built {
    fixture::Setup s;
    GridFunction g;
    std::vector<HomogeneousElement> basis;

    Built(const std::string& name, int r)
        : s(name), g(eval_phi_grid(s.mask, s.chain, r)), basis(basis_from_jordan(s.J, s.mask, s.chain)) {}

    const HomogeneousElement* find(cplx lambda, int order) const {
        for (const auto& h : basis)
            if (std::abs(h.lambda - lambda) < 1e-9 && h.order == order) return &h;
        return nullptr;
    }
};

}  // namespace

TEST_CASE("Haar eigenvalue one gives the Heaviside step") {
    Built b("haar", 4);
    bool seen = false;
    for (const auto& h : b.basis) {
        if (std::abs(h.lambda - 1.0) > 1e-12) continue;
        // ones on 0 and -1 (index order 0, -1, 1)
        if (std::abs(h.v(0) - 1.0) < 1e-12 && std::abs(h.v(1) - 1.0) < 1e-12 && std::abs(h.v(2)) < 1e-12) {
            seen = true;
            for (size_t a = 0; a < b.g.addresses(); ++a) CHECK(std::abs(*eval_h(h, b.g, b.g.gamma(a)) - 1.0) < 1e-14);
            // h = sum_j y_j phi(. + j) is the step at 0
            const IntMatrix Mr = b.g.dilation().M().pow(4);
            auto left = eval_h(h, b.g, b.g.gamma(0) - Mr.apply(Point{1}));
            REQUIRE(left);
            CHECK(std::abs(*left) < 1e-14);
            auto right = eval_h(h, b.g, b.g.gamma(0) + Mr.apply(Point{1}));
            REQUIRE(right);
            CHECK(std::abs(*right - 1.0) < 1e-14);
        }
    }
    CHECK(seen);
}

TEST_CASE("D4 homogeneous elements for 1 and 1/2 are constant and affine") {
    Built b("d4", 6);
    const HomogeneousElement* one = b.find(1.0, 1);
    const HomogeneousElement* half = b.find(0.5, 1);
    REQUIRE(one);
    REQUIRE(half);
    std::vector<double> xs;
    std::vector<cplx> c, l;
    for (size_t a = 0; a < b.g.addresses(); ++a) {
        if (b.g.boundary(a)) continue;
        xs.push_back(b.g.coords(b.g.gamma(a))(0));
        c.push_back(*eval_h(*one, b.g, b.g.gamma(a)));
        l.push_back(*eval_h(*half, b.g, b.g.gamma(a)));
    }
    REQUIRE(xs.size() > 4);
    for (auto v : c) CHECK(std::abs(v - c[0]) < 1e-10 * std::abs(c[0]));
    cplx slope = (l[1] - l[0]) / (xs[1] - xs[0]);
    CHECK(std::abs(slope) > 1e-6);
    for (size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(l[i] - (l[0] + slope * (xs[i] - xs[0]))) < 1e-9);
}

TEST_CASE("every nonzero element passes its class test") {
    for (const char* name : {"d4", "haar", "ex2", "quincunx"}) {
        Built b(name, 8);
        for (const auto& h : b.basis) {
            if (h.lambda == 0.0) continue;
            ClassReport rep = verify_class(b.g, evaluator(h, b.g), h.lambda, h.order);
            CHECK(rep.residual <= 1e-6);
            CHECK(rep.points > 0);
        }
    }
}

TEST_CASE("example 2 order-two element is sharp") {
    Built b("ex2", 8);
    const HomogeneousElement* h = b.find(1.0 / 3.0, 2);
    REQUIRE(h);
    CHECK(verify_class(b.g, evaluator(*h, b.g), 1.0 / 3.0, 2).residual <= 1e-6);
    ClassReport r1 = verify_class(b.g, evaluator(*h, b.g), 1.0 / 3.0, 1);
    CHECK(r1.residual >= 1e-2);
}

TEST_CASE("shell propagation reproduces the direct values") {
    Built b("d4", 8);
    for (const auto& h : b.basis) {
        if (h.lambda == 0.0) continue;
        for (Direction dir : {Direction::inward, Direction::outward}) {
            AnnulusReport rep = annulus_propagate(b.g, evaluator(h, b.g), h.lambda, h.order, 1, dir);
            CHECK(rep.max_gap <= 1e-8);
        }
    }
}

TEST_CASE("local dimension") {
    CHECK(local_dimension(translate_samples(Built("d4", 8).g)) == 3);
    CHECK(local_dimension(translate_samples(Built("haar", 6).g)) == 1);
    CHECK(local_dimension(translate_samples(Built("ex2", 8).g)) == 3);
    Eigen::MatrixXcd X(4, 3);
    X << 1, 2, 3, 2, 4, 6, 0, 1, 1, 1, 1, 2;
    CHECK(local_dimension(X) == 2);
}

TEST_CASE("zero eigenvalue elements vanish inside the tile") {
    Built b("haar", 6);
    Eigen::RowVectorXcd e = Eigen::RowVectorXcd::Zero(3);
    e(b.g.omega().find(Point{-1})) = 1.0;
    CHECK(zero_eigen_check(e, b.g) == 0.0);
    Built d("d4", 8);
    for (const auto& h : d.basis)
        if (h.lambda == 0.0) CHECK(zero_eigen_check(h.v, d.g) <= 1e-8);
}

TEST_CASE("reconstruction from the local basis") {
    Built b("d4", 8);
    CHECK(reconstruction_residual({{Point{0}, 1.0}}, b.s.J, b.g) <= 1e-10);
    std::mt19937 rng(31);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 5; ++t) {
        CoeffMap alpha;
        for (int k = -2; k <= 2; ++k) alpha[Point{k}] = cplx(nd(rng), nd(rng));
        CHECK(reconstruction_residual(alpha, b.s.J, b.g) <= 1e-8);
    }
}

TEST_CASE("basis samples span the same space as the translates") {
    Built b("ex2", 8);
    CHECK(local_dimension(basis_samples(b.g, b.s.J)) == local_dimension(translate_samples(b.g)));
}
