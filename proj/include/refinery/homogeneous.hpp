#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "refinery/cascade.hpp"
#include "refinery/spectral.hpp"

namespace refinery {

struct HomogeneousElement {
    cplx lambda;
    int order = 1;
    int cluster = 0;
    int chain = 0;
    Eigen::RowVectorXcd v;           // on Omega_{n0}
    std::optional<ExtendedVector> Y;  // absent for lambda = 0
};

// One element per Jordan basis row, extended to chain.omega(target).
std::vector<HomogeneousElement> basis_from_jordan(const JordanDecomposition& jordan, const Mask& mask,
                                                  const AdmissibleChain& chain, int target = -1);

// h(M^{-r} gamma) from the grid of phi over Omega_{n0}; outside Q it needs Y.
// Empty when the extension window does not reach.
std::optional<cplx> eval_h(const HomogeneousElement& h, const GridFunction& g, const Point& gamma);

// Grid value of a function at numerator gamma, empty when it cannot be evaluated.
using GridEvaluator = std::function<std::optional<cplx>(const Point& gamma)>;

GridEvaluator evaluator(const HomogeneousElement& h, const GridFunction& g);

struct ClassReport {
    double residual = 0.0;
    int sharpened_order = -1;  // smallest r' <= r passing tol, -1 if none
    size_t points = 0;
};

// Test points: grid numerators gamma where gamma, M gamma, ..., M^r gamma all evaluate
// and none lies on a tile boundary.
std::vector<Point> class_test_points(const GridFunction& g, const GridEvaluator& h, int r,
                                     int shift_radius = 3);

ClassReport verify_class(const GridFunction& g, const GridEvaluator& h, cplx lambda, int r,
                         double tol = 1e-6, int shift_radius = 3);

struct AnnulusReport {
    size_t targets = 0;
    size_t compared = 0;
    double max_gap = 0.0;  // relative to 1 + max |h| on known shells
    std::optional<cplx> origin;  // 0 when lambda != 1
};

enum class Direction { inward, outward };

// Shells A^k C with C = A V \ V, V the adapted-norm ball of radius rho. Known
// values on shells a..a+r are propagated one shell inward (a-1) or outward
// (a+r+1) and compared with direct evaluation.
AnnulusReport annulus_propagate(const GridFunction& g, const GridEvaluator& h, cplx lambda, int r, int a,
                                Direction dir, double rho = 1.0, int shift_radius = 3);

// Numerical rank of the values on non-boundary points of Q, one column per function.
int local_dimension(const Eigen::MatrixXcd& samples, double tol = 1e-6);
Eigen::MatrixXcd translate_samples(const GridFunction& g);
Eigen::MatrixXcd basis_samples(const GridFunction& g, const JordanDecomposition& jordan);

double zero_eigen_check(const Eigen::RowVectorXcd& v, const GridFunction& g);

using CoeffMap = std::map<Point, cplx, PointOrderLess>;
using BlockMap = std::map<Point, Eigen::RowVectorXcd, PointOrderLess>;

// beta_g = abar_g B^{-1}, abar_g = (alpha_{w - g})_{w in Omega}, so that
// sum_gamma alpha_gamma phi(x + gamma) = beta_g . H(x - g) on Q + g, where H
// stacks the basis functions on Q.
BlockMap reconstruct_coeffs(const CoeffMap& alpha, const JordanDecomposition& jordan);

// max over the grid of |sum alpha phi(x + gamma) - beta_g . H(x0)| / max|f|.
double reconstruction_residual(const CoeffMap& alpha, const JordanDecomposition& jordan,
                               const GridFunction& g);

}  // namespace refinery
