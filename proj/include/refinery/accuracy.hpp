#pragma once

#include <vector>

#include <Eigen/Dense>

#include "refinery/cascade.hpp"
#include "refinery/spectral.hpp"

namespace refinery {

using MultiIndex = std::vector<int>;

// Multi-indices of total degree s in d variables, graded-lex: (2,0), (1,1), (0,2).
std::vector<MultiIndex> multi_indices(int d, int s);
long lifted_size(int d, int s);

// Z_[s] with sum_beta z_{alpha beta} x^beta = (Z x)^alpha.
Eigen::MatrixXcd lift_matrix(const Eigen::MatrixXcd& Z, int s);

cplx monomial(const Eigen::VectorXcd& x, const MultiIndex& alpha);

// Jordan data of (M^{-1})_[s].
JordanDecomposition inverse_lift_spectrum(const Dilation& dil, int s);

struct BlockMatch {
    int s = 0;
    cplx beta;
    int demand = 0;   // block order in (M^{-1})_[s]
    int matched = 0;  // order of the assigned block of T, 0 when none
};

struct NecessaryResult {
    int kappa = 0;
    std::vector<std::vector<BlockMatch>> degrees;  // per s = 0..s_max
};

NecessaryResult accuracy_necessary(const JordanDecomposition& jordan_T, const Dilation& dil, int s_max,
                                   double tol = 1e-6);

struct DegreeFit {
    int s = 0;
    double tile_residual = 0.0;   // worst per-tile relative residual
    double joint_residual = 0.0;  // single coefficient sequence over all tiles
    bool passed = false;
};

struct ConstructiveResult {
    int kappa = 0;
    std::vector<DegreeFit> degrees;
};

// Least-squares reproduction of the monomials of degree s on Q and on its
// neighbours Q + g, g = +-e_i, from translates of phi.
ConstructiveResult accuracy_constructive(const GridFunction& g, int s_max, double tol = 1e-6);

// Every eta^alpha, |alpha| = s < kappa, is an eigenvalue of T.
bool eta_contained(const JordanDecomposition& jordan_T, const Dilation& dil, int kappa, double tol = 1e-6);

struct AccuracyReport {
    NecessaryResult necessary;
    ConstructiveResult constructive;
    bool eta_ok = true;
};

}  // namespace refinery
