#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "refinery/lattice.hpp"

namespace refinery {

// ||x||_* = max_{0<=i<p} c^i ||M^{-i} x||_2, with ||M^{-1}||_* <= theta < 1.
struct AdaptedNorm {
    int p = 1;
    double c = 1.0;
    double theta = 0.5;
    std::vector<Eigen::MatrixXd> inv_powers;  // M^{-i}, i < p

    double operator()(const Eigen::VectorXd& x) const;
};

AdaptedNorm adapted_norm(const Dilation& dil);

// All clouds live in lattice coordinates; Lattice::embed maps them to R^d.
struct AttractorCloud {
    int depth = 0;
    std::vector<Eigen::VectorXd> points;
    double hausdorff_bound = 0.0;
    bool sampled = false;
};

struct CloudOptions {
    size_t cap = size_t(1) << 22;
    bool allow_sampling = true;
    uint64_t seed = 1;
};

AttractorCloud attractor_cloud(const std::vector<Point>& H, int depth, const Dilation& dil,
                               const CloudOptions& opt = {});

double hausdorff_distance(const std::vector<Eigen::VectorXd>& a,
                          const std::vector<Eigen::VectorXd>& b);

struct TileStats {
    double mean = 0.0;
    int min = 0;
    int max = 0;
    int samples = 0;
};

// Covering multiplicity of the integer translates of the tile built from D,
// estimated at uniform points of the unit cell [0,1)^d.
TileStats tile_multiplicity(const AttractorCloud& q_cloud, const Dilation& dil,
                            const DigitSet& D, int samples, uint64_t seed);

}  // namespace refinery
