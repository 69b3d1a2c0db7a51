#pragma once

#include <vector>

#include "refinery/attractor.hpp"
#include "refinery/lattice.hpp"

namespace refinery {

// K_H intersected with the lattice.
PointSet omega_of(const std::vector<Point>& H, const Dilation& dil);

// For every w in Omega, h in H: M^{-1}(w + h), when integral, lies in Omega.
bool is_admissible(const PointSet& omega, const std::vector<Point>& H, const Dilation& dil);

// Lattice points of M^{-1}(S + H).
PointSet contract_step(const PointSet& S, const std::vector<Point>& H, const Dilation& dil);

// Lattice points in the closed adapted-norm ball of radius delta.
PointSet lattice_ball(const AdaptedNorm& nrm, double delta, int dim);

struct AdmissibleChain {
    std::vector<PointSet> sets;
    int n0 = 0;
    std::vector<Point> H;       // Lambda
    std::vector<Point> Hprime;  // Lambda - D

    const PointSet& omega(int i) const { return sets.at(i); }
    const PointSet& omega_n0() const { return sets.at(n0); }
    int size() const { return static_cast<int>(sets.size()); }
};

std::vector<Point> minkowski_difference(const std::vector<Point>& lambda, const DigitSet& D);

AdmissibleChain admissible_chain(const std::vector<Point>& lambda, const Dilation& dil,
                                 const DigitSet& D, int n_extra);

}  // namespace refinery
