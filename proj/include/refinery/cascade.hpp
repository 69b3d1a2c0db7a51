#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "refinery/admissible.hpp"
#include "refinery/scale_matrix.hpp"
#include "refinery/spectral.hpp"

namespace refinery {

struct LatticeValues {
    Eigen::VectorXcd u;  // phi(k) in the order of the index
    bool normalized = true;
};

// Right 1-eigenvector of T normalized to sum 1. The projection of delta_0
// onto the eigenvalue-1 spectral subspace picks the vector when 1 is
// semisimple with multiplicity > 1.
LatticeValues phi_lattice_values(const ScaleMatrix& T, const JordanDecomposition& jordan);
LatticeValues phi_lattice_values(const ScaleMatrix& T);

// T_{d_1} ... T_{d_r} base.
Eigen::VectorXcd eval_Phi_vector(const std::vector<int>& digits,
                                 const std::vector<ScaleMatrix>& digit_matrices,
                                 const Eigen::VectorXcd& base);

using RowMatrixXcd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// phi on the grid M^{-r} Z^d, over the translates of Q indexed by Omega.
class GridFunction {
public:
    int resolution() const { return r_; }
    const PointIndex& omega() const { return omega_; }
    size_t addresses() const { return gammas_.size(); }
    // Numerator gamma of the address point x = M^{-r} gamma in Q.
    const Point& gamma(size_t a) const { return gammas_[a]; }
    bool boundary(size_t a) const { return boundary_[a] != 0; }
    // Phi(x) restricted to Omega at address a.
    Eigen::VectorXcd Phi(size_t a) const { return values_.row(static_cast<long>(a)).transpose(); }
    cplx value(size_t a, size_t w) const { return values_(static_cast<long>(a), static_cast<long>(w)); }
    const RowMatrixXcd& values() const { return values_; }
    const Dilation& dilation() const { return dil_; }
    const Lattice& lattice() const { return lat_; }
    const PointSet& tile_points() const { return omega_D_; }

    struct Location {
        size_t address;
        Point shift;  // x = M^{-r} gamma(address) + shift
    };
    Location locate(const Point& gamma) const;
    // phi(M^{-r} gamma); zero outside the covered translates.
    cplx phi(const Point& gamma) const;
    bool covered(const Point& gamma) const;
    // True when M^{-r} gamma lies in more than one lattice translate of Q.
    bool on_boundary(const Point& gamma) const;
    Eigen::VectorXd coords(const Point& gamma) const;

    friend GridFunction eval_phi_grid(const Mask& mask, const AdmissibleChain& chain, int r,
                                      int index, size_t cap);

private:
    int r_ = 0;
    Dilation dil_;
    DigitSet D_;
    Lattice lat_;
    IntMatrix Mr_;
    Eigen::MatrixXd Mr_inv_;
    PointIndex omega_;
    PointSet omega_D_;
    std::vector<Point> gammas_;
    std::vector<uint8_t> boundary_;
    RowMatrixXcd values_;
};

// index selects the chain set (negative: n0).
GridFunction eval_phi_grid(const Mask& mask, const AdmissibleChain& chain, int r, int index = -1,
                           size_t cap = size_t(1) << 24);

// max |phi(x) - sum_k c_k phi(Mx - k)| over covered grid points, divided by max|phi|.
double refinement_residual(const GridFunction& g, const Mask& mask);

// Entrywise gap between [T^r]_{k, j - gamma_r} and [(T)_{d_1} ... (T)_{d_r}]_{k j}
// on Omega_m, for all digit strings of length r.
double digit_product_gap(const Mask& mask, const AdmissibleChain& chain, int m_index, int r);

}  // namespace refinery
