#pragma once

#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "refinery/admissible.hpp"
#include "refinery/scale_matrix.hpp"

namespace refinery {

// Row vectors v_1..v_L with v_1 (T - lambda) = 0 and v_{t+1} (T - lambda) = v_t.
struct JordanChain {
    std::vector<Eigen::RowVectorXcd> vectors;
    int length() const { return static_cast<int>(vectors.size()); }
};

struct EigenCluster {
    cplx lambda;
    int multiplicity = 0;
    std::vector<cplx> members;
    std::vector<int> rank_staircase;  // rank of N^k restricted to the cluster, k = 1..
    std::vector<JordanChain> chains;

    int max_chain() const;
};

struct BasisRow {
    int cluster = 0;
    int chain = 0;
    int depth = 0;  // 1 for eigenvectors
};

struct JordanDecomposition {
    PointIndex index;
    std::vector<EigenCluster> clusters;
    std::vector<BasisRow> rows;
    Eigen::MatrixXcd B;  // rows are chain vectors, in the order of `rows`
    double condition = 0.0;
    double tol = 0.0;

    int size() const { return static_cast<int>(B.rows()); }
    const Eigen::RowVectorXcd& row_vector(int i) const;
    cplx row_lambda(int i) const { return clusters[rows[i].cluster].lambda; }
    // Jordan form J with B T = J B.
    Eigen::MatrixXcd jordan_form() const;
    const EigenCluster* find(cplx lambda, double tol) const;
};

struct JordanOptions {
    double tol = 0.0;  // absolute rank threshold; 0 selects 1e-9 * ||T||_2
    bool check_ambiguity = true;
};

JordanDecomposition eigen_jordan(const ScaleMatrix& T, const JordanOptions& opt = {});
// Same analysis for a bare matrix; the index is left empty.
JordanDecomposition eigen_jordan(const Eigen::MatrixXcd& T, const JordanOptions& opt = {});

using SparseRow = std::unordered_map<Point, cplx, PointHash>;

// y (L - lambda I)^r for a finitely supported row vector y.
SparseRow apply_L_shift(const Mask& mask, const SparseRow& y, cplx lambda, int r);

struct ExtendedVector {
    std::unordered_map<Point, cplx, PointHash> values;
    PointSet window;
    cplx lambda;
    int r = 1;
    int source = 0;
    int target = 0;

    cplx at(const Point& k) const;
};

ExtendedVector extend_kernel_vector(const Eigen::RowVectorXcd& v, cplx lambda, int r,
                                    const Mask& mask, const AdmissibleChain& chain, int source,
                                    int target, double tol = 1e-8);

Eigen::RowVectorXcd restrict_to(const ExtendedVector& Y, const PointSet& omega);

// max_j |[Y (L - lambda)^r]_j| over the window, divided by max|Y|.
double extension_residual(const ExtendedVector& Y, const Mask& mask);

}  // namespace refinery
