#include "refinery/cascade.hpp"

#include <cmath>

#include "refinery/errors.hpp"
#include "refinery/parallel.hpp"

namespace refinery {

LatticeValues phi_lattice_values(const ScaleMatrix& T, const JordanDecomposition& jordan) {
    const EigenCluster* one = jordan.find(1.0, 1e-6);
    if (!one) throw DegenerateEigenvalue("1 is not an eigenvalue of the scale matrix");
    if (one->max_chain() > 1) throw DegenerateEigenvalue("eigenvalue 1 is defective");
    if (jordan.size() != T.size() || !std::isfinite(jordan.condition) || jordan.condition > 1e12)
        throw DegenerateEigenvalue("Jordan basis is singular");

    long n = T.size();
    long zero = T.index.find(Point(T.index[0].dim));
    Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(n);
    if (zero < 0) throw DegenerateEigenvalue("index set does not contain the origin");
    delta(zero) = 1.0;

    Eigen::VectorXcd coeffs = jordan.B * delta;
    for (int a = 0; a < jordan.size(); ++a)
        if (&jordan.clusters[jordan.rows[a].cluster] != one) coeffs(a) = 0.0;
    Eigen::VectorXcd u = jordan.B.partialPivLu().solve(coeffs);

    LatticeValues out;
    cplx s = u.sum();
    if (std::abs(s) < 1e-12) {
        out.u = u;
        out.normalized = false;
        throw DegenerateEigenvalue("eigenvector sums to zero; cannot normalize");
    }
    out.u = u / s;
    return out;
}

LatticeValues phi_lattice_values(const ScaleMatrix& T) { return phi_lattice_values(T, eigen_jordan(T)); }

Eigen::VectorXcd eval_Phi_vector(const std::vector<int>& digits,
                                 const std::vector<ScaleMatrix>& digit_matrices,
                                 const Eigen::VectorXcd& base) {
    Eigen::VectorXcd v = base;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) v = digit_matrices.at(*it).entries * v;
    return v;
}

GridFunction::Location GridFunction::locate(const Point& gamma) const {
    Point cur = gamma;
    size_t addr = 0, weight = 1;
    for (int t = 0; t < r_; ++t) {
        Coset c = coset_decompose(cur, dil_, D_, Sign::plus);
        addr += static_cast<size_t>(c.digit) * weight;
        weight *= static_cast<size_t>(D_.size());
        cur = c.quotient;
    }
    return {addr, cur};
}

cplx GridFunction::phi(const Point& gamma) const {
    Location loc = locate(gamma);
    long w = omega_.find(loc.shift);
    return w < 0 ? cplx(0.0) : values_(static_cast<long>(loc.address), w);
}

bool GridFunction::covered(const Point& gamma) const { return omega_.contains(locate(gamma).shift); }

bool GridFunction::on_boundary(const Point& gamma) const {
    std::vector<Point> seen;
    for (const auto& y : omega_D_) {
        Point q = locate(gamma - y).shift;
        bool fresh = true;
        for (const auto& s : seen)
            if (s == q) fresh = false;
        if (fresh) seen.push_back(q);
        if (seen.size() >= 2) return true;
    }
    return false;
}

Eigen::VectorXd GridFunction::coords(const Point& gamma) const { return Mr_inv_ * gamma.to_vector(); }

GridFunction eval_phi_grid(const Mask& mask, const AdmissibleChain& chain, int r, int index, size_t cap) {
    if (r < 0) throw SpecError("resolution must be nonnegative");
    int n = index < 0 ? chain.n0 : index;
    if (n < chain.n0 || n >= chain.size()) throw WindowTooSmall("grid needs an index set containing Omega_{n0}");

    const size_t m = mask.digits.size();
    const PointSet& omega = chain.omega(n);
    double total = std::pow(static_cast<double>(m), r) * static_cast<double>(omega.size());
    if (total > static_cast<double>(cap))
        throw BudgetExceeded("grid needs " + std::to_string(static_cast<long long>(total)) + " values");

    GridFunction g;
    g.r_ = r;
    g.dil_ = mask.dil;
    g.D_ = mask.digits;
    g.lat_ = mask.lattice;
    g.Mr_ = mask.dil.M().pow(r);
    g.Mr_inv_ = g.Mr_.to_eigen().inverse();
    g.omega_ = PointIndex(order_points(omega));
    g.omega_D_ = omega_of(mask.digits.digits(), mask.dil);

    ScaleMatrix T = build_T(mask, omega);
    LatticeValues base = phi_lattice_values(T);
    std::vector<ScaleMatrix> Td;
    for (const auto& d : mask.digits.digits()) Td.push_back(build_T_digit(mask, omega, d));

    const long w = static_cast<long>(omega.size());
    std::vector<Point> gam{Point(mask.dim())};
    RowMatrixXcd vals(1, w);
    vals.row(0) = base.u.transpose();
    IntMatrix Mt = IntMatrix::identity(mask.dim());
    for (int t = 0; t < r; ++t) {
        size_t old = gam.size();
        std::vector<Point> ng(old * m);
        RowMatrixXcd nv(static_cast<long>(old * m), w);
        parallel_for(old * m, [&](size_t idx) {
            size_t di = idx / old, oi = idx % old;
            ng[idx] = Mt.apply(mask.digits[di]) + gam[oi];
            nv.row(static_cast<long>(idx)) =
                (Td[di].entries * vals.row(static_cast<long>(oi)).transpose()).transpose();
        });
        gam.swap(ng);
        vals.swap(nv);
        Mt = mask.dil.M() * Mt;
    }
    g.gammas_ = std::move(gam);
    g.values_ = std::move(vals);
    for (long i = 0; i < g.values_.size(); ++i)
        if (!std::isfinite(g.values_.data()[i].real()) || !std::isfinite(g.values_.data()[i].imag()))
            throw IllConditioned("non-finite grid value");

    g.boundary_.assign(g.gammas_.size(), 0);
    parallel_for(g.gammas_.size(), [&](size_t a) { g.boundary_[a] = g.on_boundary(g.gammas_[a]) ? 1 : 0; });
    return g;
}

double refinement_residual(const GridFunction& g, const Mask& mask) {
    const IntMatrix Mr = mask.dil.M().pow(g.resolution());
    double vmax = g.values().cwiseAbs().maxCoeff();
    std::vector<double> worst(g.addresses(), 0.0);
    parallel_for(g.addresses(), [&](size_t a) {
        for (size_t w = 0; w < g.omega().size(); ++w) {
            Point gamma = g.gamma(a) + Mr.apply(g.omega()[w]);
            Point Mg = mask.dil.apply(gamma);
            cplx rhs = 0.0;
            for (const auto& [k, ck] : mask.coeff) rhs += ck * g.phi(Mg - Mr.apply(k));
            worst[a] = std::max(worst[a], std::abs(g.value(a, w) - rhs));
        }
    });
    double res = 0.0;
    for (double v : worst) res = std::max(res, v);
    return vmax > 0.0 ? res / vmax : res;
}

double digit_product_gap(const Mask& mask, const AdmissibleChain& chain, int m_index, int r) {
    if (r < 1) return 0.0;
    const PointSet& big = chain.omega(m_index);
    const PointSet& small = chain.omega_n0();
    ScaleMatrix T = build_T(mask, big);
    std::vector<ScaleMatrix> Td;
    for (const auto& d : mask.digits.digits()) Td.push_back(build_T_digit(mask, big, d));
    // Exact rows of L^r.
    std::vector<SparseRow> Lr(static_cast<size_t>(T.size()));
    for (long k = 0; k < T.size(); ++k) {
        SparseRow e;
        e[T.index[k]] = 1.0;
        Lr[static_cast<size_t>(k)] = apply_L_shift(mask, e, 0.0, r);
    }

    const size_t m = mask.digits.size();
    size_t strings = 1;
    for (int i = 0; i < r; ++i) strings *= m;
    double gap = 0.0;
    for (size_t s = 0; s < strings; ++s) {
        std::vector<int> digits(r);
        size_t rest = s;
        for (int i = r - 1; i >= 0; --i) {
            digits[i] = static_cast<int>(rest % m);
            rest /= m;
        }
        Point gamma_r = horner(digits, mask.dil, mask.digits);
        Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(T.size(), T.size());
        for (int dgt : digits) P = P * Td[dgt].entries;
        for (const auto& j : small) {
            long col = T.index.find(j);
            if (col < 0) throw WindowTooSmall("Omega_m does not contain Omega_{n0}");
            for (long k = 0; k < T.size(); ++k) {
                const SparseRow& row = Lr[static_cast<size_t>(k)];
                auto it = row.find(j - gamma_r);
                cplx lhs = it == row.end() ? cplx(0.0) : it->second;
                gap = std::max(gap, std::abs(lhs - P(k, col)));
            }
        }
    }
    return gap;
}

}  // namespace refinery
