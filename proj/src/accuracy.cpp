#include "refinery/accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "refinery/errors.hpp"

namespace refinery {

namespace {

void fill_indices(int d, int s, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
    if (pos == d - 1) {
        cur[pos] = s;
        out.push_back(cur);
        return;
    }
    for (int a = s; a >= 0; --a) {
        cur[pos] = a;
        fill_indices(d, s - a, cur, pos + 1, out);
    }
}

using Poly = std::map<MultiIndex, cplx>;

Poly times_linear(const Poly& p, const Eigen::RowVectorXcd& row) {
    Poly out;
    for (const auto& [e, c] : p)
        for (long j = 0; j < row.size(); ++j) {
            if (row(j) == 0.0) continue;
            MultiIndex f = e;
            ++f[j];
            out[f] += c * row(j);
        }
    return out;
}

}  // namespace

std::vector<MultiIndex> multi_indices(int d, int s) {
    if (d < 1 || s < 0) throw SpecError("bad multi-index request");
    std::vector<MultiIndex> out;
    MultiIndex cur(d, 0);
    fill_indices(d, s, cur, 0, out);
    return out;
}

long lifted_size(int d, int s) {
    // C(s + d - 1, d - 1)
    long num = 1;
    for (int i = 1; i <= d - 1; ++i) num = num * (s + i) / i;
    return num;
}

Eigen::MatrixXcd lift_matrix(const Eigen::MatrixXcd& Z, int s) {
    const int d = static_cast<int>(Z.rows());
    auto idx = multi_indices(d, s);
    std::map<MultiIndex, long> pos;
    for (size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<long>(i);
    const long n = static_cast<long>(idx.size());
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
    for (long a = 0; a < n; ++a) {
        Poly p{{MultiIndex(d, 0), 1.0}};
        for (int i = 0; i < d; ++i)
            for (int t = 0; t < idx[a][i]; ++t) p = times_linear(p, Z.row(i));
        for (const auto& [e, c] : p) L(a, pos.at(e)) += c;
    }
    return L;
}

cplx monomial(const Eigen::VectorXcd& x, const MultiIndex& alpha) {
    cplx v = 1.0;
    for (size_t i = 0; i < alpha.size(); ++i)
        for (int t = 0; t < alpha[i]; ++t) v *= x(static_cast<long>(i));
    return v;
}

JordanDecomposition inverse_lift_spectrum(const Dilation& dil, int s) {
    Eigen::MatrixXcd Minv = dil.Minv().cast<cplx>();
    return eigen_jordan(lift_matrix(Minv, s));
}

NecessaryResult accuracy_necessary(const JordanDecomposition& jordan_T, const Dilation& dil, int s_max,
                                   double tol) {
    NecessaryResult res;
    res.kappa = s_max + 1;
    // Demands accumulated over degrees, keyed by the T cluster they land on.
    std::map<int, std::vector<int>> demand_by_cluster;
    bool failed = false;
    for (int s = 0; s <= s_max; ++s) {
        JordanDecomposition lift = inverse_lift_spectrum(dil, s);
        std::vector<BlockMatch> blocks;
        bool ok = true;
        for (const auto& cl : lift.clusters)
            for (const auto& ch : cl.chains) {
                BlockMatch bm;
                bm.s = s;
                bm.beta = cl.lambda;
                bm.demand = ch.length();
                const EigenCluster* tc = jordan_T.find(cl.lambda, tol * (1.0 + std::abs(cl.lambda)));
                if (!tc) ok = false;
                else demand_by_cluster[static_cast<int>(tc - jordan_T.clusters.data())].push_back(bm.demand);
                blocks.push_back(bm);
            }
        if (ok) {
            for (auto& [ci, dem] : demand_by_cluster) {
                std::vector<int> avail;
                for (const auto& ch : jordan_T.clusters[ci].chains) avail.push_back(ch.length());
                std::sort(avail.rbegin(), avail.rend());
                std::vector<int> want = dem;
                std::sort(want.rbegin(), want.rend());
                if (want.size() > avail.size()) ok = false;
                for (size_t i = 0; ok && i < want.size(); ++i)
                    if (avail[i] < want[i]) ok = false;
            }
        }
        // Evidence: best available order per block of this degree.
        for (auto& bm : blocks) {
            const EigenCluster* tc = jordan_T.find(bm.beta, tol * (1.0 + std::abs(bm.beta)));
            if (tc) bm.matched = tc->max_chain();
        }
        res.degrees.push_back(std::move(blocks));
        if (!ok && !failed) {
            res.kappa = s;
            failed = true;
        }
    }
    return res;
}

ConstructiveResult accuracy_constructive(const GridFunction& g, int s_max, double tol) {
    const int d = g.dilation().dim();
    std::vector<size_t> rows;
    for (size_t a = 0; a < g.addresses(); ++a)
        if (!g.boundary(a)) rows.push_back(a);
    if (rows.empty()) throw NoTestPoints("no interior grid points in Q");
    const long nr = static_cast<long>(rows.size());
    const PointIndex& om = g.omega();
    const long nw = static_cast<long>(om.size());

    Eigen::MatrixXcd P(nr, nw);
    std::vector<Eigen::VectorXd> x0(rows.size());
    for (long i = 0; i < nr; ++i) {
        P.row(i) = g.values().row(static_cast<long>(rows[i]));
        x0[i] = g.coords(g.gamma(rows[i]));
    }

    std::vector<Point> tiles{Point(d)};
    for (int i = 0; i < d; ++i) {
        Point e(d);
        e[i] = 1;
        tiles.push_back(e);
        tiles.push_back(-e);
    }
    // Joint unknowns y_k, k = w - g.
    std::vector<Point> ks;
    for (const auto& t : tiles)
        for (const auto& w : om.points()) ks.push_back(w - t);
    PointIndex kidx(order_points(std::move(ks)));
    const long nt = static_cast<long>(tiles.size());
    Eigen::MatrixXcd Pj = Eigen::MatrixXcd::Zero(nt * nr, static_cast<long>(kidx.size()));
    for (long t = 0; t < nt; ++t)
        for (long w = 0; w < nw; ++w) {
            long col = kidx.find(om[static_cast<size_t>(w)] - tiles[static_cast<size_t>(t)]);
            Pj.block(t * nr, col, nr, 1) += P.col(w);
        }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(P), codj(Pj);

    ConstructiveResult res;
    res.kappa = s_max + 1;
    bool failed = false;
    for (int s = 0; s <= s_max; ++s) {
        DegreeFit fit;
        fit.s = s;
        for (const auto& alpha : multi_indices(d, s)) {
            Eigen::VectorXcd tj(nt * nr);
            for (long t = 0; t < nt; ++t) {
                Eigen::VectorXcd rhs(nr);
                Eigen::VectorXd shift = tiles[static_cast<size_t>(t)].to_vector();
                for (long i = 0; i < nr; ++i)
                    rhs(i) = monomial((x0[static_cast<size_t>(i)] + shift).cast<cplx>(), alpha);
                tj.segment(t * nr, nr) = rhs;
                Eigen::VectorXcd z = cod.solve(rhs);
                double rn = rhs.norm();
                double rel = rn > 0.0 ? (P * z - rhs).norm() / rn : 0.0;
                fit.tile_residual = std::max(fit.tile_residual, rel);
            }
            Eigen::VectorXcd y = codj.solve(tj);
            double rn = tj.norm();
            double rel = rn > 0.0 ? (Pj * y - tj).norm() / rn : 0.0;
            fit.joint_residual = std::max(fit.joint_residual, rel);
        }
        fit.passed = fit.tile_residual <= tol && fit.joint_residual <= tol;
        res.degrees.push_back(fit);
        if (!fit.passed && !failed) {
            res.kappa = s;
            failed = true;
        }
    }
    return res;
}

bool eta_contained(const JordanDecomposition& jordan_T, const Dilation& dil, int kappa, double tol) {
    for (int s = 0; s < kappa; ++s) {
        JordanDecomposition lift = inverse_lift_spectrum(dil, s);
        for (const auto& cl : lift.clusters)
            if (!jordan_T.find(cl.lambda, tol * (1.0 + std::abs(cl.lambda)))) return false;
    }
    return true;
}

}  // namespace refinery
