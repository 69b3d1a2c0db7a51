#include "refinery/spectral.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <cmath>
#include <numeric>
#include <sstream>

#include "refinery/errors.hpp"

namespace refinery {

int EigenCluster::max_chain() const {
    int m = 0;
    for (const auto& c : chains) m = std::max(m, c.length());
    return m;
}

const Eigen::RowVectorXcd& JordanDecomposition::row_vector(int i) const {
    const BasisRow& r = rows.at(i);
    return clusters[r.cluster].chains[r.chain].vectors[r.depth - 1];
}

Eigen::MatrixXcd JordanDecomposition::jordan_form() const {
    int n = size();
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        J(a, a) = clusters[rows[a].cluster].lambda;
        if (rows[a].depth > 1)
            for (int b = 0; b < n; ++b)
                if (rows[b].cluster == rows[a].cluster && rows[b].chain == rows[a].chain &&
                    rows[b].depth == rows[a].depth - 1)
                    J(a, b) = 1.0;
    }
    return J;
}

const EigenCluster* JordanDecomposition::find(cplx lambda, double t) const {
    const EigenCluster* best = nullptr;
    double bd = t;
    for (const auto& c : clusters) {
        double d = std::abs(c.lambda - lambda);
        if (d <= bd) {
            bd = d;
            best = &c;
        }
    }
    return best;
}

namespace {

int numerical_rank(const Eigen::MatrixXcd& X, double thr) {
    if (X.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(X);
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thr) ++r;
    return r;
}

// Columns spanning the numerical null space of X (the k smallest right singular vectors).
Eigen::MatrixXcd null_basis(const Eigen::MatrixXcd& X, int k) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(X, Eigen::ComputeFullV);
    return svd.matrixV().rightCols(k);
}

Eigen::MatrixXcd orthonormal_span(const Eigen::MatrixXcd& X, double thr) {
    if (X.cols() == 0) return Eigen::MatrixXcd(X.rows(), 0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(X, Eigen::ComputeThinU);
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thr) ++r;
    return svd.matrixU().leftCols(r);
}

std::vector<int> staircase(const Eigen::MatrixXcd& N, double thr) {
    int m = static_cast<int>(N.rows());
    double nn = std::max(1.0, N.norm());
    std::vector<int> ranks{m};
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(m, m);
    for (int k = 1; k <= m; ++k) {
        P = N * P;
        int rk = numerical_rank(P, thr * std::pow(nn, k - 1));
        ranks.push_back(rk);
        if (rk == 0) break;
    }
    return ranks;
}

// Row reduction to reduced echelon form with unit pivots.
void canonicalize(std::vector<Eigen::VectorXcd>& vs) {
    if (vs.empty()) return;
    long n = vs[0].size();
    double scale = 0.0;
    for (const auto& v : vs) scale = std::max(scale, v.cwiseAbs().maxCoeff());
    double thr = 1e-8 * std::max(scale, 1e-300);
    size_t row = 0;
    for (long col = 0; col < n && row < vs.size(); ++col) {
        size_t piv = row;
        double best = 0.0;
        for (size_t i = row; i < vs.size(); ++i)
            if (std::abs(vs[i](col)) > best) {
                best = std::abs(vs[i](col));
                piv = i;
            }
        if (best <= thr) continue;
        std::swap(vs[row], vs[piv]);
        vs[row] /= vs[row](col);
        vs[row](col) = 1.0;
        for (size_t i = 0; i < vs.size(); ++i) {
            if (i == row) continue;
            cplx f = vs[i](col);
            if (f != 0.0) {
                vs[i] -= f * vs[row];
                vs[i](col) = 0.0;
            }
        }
        thr = 1e-8 * std::max(scale, 1e-300);
        ++row;
    }
}

std::vector<std::vector<cplx>> cluster_eigenvalues(const Eigen::VectorXcd& ev, double rel) {
    int n = static_cast<int>(ev.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> root = [&](int i) { return parent[i] == i ? i : parent[i] = root(parent[i]); };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double rad = rel * (1.0 + std::max(std::abs(ev(i)), std::abs(ev(j))));
            if (std::abs(ev(i) - ev(j)) <= rad) parent[root(i)] = root(j);
        }
    std::map<int, std::vector<cplx>> groups;
    for (int i = 0; i < n; ++i) groups[root(i)].push_back(ev(i));
    std::vector<std::vector<cplx>> out;
    for (auto& [k, g] : groups) out.push_back(std::move(g));
    return out;
}

bool cluster_before(const EigenCluster& a, const EigenCluster& b) {
    double ma = std::abs(a.lambda), mb = std::abs(b.lambda);
    if (std::abs(ma - mb) > 1e-9) return ma > mb;
    if (std::abs(a.lambda.real() - b.lambda.real()) > 1e-9) return a.lambda.real() > b.lambda.real();
    return a.lambda.imag() > b.lambda.imag();
}

std::string stair_str(const std::vector<int>& s) {
    std::ostringstream os;
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    return os.str();
}

}  // namespace

JordanDecomposition eigen_jordan(const ScaleMatrix& T, const JordanOptions& opt) {
    JordanDecomposition J = eigen_jordan(T.entries, opt);
    J.index = T.index;
    return J;
}

JordanDecomposition eigen_jordan(const Eigen::MatrixXcd& T, const JordanOptions& opt) {
    const long n = T.rows();
    JordanDecomposition J;
    if (n == 0 || T.cols() != n) throw SpecError("scale matrix must be square and nonempty");

    Eigen::MatrixXcd S = T.transpose();
    double tnorm = 0.0;
    {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S);
        tnorm = svd.singularValues()(0);
    }
    double scale = std::max(tnorm, 1e-300);
    J.tol = opt.tol > 0.0 ? opt.tol : 1e-9 * std::max(tnorm, 1.0);
    double rel = std::sqrt(J.tol / std::max(tnorm, 1.0));

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(S, false);
    auto groups = cluster_eigenvalues(ces.eigenvalues(), rel);

    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    for (auto& g : groups) {
        EigenCluster cl;
        cl.members = g;
        cl.multiplicity = static_cast<int>(g.size());
        cplx mean = 0.0;
        for (auto v : g) mean += v;
        cl.lambda = mean / static_cast<double>(g.size());
        if (std::abs(cl.lambda) < rel * scale) cl.lambda = 0.0;
        const int r = cl.multiplicity;

        Eigen::MatrixXcd Sl = S - cl.lambda * I;
        Eigen::MatrixXcd W = I;
        for (int k = 0; k < r; ++k) W = Sl * W;
        Eigen::MatrixXcd U = null_basis(W, r);
        Eigen::MatrixXcd N = U.adjoint() * Sl * U;

        cl.rank_staircase = staircase(N, J.tol);
        if (cl.rank_staircase.back() != 0)
            throw IllConditioned("nilpotent part at lambda=" + std::to_string(cl.lambda.real()) +
                                 " does not vanish; staircase " + stair_str(cl.rank_staircase));
        if (opt.check_ambiguity) {
            auto hi = staircase(N, 10.0 * J.tol), lo = staircase(N, 0.1 * J.tol);
            if (hi != lo)
                throw IllConditioned("rank staircase at lambda=" + std::to_string(cl.lambda.real()) +
                                     " differs between 10x tol (" + stair_str(hi) + ") and 0.1x tol (" +
                                     stair_str(lo) + ")");
        }
        const auto& rk = cl.rank_staircase;
        int Lmax = static_cast<int>(rk.size()) - 1;
        auto chains_at_least = [&](int j) { return j > Lmax ? 0 : rk[j - 1] - rk[j]; };

        // Tops in cluster coordinates, paired with their chain length.
        std::vector<std::pair<Eigen::VectorXcd, int>> tops;
        std::vector<Eigen::MatrixXcd> Np{Eigen::MatrixXcd::Identity(r, r)};
        for (int k = 1; k <= Lmax; ++k) Np.push_back(N * Np.back());

        for (int L = Lmax; L >= 1; --L) {
            int need = chains_at_least(L) - chains_at_least(L + 1);
            if (need <= 0) continue;
            Eigen::MatrixXcd K = null_basis(Np[L], r - rk[L]);
            Eigen::MatrixXcd Kprev = null_basis(Np[L - 1], r - rk[L - 1]);
            std::vector<Eigen::VectorXcd> existing;
            for (long c = 0; c < Kprev.cols(); ++c) existing.push_back(Kprev.col(c));
            for (const auto& [y, len] : tops) existing.push_back(Np[len - L] * y);
            Eigen::MatrixXcd E(r, static_cast<long>(existing.size()));
            for (size_t c = 0; c < existing.size(); ++c) E.col(static_cast<long>(c)) = existing[c];
            Eigen::MatrixXcd Q = orthonormal_span(E, 1e-8);
            Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(r, r) - Q * Q.adjoint();
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P * K, Eigen::ComputeFullV);
            if (svd.singularValues().size() < need || svd.singularValues()(need - 1) < 1e-8)
                throw IllConditioned("cannot separate Jordan chains of length " + std::to_string(L));

            std::vector<Eigen::VectorXcd> full;
            for (int t = 0; t < need; ++t) full.push_back(U * (K * svd.matrixV().col(t)));
            canonicalize(full);
            for (auto& v : full) tops.emplace_back(U.adjoint() * v, L);

            for (auto& v : full) {
                JordanChain ch;
                std::vector<Eigen::VectorXcd> col(L);
                col[L - 1] = v;
                for (int t = L - 2; t >= 0; --t) col[t] = Sl * col[t + 1];
                for (auto& c : col) ch.vectors.push_back(c.transpose());
                cl.chains.push_back(std::move(ch));
            }
        }
        J.clusters.push_back(std::move(cl));
    }

    std::stable_sort(J.clusters.begin(), J.clusters.end(), cluster_before);

    long total = 0;
    for (size_t c = 0; c < J.clusters.size(); ++c)
        for (size_t h = 0; h < J.clusters[c].chains.size(); ++h)
            for (int t = 1; t <= J.clusters[c].chains[h].length(); ++t) {
                J.rows.push_back({static_cast<int>(c), static_cast<int>(h), t});
                ++total;
            }
    J.B.resize(total, n);
    for (long a = 0; a < total; ++a) J.B.row(a) = J.row_vector(static_cast<int>(a));
    if (total == n) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J.B);
        double smin = svd.singularValues()(n - 1);
        J.condition = smin > 0.0 ? svd.singularValues()(0) / smin : INFINITY;
    } else {
        J.condition = INFINITY;
    }
    return J;
}

SparseRow apply_L_shift(const Mask& mask, const SparseRow& y, cplx lambda, int r) {
    SparseRow cur = y;
    for (int step = 0; step < r; ++step) {
        SparseRow next;
        for (const auto& [i, yi] : cur) {
            if (yi == 0.0) continue;
            Point Ai = mask.dil.apply(i);
            for (const auto& [k, ck] : mask.coeff) next[Ai - k] += yi * ck;
            next[i] -= lambda * yi;
        }
        cur.swap(next);
    }
    return cur;
}

cplx ExtendedVector::at(const Point& k) const {
    if (!window.count(k)) throw WindowTooSmall("coefficient " + k.str() + " lies outside the extension window");
    auto it = values.find(k);
    return it == values.end() ? cplx(0.0) : it->second;
}

ExtendedVector extend_kernel_vector(const Eigen::RowVectorXcd& v, cplx lambda, int r,
                                    const Mask& mask, const AdmissibleChain& chain, int source,
                                    int target, double tol) {
    if (std::abs(lambda) == 0.0) throw ZeroEigenvalue("extension needs a nonzero eigenvalue");
    if (r < 1) throw SpecError("order must be positive");
    if (source < 0 || target < source || target >= chain.size())
        throw WindowTooSmall("target index beyond the admissible chain");
    std::vector<Point> base = order_points(chain.omega(source));
    if (static_cast<size_t>(v.size()) != base.size()) throw SpecError("vector size does not match source set");

    ExtendedVector Y;
    Y.lambda = lambda;
    Y.r = r;
    Y.source = source;
    Y.target = target;
    Y.window = chain.omega(target);

    SparseRow y;
    for (size_t i = 0; i < base.size(); ++i) y[base[i]] = v(static_cast<long>(i));

    // Precondition: v (T_source - lambda)^r = 0.
    {
        SparseRow z = apply_L_shift(mask, y, lambda, r);
        double res = 0.0, vn = v.cwiseAbs().maxCoeff();
        for (const auto& p : base) {
            auto it = z.find(p);
            if (it != z.end()) res = std::max(res, std::abs(it->second));
        }
        if (res > tol * std::max(1.0, vn) * std::pow(1.0 + std::abs(lambda), r))
            throw NotInKernel("residual " + std::to_string(res) + " exceeds tolerance");
    }

    cplx denom = std::pow(-lambda, r);
    for (int k = source; k < target; ++k) {
        SparseRow z = apply_L_shift(mask, y, lambda, r);
        for (const auto& j : chain.omega(k + 1)) {
            if (chain.omega(k).count(j)) continue;
            auto it = z.find(j);
            y[j] = it == z.end() ? cplx(0.0) : -it->second / denom;
        }
    }
    for (const auto& [p, val] : y) Y.values[p] = val;
    return Y;
}

Eigen::RowVectorXcd restrict_to(const ExtendedVector& Y, const PointSet& omega) {
    Eigen::RowVectorXcd out(static_cast<long>(omega.size()));
    long i = 0;
    for (const auto& p : omega) out(i++) = Y.at(p);
    return out;
}

double extension_residual(const ExtendedVector& Y, const Mask& mask) {
    SparseRow y(Y.values.begin(), Y.values.end());
    SparseRow z = apply_L_shift(mask, y, Y.lambda, Y.r);
    double res = 0.0, ymax = 0.0;
    for (const auto& [p, val] : Y.values) ymax = std::max(ymax, std::abs(val));
    for (const auto& j : Y.window) {
        auto it = z.find(j);
        if (it != z.end()) res = std::max(res, std::abs(it->second));
    }
    return ymax > 0.0 ? res / ymax : res;
}

}  // namespace refinery
