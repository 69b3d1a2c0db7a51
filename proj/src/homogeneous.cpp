#include "refinery/homogeneous.hpp"

#include <cmath>

#include "refinery/errors.hpp"
#include "refinery/parallel.hpp"

namespace refinery {

namespace {

double binom(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

}  // namespace

std::vector<HomogeneousElement> basis_from_jordan(const JordanDecomposition& jordan, const Mask& mask,
                                                  const AdmissibleChain& chain, int target) {
    if (target < 0) target = chain.size() - 1;
    std::vector<HomogeneousElement> out(static_cast<size_t>(jordan.size()));
    parallel_for(out.size(), [&](size_t i) {
        const BasisRow& row = jordan.rows[i];
        HomogeneousElement& h = out[i];
        h.lambda = jordan.clusters[row.cluster].lambda;
        h.order = row.depth;
        h.cluster = row.cluster;
        h.chain = row.chain;
        h.v = jordan.row_vector(static_cast<int>(i));
        if (h.lambda != 0.0)
            h.Y = extend_kernel_vector(h.v, h.lambda, h.order, mask, chain, chain.n0, target);
    });
    return out;
}

std::optional<cplx> eval_h(const HomogeneousElement& h, const GridFunction& g, const Point& gamma) {
    GridFunction::Location loc = g.locate(gamma);
    const PointIndex& om = g.omega();
    if (static_cast<long>(om.size()) != h.v.size()) throw SpecError("grid does not match the Jordan index set");
    cplx s = 0.0;
    if (loc.shift.is_zero()) {
        for (size_t w = 0; w < om.size(); ++w) s += h.v(static_cast<long>(w)) * g.value(loc.address, w);
        return s;
    }
    if (!h.Y) return std::nullopt;
    for (size_t w = 0; w < om.size(); ++w) {
        Point idx = om[w] - loc.shift;
        if (!h.Y->window.count(idx)) return std::nullopt;
        cplx phi = g.value(loc.address, w);
        if (phi != 0.0) s += h.Y->at(idx) * phi;
    }
    return s;
}

GridEvaluator evaluator(const HomogeneousElement& h, const GridFunction& g) {
    return [&h, &g](const Point& gamma) { return eval_h(h, g, gamma); };
}

std::vector<Point> class_test_points(const GridFunction& g, const GridEvaluator& h, int r, int shift_radius) {
    const Dilation& dil = g.dilation();
    const IntMatrix Mr = dil.M().pow(g.resolution());
    const int d = dil.dim();
    std::vector<Point> shifts;
    {
        Point k(d);
        for (int i = 0; i < d; ++i) k[i] = -shift_radius;
        while (true) {
            shifts.push_back(k);
            int i = 0;
            while (i < d && ++k[i] > shift_radius) {
                k[i] = -shift_radius;
                ++i;
            }
            if (i == d) break;
        }
    }
    size_t total = g.addresses() * shifts.size();
    std::vector<uint8_t> ok(total, 0);
    std::vector<Point> cand(total);
    parallel_for(total, [&](size_t idx) {
        size_t a = idx / shifts.size(), s = idx % shifts.size();
        Point p = g.gamma(a) + Mr.apply(shifts[s]);
        cand[idx] = p;
        Point q = p;
        for (int j = 0; j <= r; ++j) {
            if (g.on_boundary(q) || !h(q)) return;
            q = dil.apply(q);
        }
        ok[idx] = 1;
    });
    std::vector<Point> out;
    for (size_t i = 0; i < total; ++i)
        if (ok[i]) out.push_back(cand[i]);
    return out;
}

ClassReport verify_class(const GridFunction& g, const GridEvaluator& h, cplx lambda, int r, double tol,
                         int shift_radius) {
    if (r < 1) throw SpecError("order must be positive");
    std::vector<Point> pts = class_test_points(g, h, r, shift_radius);
    if (pts.empty()) throw NoTestPoints("no evaluable test points at resolution " + std::to_string(g.resolution()));
    const Dilation& dil = g.dilation();

    // values[p][j] = h(M^j p)
    std::vector<std::vector<cplx>> vals(pts.size(), std::vector<cplx>(r + 1));
    double hmax = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        Point q = pts[i];
        for (int j = 0; j <= r; ++j) {
            vals[i][j] = *h(q);
            hmax = std::max(hmax, std::abs(vals[i][j]));
            q = dil.apply(q);
        }
    }
    auto residual_at = [&](int rr) {
        double worst = 0.0;
        for (const auto& v : vals) {
            cplx s = 0.0;
            for (int k = 0; k <= rr; ++k) s += binom(rr, k) * std::pow(-lambda, k) * v[k];
            worst = std::max(worst, std::abs(s));
        }
        return worst / (1.0 + hmax);
    };

    ClassReport rep;
    rep.points = pts.size();
    rep.residual = residual_at(r);
    for (int rr = 1; rr <= r; ++rr)
        if (residual_at(rr) <= tol) {
            rep.sharpened_order = rr;
            break;
        }
    return rep;
}

namespace {

// k with ||M^{-(k+1)} x||_* <= rho < ||M^{-k} x||_*; empty for x = 0.
std::optional<int> shell_of(const Eigen::VectorXd& x, const AdaptedNorm& nrm, const Dilation& dil, double rho) {
    if (x.norm() == 0.0) return std::nullopt;
    int k = 0;
    Eigen::VectorXd y = x;  // y = M^{-k} x
    while (nrm(y) <= rho) {
        y = dil.Md() * y;
        --k;
        if (k < -200) return std::nullopt;
    }
    while (true) {
        Eigen::VectorXd z = dil.Minv() * y;
        if (nrm(z) <= rho) return k;
        y = z;
        ++k;
        if (k > 200) return std::nullopt;
    }
}

}  // namespace

AnnulusReport annulus_propagate(const GridFunction& g, const GridEvaluator& h, cplx lambda, int r, int a,
                                Direction dir, double rho, int shift_radius) {
    if (dir == Direction::outward && lambda == 0.0)
        throw ZeroEigenvalue("outward propagation divides by lambda");
    const Dilation& dil = g.dilation();
    AdaptedNorm nrm = adapted_norm(dil);
    const IntMatrix Mr = dil.M().pow(g.resolution());
    const int d = dil.dim();

    std::vector<Point> cand;
    {
        Point k(d);
        for (int i = 0; i < d; ++i) k[i] = -shift_radius;
        while (true) {
            for (size_t ad = 0; ad < g.addresses(); ++ad) cand.push_back(g.gamma(ad) + Mr.apply(k));
            int i = 0;
            while (i < d && ++k[i] > shift_radius) {
                k[i] = -shift_radius;
                ++i;
            }
            if (i == d) break;
        }
    }
    cand = order_points(std::move(cand));

    AnnulusReport rep;
    if (lambda != 1.0) rep.origin = cplx(0.0);
    double hmax = 0.0;
    std::vector<std::pair<cplx, cplx>> pairs;
    auto known = [&](const Point& q) -> std::optional<cplx> {
        if (g.on_boundary(q)) return std::nullopt;
        auto v = h(q);
        if (v) hmax = std::max(hmax, std::abs(*v));
        return v;
    };
    for (const auto& p : cand) {
        auto sh = shell_of(g.coords(p), nrm, dil, rho);
        if (!sh) continue;
        if (dir == Direction::inward && *sh == a - 1) {
            ++rep.targets;
            cplx s = 0.0;
            bool okay = true;
            Point q = p;
            for (int k = 1; k <= r && okay; ++k) {
                q = dil.apply(q);
                auto v = known(q);
                if (!v) okay = false;
                else s -= binom(r, k) * std::pow(-lambda, k) * *v;
            }
            auto direct = okay && !g.on_boundary(p) ? h(p) : std::nullopt;
            if (direct) pairs.emplace_back(s, *direct);
        } else if (dir == Direction::outward && *sh == a + 1) {
            ++rep.targets;
            std::vector<Point> powers{p};  // M^j p
            for (int j = 1; j <= r; ++j) powers.push_back(dil.apply(powers.back()));
            cplx s = 0.0;
            bool okay = true;
            for (int j = 1; j <= r && okay; ++j) {
                auto v = known(powers[r - j]);
                if (!v) okay = false;
                else s -= binom(r, j) * std::pow(-lambda, -j) * *v;
            }
            const Point& x = powers[r];
            auto direct = okay && !g.on_boundary(x) ? h(x) : std::nullopt;
            if (direct) pairs.emplace_back(s, *direct);
        }
    }
    for (const auto& [prop, direct] : pairs) rep.max_gap = std::max(rep.max_gap, std::abs(prop - direct));
    rep.compared = pairs.size();
    rep.max_gap /= 1.0 + hmax;
    return rep;
}

int local_dimension(const Eigen::MatrixXcd& samples, double tol) {
    if (samples.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(samples);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++r;
    return r;
}

Eigen::MatrixXcd translate_samples(const GridFunction& g) {
    std::vector<size_t> rows;
    for (size_t a = 0; a < g.addresses(); ++a)
        if (!g.boundary(a)) rows.push_back(a);
    Eigen::MatrixXcd S(static_cast<long>(rows.size()), static_cast<long>(g.omega().size()));
    for (size_t i = 0; i < rows.size(); ++i) S.row(static_cast<long>(i)) = g.values().row(static_cast<long>(rows[i]));
    return S;
}

Eigen::MatrixXcd basis_samples(const GridFunction& g, const JordanDecomposition& jordan) {
    return translate_samples(g) * jordan.B.transpose();
}

double zero_eigen_check(const Eigen::RowVectorXcd& v, const GridFunction& g) {
    double worst = 0.0;
    for (size_t a = 0; a < g.addresses(); ++a) {
        if (g.boundary(a)) continue;
        worst = std::max(worst, std::abs((v * g.Phi(a))(0)));
    }
    return worst;
}

BlockMap reconstruct_coeffs(const CoeffMap& alpha, const JordanDecomposition& jordan) {
    if (jordan.size() != static_cast<int>(jordan.index.size()) || !(jordan.condition <= 1e12))
        throw SingularBasis("Jordan basis condition number " + std::to_string(jordan.condition));
    auto lu = jordan.B.transpose().partialPivLu();
    BlockMap beta;
    if (alpha.empty()) return beta;
    std::vector<Point> gs;
    for (const auto& [gam, av] : alpha)
        for (const auto& w : jordan.index.points()) gs.push_back(w - gam);
    for (const auto& gpt : order_points(std::move(gs))) {
        Eigen::VectorXcd abar = Eigen::VectorXcd::Zero(static_cast<long>(jordan.index.size()));
        for (size_t w = 0; w < jordan.index.size(); ++w) {
            auto it = alpha.find(jordan.index[w] - gpt);
            if (it != alpha.end()) abar(static_cast<long>(w)) = it->second;
        }
        beta[gpt] = lu.solve(abar).transpose();
    }
    return beta;
}

double reconstruction_residual(const CoeffMap& alpha, const JordanDecomposition& jordan, const GridFunction& g) {
    BlockMap beta = reconstruct_coeffs(alpha, jordan);
    const IntMatrix Mr = g.dilation().M().pow(g.resolution());
    double worst = 0.0, fmax = 0.0;
    for (size_t a = 0; a < g.addresses(); ++a) {
        Eigen::VectorXcd H = jordan.B * g.Phi(a);
        for (const auto& [gpt, b] : beta) {
            Point base = g.gamma(a) + Mr.apply(gpt);
            cplx direct = 0.0;
            for (const auto& [gam, av] : alpha) direct += av * g.phi(base + Mr.apply(gam));
            cplx rebuilt = (b * H)(0);
            fmax = std::max(fmax, std::abs(direct));
            worst = std::max(worst, std::abs(direct - rebuilt));
        }
    }
    return fmax > 0.0 ? worst / fmax : worst;
}

}  // namespace refinery
