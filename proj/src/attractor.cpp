#include "refinery/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "refinery/errors.hpp"
#include "refinery/parallel.hpp"

namespace refinery {

namespace {

double op_norm2(const Eigen::MatrixXd& X) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
    return svd.singularValues()(0);
}

Eigen::MatrixXd inv_power(const Dilation& dil, int r) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(dil.dim(), dil.dim());
    for (int i = 0; i < r; ++i) P = dil.Minv() * P;
    return P;
}

}  // namespace

double AdaptedNorm::operator()(const Eigen::VectorXd& x) const {
    double best = 0.0, scale = 1.0;
    for (int i = 0; i < p; ++i) {
        best = std::max(best, scale * (inv_powers[i] * x).norm());
        scale *= c;
    }
    return best;
}

AdaptedNorm adapted_norm(const Dilation& dil) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(dil.Minv(), false);
    double rho = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) rho = std::max(rho, std::abs(es.eigenvalues()(i)));
    if (rho >= 1.0 - 1e-12) throw NotExpansive("spectral radius of A^{-1} is not below 1");

    AdaptedNorm n;
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(dil.dim(), dil.dim());
    n.inv_powers.push_back(P);
    for (int p = 1; p <= 100000; ++p) {
        P = dil.Minv() * P;
        double q = op_norm2(P);
        if (q < 1.0) {
            n.p = p;
            n.theta = std::pow(q, 1.0 / p);
            n.c = 1.0 / n.theta;
            return n;
        }
        n.inv_powers.push_back(P);
    }
    throw NotExpansive("no power of A^{-1} contracts");
}

AttractorCloud attractor_cloud(const std::vector<Point>& H, int depth, const Dilation& dil,
                               const CloudOptions& opt) {
    if (H.empty()) throw SpecError("attractor needs a nonempty set");
    if (depth < 1) throw SpecError("attractor depth must be positive");
    AdaptedNorm nrm = adapted_norm(dil);
    double eps = 0.0;
    for (const auto& h : H) eps = std::max(eps, nrm(h.to_vector()));

    AttractorCloud cloud;
    cloud.depth = depth;
    cloud.hausdorff_bound = eps * std::pow(nrm.theta, depth) / (1.0 - nrm.theta);

    // Numerators gamma with x = M^{-r} gamma, gamma_r = M gamma_{r-1} + h_r.
    std::vector<Point> cur{Point(dil.dim())};
    bool overflow = false;
    for (int t = 0; t < depth && !overflow; ++t) {
        std::unordered_set<Point, PointHash> next;
        next.reserve(cur.size() * H.size());
        for (const auto& g : cur) {
            Point mg = dil.apply(g);
            for (const auto& h : H) next.insert(mg + h);
            if (next.size() > opt.cap) {
                overflow = true;
                break;
            }
        }
        cur.assign(next.begin(), next.end());
    }

    if (overflow) {
        if (!opt.allow_sampling)
            throw BudgetExceeded("attractor cloud exceeds " + std::to_string(opt.cap) + " points");
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<size_t> pick(0, H.size() - 1);
        std::unordered_set<Point, PointHash> seen;
        for (size_t s = 0; s < opt.cap; ++s) {
            Point g(dil.dim());
            for (int t = 0; t < depth; ++t) g = dil.apply(g) + H[pick(rng)];
            seen.insert(g);
        }
        cur.assign(seen.begin(), seen.end());
        cloud.sampled = true;
    }

    std::sort(cur.begin(), cur.end(), PointOrderLess{});
    Eigen::MatrixXd Mr = inv_power(dil, depth);
    cloud.points.reserve(cur.size());
    for (const auto& g : cur) cloud.points.push_back(Mr * g.to_vector());
    return cloud;
}

double hausdorff_distance(const std::vector<Eigen::VectorXd>& a,
                          const std::vector<Eigen::VectorXd>& b) {
    auto directed = [](const std::vector<Eigen::VectorXd>& x, const std::vector<Eigen::VectorXd>& y) {
        double worst = 0.0;
        for (const auto& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y) best = std::min(best, (p - q).norm());
            worst = std::max(worst, best);
        }
        return worst;
    };
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    return std::max(directed(a, b), directed(b, a));
}

namespace {

struct CellKey {
    std::array<int64_t, kMaxDim> c{};
    bool operator==(const CellKey& o) const { return c == o.c; }
};

struct CellHash {
    size_t operator()(const CellKey& k) const {
        uint64_t h = 1469598103934665603ULL;
        for (auto v : k.c) h = (h ^ static_cast<uint64_t>(v)) * 1099511628211ULL;
        return static_cast<size_t>(h);
    }
};

class SpatialHash {
public:
    SpatialHash(const std::vector<Eigen::VectorXd>& pts, double cell) : pts_(pts), cell_(cell) {
        for (size_t i = 0; i < pts.size(); ++i) grid_[key(pts[i])].push_back(i);
    }

    bool any_within(const Eigen::VectorXd& z, double tau) const {
        CellKey base = key(z);
        int d = static_cast<int>(z.size());
        int combos = 1;
        for (int i = 0; i < d; ++i) combos *= 3;
        for (int m = 0; m < combos; ++m) {
            CellKey k = base;
            int r = m;
            for (int i = 0; i < d; ++i) {
                k.c[i] += r % 3 - 1;
                r /= 3;
            }
            auto it = grid_.find(k);
            if (it == grid_.end()) continue;
            for (size_t idx : it->second)
                if ((pts_[idx] - z).norm() <= tau) return true;
        }
        return false;
    }

private:
    CellKey key(const Eigen::VectorXd& x) const {
        CellKey k;
        for (int i = 0; i < x.size(); ++i) k.c[i] = static_cast<int64_t>(std::floor(x(i) / cell_));
        return k;
    }

    const std::vector<Eigen::VectorXd>& pts_;
    double cell_;
    std::unordered_map<CellKey, std::vector<size_t>, CellHash> grid_;
};

}  // namespace

TileStats tile_multiplicity(const AttractorCloud& q_cloud, const Dilation& dil, const DigitSet& D,
                            int samples, uint64_t seed) {
    if (samples < 1) throw SpecError("sample count must be positive");
    if (q_cloud.points.empty()) throw SpecError("empty tile cloud");
    const int d = dil.dim();
    const int r = q_cloud.depth;

    Eigen::VectorXd center = Eigen::VectorXd::Zero(d);
    for (const auto& p : q_cloud.points) center += p;
    center /= static_cast<double>(q_cloud.points.size());
    double radius = 0.0;
    for (const auto& p : q_cloud.points) radius = std::max(radius, (p - center).norm());
    radius += q_cloud.hausdorff_bound;

    // A branch surviving r levels is accepted when its remainder lies within
    // the depth-r spacing of the cloud.
    Eigen::MatrixXd Mr = inv_power(dil, r);
    double tau = 0.0;
    for (const auto& p : q_cloud.points) tau = std::max(tau, (Mr * p).norm());
    tau += op_norm2(Mr) * q_cloud.hausdorff_bound;
    SpatialHash index(q_cloud.points, std::max(tau, 1e-12));

    std::vector<Eigen::VectorXd> digits;
    for (const auto& dg : D.digits()) digits.push_back(dg.to_vector());
    const Eigen::MatrixXd& M = dil.Md();

    std::vector<int> counts(samples);
    parallel_for(static_cast<size_t>(samples), [&](size_t s) {
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (s + 1)));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Eigen::VectorXd x(d);
        for (int i = 0; i < d; ++i) x(i) = unif(rng);

        struct Branch {
            Eigen::VectorXd z;
            int root;
        };
        std::vector<Branch> cur;
        std::vector<int64_t> lo(d), hi(d);
        for (int i = 0; i < d; ++i) {
            lo[i] = static_cast<int64_t>(std::floor(x(i) - center(i) - radius));
            hi[i] = static_cast<int64_t>(std::ceil(x(i) - center(i) + radius));
        }
        std::vector<int64_t> k(lo);
        int root = 0;
        while (true) {
            Eigen::VectorXd z = x;
            for (int i = 0; i < d; ++i) z(i) -= static_cast<double>(k[i]);
            if ((z - center).norm() <= radius) cur.push_back({z, root});
            ++root;
            int i = 0;
            while (i < d && ++k[i] > hi[i]) {
                k[i] = lo[i];
                ++i;
            }
            if (i == d) break;
        }
        for (int t = 0; t < r && !cur.empty(); ++t) {
            std::vector<Branch> next;
            for (const auto& b : cur) {
                Eigen::VectorXd mz = M * b.z;
                for (const auto& dg : digits) {
                    Eigen::VectorXd z = mz - dg;
                    if ((z - center).norm() <= radius) next.push_back({z, b.root});
                }
            }
            cur.swap(next);
        }
        std::vector<int> roots;
        for (const auto& b : cur)
            if (index.any_within(b.z, tau)) roots.push_back(b.root);
        std::sort(roots.begin(), roots.end());
        counts[s] = static_cast<int>(std::unique(roots.begin(), roots.end()) - roots.begin());
    });

    TileStats st;
    st.samples = samples;
    st.min = *std::min_element(counts.begin(), counts.end());
    st.max = *std::max_element(counts.begin(), counts.end());
    double total = 0.0;
    for (int c : counts) total += c;
    st.mean = total / samples;
    return st;
}

}  // namespace refinery
