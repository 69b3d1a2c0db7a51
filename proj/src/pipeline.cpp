#include "refinery/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "refinery/errors.hpp"

namespace refinery {

using nlohmann::json;

namespace {

std::string fmt(double v, int prec = 12) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

std::string fmt(cplx v, int prec = 12) {
    if (std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v.real()))) return fmt(v.real(), prec);
    std::ostringstream os;
    os << std::setprecision(prec) << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
    return os.str();
}

json cjson(cplx v) { return json::array({v.real(), v.imag()}); }

json pjson(const Point& p) {
    json a = json::array();
    for (int i = 0; i < p.dim; ++i) a.push_back(p[i]);
    return a;
}

void csv_coords(std::ostringstream& os, const Eigen::VectorXd& x) {
    for (long i = 0; i < x.size(); ++i) os << x(i) << ',';
}

std::string csv_header(int d, const std::string& tail) {
    std::string h;
    for (int i = 1; i <= d; ++i) h += "x_" + std::to_string(i) + ",";
    return h + tail + "\n";
}

}  // namespace

TileStats tile_check(const Mask& mask, const Options& opt) {
    CloudOptions co;
    co.seed = opt.seed;
    AttractorCloud q = attractor_cloud(mask.digits.digits(), opt.tile_depth, mask.dil, co);
    return tile_multiplicity(q, mask.dil, mask.digits, opt.tile_samples, opt.seed);
}

bool tile_ok(const TileStats& st, const Options& opt) { return std::abs(st.mean - 1.0) <= opt.tile_tolerance; }

Analysis analyze(const ProblemSpec& spec, const TileStats& tile) {
    Analysis a;
    a.spec = spec;
    a.tile = tile;
    a.mask = build_mask(spec);
    a.chain = admissible_chain(a.mask.support(), a.mask.dil, a.mask.digits, spec.options.n_extra);
    a.T = build_T(a.mask, a.chain.omega_n0());
    a.jordan = eigen_jordan(a.T);
    a.grid = eval_phi_grid(a.mask, a.chain, spec.options.resolution);
    a.basis = basis_from_jordan(a.jordan, a.mask, a.chain);

    a.local_dim = local_dimension(translate_samples(a.grid), spec.options.tol);
    a.local_dim_basis = local_dimension(basis_samples(a.grid, a.jordan), spec.options.tol);
    a.dim_H = static_cast<int>(a.T.size());
    if (const EigenCluster* z = a.jordan.find(0.0, 1e-12)) a.dim_H -= z->multiplicity;

    a.necessary = accuracy_necessary(a.jordan, a.mask.dil, spec.options.s_max);
    a.constructive = accuracy_constructive(a.grid, spec.options.s_max, spec.options.tol);
    a.eta_ok = eta_contained(a.jordan, a.mask.dil, a.constructive.kappa);
    return a;
}

json jordan_json(const JordanDecomposition& J) {
    json j;
    j["index"] = json::array();
    for (const auto& p : J.index.points()) j["index"].push_back(pjson(p));
    j["tol"] = J.tol;
    j["condition"] = std::isfinite(J.condition) ? json(J.condition) : json("inf");
    j["eigenvalues"] = json::array();
    for (const auto& c : J.clusters) {
        json e;
        e["lambda"] = cjson(c.lambda);
        e["multiplicity"] = c.multiplicity;
        e["chain_lengths"] = json::array();
        for (const auto& ch : c.chains) e["chain_lengths"].push_back(ch.length());
        e["rank_staircase"] = c.rank_staircase;
        e["members"] = json::array();
        for (auto m : c.members) e["members"].push_back(cjson(m));
        j["eigenvalues"].push_back(e);
    }
    j["basis"] = json::array();
    for (int i = 0; i < J.size(); ++i) {
        json r;
        r["lambda"] = cjson(J.row_lambda(i));
        r["chain"] = J.rows[i].chain;
        r["depth"] = J.rows[i].depth;
        r["vector"] = json::array();
        const auto& v = J.row_vector(i);
        for (long k = 0; k < v.size(); ++k) r["vector"].push_back(cjson(v(k)));
        j["basis"].push_back(r);
    }
    return j;
}

json chain_json(const AdmissibleChain& chain) {
    json j;
    j["n0"] = chain.n0;
    j["H"] = json::array();
    for (const auto& p : chain.H) j["H"].push_back(pjson(p));
    j["Hprime"] = json::array();
    for (const auto& p : chain.Hprime) j["Hprime"].push_back(pjson(p));
    j["sets"] = json::array();
    for (const auto& s : chain.sets) {
        json a = json::array();
        for (const auto& p : s) a.push_back(pjson(p));
        j["sets"].push_back(a);
    }
    return j;
}

json accuracy_json(const Analysis& a) {
    json j;
    j["kappa_necessary"] = a.necessary.kappa;
    j["kappa_constructive"] = a.constructive.kappa;
    j["eta_contained"] = a.eta_ok;
    j["degrees"] = json::array();
    for (size_t s = 0; s < a.necessary.degrees.size(); ++s) {
        json d;
        d["s"] = s;
        d["blocks"] = json::array();
        for (const auto& b : a.necessary.degrees[s])
            d["blocks"].push_back({{"beta", cjson(b.beta)}, {"order", b.demand}, {"matched_order", b.matched}});
        if (s < a.constructive.degrees.size()) {
            const auto& f = a.constructive.degrees[s];
            d["tile_residual"] = f.tile_residual;
            d["joint_residual"] = f.joint_residual;
            d["reproduced"] = f.passed;
        }
        j["degrees"].push_back(d);
    }
    return j;
}

std::string summary_text(const Analysis& a) {
    std::ostringstream os;
    os << "dimension " << a.mask.dim() << ", |det A| = " << a.mask.dil.m() << "\n";
    os << "tile multiplicity: mean " << fmt(a.tile.mean, 6) << " (min " << a.tile.min << ", max " << a.tile.max
       << ", samples " << a.tile.samples << ")\n";
    os << "admissible chain: " << a.chain.size() << " sets, n0 = " << a.chain.n0 << ", |Omega_n0| = "
       << a.chain.omega_n0().size() << "\n\n";
    os << "spectrum of T on Omega_n0:\n";
    os << "  lambda                 mult  chains\n";
    for (const auto& c : a.jordan.clusters) {
        std::ostringstream ch;
        for (size_t i = 0; i < c.chains.size(); ++i) ch << (i ? "," : "") << c.chains[i].length();
        os << "  " << std::left << std::setw(22) << fmt(c.lambda, 10) << " " << std::setw(5) << c.multiplicity
           << " " << ch.str();
        if (c.max_chain() > 1) os << "  (Jordan " << c.max_chain() << ")";
        os << "\n";
    }
    os << std::right;
    os << "Jordan basis condition number: " << fmt(a.jordan.condition, 6) << "\n\n";
    os << "local dimension: " << a.local_dim << "\n";
    os << "dim H (size minus zero multiplicity): " << a.dim_H;
    if (a.dim_H != a.local_dim) os << "  [differs from local dimension]";
    os << "\n";
    os << "accuracy (spectral necessary): " << a.necessary.kappa << "\n";
    os << "accuracy (constructive): " << a.constructive.kappa << "\n";
    os << "eta^alpha contained for s < accuracy: " << (a.eta_ok ? "yes" : "no") << "\n";
    return os.str();
}

std::string phi_csv(const GridFunction& g) {
    std::ostringstream os;
    os << std::setprecision(17);
    const int d = g.dilation().dim();
    os << csv_header(d, "re,im,boundary_flag");
    const IntMatrix Mr = g.dilation().M().pow(g.resolution());
    for (size_t a = 0; a < g.addresses(); ++a)
        for (size_t w = 0; w < g.omega().size(); ++w) {
            Point gamma = g.gamma(a) + Mr.apply(g.omega()[w]);
            csv_coords(os, g.lattice().embed(g.coords(gamma)));
            cplx v = g.value(a, w);
            os << v.real() << ',' << v.imag() << ',' << (g.boundary(a) ? 1 : 0) << '\n';
        }
    return os.str();
}

std::string basis_csv(const HomogeneousElement& h, const GridFunction& g) {
    std::ostringstream os;
    os << std::setprecision(17);
    const int d = g.dilation().dim();
    os << csv_header(d, "re,im");
    const IntMatrix Mr = g.dilation().M().pow(g.resolution());
    std::vector<Point> shifts;
    for (const auto& w : g.omega().points()) {
        shifts.push_back(w);
        shifts.push_back(-w);
    }
    shifts = order_points(std::move(shifts));
    for (const auto& k : shifts)
        for (size_t a = 0; a < g.addresses(); ++a) {
            Point gamma = g.gamma(a) + Mr.apply(k);
            auto v = eval_h(h, g, gamma);
            if (!v) continue;
            csv_coords(os, g.lattice().embed(g.coords(gamma)));
            os << v->real() << ',' << v->imag() << '\n';
        }
    return os.str();
}

std::string cloud_csv(const AttractorCloud& cloud, const Lattice& lat) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << csv_header(lat.dim(), "").substr(0, csv_header(lat.dim(), "").size() - 2) << "\n";
    for (const auto& p : cloud.points) {
        Eigen::VectorXd x = lat.embed(p);
        for (long i = 0; i < x.size(); ++i) os << (i ? "," : "") << x(i);
        os << '\n';
    }
    return os.str();
}

namespace {

struct Suite {
    const std::function<bool(const Check&)>& sink;
    bool stopped = false;

    bool report(const std::string& name, bool ok, const std::string& detail) {
        if (stopped) return false;
        if (!sink({name, ok, detail})) stopped = true;
        return !stopped;
    }
};

double max_abs(const Eigen::MatrixXcd& X) { return X.size() ? X.cwiseAbs().maxCoeff() : 0.0; }

std::vector<Point> box(int d, int R) {
    std::vector<Point> out;
    Point k(d);
    for (int i = 0; i < d; ++i) k[i] = -R;
    while (true) {
        out.push_back(k);
        int i = 0;
        while (i < d && ++k[i] > R) {
            k[i] = -R;
            ++i;
        }
        if (i == d) break;
    }
    return out;
}

}  // namespace

void run_invariants(const ProblemSpec& spec, const std::function<bool(const Check&)>& on_check) {
    Suite s{on_check};
    const Options& opt = spec.options;
    Mask mask = build_mask(spec);
    const Dilation& dil = mask.dil;
    const DigitSet& D = mask.digits;
    const int d = dil.dim();
    std::mt19937_64 rng(opt.seed);

    {
        json j1 = to_json(spec);
        json j2 = to_json(parse_problem(j1));
        if (!s.report("spec round trip", j1 == j2, "load -> serialize -> load")) return;
    }

    {
        bool ok = true;
        for (const auto& k : box(d, 6)) {
            Coset p = coset_decompose(k, dil, D, Sign::plus), m = coset_decompose(k, dil, D, Sign::minus);
            if (dil.apply(p.quotient) + D[p.digit] != k || dil.apply(m.quotient) - D[m.digit] != k) ok = false;
            for (int r = 1; r <= 3 && ok; ++r) {
                try {
                    if (horner(digit_expansion(k, r, dil, D), dil, D) != k) ok = false;
                } catch (const NotInTile&) {
                }
            }
        }
        if (!s.report("coset recomposition and digit expansion", ok, "box of radius 6")) return;
        std::vector<Point> pts = box(d, 3);
        std::vector<Point> a = order_points(pts);
        std::shuffle(pts.begin(), pts.end(), rng);
        if (!s.report("point order is permutation invariant", order_points(pts) == a, "")) return;
    }

    TileStats tile = tile_check(mask, opt);
    if (!s.report("tile multiplicity", tile_ok(tile, opt),
                  "mean " + fmt(tile.mean, 6) + ", min " + std::to_string(tile.min) + ", max " +
                      std::to_string(tile.max)))
        return;

    {
        int r = 1;
        while (std::pow(static_cast<double>(D.size()), r + 2) <= 4096.0 && r < 12) ++r;
        AttractorCloud c1 = attractor_cloud(D.digits(), r, dil), c2 = attractor_cloud(D.digits(), r + 1, dil);
        std::vector<Eigen::VectorXd> img;
        for (const auto& p : c1.points)
            for (const auto& h : D.digits()) img.push_back(dil.Minv() * (p + h.to_vector()));
        double hd = hausdorff_distance(c2.points, img);
        AdaptedNorm nrm = adapted_norm(dil);
        bool mono = std::abs(c2.hausdorff_bound - nrm.theta * c1.hausdorff_bound) <= 1e-12 * c1.hausdorff_bound;
        if (!s.report("attractor self-similarity", hd <= 1e-9 && mono, "Hausdorff " + fmt(hd, 3))) return;

        Point gam(d);
        gam[0] = 1;
        std::vector<Point> shifted;
        for (const auto& h : D.digits()) shifted.push_back(h + gam);
        AttractorCloud cs = attractor_cloud(shifted, r, dil);
        Eigen::VectorXd off = (dil.Md() - Eigen::MatrixXd::Identity(d, d)).inverse() * gam.to_vector();
        std::vector<Eigen::VectorXd> moved;
        for (const auto& p : c1.points) moved.push_back(p + off);
        double ht = hausdorff_distance(cs.points, moved);
        double bound = 2.0 * std::max(cs.hausdorff_bound, c1.hausdorff_bound);
        if (!s.report("attractor translation identity", ht <= bound,
                      "Hausdorff " + fmt(ht, 3) + " vs " + fmt(bound, 3)))
            return;
    }

    AdmissibleChain chain = admissible_chain(mask.support(), dil, D, opt.n_extra);
    {
        PointSet om = omega_of(chain.H, dil);
        bool ok = is_admissible(om, chain.H, dil) && om == chain.omega(0);
        for (int i = 0; i < chain.size() && ok; ++i) {
            if (!is_admissible(chain.omega(i), chain.H, dil)) ok = false;
            if (i >= chain.n0 && !is_admissible(chain.omega(i), chain.Hprime, dil)) ok = false;
            if (i + 1 < chain.size()) {
                const PointSet& a = chain.omega(i);
                const PointSet& b = chain.omega(i + 1);
                if (a.size() >= b.size() || !std::includes(b.begin(), b.end(), a.begin(), a.end(), PointOrderLess{}))
                    ok = false;
                PointSet w = contract_step(b, chain.H, dil);
                if (!std::includes(a.begin(), a.end(), w.begin(), w.end(), PointOrderLess{})) ok = false;
            }
        }
        if (chain.omega_n0() != omega_of(chain.Hprime, dil)) ok = false;
        if (!s.report("admissible chain", ok, std::to_string(chain.size()) + " sets, n0 = " + std::to_string(chain.n0)))
            return;
    }

    {
        bool ok = true;
        for (int i = 0; i < chain.size() && ok; ++i) {
            const PointSet& om = chain.omega(i);
            int64_t R = 0;
            for (const auto& p : om) R = std::max(R, p.norm_inf());
            for (const auto& ip : box(d, static_cast<int>(R) + 3)) {
                if (om.count(ip)) continue;
                for (const auto& j : om)
                    if (L_entry(mask, ip, j) != 0.0) ok = false;
            }
            if (i + 1 < chain.size()) {
                ScaleMatrix A = build_T(mask, om), B = build_T(mask, chain.omega(i + 1));
                for (const auto& p : om)
                    for (const auto& q : om)
                        if (A.at(p, q) != B.at(p, q)) ok = false;
            }
        }
        if (!s.report("scale matrix column structure and nesting", ok, "")) return;
    }

    ScaleMatrix T = build_T(mask, chain.omega_n0());
    JordanDecomposition J = eigen_jordan(T);
    {
        int total = 0;
        for (const auto& c : J.clusters) total += c.multiplicity;
        double chain_res = 0.0;
        Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(T.size(), T.size());
        for (const auto& c : J.clusters)
            for (const auto& ch : c.chains)
                for (int t = 0; t < ch.length(); ++t) {
                    Eigen::RowVectorXcd nxt = ch.vectors[t] * (T.entries - c.lambda * I);
                    Eigen::RowVectorXcd want = t == 0 ? Eigen::RowVectorXcd::Zero(T.size()) : ch.vectors[t - 1];
                    chain_res = std::max(chain_res, (nxt - want).cwiseAbs().maxCoeff() /
                                                        std::max(1.0, ch.vectors[t].cwiseAbs().maxCoeff()));
                }
        bool sizes = total == T.size() && J.size() == T.size();
        double sim = sizes ? max_abs(J.B * T.entries * J.B.inverse() - J.jordan_form()) : INFINITY;
        bool ok = sizes && J.condition < 1e12 && chain_res <= 1e-8 && sim <= 1e-8 * std::max(1.0, J.condition);
        if (!s.report("Jordan decomposition", ok,
                      "chain residual " + fmt(chain_res, 3) + ", similarity " + fmt(sim, 3) + ", cond " +
                          fmt(J.condition, 3)))
            return;
    }

    if (chain.n0 + 1 < chain.size()) {
        JordanDecomposition J2 = eigen_jordan(build_T(mask, chain.omega(chain.n0 + 1)));
        auto contained = [](const JordanDecomposition& a, const JordanDecomposition& b) {
            for (const auto& c : a.clusters) {
                if (std::abs(c.lambda) <= 1e-9) continue;
                const EigenCluster* m = b.find(c.lambda, 1e-6 * (1.0 + std::abs(c.lambda)));
                if (!m || m->multiplicity != c.multiplicity) return false;
            }
            return true;
        };
        if (!s.report("nonzero spectrum stable along the chain", contained(J, J2) && contained(J2, J), "")) return;
    }

    std::vector<HomogeneousElement> basis = basis_from_jordan(J, mask, chain);
    {
        double worst = 0.0;
        bool exact = true;
        for (const auto& h : basis) {
            if (!h.Y) continue;
            worst = std::max(worst, extension_residual(*h.Y, mask));
            if (restrict_to(*h.Y, chain.omega_n0()) != h.v) exact = false;
        }
        if (!s.report("kernel extension", exact && worst <= 1e-9, "residual " + fmt(worst, 3))) return;

        std::vector<Point> win = order_points(chain.sets.back());
        std::vector<Eigen::RowVectorXcd> rows;
        for (const auto& h : basis) {
            if (!h.Y) continue;
            Eigen::RowVectorXcd r(static_cast<long>(win.size()));
            for (size_t i = 0; i < win.size(); ++i) r(static_cast<long>(i)) = h.Y->at(win[i]);
            rows.push_back(r);
        }
        int rank = 0;
        if (!rows.empty()) {
            Eigen::MatrixXcd Ymat(static_cast<long>(rows.size()), static_cast<long>(win.size()));
            for (size_t i = 0; i < rows.size(); ++i) Ymat.row(static_cast<long>(i)) = rows[i];
            rank = local_dimension(Ymat, 1e-9);
        }
        if (!s.report("extended vectors independent", rank == static_cast<int>(rows.size()),
                      std::to_string(rank) + " of " + std::to_string(rows.size())))
            return;
    }

    GridFunction g = eval_phi_grid(mask, chain, opt.resolution);
    {
        double res = refinement_residual(g, mask);
        if (!s.report("refinement equation on the grid", res <= 1e-10, "residual " + fmt(res, 3))) return;

        if (opt.resolution >= 1) {
            GridFunction g0 = eval_phi_grid(mask, chain, opt.resolution - 1);
            const IntMatrix Mr0 = dil.M().pow(opt.resolution - 1), Mr = dil.M().pow(opt.resolution);
            double gap = 0.0, vmax = g.values().cwiseAbs().maxCoeff();
            for (size_t a = 0; a < g0.addresses(); ++a)
                for (size_t w = 0; w < g0.omega().size(); ++w) {
                    Point gamma = dil.apply(g0.gamma(a)) + Mr.apply(g0.omega()[w]);
                    gap = std::max(gap, std::abs(g0.value(a, w) - g.phi(gamma)));
                }
            (void)Mr0;
            if (!s.report("grid refinement consistency", gap <= 1e-12 * std::max(1.0, vmax), "gap " + fmt(gap, 3)))
                return;
        }

        int r_lemma = 0;
        double gap = 0.0;
        for (int r = 1; r <= 3; ++r) {
            if (std::pow(static_cast<double>(D.size()), r) > 64) break;
            PointSet need;
            std::vector<Point> sums{Point(d)};
            IntMatrix Mt = IntMatrix::identity(d);
            for (int t = 0; t < r; ++t) {
                std::vector<Point> next;
                for (const auto& p : sums)
                    for (const auto& dg : D.digits()) next.push_back(p + Mt.apply(dg));
                sums = next;
                Mt = dil.M() * Mt;
            }
            for (const auto& j : chain.omega_n0())
                for (const auto& p : sums) need.insert(j - p);
            const PointSet& big = chain.sets.back();
            if (!std::includes(big.begin(), big.end(), need.begin(), need.end(), PointOrderLess{})) break;
            gap = std::max(gap, digit_product_gap(mask, chain, chain.size() - 1, r));
            r_lemma = r;
        }
        if (r_lemma > 0 &&
            !s.report("digit matrix products", gap <= 1e-12, "r <= " + std::to_string(r_lemma) + ", gap " + fmt(gap, 3)))
            return;
    }

    {
        double worst = 0.0;
        std::string bad;
        for (size_t i = 0; i < basis.size(); ++i) {
            const auto& h = basis[i];
            if (h.lambda == 0.0) continue;
            ClassReport rep = verify_class(g, evaluator(h, g), h.lambda, h.order);
            if (rep.residual > worst) worst = rep.residual;
            if (rep.residual > 1e-6 && bad.empty()) bad = " (element " + std::to_string(i) + ")";
        }
        if (!s.report("homogeneity class", worst <= 1e-6, "worst residual " + fmt(worst, 3) + bad)) return;

        std::normal_distribution<double> nd;
        double closure = 0.0;
        for (size_t c = 0; c < J.clusters.size(); ++c) {
            if (J.clusters[c].lambda == 0.0) continue;
            std::vector<const HomogeneousElement*> members;
            std::vector<cplx> w;
            int rmax = 0;
            for (const auto& h : basis)
                if (h.cluster == static_cast<int>(c)) {
                    members.push_back(&h);
                    w.emplace_back(nd(rng), nd(rng));
                    rmax = std::max(rmax, h.order);
                }
            if (members.size() < 2) continue;
            GridEvaluator combo = [&](const Point& gamma) -> std::optional<cplx> {
                cplx sum = 0.0;
                for (size_t i = 0; i < members.size(); ++i) {
                    auto v = eval_h(*members[i], g, gamma);
                    if (!v) return std::nullopt;
                    sum += w[i] * *v;
                }
                return sum;
            };
            closure = std::max(closure, verify_class(g, combo, J.clusters[c].lambda, rmax).residual);
        }
        if (!s.report("class closure under combination", closure <= 1e-6, "residual " + fmt(closure, 3))) return;

        double zero = 0.0;
        for (const auto& h : basis)
            if (h.lambda == 0.0) zero = std::max(zero, zero_eigen_check(h.v, g));
        if (!s.report("zero eigenvalue vanishing on Q", zero <= 1e-8, "sup " + fmt(zero, 3))) return;

        int l1 = local_dimension(translate_samples(g), opt.tol), l2 = local_dimension(basis_samples(g, J), opt.tol);
        if (!s.report("local dimension translates vs basis", l1 == l2,
                      std::to_string(l1) + " vs " + std::to_string(l2)))
            return;

        CoeffMap alpha{{Point(d), 1.0}};
        double rec = reconstruction_residual(alpha, J, g);
        if (!s.report("reconstruction of phi", rec <= 1e-8, "residual " + fmt(rec, 3))) return;
    }

    {
        std::uniform_real_distribution<double> ud(-1.0, 1.0);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            int dd = 1 + t % 3, sdeg = t % 5;
            Eigen::MatrixXcd Z(dd, dd), U(dd, dd);
            for (long i = 0; i < Z.size(); ++i) {
                Z.data()[i] = ud(rng);
                U.data()[i] = ud(rng);
            }
            Eigen::MatrixXcd lhs = lift_matrix(Z * U, sdeg), rhs = lift_matrix(Z, sdeg) * lift_matrix(U, sdeg);
            worst = std::max(worst, max_abs(lhs - rhs) / std::max(1.0, max_abs(lhs)));
        }
        if (!s.report("lift homomorphism", worst <= 1e-10, "relative error " + fmt(worst, 3))) return;
    }

    {
        NecessaryResult nec = accuracy_necessary(J, dil, opt.s_max);
        ConstructiveResult con = accuracy_constructive(g, opt.s_max, opt.tol);
        if (!s.report("constructive accuracy within necessary bound", con.kappa <= nec.kappa,
                      std::to_string(con.kappa) + " <= " + std::to_string(nec.kappa)))
            return;
        if (!s.report("eta^alpha eigenvalues", eta_contained(J, dil, con.kappa), "")) return;
        if (con.kappa >= 1) {
            double pu = 0.0;
            for (size_t a = 0; a < g.addresses(); ++a)
                if (!g.boundary(a)) pu = std::max(pu, std::abs(g.Phi(a).sum() - 1.0));
            if (!s.report("partition of unity", pu <= 1e-8, "error " + fmt(pu, 3))) return;
        }
    }
}

}  // namespace refinery
