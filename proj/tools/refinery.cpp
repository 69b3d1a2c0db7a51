#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "refinery/errors.hpp"
#include "refinery/pipeline.hpp"

namespace fs = std::filesystem;
using namespace refinery;

namespace {

struct Flags {
    std::string spec_path;
    std::string out_dir = ".";
    std::string what = "phi";
    std::optional<int> resolution;
    std::optional<int> n_extra;
    std::optional<double> tol;
    std::optional<uint64_t> seed;
};

ProblemSpec load(const Flags& f) {
    ProblemSpec spec = load_problem(f.spec_path);
    if (f.resolution) spec.options.resolution = *f.resolution;
    if (f.n_extra) spec.options.n_extra = *f.n_extra;
    if (f.tol) spec.options.tol = *f.tol;
    if (f.seed) spec.options.seed = *f.seed;
    return spec;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw SpecError("cannot write " + p.string());
    out << text;
}

int exit_code_for(const Error& e) {
    const std::string k = e.kind();
    if (k == "DegenerateEigenvalue") return 2;
    if (k == "SpecError" || k == "NotALatticePoint" || k == "InvalidDigitSet" || k == "InvalidDilation" ||
        k == "NotExpansive" || k == "BudgetExceeded")
        return 1;
    return 3;
}

int cmd_analyze(const Flags& f) {
    ProblemSpec spec = load(f);
    fs::create_directories(f.out_dir);
    Mask mask = build_mask(spec);
    TileStats tile = tile_check(mask, spec.options);
    if (!tile_ok(tile, spec.options)) {
        std::ostringstream os;
        os << "tile check failed: multiplicity mean " << tile.mean << " (min " << tile.min << ", max " << tile.max
           << ", samples " << tile.samples << ")\n";
        write_file(fs::path(f.out_dir) / "summary.txt", os.str());
        std::cerr << os.str();
        return 2;
    }
    Analysis a = analyze(spec, tile);
    write_file(fs::path(f.out_dir) / "jordan.json", jordan_json(a.jordan).dump(2) + "\n");
    write_file(fs::path(f.out_dir) / "chain.json", chain_json(a.chain).dump(2) + "\n");
    write_file(fs::path(f.out_dir) / "accuracy.json", accuracy_json(a).dump(2) + "\n");
    std::string summary = summary_text(a);
    write_file(fs::path(f.out_dir) / "summary.txt", summary);
    std::cout << summary;
    return 0;
}

int cmd_eval(const Flags& f) {
    ProblemSpec spec = load(f);
    fs::create_directories(f.out_dir);
    Mask mask = build_mask(spec);
    const int r = spec.options.resolution;
    if (f.what == "attractor") {
        CloudOptions co;
        co.seed = spec.options.seed;
        AttractorCloud cloud = attractor_cloud(mask.digits.digits(), r, mask.dil, co);
        write_file(fs::path(f.out_dir) / "attractor.csv", cloud_csv(cloud, mask.lattice));
        std::cout << "wrote " << cloud.points.size() << " attractor points\n";
        return 0;
    }
    AdmissibleChain chain = admissible_chain(mask.support(), mask.dil, mask.digits, spec.options.n_extra);
    GridFunction g = eval_phi_grid(mask, chain, r);
    if (f.what == "phi") {
        write_file(fs::path(f.out_dir) / "phi.csv", phi_csv(g));
        std::cout << "wrote " << g.addresses() * g.omega().size() << " samples of phi\n";
        return 0;
    }
    JordanDecomposition J = eigen_jordan(build_T(mask, chain.omega_n0()));
    std::vector<HomogeneousElement> basis = basis_from_jordan(J, mask, chain);
    for (size_t i = 0; i < basis.size(); ++i)
        write_file(fs::path(f.out_dir) / ("basis_" + std::to_string(i) + ".csv"), basis_csv(basis[i], g));
    std::cout << "wrote " << basis.size() << " basis files\n";
    return 0;
}

int cmd_verify(const Flags& f) {
    ProblemSpec spec = load(f);
    int code = 0;
    run_invariants(spec, [&](const Check& c) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
        std::cout << "\n";
        if (!c.passed) code = c.name == "tile multiplicity" ? 2 : 3;
        return c.passed;
    });
    std::cout << (code == 0 ? "all invariants hold\n" : "stopped at first failure\n");
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"refinable shift-invariant spaces on lattices"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("spec", f.spec_path, "problem definition (JSON)")->required();
        sub->add_option("--resolution", f.resolution, "grid resolution r");
        sub->add_option("--n-extra", f.n_extra, "admissible sets beyond n0");
        sub->add_option("--tol", f.tol, "numerical tolerance");
        sub->add_option("--seed", f.seed, "random seed");
        sub->add_option("--out-dir", f.out_dir, "output directory");
    };
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "spectral and accuracy report");
    CLI::App* eval_cmd = app.add_subcommand("eval", "CSV plot data");
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
    add_common(analyze_cmd);
    add_common(eval_cmd);
    add_common(verify_cmd);
    eval_cmd->add_option("--what", f.what, "phi, basis or attractor")
        ->check(CLI::IsMember({"phi", "basis", "attractor"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(f);
        if (*eval_cmd) return cmd_eval(f);
        return cmd_verify(f);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
