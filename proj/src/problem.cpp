#include "refinery/problem.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "refinery/errors.hpp"

namespace refinery {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw SpecError("unknown field \"" + it.key() + "\" in " + where);
}

Eigen::MatrixXd read_matrix(const json& j, const std::string& what) {
    if (j.is_number()) {
        Eigen::MatrixXd M(1, 1);
        M(0, 0) = j.get<double>();
        return M;
    }
    if (!j.is_array() || j.empty()) throw SpecError(what + " must be a number or a square array of rows");
    long n = static_cast<long>(j.size());
    Eigen::MatrixXd M(n, n);
    for (long i = 0; i < n; ++i) {
        const json& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<long>(row.size()) != n) throw SpecError(what + " must be square");
        for (long k = 0; k < n; ++k) {
            if (!row[static_cast<size_t>(k)].is_number()) throw SpecError(what + " entries must be numbers");
            M(i, k) = row[static_cast<size_t>(k)].get<double>();
        }
    }
    return M;
}

Point read_point(const json& j, int dim, const std::string& what) {
    auto as_int = [&](const json& v) -> int64_t {
        if (!v.is_number_integer()) throw SpecError(what + " coordinates must be integers");
        return v.get<int64_t>();
    };
    Point p(dim);
    if (j.is_number()) {
        if (dim != 1) throw SpecError(what + " must have " + std::to_string(dim) + " coordinates");
        p[0] = as_int(j);
        return p;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw SpecError(what + " must have " + std::to_string(dim) + " coordinates");
    for (int i = 0; i < dim; ++i) p[i] = as_int(j[static_cast<size_t>(i)]);
    return p;
}

json matrix_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (long i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (long k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
        rows.push_back(row);
    }
    return rows;
}

json point_json(const Point& p) {
    json a = json::array();
    for (int i = 0; i < p.dim; ++i) a.push_back(p[i]);
    return a;
}

}  // namespace

ProblemSpec parse_problem(const json& j) {
    if (!j.is_object()) throw SpecError("problem must be a JSON object");
    reject_unknown(j, {"lattice", "dilation", "digits", "mask", "options"}, "problem");
    for (const char* key : {"dilation", "digits", "mask"})
        if (!j.contains(key)) throw SpecError(std::string("missing field \"") + key + "\"");

    ProblemSpec spec;
    spec.dilation = read_matrix(j["dilation"], "dilation");
    const int d = spec.dim();
    if (d < 1 || d > kMaxDim) throw SpecError("dimension must be between 1 and 4");
    if (j.contains("lattice")) {
        spec.lattice = read_matrix(j["lattice"], "lattice");
        if (spec.lattice->rows() != d) throw SpecError("lattice and dilation sizes differ");
    }

    if (!j["digits"].is_array() || j["digits"].empty()) throw SpecError("digits must be a nonempty array");
    for (const auto& dj : j["digits"]) spec.digits.push_back(read_point(dj, d, "digit"));

    if (!j["mask"].is_array() || j["mask"].empty()) throw SpecError("mask must be a nonempty array");
    std::set<Point, PointOrderLess> seen;
    for (const auto& e : j["mask"]) {
        if (!e.is_object()) throw SpecError("mask entries must be objects");
        reject_unknown(e, {"point", "coeff"}, "mask entry");
        if (!e.contains("point") || !e.contains("coeff")) throw SpecError("mask entry needs point and coeff");
        Point p = read_point(e["point"], d, "mask point");
        if (!seen.insert(p).second) throw SpecError("duplicate mask point " + p.str());
        std::string c;
        if (e["coeff"].is_string()) c = e["coeff"].get<std::string>();
        else if (e["coeff"].is_number()) c = e["coeff"].dump();
        else throw SpecError("coeff must be a string or number");
        spec.mask.emplace_back(p, c);
    }

    if (j.contains("options")) {
        const json& o = j["options"];
        if (!o.is_object()) throw SpecError("options must be an object");
        reject_unknown(o, {"resolution", "n_extra", "tol", "seed", "tile_depth", "tile_samples", "s_max",
                           "tile_tolerance"},
                       "options");
        auto get_int = [&](const char* key, int& dst, int lo) {
            if (!o.contains(key)) return;
            if (!o[key].is_number_integer() || o[key].get<long long>() < lo)
                throw SpecError(std::string("option ") + key + " must be an integer >= " + std::to_string(lo));
            dst = o[key].get<int>();
        };
        get_int("resolution", spec.options.resolution, 0);
        get_int("n_extra", spec.options.n_extra, 0);
        get_int("tile_depth", spec.options.tile_depth, 1);
        get_int("tile_samples", spec.options.tile_samples, 100);
        get_int("s_max", spec.options.s_max, 0);
        if (o.contains("seed")) {
            if (!o["seed"].is_number_integer() || o["seed"].get<long long>() < 0)
                throw SpecError("option seed must be a nonnegative integer");
            spec.options.seed = o["seed"].get<uint64_t>();
        }
        for (const char* key : {"tol", "tile_tolerance"}) {
            if (!o.contains(key)) continue;
            if (!o[key].is_number() || o[key].get<double>() <= 0.0)
                throw SpecError(std::string("option ") + key + " must be positive");
            (std::string(key) == "tol" ? spec.options.tol : spec.options.tile_tolerance) = o[key].get<double>();
        }
    }
    build_mask(spec);  // enforce all invariants on load
    return spec;
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot read " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SpecError(std::string("malformed JSON in ") + path + ": " + e.what());
    }
    return parse_problem(j);
}

json to_json(const ProblemSpec& spec) {
    json j;
    if (spec.lattice) j["lattice"] = matrix_json(*spec.lattice);
    j["dilation"] = matrix_json(spec.dilation);
    j["digits"] = json::array();
    for (const auto& d : spec.digits) j["digits"].push_back(point_json(d));
    j["mask"] = json::array();
    for (const auto& [p, c] : spec.mask) j["mask"].push_back({{"point", point_json(p)}, {"coeff", c}});
    const Options& o = spec.options;
    j["options"] = {{"resolution", o.resolution}, {"n_extra", o.n_extra},       {"tol", o.tol},
                    {"seed", o.seed},             {"tile_depth", o.tile_depth}, {"tile_samples", o.tile_samples},
                    {"s_max", o.s_max},           {"tile_tolerance", o.tile_tolerance}};
    return j;
}

Mask build_mask(const ProblemSpec& spec) {
    const int d = spec.dim();
    Lattice lat = spec.lattice ? Lattice(*spec.lattice) : Lattice::standard(d);
    Dilation dil(lat, spec.dilation);
    DigitSet D(dil, spec.digits);
    Mask mask(lat, dil, D);
    for (const auto& [p, c] : spec.mask) mask.set(p, c);
    return mask;
}

}  // namespace refinery
