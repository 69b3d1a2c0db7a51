#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "refinery/scale_matrix.hpp"

namespace refinery {

struct Options {
    int resolution = 8;
    int n_extra = 4;
    double tol = 1e-6;
    uint64_t seed = 1;
    int tile_depth = 16;
    int tile_samples = 10000;
    int s_max = 3;
    double tile_tolerance = 0.05;

    bool operator==(const Options&) const = default;
};

struct ProblemSpec {
    std::optional<Eigen::MatrixXd> lattice;  // columns are the generators
    Eigen::MatrixXd dilation;
    std::vector<Point> digits;
    std::vector<std::pair<Point, std::string>> mask;
    Options options;

    int dim() const { return static_cast<int>(dilation.rows()); }
};

ProblemSpec parse_problem(const nlohmann::json& j);
ProblemSpec load_problem(const std::string& path);
nlohmann::json to_json(const ProblemSpec& spec);

Mask build_mask(const ProblemSpec& spec);

}  // namespace refinery
