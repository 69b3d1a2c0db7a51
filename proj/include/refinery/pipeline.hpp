#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "refinery/accuracy.hpp"
#include "refinery/admissible.hpp"
#include "refinery/attractor.hpp"
#include "refinery/cascade.hpp"
#include "refinery/homogeneous.hpp"
#include "refinery/problem.hpp"
#include "refinery/spectral.hpp"

namespace refinery {

TileStats tile_check(const Mask& mask, const Options& opt);
bool tile_ok(const TileStats& st, const Options& opt);

struct Analysis {
    ProblemSpec spec;
    Mask mask;
    AdmissibleChain chain;
    TileStats tile;
    ScaleMatrix T;
    JordanDecomposition jordan;
    GridFunction grid;
    std::vector<HomogeneousElement> basis;
    int local_dim = 0;
    int local_dim_basis = 0;
    int dim_H = 0;  // size of T minus the multiplicity of 0
    NecessaryResult necessary;
    ConstructiveResult constructive;
    bool eta_ok = true;
};

// Everything after the tile check, which callers run first.
Analysis analyze(const ProblemSpec& spec, const TileStats& tile);

nlohmann::json jordan_json(const JordanDecomposition& J);
nlohmann::json chain_json(const AdmissibleChain& chain);
nlohmann::json accuracy_json(const Analysis& a);
std::string summary_text(const Analysis& a);

std::string phi_csv(const GridFunction& g);
std::string basis_csv(const HomogeneousElement& h, const GridFunction& g);
std::string cloud_csv(const AttractorCloud& cloud, const Lattice& lat);

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Runs the invariant suite; stops when on_check returns false.
void run_invariants(const ProblemSpec& spec, const std::function<bool(const Check&)>& on_check);

}  // namespace refinery
