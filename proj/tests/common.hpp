#pragma once

#include <string>

#include "refinery/pipeline.hpp"

namespace fixture {

inline refinery::ProblemSpec spec(const std::string& name) {
    return refinery::load_problem(std::string(REFINERY_TEST_DATA) + "/" + name + ".json");
}

// Mask, chain, T on Omega_n0 and its Jordan data for a named example.
struct Setup {
    refinery::Mask mask;
    refinery::AdmissibleChain chain;
    refinery::ScaleMatrix T;
    refinery::JordanDecomposition J;

    explicit Setup(const std::string& name, int n_extra = 4)
        : mask(refinery::build_mask(spec(name))),
          chain(refinery::admissible_chain(mask.support(), mask.dil, mask.digits, n_extra)),
          T(refinery::build_T(mask, chain.omega_n0())),
          J(refinery::eigen_jordan(T)) {}
};

inline refinery::Mask mask_1d(const std::vector<std::pair<int, double>>& taps) {
    using namespace refinery;
    Lattice lat = Lattice::standard(1);
    Dilation dil(lat, Eigen::MatrixXd::Constant(1, 1, 2.0));
    DigitSet D(dil, {Point{0}, Point{1}});
    Mask m(lat, dil, D);
    for (auto [k, c] : taps) m.set(Point{k}, cplx(c));
    return m;
}

}  // namespace fixture
