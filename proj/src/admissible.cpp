#include "refinery/admissible.hpp"

#include <algorithm>
#include <cmath>

#include "refinery/errors.hpp"

namespace refinery {

PointSet contract_step(const PointSet& S, const std::vector<Point>& H, const Dilation& dil) {
    PointSet out;
    for (const auto& w : S)
        for (const auto& h : H)
            if (auto q = dil.solve(w + h)) out.insert(*q);
    return out;
}

bool is_admissible(const PointSet& omega, const std::vector<Point>& H, const Dilation& dil) {
    for (const auto& w : omega)
        for (const auto& h : H)
            if (auto q = dil.solve(w + h))
                if (!omega.count(*q)) return false;
    return true;
}

PointSet lattice_ball(const AdaptedNorm& nrm, double delta, int dim) {
    PointSet out;
    int64_t R = static_cast<int64_t>(std::floor(delta + 1e-12));
    Point k(dim);
    for (int i = 0; i < dim; ++i) k[i] = -R;
    while (true) {
        if (nrm(k.to_vector()) <= delta) out.insert(k);
        int i = 0;
        while (i < dim && ++k[i] > R) {
            k[i] = -R;
            ++i;
        }
        if (i == dim) break;
    }
    return out;
}

namespace {

struct BallParams {
    double eps;
    double delta;
};

BallParams ball_params(const std::vector<Point>& H, const AdaptedNorm& nrm) {
    double eps = 0.0;
    for (const auto& h : H) eps = std::max(eps, nrm(h.to_vector()));
    eps *= 1.0 + 1e-6;
    double delta0 = eps / (1.0 / nrm.theta - 1.0);
    return {eps, 1.01 * delta0};
}

// Distinct iterates of the H-map starting from seed, ending at its fixed point.
std::vector<PointSet> descend(PointSet seed, const std::vector<Point>& H, const Dilation& dil) {
    std::vector<PointSet> seq{std::move(seed)};
    while (true) {
        PointSet next = contract_step(seq.back(), H, dil);
        if (next == seq.back()) break;
        seq.push_back(std::move(next));
    }
    return seq;
}

}  // namespace

PointSet omega_of(const std::vector<Point>& H, const Dilation& dil) {
    if (H.empty()) throw SpecError("omega_of needs a nonempty set");
    AdaptedNorm nrm = adapted_norm(dil);
    BallParams bp = ball_params(H, nrm);
    return descend(lattice_ball(nrm, bp.delta, dil.dim()), H, dil).back();
}

std::vector<Point> minkowski_difference(const std::vector<Point>& lambda, const DigitSet& D) {
    std::vector<Point> out;
    for (const auto& l : lambda)
        for (const auto& d : D.digits()) out.push_back(l - d);
    return order_points(std::move(out));
}

AdmissibleChain admissible_chain(const std::vector<Point>& lambda, const Dilation& dil,
                                 const DigitSet& D, int n_extra) {
    if (lambda.empty()) throw SpecError("mask support is empty");
    if (n_extra < 0) throw SpecError("n_extra must be nonnegative");
    AdmissibleChain chain;
    chain.H = order_points(lambda);
    chain.Hprime = minkowski_difference(chain.H, D);

    AdaptedNorm nrm = adapted_norm(dil);
    BallParams bp = ball_params(chain.Hprime, nrm);

    // Decreasing Lambda'-iterates from the ball down to Omega_{Lambda'}.
    std::vector<PointSet> outer = descend(lattice_ball(nrm, bp.delta, dil.dim()), chain.Hprime, dil);
    // Decreasing Lambda-iterates from Omega_{Lambda'} down to Omega_Lambda.
    std::vector<PointSet> inner = descend(outer.back(), chain.H, dil);

    for (auto it = inner.rbegin(); it != inner.rend(); ++it) chain.sets.push_back(*it);
    chain.n0 = static_cast<int>(chain.sets.size()) - 1;

    int added = 0;
    for (auto it = outer.rbegin() + 1; it != outer.rend() && added < n_extra; ++it, ++added)
        chain.sets.push_back(*it);

    double delta = bp.delta;
    int guard = 0;
    while (added < n_extra) {
        delta = delta / nrm.theta - bp.eps;
        PointSet ball = lattice_ball(nrm, delta, dil.dim());
        if (ball.size() > chain.sets.back().size()) {
            chain.sets.push_back(std::move(ball));
            ++added;
        }
        if (++guard > 10000) throw SpecError("admissible chain growth stalled");
    }
    return chain;
}

}  // namespace refinery
