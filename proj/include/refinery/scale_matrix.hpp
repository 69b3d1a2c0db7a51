#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "refinery/lattice.hpp"

namespace refinery {

struct Mask {
    Lattice lattice;
    Dilation dil;
    DigitSet digits;
    std::map<Point, cplx, PointOrderLess> coeff;
    std::map<Point, std::string, PointOrderLess> text;  // expressions as given

    Mask() = default;
    Mask(Lattice lat, Dilation d, DigitSet D) : lattice(std::move(lat)), dil(std::move(d)), digits(std::move(D)) {}

    int dim() const { return dil.dim(); }
    void set(const Point& k, const std::string& expr);
    void set(const Point& k, cplx value);
    cplx at(const Point& k) const;
    std::vector<Point> support() const;
    cplx sum() const;
};

struct ScaleMatrix {
    PointIndex index;
    Eigen::MatrixXcd entries;
    std::optional<Point> digit_shift;

    long size() const { return entries.rows(); }
    cplx at(const Point& i, const Point& j) const;
};

// c_{Mi - j}, zero off the support.
cplx L_entry(const Mask& mask, const Point& i, const Point& j);

ScaleMatrix build_T(const Mask& mask, const PointSet& omega);
ScaleMatrix build_T_digit(const Mask& mask, const PointSet& omega, const Point& d);

std::string matrix_csv(const ScaleMatrix& T);

}  // namespace refinery
