#include "refinery/scale_matrix.hpp"

#include <iomanip>
#include <sstream>

#include "refinery/errors.hpp"
#include "refinery/expression.hpp"

namespace refinery {

void Mask::set(const Point& k, const std::string& expr) {
    if (k.dim != dim()) throw SpecError("mask point " + k.str() + " has the wrong dimension");
    coeff[k] = parse_expression(expr);
    text[k] = expr;
}

void Mask::set(const Point& k, cplx value) {
    if (k.dim != dim()) throw SpecError("mask point " + k.str() + " has the wrong dimension");
    coeff[k] = value;
    std::ostringstream os;
    os << std::setprecision(17) << value.real();
    if (value.imag() != 0.0) os << (value.imag() < 0 ? "-" : "+") << std::abs(value.imag()) << "*i";
    text[k] = os.str();
}

cplx Mask::at(const Point& k) const {
    auto it = coeff.find(k);
    return it == coeff.end() ? cplx(0.0) : it->second;
}

std::vector<Point> Mask::support() const {
    std::vector<Point> out;
    for (const auto& [k, v] : coeff) out.push_back(k);
    return out;
}

cplx Mask::sum() const {
    cplx s = 0.0;
    for (const auto& [k, v] : coeff) s += v;
    return s;
}

cplx ScaleMatrix::at(const Point& i, const Point& j) const {
    long a = index.find(i), b = index.find(j);
    if (a < 0 || b < 0) throw WindowTooSmall("point outside the matrix index set");
    return entries(a, b);
}

cplx L_entry(const Mask& mask, const Point& i, const Point& j) {
    return mask.at(mask.dil.apply(i) - j);
}

namespace {

ScaleMatrix assemble(const Mask& mask, const PointSet& omega, const Point& shift) {
    ScaleMatrix T;
    T.index = PointIndex(order_points(omega));
    long n = static_cast<long>(T.index.size());
    T.entries = Eigen::MatrixXcd::Zero(n, n);
    for (long a = 0; a < n; ++a) {
        Point Ai = mask.dil.apply(T.index[a]) + shift;
        for (long b = 0; b < n; ++b) T.entries(a, b) = mask.at(Ai - T.index[b]);
    }
    return T;
}

}  // namespace

ScaleMatrix build_T(const Mask& mask, const PointSet& omega) {
    if (omega.empty()) throw SpecError("empty index set");
    return assemble(mask, omega, Point(mask.dim()));
}

ScaleMatrix build_T_digit(const Mask& mask, const PointSet& omega, const Point& d) {
    if (omega.empty()) throw SpecError("empty index set");
    ScaleMatrix T = assemble(mask, omega, d);
    T.digit_shift = d;
    return T;
}

std::string matrix_csv(const ScaleMatrix& T) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "row";
    for (const auto& p : T.index.points()) os << ",\"" << p.str() << '"';
    os << '\n';
    for (long a = 0; a < T.size(); ++a) {
        os << '"' << T.index[a].str() << '"';
        for (long b = 0; b < T.size(); ++b) {
            cplx v = T.entries(a, b);
            os << ',' << v.real();
            if (v.imag() != 0.0) os << (v.imag() < 0 ? "" : "+") << v.imag() << 'i';
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace refinery
