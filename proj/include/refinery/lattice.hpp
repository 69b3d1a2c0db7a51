#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace refinery {

using cplx = std::complex<double>;

constexpr int kMaxDim = 4;

// Integer coordinate vector of a lattice point in the basis G.
struct Point {
    int dim = 0;
    std::array<int64_t, kMaxDim> c{};

    Point() = default;
    explicit Point(int d);
    Point(std::initializer_list<int64_t> coords);

    int64_t& operator[](int i) { return c[i]; }
    int64_t operator[](int i) const { return c[i]; }

    int64_t norm_inf() const;
    bool is_zero() const;
    Eigen::VectorXd to_vector() const;
    std::vector<int64_t> to_std() const;
    std::string str() const;

    bool operator==(const Point& o) const { return dim == o.dim && c == o.c; }
    bool operator!=(const Point& o) const { return !(*this == o); }
    Point operator+(const Point& o) const;
    Point operator-(const Point& o) const;
    Point operator-() const;
};

struct PointHash {
    size_t operator()(const Point& p) const;
};

// Sup-norm of the coordinates first, then lexicographic.
struct PointOrderLess {
    bool operator()(const Point& a, const Point& b) const;
};

using PointSet = std::set<Point, PointOrderLess>;

std::vector<Point> order_points(std::vector<Point> pts);
std::vector<Point> order_points(const PointSet& pts);

// Index lookup for an ordered point list.
class PointIndex {
public:
    PointIndex() = default;
    explicit PointIndex(std::vector<Point> ordered);
    const std::vector<Point>& points() const { return pts_; }
    size_t size() const { return pts_.size(); }
    const Point& operator[](size_t i) const { return pts_[i]; }
    // -1 when absent.
    long find(const Point& p) const;
    bool contains(const Point& p) const { return find(p) >= 0; }

private:
    std::vector<Point> pts_;
    std::map<Point, long, PointOrderLess> idx_;
};

class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(int n);
    static IntMatrix identity(int n);
    static IntMatrix from_rows(const std::vector<std::vector<int64_t>>& rows);

    int size() const { return n_; }
    int64_t& operator()(int i, int j) { return a_[i * n_ + j]; }
    int64_t operator()(int i, int j) const { return a_[i * n_ + j]; }

    Point apply(const Point& p) const;
    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix pow(int k) const;
    int64_t det() const;
    IntMatrix adjugate() const;
    Eigen::MatrixXd to_eigen() const;
    bool operator==(const IntMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }

private:
    int n_ = 0;
    std::vector<int64_t> a_;
};

struct Lattice {
    Eigen::MatrixXd G;

    Lattice() = default;
    explicit Lattice(Eigen::MatrixXd generators);
    static Lattice standard(int d);

    int dim() const { return static_cast<int>(G.rows()); }
    Eigen::VectorXd embed(const Point& p) const;
    Eigen::VectorXd embed(const Eigen::VectorXd& coords) const;
    // Real point of R^d to integer coordinates; throws NotALatticePoint.
    Point locate(const Eigen::VectorXd& x, double tol = 1e-9) const;
};

// Dilation carried as the integer matrix M = G^{-1} A G acting on coordinates.
class Dilation {
public:
    Dilation() = default;
    Dilation(const Lattice& lattice, const Eigen::MatrixXd& A);
    explicit Dilation(const IntMatrix& M);

    int dim() const { return M_.size(); }
    const IntMatrix& M() const { return M_; }
    const Eigen::MatrixXd& Md() const { return Md_; }
    const Eigen::MatrixXd& Minv() const { return Minv_; }
    const IntMatrix& adj() const { return adj_; }
    int64_t det() const { return det_; }
    int64_t m() const { return det_ < 0 ? -det_ : det_; }
    std::vector<cplx> eigenvalues() const;

    Point apply(const Point& p) const { return M_.apply(p); }
    // M^{-1}p when it is a lattice point.
    std::optional<Point> solve(const Point& p) const;

private:
    void finish();

    IntMatrix M_;
    IntMatrix adj_;
    int64_t det_ = 0;
    Eigen::MatrixXd Md_;
    Eigen::MatrixXd Minv_;
};

class DigitSet {
public:
    DigitSet() = default;
    DigitSet(const Dilation& dil, std::vector<Point> digits);

    size_t size() const { return digits_.size(); }
    const Point& operator[](size_t i) const { return digits_[i]; }
    const std::vector<Point>& digits() const { return digits_; }
    // Digit index congruent to p modulo M Z^d.
    int class_of(const Point& p) const;

private:
    std::vector<int64_t> key(const Point& p) const;

    std::vector<Point> digits_;
    IntMatrix adj_;
    int64_t modulus_ = 1;
    std::map<std::vector<int64_t>, int> classes_;
};

enum class Sign { plus, minus };

struct Coset {
    int digit = 0;
    Point quotient;
};

// plus: k = Mq + d_i, minus: k = Mq - d_i.
Coset coset_decompose(const Point& k, const Dilation& dil, const DigitSet& D,
                      Sign sign = Sign::plus);
Coset coset_decompose(const Eigen::VectorXd& coords, const Dilation& dil, const DigitSet& D,
                      Sign sign = Sign::plus);

// Digit indices (d_1..d_r) with gamma = d_r + M d_{r-1} + ... + M^{r-1} d_1.
std::vector<int> digit_expansion(const Point& gamma, int r, const Dilation& dil,
                                 const DigitSet& D);

Point horner(const std::vector<int>& digits, const Dilation& dil, const DigitSet& D);

}  // namespace refinery
