#include "refinery/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "refinery/errors.hpp"

namespace refinery {

Point::Point(int d) : dim(d) {
    if (d < 1 || d > kMaxDim) throw SpecError("dimension must be between 1 and 4");
}

Point::Point(std::initializer_list<int64_t> coords) : dim(static_cast<int>(coords.size())) {
    if (dim < 1 || dim > kMaxDim) throw SpecError("dimension must be between 1 and 4");
    int i = 0;
    for (auto v : coords) c[i++] = v;
}

int64_t Point::norm_inf() const {
    int64_t n = 0;
    for (int i = 0; i < dim; ++i) n = std::max<int64_t>(n, c[i] < 0 ? -c[i] : c[i]);
    return n;
}

bool Point::is_zero() const {
    for (int i = 0; i < dim; ++i)
        if (c[i] != 0) return false;
    return true;
}

Eigen::VectorXd Point::to_vector() const {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = static_cast<double>(c[i]);
    return v;
}

std::vector<int64_t> Point::to_std() const { return {c.begin(), c.begin() + dim}; }

std::string Point::str() const {
    std::ostringstream os;
    if (dim == 1) {
        os << c[0];
        return os.str();
    }
    os << '(';
    for (int i = 0; i < dim; ++i) os << (i ? "," : "") << c[i];
    os << ')';
    return os.str();
}

Point Point::operator+(const Point& o) const {
    Point r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] += o.c[i];
    return r;
}

Point Point::operator-(const Point& o) const {
    Point r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] -= o.c[i];
    return r;
}

Point Point::operator-() const {
    Point r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] = -r.c[i];
    return r;
}

size_t PointHash::operator()(const Point& p) const {
    uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<uint64_t>(p.dim);
    for (int i = 0; i < p.dim; ++i) {
        h ^= static_cast<uint64_t>(p.c[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
}

bool PointOrderLess::operator()(const Point& a, const Point& b) const {
    int64_t na = a.norm_inf(), nb = b.norm_inf();
    if (na != nb) return na < nb;
    if (a.dim != b.dim) return a.dim < b.dim;
    for (int i = 0; i < a.dim; ++i)
        if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    return false;
}

std::vector<Point> order_points(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), PointOrderLess{});
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<Point> order_points(const PointSet& pts) { return {pts.begin(), pts.end()}; }

PointIndex::PointIndex(std::vector<Point> ordered) : pts_(std::move(ordered)) {
    for (size_t i = 0; i < pts_.size(); ++i) idx_.emplace(pts_[i], static_cast<long>(i));
}

long PointIndex::find(const Point& p) const {
    auto it = idx_.find(p);
    return it == idx_.end() ? -1 : it->second;
}

IntMatrix::IntMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0) {}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix I(n);
    for (int i = 0; i < n; ++i) I(i, i) = 1;
    return I;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<int64_t>>& rows) {
    int n = static_cast<int>(rows.size());
    IntMatrix M(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) throw SpecError("matrix must be square");
        for (int j = 0; j < n; ++j) M(i, j) = rows[i][j];
    }
    return M;
}

Point IntMatrix::apply(const Point& p) const {
    Point r(p.dim);
    for (int i = 0; i < n_; ++i) {
        int64_t s = 0;
        for (int j = 0; j < n_; ++j) s += (*this)(i, j) * p.c[j];
        r.c[i] = s;
    }
    return r;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    IntMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k)
            for (int j = 0; j < n_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
    return r;
}

IntMatrix IntMatrix::pow(int k) const {
    IntMatrix r = identity(n_), b = *this;
    while (k > 0) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

int64_t IntMatrix::det() const {
    // Bareiss fraction-free elimination.
    if (n_ == 0) return 1;
    std::vector<__int128> a(a_.begin(), a_.end());
    auto at = [&](int i, int j) -> __int128& { return a[i * n_ + j]; };
    int sign = 1;
    __int128 prev = 1;
    for (int k = 0; k < n_ - 1; ++k) {
        if (at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n_; ++i)
                if (at(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            for (int j = 0; j < n_; ++j) std::swap(at(k, j), at(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n_; ++i)
            for (int j = k + 1; j < n_; ++j)
                at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
        prev = at(k, k);
    }
    return static_cast<int64_t>(sign * at(n_ - 1, n_ - 1));
}

IntMatrix IntMatrix::adjugate() const {
    IntMatrix adj(n_);
    if (n_ == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            IntMatrix minor(n_ - 1);
            for (int r = 0, mr = 0; r < n_; ++r) {
                if (r == i) continue;
                for (int c = 0, mc = 0; c < n_; ++c) {
                    if (c == j) continue;
                    minor(mr, mc++) = (*this)(r, c);
                }
                ++mr;
            }
            int64_t cof = minor.det();
            adj(j, i) = ((i + j) % 2 ? -cof : cof);
        }
    return adj;
}

Eigen::MatrixXd IntMatrix::to_eigen() const {
    Eigen::MatrixXd M(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) M(i, j) = static_cast<double>((*this)(i, j));
    return M;
}

Lattice::Lattice(Eigen::MatrixXd generators) : G(std::move(generators)) {
    if (G.rows() != G.cols() || G.rows() < 1 || G.rows() > kMaxDim)
        throw SpecError("lattice generators must form a square matrix of size 1..4");
    if (std::abs(G.determinant()) < 1e-12) throw SpecError("lattice generators are singular");
}

Lattice Lattice::standard(int d) { return Lattice(Eigen::MatrixXd::Identity(d, d)); }

Eigen::VectorXd Lattice::embed(const Point& p) const { return G * p.to_vector(); }

Eigen::VectorXd Lattice::embed(const Eigen::VectorXd& coords) const { return G * coords; }

Point Lattice::locate(const Eigen::VectorXd& x, double tol) const {
    Eigen::VectorXd z = G.lu().solve(x);
    Point p(dim());
    for (int i = 0; i < dim(); ++i) {
        double r = std::round(z(i));
        if (std::abs(z(i) - r) > tol * (1.0 + std::abs(z(i))))
            throw NotALatticePoint("point has non-integer lattice coordinates");
        p.c[i] = static_cast<int64_t>(r);
    }
    return p;
}

namespace {

bool all_integral(const Eigen::MatrixXd& X) {
    for (Eigen::Index i = 0; i < X.size(); ++i)
        if (X.data()[i] != std::round(X.data()[i]) || std::abs(X.data()[i]) > 1e15) return false;
    return true;
}

IntMatrix round_matrix(const Eigen::MatrixXd& X) {
    IntMatrix M(static_cast<int>(X.rows()));
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < X.cols(); ++j) M(i, j) = static_cast<int64_t>(std::llround(X(i, j)));
    return M;
}

}  // namespace

Dilation::Dilation(const Lattice& lattice, const Eigen::MatrixXd& A) {
    int d = lattice.dim();
    if (A.rows() != d || A.cols() != d) throw InvalidDilation("dilation size does not match lattice");
    if (all_integral(A) && all_integral(lattice.G)) {
        IntMatrix Gi = round_matrix(lattice.G), Ai = round_matrix(A);
        int64_t dg = Gi.det();
        IntMatrix num = Gi.adjugate() * Ai * Gi;
        M_ = IntMatrix(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (num(i, j) % dg != 0)
                    throw InvalidDilation("A does not map the lattice into itself");
                M_(i, j) = num(i, j) / dg;
            }
    } else {
        Eigen::MatrixXd X = lattice.G.inverse() * A * lattice.G;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (std::abs(X(i, j) - std::round(X(i, j))) > 1e-9)
                    throw InvalidDilation("A does not map the lattice into itself");
        M_ = round_matrix(X);
    }
    finish();
}

Dilation::Dilation(const IntMatrix& M) : M_(M) { finish(); }

void Dilation::finish() {
    det_ = M_.det();
    if (det_ == 0) throw InvalidDilation("dilation is singular");
    adj_ = M_.adjugate();
    Md_ = M_.to_eigen();
    Minv_ = Md_.inverse();
    for (const auto& ev : eigenvalues())
        if (std::abs(ev) <= 1.0 + 1e-12)
            throw NotExpansive("dilation has an eigenvalue of modulus <= 1");
}

std::vector<cplx> Dilation::eigenvalues() const {
    Eigen::EigenSolver<Eigen::MatrixXd> es(Md_, false);
    std::vector<cplx> out;
    for (int i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

std::optional<Point> Dilation::solve(const Point& p) const {
    Point n = adj_.apply(p);
    for (int i = 0; i < p.dim; ++i) {
        if (n.c[i] % det_ != 0) return std::nullopt;
        n.c[i] /= det_;
    }
    return n;
}

DigitSet::DigitSet(const Dilation& dil, std::vector<Point> digits)
    : digits_(std::move(digits)), adj_(dil.adj()), modulus_(dil.m()) {
    if (static_cast<int64_t>(digits_.size()) != dil.m())
        throw InvalidDigitSet("digit set must have |det A| elements");
    bool has_zero = false;
    for (size_t i = 0; i < digits_.size(); ++i) {
        if (digits_[i].dim != dil.dim()) throw InvalidDigitSet("digit dimension mismatch");
        if (digits_[i].is_zero()) has_zero = true;
        if (!classes_.emplace(key(digits_[i]), static_cast<int>(i)).second)
            throw InvalidDigitSet("digit " + digits_[i].str() + " is congruent to another digit");
    }
    if (!has_zero) throw InvalidDigitSet("digit set must contain 0");
}

std::vector<int64_t> DigitSet::key(const Point& p) const {
    Point n = adj_.apply(p);
    std::vector<int64_t> k(p.dim);
    for (int i = 0; i < p.dim; ++i) {
        int64_t r = n.c[i] % modulus_;
        k[i] = r < 0 ? r + modulus_ : r;
    }
    return k;
}

int DigitSet::class_of(const Point& p) const {
    auto it = classes_.find(key(p));
    if (it == classes_.end()) throw InvalidDigitSet("no digit matches the class of " + p.str());
    return it->second;
}

Coset coset_decompose(const Point& k, const Dilation& dil, const DigitSet& D, Sign sign) {
    if (k.dim != dil.dim()) throw NotALatticePoint("dimension mismatch");
    int i = D.class_of(sign == Sign::plus ? k : -k);
    Point rest = sign == Sign::plus ? k - D[i] : k + D[i];
    auto q = dil.solve(rest);
    if (!q) throw InvalidDigitSet("digit class lookup is inconsistent");
    return {i, *q};
}

Coset coset_decompose(const Eigen::VectorXd& coords, const Dilation& dil, const DigitSet& D,
                      Sign sign) {
    Point k(static_cast<int>(coords.size()));
    for (int i = 0; i < k.dim; ++i) {
        double r = std::round(coords(i));
        if (!std::isfinite(coords(i)) || std::abs(coords(i) - r) > 1e-9)
            throw NotALatticePoint("coordinates are not integers");
        k.c[i] = static_cast<int64_t>(r);
    }
    return coset_decompose(k, dil, D, sign);
}

std::vector<int> digit_expansion(const Point& gamma, int r, const Dilation& dil,
                                 const DigitSet& D) {
    if (r < 1) throw SpecError("digit expansion depth must be positive");
    std::vector<int> digits(r);
    Point cur = gamma;
    for (int t = r - 1; t >= 0; --t) {
        Coset c = coset_decompose(cur, dil, D, Sign::plus);
        digits[t] = c.digit;
        cur = c.quotient;
    }
    if (!cur.is_zero()) throw NotInTile(gamma.str() + " has no depth-" + std::to_string(r) + " address");
    return digits;
}

Point horner(const std::vector<int>& digits, const Dilation& dil, const DigitSet& D) {
    Point g(dil.dim());
    for (int idx : digits) g = dil.apply(g) + D[idx];
    return g;
}

}  // namespace refinery
