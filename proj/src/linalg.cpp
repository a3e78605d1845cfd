#include "tx/linalg.hpp"
#include "tx/errors.hpp"

#include <algorithm>

namespace tx {

bool is_zero(const Vec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

Vec zero_vec(int n) { return Vec(static_cast<size_t>(n)); }

Vec unit_vec(int n, int i) {
    Vec v(static_cast<size_t>(n));
    v[i] = Scalar(1);
    return v;
}

void axpy(Vec& y, const Scalar& a, const Vec& x) {
    if (a.is_zero()) return;
    for (size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero()) y[i].add_mul(a, x[i]);
}

Vec scaled(const Vec& x, const Scalar& a) {
    Vec r(x.size());
    if (a.is_zero()) return r;
    for (size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero()) r[i] = x[i] * a;
    return r;
}

Vec operator+(const Vec& a, const Vec& b) {
    Vec r = a;
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    Vec r = a;
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return r;
}

std::string vec_str(const Vec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].str();
    }
    return s + ")";
}

// ---- SparseVec

void SparseVec::add(int i, const Scalar& v) {
    if (!v.is_zero()) e.emplace_back(i, v);
}

void SparseVec::normalize() {
    if (e.empty()) return;
    std::stable_sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, Scalar>> out;
    out.reserve(e.size());
    for (auto& kv : e) {
        if (!out.empty() && out.back().first == kv.first)
            out.back().second += kv.second;
        else
            out.push_back(std::move(kv));
    }
    e.clear();
    for (auto& kv : out)
        if (!kv.second.is_zero()) e.push_back(std::move(kv));
}

void SparseVec::axpy(const Scalar& a, const SparseVec& x) {
    if (a.is_zero() || x.e.empty()) return;
    std::vector<std::pair<int, Scalar>> out;
    out.reserve(e.size() + x.e.size());
    size_t i = 0, j = 0;
    while (i < e.size() || j < x.e.size()) {
        if (j == x.e.size() || (i < e.size() && e[i].first < x.e[j].first)) {
            out.push_back(std::move(e[i++]));
        } else if (i == e.size() || x.e[j].first < e[i].first) {
            out.emplace_back(x.e[j].first, a * x.e[j].second);
            ++j;
        } else {
            Scalar v = std::move(e[i].second);
            v.add_mul(a, x.e[j].second);
            if (!v.is_zero()) out.emplace_back(e[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    e = std::move(out);
}

SparseVec SparseVec::scaled(const Scalar& a) const {
    SparseVec r;
    if (a.is_zero()) return r;
    r.e.reserve(e.size());
    for (const auto& kv : e) r.e.emplace_back(kv.first, kv.second * a);
    return r;
}

Vec SparseVec::dense(int n) const {
    Vec v(static_cast<size_t>(n));
    for (const auto& kv : e) v[kv.first] = kv.second;
    return v;
}

SparseVec SparseVec::from_dense(const Vec& v) {
    SparseVec s;
    for (size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) s.e.emplace_back(static_cast<int>(i), v[i]);
    return s;
}

// ---- Mat

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows, int cols) {
    int c = cols >= 0 ? cols : (rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    Mat m(static_cast<int>(rows.size()), c);
    for (int i = 0; i < m.r_; ++i) {
        if (static_cast<int>(rows[i].size()) != c) throw ShapeError("ragged rows");
        for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Mat Mat::from_cols(const std::vector<Vec>& cols, int rows) {
    int r = rows >= 0 ? rows : (cols.empty() ? 0 : static_cast<int>(cols[0].size()));
    Mat m(r, static_cast<int>(cols.size()));
    for (int j = 0; j < m.c_; ++j) {
        if (static_cast<int>(cols[j].size()) != r) throw ShapeError("ragged columns");
        for (int i = 0; i < r; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

Vec Mat::row(int i) const { return Vec(a_.begin() + static_cast<long>(i) * c_, a_.begin() + static_cast<long>(i + 1) * c_); }

Vec Mat::col(int j) const {
    Vec v(static_cast<size_t>(r_));
    for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
}

Mat Mat::transpose() const {
    Mat t(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vec Mat::apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != c_) throw ShapeError("apply: size mismatch");
    Vec y(static_cast<size_t>(r_));
    for (int j = 0; j < c_; ++j) {
        if (x[j].is_zero()) continue;
        for (int i = 0; i < r_; ++i) {
            const Scalar& a = (*this)(i, j);
            if (!a.is_zero()) y[i].add_mul(a, x[j]);
        }
    }
    return y;
}

bool Mat::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

Mat Mat::operator*(const Mat& o) const {
    if (c_ != o.r_) throw ShapeError("matrix product: inner dimension mismatch");
    Mat m(r_, o.c_);
    for (int i = 0; i < r_; ++i)
        for (int k = 0; k < c_; ++k) {
            const Scalar& a = (*this)(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.c_; ++j) {
                const Scalar& b = o(k, j);
                if (!b.is_zero()) m(i, j).add_mul(a, b);
            }
        }
    return m;
}

Mat Mat::operator+(const Mat& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw ShapeError("matrix sum: shape mismatch");
    Mat m = *this;
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
    return m;
}

Mat Mat::operator-(const Mat& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw ShapeError("matrix difference: shape mismatch");
    Mat m = *this;
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
    return m;
}

Mat Mat::scaled(const Scalar& s) const {
    Mat m = *this;
    for (auto& x : m.a_) x *= s;
    return m;
}

Mat Mat::vstack(const Mat& top, const Mat& bottom) {
    if (top.rows() == 0) return bottom;
    if (bottom.rows() == 0) return top;
    if (top.c_ != bottom.c_) throw ShapeError("vstack: column mismatch");
    Mat m(top.r_ + bottom.r_, top.c_);
    std::copy(top.a_.begin(), top.a_.end(), m.a_.begin());
    std::copy(bottom.a_.begin(), bottom.a_.end(), m.a_.begin() + static_cast<long>(top.a_.size()));
    return m;
}

Mat Mat::hstack(const Mat& left, const Mat& right) {
    if (left.r_ != right.r_) throw ShapeError("hstack: row mismatch");
    Mat m(left.r_, left.c_ + right.c_);
    for (int i = 0; i < left.r_; ++i) {
        for (int j = 0; j < left.c_; ++j) m(i, j) = left(i, j);
        for (int j = 0; j < right.c_; ++j) m(i, left.c_ + j) = right(i, j);
    }
    return m;
}

// ---- elimination

Echelon rref(const Mat& m) {
    Mat a = m;
    const int R = a.rows(), C = a.cols();
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < C && r < R; ++c) {
        int p = -1;
        for (int i = r; i < R; ++i)
            if (!a(i, c).is_zero()) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = c; j < C; ++j) std::swap(a(p, j), a(r, j));
        Scalar inv = a(r, c).inv();
        if (!inv.is_one())
            for (int j = c; j < C; ++j)
                if (!a(r, j).is_zero()) a(r, j) *= inv;
        for (int i = 0; i < R; ++i) {
            if (i == r || a(i, c).is_zero()) continue;
            Scalar f = -a(i, c);
            for (int j = c; j < C; ++j)
                if (!a(r, j).is_zero()) a(i, j).add_mul(f, a(r, j));
        }
        piv.push_back(c);
        ++r;
    }
    Echelon e;
    e.R = Mat(r, C);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < C; ++j) e.R(i, j) = a(i, j);
    e.pivots = std::move(piv);
    return e;
}

int rank(const Mat& m) { return static_cast<int>(rref(m).pivots.size()); }

std::vector<Vec> kernel_basis(const Mat& m) {
    Echelon e = rref(m);
    const int C = m.cols();
    std::vector<bool> is_piv(static_cast<size_t>(C), false);
    for (int p : e.pivots) is_piv[p] = true;
    std::vector<Vec> out;
    for (int f = 0; f < C; ++f) {
        if (is_piv[f]) continue;
        Vec v(static_cast<size_t>(C));
        v[f] = Scalar(1);
        for (size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.R(static_cast<int>(i), f);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<Vec> image_basis(const Mat& m) {
    Echelon e = rref(m);
    std::vector<Vec> out;
    for (int p : e.pivots) out.push_back(m.col(p));
    return out;
}

std::optional<Vec> solve(const Mat& a, const Vec& b) {
    Mat bm(static_cast<int>(b.size()), 1);
    for (size_t i = 0; i < b.size(); ++i) bm(static_cast<int>(i), 0) = b[i];
    auto x = solve_many(a, bm);
    if (!x) return std::nullopt;
    return x->col(0);
}

std::optional<Mat> solve_many(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows()) throw ShapeError("solve: row mismatch");
    Echelon e = rref(Mat::hstack(a, b));
    const int C = a.cols();
    Mat x(C, b.cols());
    for (size_t i = 0; i < e.pivots.size(); ++i) {
        int p = e.pivots[i];
        if (p >= C) return std::nullopt;
        for (int j = 0; j < b.cols(); ++j) x(p, j) = e.R(static_cast<int>(i), C + j);
    }
    return x;
}

std::optional<Mat> inverse(const Mat& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    if (rank(m) != m.rows()) return std::nullopt;
    return solve_many(m, Mat::identity(m.rows()));
}

int subquotient_dim(const std::vector<Vec>& span_big, const std::vector<Vec>& span_small) {
    int n = !span_big.empty() ? static_cast<int>(span_big[0].size())
                              : (!span_small.empty() ? static_cast<int>(span_small[0].size()) : 0);
    Subspace big(n, span_big);
    for (const auto& v : span_small)
        if (!big.contains(v)) throw ContainmentViolation("vector " + vec_str(v) + " not in the larger span");
    Subspace small(n, span_small);
    return big.dim() - small.dim();
}

// ---- Subspace

Subspace::Subspace(int ambient, const std::vector<Vec>& gens) : n_(ambient) {
    if (gens.empty()) return;
    Echelon e = rref(Mat::from_rows(gens, ambient));
    for (int i = 0; i < e.R.rows(); ++i) rows_.push_back(e.R.row(i));
    piv_ = e.pivots;
}

Vec Subspace::reduce(const Vec& v) const {
    Vec r = v;
    for (size_t i = 0; i < rows_.size(); ++i) {
        const Scalar c = r[piv_[i]];
        if (!c.is_zero()) axpy(r, -c, rows_[i]);
    }
    return r;
}

bool Subspace::add(const Vec& v) {
    Vec r = reduce(v);
    int p = -1;
    for (int j = 0; j < n_; ++j)
        if (!r[j].is_zero()) {
            p = j;
            break;
        }
    if (p < 0) return false;
    r = scaled(r, r[p].inv());
    for (auto& row : rows_)
        if (!row[p].is_zero()) axpy(row, -row[p], r);
    auto pos = std::lower_bound(piv_.begin(), piv_.end(), p) - piv_.begin();
    piv_.insert(piv_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos, std::move(r));
    return true;
}

bool Subspace::contains(const Subspace& o) const {
    for (const auto& v : o.rows_)
        if (!contains(v)) return false;
    return true;
}

Vec Subspace::coords(const Vec& v) const {
    Vec c(rows_.size());
    for (size_t i = 0; i < rows_.size(); ++i) c[i] = v[piv_[i]];
    return c;
}

// ---- GradedSpace

int GradedSpace::total() const {
    int t = 0;
    for (const auto& kv : dims) t += kv.second;
    return t;
}

std::vector<int> GradedSpace::support() const {
    std::vector<int> s;
    for (const auto& kv : dims)
        if (kv.second) s.push_back(kv.first);
    return s;
}

}  // namespace tx
