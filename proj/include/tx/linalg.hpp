#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tx/scalar.hpp"

namespace tx {

using Vec = std::vector<Scalar>;

bool is_zero(const Vec& v);
Vec zero_vec(int n);
Vec unit_vec(int n, int i);
void axpy(Vec& y, const Scalar& a, const Vec& x);  // y += a x
Vec scaled(const Vec& x, const Scalar& a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
std::string vec_str(const Vec& v);

// Sparse vector: sorted (index, value) pairs, no zero values.
struct SparseVec {
    std::vector<std::pair<int, Scalar>> e;

    bool empty() const { return e.empty(); }
    void add(int i, const Scalar& v);  // unsorted append; call normalize() after a batch
    void normalize();                  // sort, merge duplicates, drop zeros
    void axpy(const Scalar& a, const SparseVec& x);
    SparseVec scaled(const Scalar& a) const;
    Vec dense(int n) const;
    static SparseVec from_dense(const Vec& v);
    friend bool operator==(const SparseVec& a, const SparseVec& b) { return a.e == b.e; }
};

class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static Mat identity(int n);
    static Mat from_rows(const std::vector<Vec>& rows, int cols = -1);
    static Mat from_cols(const std::vector<Vec>& cols, int rows = -1);

    int rows() const { return r_; }
    int cols() const { return c_; }
    Scalar& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const Scalar& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    Vec row(int i) const;
    Vec col(int j) const;
    Mat transpose() const;
    Vec apply(const Vec& x) const;
    bool is_zero() const;

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat scaled(const Scalar& s) const;
    friend bool operator==(const Mat& a, const Mat& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_; }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

    // stack vertically / horizontally
    static Mat vstack(const Mat& top, const Mat& bottom);
    static Mat hstack(const Mat& left, const Mat& right);

private:
    int r_ = 0, c_ = 0;
    std::vector<Scalar> a_;
};

// Reduced row echelon form by Gauss-Jordan elimination. Pivot rule: the first
// nonzero entry met when scanning the remaining rows column by column. The
// reduced form is unique, so every basis read off it is canonical.
struct Echelon {
    Mat R;                    // rank rows, reduced
    std::vector<int> pivots;  // pivot column of each row
};
Echelon rref(const Mat& m);

int rank(const Mat& m);
std::vector<Vec> kernel_basis(const Mat& m);
std::vector<Vec> image_basis(const Mat& m);  // pivot columns of m itself
std::optional<Vec> solve(const Mat& a, const Vec& b);
std::optional<Mat> solve_many(const Mat& a, const Mat& b);  // a x = b column by column
std::optional<Mat> inverse(const Mat& m);
int subquotient_dim(const std::vector<Vec>& span_big, const std::vector<Vec>& span_small);

// Span of a family of vectors, kept in reduced echelon form.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(int ambient) : n_(ambient) {}
    Subspace(int ambient, const std::vector<Vec>& gens);

    int ambient() const { return n_; }
    int dim() const { return static_cast<int>(rows_.size()); }
    const std::vector<Vec>& basis() const { return rows_; }
    const std::vector<int>& pivots() const { return piv_; }

    Vec reduce(const Vec& v) const;  // v minus its component along the echelon rows
    bool contains(const Vec& v) const { return is_zero(reduce(v)); }
    bool add(const Vec& v);          // true if the span grew
    bool contains(const Subspace& o) const;
    // coordinates of v w.r.t. basis(); requires contains(v)
    Vec coords(const Vec& v) const;

private:
    int n_ = 0;
    std::vector<Vec> rows_;
    std::vector<int> piv_;
};

// Dimensions by degree, with labels for the basis vectors in each degree.
struct GradedSpace {
    std::map<int, int> dims;
    std::map<int, std::vector<std::string>> labels;

    int dim(int degree) const {
        auto it = dims.find(degree);
        return it == dims.end() ? 0 : it->second;
    }
    int total() const;
    void set(int degree, int d) {
        if (d) dims[degree] = d; else dims.erase(degree);
    }
    std::vector<int> support() const;
};

}  // namespace tx
