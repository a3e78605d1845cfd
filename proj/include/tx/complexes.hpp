#pragma once

#include <array>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tx/algebra.hpp"

namespace tx {

// Map between direct sums of e_v A. Entry (t, s) lies in e_{tgt[t]} A e_{src[s]};
// composition g∘f has entries sum_m g(t,m) * f(m,s).
struct ModMap {
    int rows = 0, cols = 0;
    std::vector<Vec> entries;

    ModMap() = default;
    ModMap(int r, int c, int dimA) : rows(r), cols(c), entries(static_cast<size_t>(r) * c, zero_vec(dimA)) {}
    Vec& at(int t, int s) { return entries[static_cast<size_t>(t) * cols + s]; }
    const Vec& at(int t, int s) const { return entries[static_cast<size_t>(t) * cols + s]; }
    bool is_zero() const;
    friend bool operator==(const ModMap& a, const ModMap& b) {
        return a.rows == b.rows && a.cols == b.cols && a.entries == b.entries;
    }
};

ModMap compose(const Algebra& A, const ModMap& g, const ModMap& f);
ModMap add(const ModMap& a, const ModMap& b, const Scalar& cb = Scalar(1));

// Underlying vector space of a projective module given by vertex labels.
struct Underlying {
    std::vector<int> offsets;  // offset of each summand
    int dim = 0;
};
Underlying underlying(const Algebra& A, const std::vector<int>& summands);
// the linear map of f between underlying spaces
Mat linear_matrix(const Algebra& A, const std::vector<int>& src, const std::vector<int>& tgt, const ModMap& f);
// module map from a linear map (generator images); throws NotModule when the result disagrees with lin
ModMap from_linear(const Algebra& A, const std::vector<int>& src, const std::vector<int>& tgt, const Mat& lin);
RightModule projective_module(const AlgebraPtr& A, const std::vector<int>& summands);

// Bounded complex of projectives with cohomological grading; d.at(k): degree k -> k+1.
struct ProjComplex {
    AlgebraPtr algebra;
    std::map<int, std::vector<int>> terms;
    std::map<int, ModMap> d;

    const std::vector<int>& term(int k) const;
    ModMap diff(int k) const;  // zero map when absent
    int lo() const { return terms.empty() ? 0 : terms.begin()->first; }
    int hi() const { return terms.empty() ? -1 : terms.rbegin()->first; }
    void normalize();  // drop empty terms and zero maps
    void check() const;  // shapes, Peirce membership, d∘d = 0; throws NotComplex
};

ProjComplex shift(const ProjComplex& c, int k);
ProjComplex brutal_truncate(const ProjComplex& c, int bound, bool keep_le);
ProjComplex direct_sum(const ProjComplex& a, const ProjComplex& b);
ProjComplex restrict_scalars(const IdempotentQuotient& q, const ProjComplex& c);
bool same_complex(const ProjComplex& a, const ProjComplex& b);

// Homogeneous map of complexes (no commutation condition): comp[p]: X^p -> Y^{p+degree}.
struct GradedMap {
    int degree = 0;
    std::map<int, ModMap> comp;
    bool is_zero() const;
};
GradedMap compose(const Algebra& A, const GradedMap& g, const GradedMap& f);
GradedMap add(const GradedMap& a, const GradedMap& b, const Scalar& cb = Scalar(1));
GradedMap differential_map(const ProjComplex& c);  // d as a degree-1 map
GradedMap identity_map(const ProjComplex& c);
GradedMap hom_delta(const Algebra& A, const ProjComplex& x, const ProjComplex& y, const GradedMap& f);
bool graded_equal(const GradedMap& a, const GradedMap& b);

ProjComplex cone(const ProjComplex& v, const ProjComplex& w, const GradedMap& f);

// Degree-i piece of Hom(X, Y) with basis of single-entry maps.
struct HomBasisElem {
    int p, t, s, k;  // source degree, target summand, source summand, Peirce basis index
};
struct HomSpace {
    const ProjComplex* x = nullptr;
    const ProjComplex* y = nullptr;
    int degree = 0;
    std::vector<HomBasisElem> basis;
    std::map<std::array<int, 3>, int> block_start;  // (p, t, s) -> first index

    int dim() const { return static_cast<int>(basis.size()); }
    Vec coords(const GradedMap& f) const;
    GradedMap element(const Vec& c) const;
    GradedMap basis_map(int i) const;
};
HomSpace hom_space(const ProjComplex& x, const ProjComplex& y, int degree);

// Finite cochain complex of vector spaces: dims per degree, d.at(k): C^k -> C^{k+1}.
struct GradedComplex {
    std::map<int, int> dims;
    std::map<int, Mat> d;
    int dim(int k) const {
        auto it = dims.find(k);
        return it == dims.end() ? 0 : it->second;
    }
    Mat diff(int k) const;
};

struct Cohomology {
    struct Piece {
        int dim = 0;
        std::vector<Vec> reps;  // cocycles in C^k
        Subspace boundaries;
        Mat sel_inv;            // left inverse on selected rows of reduced reps
        std::vector<int> sel;
        std::vector<Vec> reduced_reps;
    };
    std::map<int, Piece> pieces;
    int dim(int k) const {
        auto it = pieces.find(k);
        return it == pieces.end() ? 0 : it->second.dim;
    }
    // coordinates of a cocycle z in C^k; throws if z is not a cocycle representative combination
    Vec coords(int k, const Vec& z) const;
    GradedSpace dims() const;
};

// Representatives: kernel basis reduced against the image; with preferred cocycles
// listed first when supplied (used to put identities first).
Cohomology cohomology(const GradedComplex& c, const std::map<int, std::vector<Vec>>& preferred = {});
Cohomology cohomology(const GradedComplex& c, int lo, int hi,
                      const std::map<int, std::vector<Vec>>& preferred = {});

struct HomComplex {
    std::map<int, HomSpace> spaces;
    GradedComplex complex;
};
HomComplex hom_complex(const ProjComplex& x, const ProjComplex& y);
HomComplex hom_complex(const ProjComplex& x, const ProjComplex& y, int lo, int hi);

// Vector-space complex underlying a projective complex.
GradedComplex underlying_complex(const ProjComplex& c);

// Finite DG category over k^t: homogeneous basis elements b_i : src -> tgt, products
// b_i·b_j = b_i ∘ b_j (needs src(b_i) = tgt(b_j)), differential d.
struct DGAlg {
    int nobj = 1;
    std::vector<int> deg, src, tgt;
    std::vector<std::string> labels;
    std::vector<SparseVec> d;
    std::unordered_map<uint64_t, SparseVec> prod;
    std::vector<SparseVec> units;  // one per object

    int dim() const { return static_cast<int>(deg.size()); }
    const SparseVec* product(int i, int j) const;
    SparseVec mul(const SparseVec& u, const SparseVec& v) const;
    SparseVec diff(const SparseVec& u) const;
    void set_product(int i, int j, SparseVec v);
    // basis indices of Hom(a, b) in degree k
    std::vector<int> block(int a, int b, int k) const;
    std::vector<int> degrees() const;
    // per-hom-block cochain complex in the basis of that block
    GradedComplex block_complex(int a, int b, std::vector<int>* order = nullptr) const;
    // exact checks: d∘d = 0, Leibniz, associativity, units; returns "" or the first failure
    std::string check_axioms() const;
};

// Endomorphism DG category of a family of complexes over the same algebra.
struct EndCategory {
    std::vector<ProjComplex> objects;
    DGAlg dga;
    struct Info {
        int a, b;  // source object, target object
        int degree;
        HomBasisElem e;
    };
    std::vector<Info> info;
    std::map<std::array<int, 6>, int> index;  // (a, b, degree, p, t, s) -> first basis index of that block

    GradedMap to_map(const SparseVec& v, int a, int b, int degree) const;
    SparseVec from_map(const GradedMap& f, int a, int b) const;
};
EndCategory end_category(const std::vector<ProjComplex>& objects);

}  // namespace tx
