#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tx/complexes.hpp"

namespace tx {

// Resolution Q_length -> ... -> Q_0 -> M, with Q_i in degree -i.
struct AugmentedResolution {
    ProjComplex Q;
    Mat eps;  // dim M x dim U(Q_0)
    int length = 0;
};
// max_summands > 0 caps the rank of every term (LengthExceeded beyond it)
AugmentedResolution minimal_projective_resolution(const AlgebraPtr& A, const RightModule& M, int length,
                                                 int max_summands = -1);

// generators of the top of the submodule K of V, vertex by vertex (echelon order)
std::vector<std::pair<int, Vec>> top_generators(const RightModule& V, const Subspace& K);

// Hom(Q, N) as a cochain complex: C^k = Hom(Q_{-k}, N) realized as ⊕_a N e_a.
GradedComplex hom_into_module(const ProjComplex& Q, const RightModule& N);
// basis of N e_a (vectors in N)
Subspace module_corner(const RightModule& N, int vertex);
// matrix of f ↦ f∘u, Hom(Y, N) -> Hom(X, N) for u: X -> Y between projectives
Mat precompose_matrix(const Algebra& A, const std::vector<int>& x, const std::vector<int>& y, const ModMap& u,
                      const RightModule& N);

GradedSpace ext_oracle(const AlgebraPtr& A, const RightModule& M, const RightModule& N, int kmax);

// helpers on underlying spaces of projectives
Vec generator_vec(const Algebra& A, const std::vector<int>& summands, int s);
std::vector<Vec> split_underlying(const Algebra& A, const std::vector<int>& summands, const Vec& v);
Vec join_underlying(const Algebra& A, const std::vector<int>& summands, const std::vector<Vec>& elems);
std::vector<Vec> corner_basis(const Algebra& A, const std::vector<int>& summands, int a);  // spans U(P) e_a
// U(P) -> M determined by generator images; M -> U(P) from per-basis-vector elements of each summand
Mat map_from_generators(const Algebra& A, const std::vector<int>& summands, const RightModule& M,
                        const std::vector<Vec>& images);
Mat map_into_projective(const Algebra& A, const std::vector<int>& summands,
                        const std::vector<std::vector<Vec>>& images);

struct PeriodicResolution {
    AlgebraPtr algebra;
    RightModule M;
    ProjComplex P;  // degrees -(n-1) .. 0
    Mat alpha;      // dim M x dim U(P_0)
    Mat beta;       // dim U(P_{n-1}) x dim M
    int n = 1;

    const std::vector<int>& term(int i) const { return P.term(-i); }  // P_i
    ModMap d0() const;                                                 // βα : P_0 -> P_{n-1}
};

PeriodicResolution validate_periodic(const AlgebraPtr& A, const RightModule& M, const ProjComplex& P, const Mat& alpha,
                                     const Mat& beta, int n);
PeriodicResolution rescale(const PeriodicResolution& R, const Scalar& lambda);  // β' = λβ
// R ⊕ (e_v A --id--> e_v A) placed at P_{i+1} -> P_i
PeriodicResolution pad_split_acyclic(const PeriodicResolution& R, int vertex, int i);

struct ResolutionWindow {
    ProjComplex C;
    int L = 0, n = 1;
    static int degree(int n, int block, int j) { return -(block * n + j); }
    int block_of(int degree) const { return (-degree) / n; }
};
ResolutionWindow build_window(const PeriodicResolution& R, int L);

struct YonedaClass {
    Mat rep;
    std::vector<Mat> hom;      // basis of Hom(M, M)
    std::vector<Vec> image;    // spanning set of Im(∘β), flattened
    int quotient_dim = 0;
    bool is_zero = false;
};
Vec flatten(const Mat& m);
YonedaClass yoneda_class(const PeriodicResolution& R);
YonedaClass yoneda_product_image(const PeriodicResolution& R, const Mat& g);
// matrices h∘β for h running over a basis of Hom(P_{n-1}, M); h given by generator images
struct PrecomposeBeta {
    std::vector<std::vector<Vec>> h;  // generator images per basis element
    std::vector<Mat> hbeta;
};
PrecomposeBeta precompose_beta(const PeriodicResolution& R);

struct ChainLift {
    std::vector<ModMap> g;  // g[i]: P_i -> P'_i
    Mat gn;                 // M -> M
};
ChainLift lift_identity(const PeriodicResolution& R, const PeriodicResolution& Rp, bool reverse_pivots = false);
bool is_lift(const PeriodicResolution& R, const PeriodicResolution& Rp, const ChainLift& g, std::string* why = nullptr);

struct Homotopy {
    std::vector<ModMap> k;             // k[i]: P_i -> P'_{i+1}, i <= n-2
    std::vector<Vec> top;              // k_{n-1}: generator images in M
};
std::optional<Homotopy> chain_homotopy_between(const PeriodicResolution& R, const PeriodicResolution& Rp,
                                               const ChainLift& g, const ChainLift& h);

struct ClassComparison {
    enum Kind { Equal, ScalarMultiple, BothZero } kind = Equal;
    Scalar lambda{1};
    std::string str() const;
};
ClassComparison compare_classes(const PeriodicResolution& R, const PeriodicResolution& Rp);

struct PeriodicQuasiIso {
    std::vector<ModMap> g;
    Scalar lambda{1};
    std::map<int, Mat> cohomology_maps;  // per degree, in the echelon cohomology bases
};
PeriodicQuasiIso periodic_quasi_iso(const PeriodicResolution& R, const PeriodicResolution& Rp);

bool module_is_simple(const RightModule& M);

}  // namespace tx
