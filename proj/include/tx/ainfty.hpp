#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tx/complexes.hpp"

namespace tx {

using Tuple = std::vector<int>;

// A∞-category on a finite homogeneous basis. Inputs of m_k are written in
// composition order: m_k(a_1, ..., a_k) needs src(a_j) = tgt(a_{j+1}).
// Products are stored in the unshifted form m_k (degree 2 − k).
struct AInfCat {
    int nobj = 1;
    std::vector<int> deg, src, tgt;
    std::vector<std::string> labels;
    std::vector<SparseVec> units;  // one per object
    int K = 2;
    std::vector<std::map<Tuple, SparseVec>> m;  // m[k], k = 1..K (m[0] unused)

    int dim() const { return static_cast<int>(deg.size()); }
    bool composable(const Tuple& t) const;
    const SparseVec* mk(const Tuple& t) const;
    bool is_minimal() const { return m.size() < 2 || m[1].empty(); }
    bool has(int s, int t, int d) const;  // some basis element in Hom(s -> t) of degree d
    std::vector<int> unit_indices() const;  // basis indices of units; -1 when a unit is not a basis vector
    void index();  // rebuild the block presence table
    std::set<std::array<int, 3>> present;
};

AInfCat from_dga(const DGAlg& D, int K);
// b_k = bar_sign * m_k, bar_sign = (−1)^{k(k−1)/2 + sum_j (k−j)(|a_j|−1)}
int bar_sign(const AInfCat& A, const Tuple& t);
SparseVec apply_m(const AInfCat& A, int k, const std::vector<SparseVec>& args);
SparseVec apply_b(const AInfCat& A, int k, const std::vector<SparseVec>& args);

// visit composable basis tuples of arity k whose output lands in an existing block
// of degree sum(|a|) + shift; the visitor returns false to stop
void for_each_tuple(const AInfCat& A, int k, int shift, const AInfCat& target, const std::vector<int>& obj,
                    const std::function<bool(const Tuple&)>& visit);

struct CheckReport {
    bool ok = true;
    std::string failure;  // first failure with witness
    long long checked = 0;
    int max_arity = 0;
    void fail(const std::string& s) {
        if (ok) failure = s;
        ok = false;
    }
};

CheckReport stasheff_check(const AInfCat& A, int maxN = -1);
CheckReport strict_unitality_check(const AInfCat& A);

// ---------- functors (bar form: every component has degree 0 on shifted spaces) ----------

class AInfFunctor {
public:
    std::shared_ptr<const AInfCat> source, target;
    std::vector<int> obj;  // object map
    int K = 2;
    virtual ~AInfFunctor() = default;
    virtual SparseVec component(const Tuple& t) const = 0;
    SparseVec apply(const std::vector<SparseVec>& args) const;
};
using FunctorPtr = std::shared_ptr<const AInfFunctor>;

class TableFunctor : public AInfFunctor {
public:
    std::map<Tuple, SparseVec> table;
    SparseVec component(const Tuple& t) const override;
};

// strict DG functor: linear part only
class StrictFunctor : public AInfFunctor {
public:
    std::vector<SparseVec> images;
    SparseVec component(const Tuple& t) const override;
};

class CompositeFunctor : public AInfFunctor {
public:
    CompositeFunctor(FunctorPtr g, FunctorPtr f);  // g ∘ f
    SparseVec component(const Tuple& t) const override;

private:
    FunctorPtr g_, f_;
    mutable std::map<Tuple, SparseVec> memo_;
};

FunctorPtr identity_functor(std::shared_ptr<const AInfCat> A, int K);
FunctorPtr compose_functors(FunctorPtr g, FunctorPtr f);
// evaluate on every composable source tuple up to K (degree-pruned) and store
std::shared_ptr<TableFunctor> materialize(const AInfFunctor& F);

CheckReport functor_check(const AInfFunctor& F, int maxk = -1);
CheckReport functor_unitality_check(const AInfFunctor& F);  // source units must be basis vectors
// F_1 block matrices invertible; true with no failure
CheckReport linear_part_invertible(const AInfFunctor& F);
// Pfun∘I (or any endofunctor) equals the identity
CheckReport is_identity_functor(const AInfFunctor& F);

std::shared_ptr<TableFunctor> ainfty_inverse(const AInfFunctor& F);

// ---------- transfer ----------

struct Splitting {
    std::vector<SparseVec> p;  // per D basis: coordinates in H
    std::vector<SparseVec> h;  // per D basis: vector in D
    std::vector<SparseVec> i;  // per H basis: representative in D
};
CheckReport check_splitting(const DGAlg& D, const Splitting& S);

struct Transfer {
    std::shared_ptr<AInfCat> D;  // the DG category as an A∞-category
    std::shared_ptr<AInfCat> H;  // minimal model
    Splitting S;
    std::vector<std::map<Tuple, SparseVec>> I;  // bar components I_k : H^{⊗k} -> D
    std::map<std::array<int, 4>, int> h_index;  // (a, b, degree, rep) -> H basis index
    std::vector<std::array<int, 4>> h_key;      // inverse of h_index
    std::vector<int> d_local;                   // D basis -> index inside its (a, b, degree) block
    FunctorPtr Ifun, Pfun;
    std::map<std::pair<int, int>, Cohomology> coh;  // per hom block
};
Transfer transfer_minimal_model(const DGAlg& D, int K);
// m_2 equals the class of the composite of representatives, basis-wise
CheckReport m2_representative_check(const DGAlg& D, const Transfer& T);

// formal diffeomorphism push: returns A' with φ : A' ⇝ A an A∞-functor (φ_1 = id)
AInfCat gauge(const AInfCat& A, const std::map<Tuple, SparseVec>& phi_higher);
struct Strictified {
    std::shared_ptr<AInfCat> A;
    std::shared_ptr<TableFunctor> phi;  // A ⇝ input
    bool fired = false;
};
Strictified strictify_units(std::shared_ptr<const AInfCat> A);

struct Positive {
    std::shared_ptr<AInfCat> N;
    std::vector<int> to_parent;    // N index -> parent index
    std::map<int, int> from_parent;
};
Positive unitally_positive(const AInfCat& A);
// restrict F : A ⇝ B to N_A ⇝ N_B (outputs must lie in N_B; ClosureViolation otherwise)
std::shared_ptr<TableFunctor> restrict_to_positive(const AInfFunctor& F, const Positive& NA, const Positive& NB);

// graded dims per (src, tgt): degree -> count
std::map<std::pair<int, int>, std::map<int, int>> block_dims(const AInfCat& A);

}  // namespace tx
