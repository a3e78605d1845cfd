#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tx/resolutions.hpp"

namespace tx {

// Element of End(𝒫) commuting with σ up to a twist s: x_{k,l} = s^k x_{0,l-k}.
// Only the first row (maps from 𝒫 into block 0 = P) is stored, keyed by source degree.
struct PeriodicEndo {
    int degree = 0;
    int twist = 1;
    GradedMap first;
};

// twist of σE^i (plus) or −σE^i (minus)
int commutant_twist(int n, int degree, bool minus);

// Shared context for one periodic resolution: windows, first-row hom spaces, σ, d.
class PeriodicContext {
public:
    explicit PeriodicContext(PeriodicResolution R);
    PeriodicContext(const PeriodicContext&) = delete;
    PeriodicContext& operator=(const PeriodicContext&) = delete;

    const PeriodicResolution& resolution() const { return R_; }
    const Algebra& algebra() const { return *R_.algebra; }
    const ProjComplex& P() const { return R_.P; }
    int n() const { return R_.n; }

    int block(int degree) const;       // floor(-degree / n)
    int lmax(int i) const;             // deepest block a degree-i first row reads from; -1 if none
    const ResolutionWindow& window(int L) const;
    const HomSpace& V(int i) const;    // first rows of degree i

    PeriodicEndo compose(const PeriodicEndo& x, const PeriodicEndo& a) const;
    PeriodicEndo add(const PeriodicEndo& x, const PeriodicEndo& y, const Scalar& c = Scalar(1)) const;
    PeriodicEndo scaled(const PeriodicEndo& x, const Scalar& c) const;
    PeriodicEndo zero(int degree, int twist) const;
    PeriodicEndo d() const { return d_; }
    PeriodicEndo sigma() const { return sigma_; }
    PeriodicEndo identity() const;
    PeriodicEndo delta(const PeriodicEndo& x) const;  // d∘x − (−1)^|x| x∘d
    PeriodicEndo right_tau(const PeriodicEndo& x) const;  // x∘τ; x must vanish on block 0
    bool vanishes_on_block0(const PeriodicEndo& x) const;
    bool equal(const PeriodicEndo& a, const PeriodicEndo& b) const;
    Vec coords(const PeriodicEndo& x) const { return V(x.degree).coords(x.first); }
    PeriodicEndo element(int degree, int twist, const Vec& c) const;

    // full expansion on the window 𝒫_L, and σ, τ there
    GradedMap expand(const PeriodicEndo& x, int L) const;
    GradedMap sigma_window(int L) const;
    GradedMap tau_window(int L) const;
    // drop components whose target lies in a block > maxblock
    GradedMap restrict_targets(const GradedMap& f, int maxblock) const;

private:
    PeriodicResolution R_;
    mutable std::map<int, std::unique_ptr<ResolutionWindow>> windows_;
    mutable std::map<int, std::unique_ptr<HomSpace>> spaces_;
    PeriodicEndo d_, sigma_;
};

// window rule: degree i needs L >= max(lmax(i), ceil(|i|/n) + 2)
int min_window(int n, int i);

struct SigmaTauReport {
    bool sigma_tau_id = false, tau_sigma_id_ge_n = false, delta_sigma_zero = false;
    bool ok() const { return sigma_tau_id && tau_sigma_id_ge_n && delta_sigma_zero; }
};
SigmaTauReport sigma_tau_check(const PeriodicContext& C, int L);

// Windowed solve of σx = s x σ on End(𝒫_L)^i (target blocks <= L−1).
struct CommutantSolve {
    int solution_dim = 0;    // dimension of the windowed solution space
    int first_row_rank = 0;  // rank of its projection onto first rows
    int first_row_dim = 0;   // dim V_i
};
CommutantSolve commutant_solve(const PeriodicContext& C, int L, int i, bool minus);
// basis of σE^i / −σE^i as first rows (unit vectors of V_i), certified by the windowed solve
std::vector<PeriodicEndo> commutant_basis(const PeriodicContext& C, int L, int i, bool minus);
// membership of a window map in the commutant, target blocks <= L−1
bool in_commutant(const PeriodicContext& C, const GradedMap& full, int L, bool minus);

// ---------- T ----------

struct TElem {
    int degree = 0;
    PeriodicEndo x;  // σE^degree
    PeriodicEndo y;  // −σE^{degree−n+1}
};

class TrivExt {
public:
    explicit TrivExt(std::shared_ptr<const PeriodicContext> ctx);

    const PeriodicContext& ctx() const { return *ctx_; }
    int n() const { return ctx_->n(); }
    int dim(int j) const;
    TElem basis(int j, int k) const;
    Vec coords(const TElem& t) const;
    TElem element(int j, const Vec& c) const;
    TElem zero(int j) const;
    TElem unit() const;
    TElem mul(const TElem& a, const TElem& b) const;
    TElem xi(const TElem& a) const;
    TElem add(const TElem& a, const TElem& b, const Scalar& c = Scalar(1)) const;
    bool equal(const TElem& a, const TElem& b) const;
    bool is_zero(const TElem& a) const;

    // T as a cochain complex on degrees lo..hi (differentials within the range)
    GradedComplex complex(int lo, int hi) const;
    Mat xi_matrix(int j) const;  // T^j -> T^{j+1}

private:
    std::shared_ptr<const PeriodicContext> ctx_;
};

struct AxiomReport {
    bool xi_squared = true, leibniz = true, associative = true, unit = true;
    std::string first_failure;
    long long checked = 0;
    bool ok() const { return xi_squared && leibniz && associative && unit; }
};
AxiomReport trivext_axioms(const TrivExt& T, int lo, int hi);

// ---------- End(P), graded repetition, Δ, F, G ----------

struct EndP {
    EndCategory cat;  // single object P
    const DGAlg& dga() const { return cat.dga; }
    GradedMap map(int basis_index) const;
    GradedMap map(const SparseVec& v, int degree) const { return cat.to_map(v, 0, 0, degree); }
    SparseVec vec(const GradedMap& f) const { return cat.from_map(f, 0, 0); }
};
EndP end_dga(const ProjComplex& P);

PeriodicEndo graded_repetition(const PeriodicContext& C, const GradedMap& g);
PeriodicEndo capital_delta(const PeriodicContext& C, const Algebra& A, const GradedMap& g);
// closed form on the block-1 components: (−1)^{n|g|} βα∘g − (−1)^{|g|} g∘βα
PeriodicEndo capital_delta_closed(const PeriodicContext& C, const GradedMap& g);
TElem map_G(const TrivExt& T, const GradedMap& g);
GradedMap map_F(const TrivExt& T, const TElem& t);

struct QuasiIsoReport {
    bool G_unital = true, G_multiplicative = true, G_differential = true, FG_identity = true, F_chain = true;
    bool H_inverse = true;
    std::map<int, Mat> HG, HF;  // per degree, in echelon cohomology bases
    std::string first_failure;
    bool ok() const { return G_unital && G_multiplicative && G_differential && FG_identity && F_chain && H_inverse; }
};
QuasiIsoReport quasi_iso_check(const TrivExt& T, const EndP& E, int lo, int hi);

struct TableReport {
    std::map<int, int> T_dims, End_dims, predicted;
    std::vector<int> ext;  // Ext^m(M,M), m = 0..n−1
    int im_d0 = 0;         // rank of ∘d0 : Hom(P_{n−1}, M) -> Hom(P_0, M)
    bool ok() const { return T_dims == predicted && End_dims == predicted; }
};
// predicted a_m = Ext^m (m <= n−2), a_{n−1} = Ext^{n−1} + rank(∘d0); H^k = a_k + a_{k−1+n}
std::map<int, int> predicted_table(int n, const std::vector<int>& ext, int im_d0, int lo, int hi);
int rank_precompose_d0(const PeriodicResolution& R, const RightModule& N);
TableReport cohomology_table(const TrivExt& T, const EndP& E, int lo, int hi);
// throws TableMismatch
TableReport cohomology_table_check(const TrivExt& T, const EndP& E, int lo, int hi);

}  // namespace tx
