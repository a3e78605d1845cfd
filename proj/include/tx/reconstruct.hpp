#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tx/ainfty.hpp"
#include "tx/resolutions.hpp"
#include "tx/trivext.hpp"

namespace tx {

// Complex over a quiver carrier that is never materialized: entries are path expressions.
struct SymbolicComplex {
    std::map<int, std::vector<int>> terms;                          // degree -> vertex labels
    std::map<int, std::vector<std::vector<std::string>>> d;         // d[k][t][s]: degree k -> k+1
};

struct IdempotentSetup {
    std::string name;
    AlgebraPtr A;                               // finite-dimensional A, or null
    std::optional<QuiverPresentation> carrier;  // symbolic A
    std::vector<int> e;                         // vertices summed into the idempotent
    std::vector<int> simples;                   // vertices of S_1 .. S_t
    std::vector<ProjComplex> Q;                 // finite A: explicit resolutions; empty = minimal ones
    std::vector<SymbolicComplex> Qsym;          // symbolic A
    int max_length = 8;                         // bound for computed resolutions
};

using PairDims = std::map<std::pair<int, int>, std::map<int, int>>;  // (i, j) -> degree -> dim, zeros dropped

struct ValidatedSetup {
    IdempotentSetup setup;
    AlgebraPtr Acon;
    std::optional<IdempotentQuotient> quotient;  // finite A only
    std::vector<int> vertex_map;                 // A vertex -> Acon vertex, -1 inside e
    std::vector<ProjComplex> Q;                  // finite A
    std::vector<PeriodicResolution> P;           // over Acon, α and β canonical
    int n = 0;
    PairDims ext_A;                              // dims of H(Hom_A(Q^i, S_j))
    bool symbolic() const { return !setup.A; }
    int t() const { return static_cast<int>(P.size()); }
};

// throws PatternViolation (and the usual shape/parse errors)
ValidatedSetup validate_setup(const IdempotentSetup& s);

struct PredictedDims {
    PairDims ext_con;  // Ext^m_{Acon}(S_i, S_j), m = 0..n−1
    std::map<std::pair<int, int>, int> im_d0;
    PairDims H_end;    // H(Hom(P^i, P^j)) from the table
    PairDims N;        // unit line on the diagonal plus positive part
};
PredictedDims predicted_dims(const ValidatedSetup& vs);

struct Reconstruction {
    EndCategory E;
    Transfer T;
    Positive N;
    bool strictified = false;
    PairDims N_dims;
};
Reconstruction reconstruct_N(const ValidatedSetup& vs, int K);  // DimMismatch against predicted_dims

struct ComparisonReport {
    int K = 0, L = 0, n = 0, t = 0;
    bool symbolic = false;
    PairDims predicted, N_dims, route_a, route_a_next, ext_A;
    bool two_routes = false;   // predicted == N
    bool route_a_ok = false;   // route (a) == N
    bool window_ok = false;    // route (a) identical at L and L+1
    bool ext_ok = false;       // H(Hom_A(Q, S)) == N
    bool phi_checked = false;
    std::string phi_note;
    CheckReport phi_functor, phi_unital, phi_linear, istar_dg;
    bool ok() const;
};
ComparisonReport compare_theorem(const ValidatedSetup& vs, int K);
void enforce(const ComparisonReport& r);  // DimMismatch / PhiNotIso

struct SearchBounds {
    int vertices = 3, arrows = 4, nilpotency = 4;
    int max_relations = 1;      // monomial length-2 zero relations per candidate
    std::vector<int> n_set{2, 3, 4};
    int max_hits = 1;
    int max_length = 6;         // resolutions must terminate within this length
    int max_summands = 6;       // and keep every term at most this rank
    int threads = 1;
};
struct SearchHit {
    std::string description;
    IdempotentSetup setup;
    int n = 0;
};
struct SearchResult {
    std::vector<SearchHit> hits;
    long long algebras = 0, candidates = 0;
    bool exhausted = false;     // false when stopped at max_hits
};
SearchResult instance_search(const SearchBounds& b);

// fixed setups
IdempotentSetup setup_pagoda(int m);      // symbolic carrier, Acon = Q[x]/(x^m)
IdempotentSetup setup_nakayama2();        // symbolic carrier, t = 2
IdempotentSetup setup_finite_instance();  // A = k(0 ⇄ 1)/(ab), e = e_0, S = S_1, n = 3

// N for P and for P ⊕ (split acyclic), compared through End(P) <- W -> End(P'),
// W the block upper-triangular part of End(P')
struct ZigzagReport {
    CheckReport pi_dg, alpha_linear, gamma_linear, functor, unital, linear;
    std::map<int, int> N_dims, Npad_dims;
    bool ok() const {
        return pi_dg.ok && alpha_linear.ok && gamma_linear.ok && functor.ok && unital.ok && linear.ok &&
               N_dims == Npad_dims;
    }
};
ZigzagReport padding_invariance(const PeriodicResolution& R, const PeriodicResolution& Rpad, int K);

// Two t = 1 setups whose local Acon are isomorphic: iso is dim(Bcon) x dim(Acon), column j the
// image of basis element j. P_A is transported to Bcon, the identity of S lifts to g : P_A' -> P_B,
// and End(P_A) -> End(P_B), f |-> g f g^-1 carries the transferred models into each other.
struct LocalityReport {
    CheckReport iso;          // iso is a unital algebra isomorphism, both sides local
    CheckReport chain_iso;    // the lift g is invertible in every degree
    CheckReport conj_dg;      // conjugation is a DG functor
    CheckReport functor, unital, linear;  // on N_A -> N_B
    std::map<int, int> NA_dims, NB_dims;
    bool ok() const {
        return iso.ok && chain_iso.ok && conj_dg.ok && functor.ok && unital.ok && linear.ok && NA_dims == NB_dims;
    }
};
LocalityReport locality_reduction(const ValidatedSetup& a, const ValidatedSetup& b, const Mat& iso, int K);

}  // namespace tx
