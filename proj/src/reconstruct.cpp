#include "tx/reconstruct.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "tx/errors.hpp"
#include "tx/fixtures.hpp"

namespace tx {

namespace {

std::string pair_str(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

std::map<int, int> nonzero_dims(const Cohomology& H, int lo, int hi) {
    std::map<int, int> out;
    for (int k = lo; k <= hi; ++k)
        if (H.dim(k)) out[k] = H.dim(k);
    return out;
}

// ---------- symbolic carriers ----------

struct Contracted {
    QuiverPresentation q;
    std::vector<int> vmap, amap;  // -1 when the vertex / arrow touches e
    std::vector<bool> in_e;
};

bool touches_e(const QuiverPresentation& c, const std::vector<bool>& in_e, const Path& p) {
    if (in_e[p.vertex]) return true;
    for (int a : p.arrows)
        if (in_e[c.arrows[a].tgt]) return true;
    return false;
}

Path remap(const Contracted& C, const Path& p) {
    Path r;
    r.vertex = C.vmap[p.vertex];
    for (int a : p.arrows) r.arrows.push_back(C.amap[a]);
    return r;
}

// paths through e lie in AeA, so they vanish in Acon
Contracted contract(const QuiverPresentation& c, const std::vector<int>& e) {
    Contracted C;
    C.in_e.assign(c.vertices, false);
    for (int v : e) {
        if (v < 0 || v >= c.vertices) throw ShapeError("idempotent vertex " + std::to_string(v) + " out of range");
        C.in_e[v] = true;
    }
    C.vmap.assign(c.vertices, -1);
    int nv = 0;
    for (int v = 0; v < c.vertices; ++v)
        if (!C.in_e[v]) C.vmap[v] = nv++;
    if (nv == 0) throw PatternViolation("e is the identity: Acon is the zero ring");
    C.q.vertices = nv;
    C.q.nilpotency = c.nilpotency;
    C.amap.assign(c.arrows.size(), -1);
    for (size_t a = 0; a < c.arrows.size(); ++a) {
        const auto& ar = c.arrows[a];
        if (C.in_e[ar.src] || C.in_e[ar.tgt]) continue;
        C.amap[a] = static_cast<int>(C.q.arrows.size());
        C.q.arrows.push_back({ar.name, C.vmap[ar.src], C.vmap[ar.tgt]});
    }
    for (const auto& rel : c.relations) {
        QuiverPresentation::Relation r;
        for (const auto& [k, p] : rel)
            if (!touches_e(c, C.in_e, p)) r.push_back({k, remap(C, p)});
        if (!r.empty()) C.q.relations.push_back(r);
    }
    return C;
}

// check every term of an entry lies in e_t A e_s
void check_entry_paths(const QuiverPresentation& c, const std::vector<QuiverPresentation::Term>& terms, int vt, int vs,
                       const std::string& where) {
    for (const auto& [k, p] : terms)
        if (c.path_source(p) != vt || c.path_target(p) != vs)
            throw ContainmentViolation(where + ": path " + c.path_name(p) + " is not in e" + std::to_string(vt) + " A e" +
                                       std::to_string(vs));
}

ProjComplex symbolic_restrict(const QuiverPresentation& c, const Contracted& C, const AlgebraPtr& Acon,
                              const SymbolicComplex& Q) {
    ProjComplex P;
    P.algebra = Acon;
    std::map<int, std::vector<int>> kept;
    for (const auto& [k, t] : Q.terms) {
        for (size_t i = 0; i < t.size(); ++i) {
            if (t[i] < 0 || t[i] >= c.vertices) throw ShapeError("summand vertex out of range");
            if (C.vmap[t[i]] < 0) continue;
            P.terms[k].push_back(C.vmap[t[i]]);
            kept[k].push_back(static_cast<int>(i));
        }
    }
    for (const auto& [k, rows] : Q.d) {
        auto ts = Q.terms.find(k + 1), ss = Q.terms.find(k);
        if (ts == Q.terms.end() || ss == Q.terms.end()) throw ShapeError("differential out of degree " + std::to_string(k) +
                                                                         " has no source or target term");
        if (rows.size() != ts->second.size()) throw ShapeError("differential row count mismatch");
        const auto& ki = kept[k];
        const auto& kt = kept[k + 1];
        ModMap m(static_cast<int>(kt.size()), static_cast<int>(ki.size()), Acon->dim());
        for (size_t t = 0; t < rows.size(); ++t) {
            if (rows[t].size() != ss->second.size()) throw ShapeError("differential column count mismatch");
            for (size_t s = 0; s < rows[t].size(); ++s) {
                auto terms = c.parse_expression(rows[t][s]);
                check_entry_paths(c, terms, ts->second[t], ss->second[s], "degree " + std::to_string(k));
                auto it = std::find(kt.begin(), kt.end(), static_cast<int>(t));
                auto is = std::find(ki.begin(), ki.end(), static_cast<int>(s));
                if (it == kt.end() || is == ki.end()) continue;
                Vec v = zero_vec(Acon->dim());
                for (const auto& [coef, p] : terms)
                    if (!touches_e(c, C.in_e, p)) axpy(v, coef, Acon->path_element(remap(C, p)));
                m.at(static_cast<int>(it - kt.begin()), static_cast<int>(is - ki.begin())) = v;
            }
        }
        P.d[k] = m;
    }
    P.normalize();
    return P;
}

// Hom_A(Q, S_v): one dimension per summand at v; f ∘ d reads the coefficient of e_v
std::map<int, int> symbolic_ext(const QuiverPresentation& c, const SymbolicComplex& Q, int v) {
    GradedComplex G;
    std::map<int, std::vector<int>> at;  // degree of Hom (= -degree of Q) -> summand indices at v
    for (const auto& [k, t] : Q.terms)
        for (size_t i = 0; i < t.size(); ++i)
            if (t[i] == v) at[-k].push_back(static_cast<int>(i));
    for (const auto& [h, idx] : at) G.dims[h] = static_cast<int>(idx.size());
    for (const auto& [k, rows] : Q.d) {
        // d : Q^k -> Q^{k+1} induces Hom^{-k-1} -> Hom^{-k}
        int h = -k - 1;
        if (!at.count(h) || !at.count(-k)) continue;
        const auto& src = at[h];
        const auto& dst = at[-k];
        Mat m(static_cast<int>(dst.size()), static_cast<int>(src.size()));
        for (size_t a = 0; a < dst.size(); ++a)
            for (size_t b = 0; b < src.size(); ++b)
                for (const auto& [coef, p] : c.parse_expression(rows[src[b]][dst[a]]))
                    if (p.arrows.empty()) m(static_cast<int>(a), static_cast<int>(b)) += coef;
        G.d[h] = m;
    }
    if (G.dims.empty()) return {};
    int lo = G.dims.begin()->first, hi = G.dims.rbegin()->first;
    return nonzero_dims(cohomology(G, lo, hi), lo, hi);
}

std::map<int, int> finite_ext(const ProjComplex& Q, const RightModule& S) {
    GradedComplex G = hom_into_module(Q, S);
    if (G.dims.empty()) return {};
    int lo = G.dims.begin()->first, hi = G.dims.rbegin()->first;
    return nonzero_dims(cohomology(G, lo, hi), lo, hi);
}

// ---------- pattern ----------

int pattern_n(const ProjComplex& P, int j) {
    GradedComplex U = underlying_complex(P);
    if (U.dims.empty()) throw PatternViolation("simple " + std::to_string(j) + ": i*Q is zero");
    int lo = U.dims.begin()->first, hi = U.dims.rbegin()->first;
    auto dims = nonzero_dims(cohomology(U, lo, hi), lo, hi);
    auto bad = [&](int k, int d) {
        throw PatternViolation("simple " + std::to_string(j) + ", k = " + std::to_string(-k) + ": dim H^" +
                               std::to_string(k) + "(P) = " + std::to_string(d));
    };
    auto get = [&](int k) {
        auto it = dims.find(k);
        return it == dims.end() ? 0 : it->second;
    };
    if (get(0) != 1) bad(0, get(0));
    if (dims.size() == 1)
        throw PatternViolation("simple " + std::to_string(j) + ": cohomology only in degree 0 (n = 1 is excluded)");
    if (dims.size() > 2)
        for (const auto& [k, d] : dims)
            if (k != 0 && k != dims.begin()->first) bad(k, d);
    int bottom = dims.begin()->first;
    if (dims.at(bottom) != 1) bad(bottom, dims.at(bottom));
    int n = 1 - bottom;
    if (hi > 0 || lo < -(n - 1))
        throw PatternViolation("simple " + std::to_string(j) + ": terms outside degrees -(n-1)..0 with n = " +
                               std::to_string(n));
    return n;
}

PeriodicResolution periodic_from_pattern(const AlgebraPtr& Acon, const RightModule& S, const ProjComplex& P, int n,
                                         int j) {
    const Algebra& A = *Acon;
    const auto& p0 = P.term(0);
    const auto& p1 = P.term(-1);
    const auto& pn = P.term(-(n - 1));
    const auto& pn1 = P.term(-(n - 2));
    int u0 = underlying(A, p0).dim, un = underlying(A, pn).dim;
    // α: the functional on U(P_0) killing the image of d
    Mat d1 = linear_matrix(A, p1, p0, P.diff(-1));
    auto left = kernel_basis(d1.transpose());
    if (left.size() != 1) throw PatternViolation("simple " + std::to_string(j) + ": cokernel of d_1 is not a line");
    Vec a = left[0];
    for (const auto& x : a)
        if (!x.is_zero()) {
            a = scaled(a, Scalar(1) / x);
            break;
        }
    Mat alpha(1, u0);
    for (int i = 0; i < u0; ++i) alpha(0, i) = a[i];
    // β(1): echelon kernel vector of the leftmost differential
    Mat dn = linear_matrix(A, pn, pn1, P.diff(-(n - 1)));
    auto ker = kernel_basis(dn);
    if (ker.size() != 1) throw PatternViolation("simple " + std::to_string(j) + ": kernel of d_{n-1} is not a line");
    Mat beta(un, 1);
    for (int i = 0; i < un; ++i) beta(i, 0) = ker[0][i];
    try {
        return validate_periodic(Acon, S, P, alpha, beta, n);
    } catch (const Error& e) {
        throw PatternViolation("simple " + std::to_string(j) + ": " + e.what());
    }
}

ProjComplex finite_resolution(const AlgebraPtr& A, const RightModule& S, int maxlen, int j, int max_summands = -1) {
    AugmentedResolution r = minimal_projective_resolution(A, S, maxlen + 1, max_summands);
    if (r.Q.lo() < -maxlen)
        throw PatternViolation("simple " + std::to_string(j) + ": minimal resolution longer than " +
                               std::to_string(maxlen));
    return r.Q;
}

// ---------- i* on hom blocks ----------

struct Restrictor {
    const IdempotentQuotient* q;
    std::vector<std::map<int, std::vector<int>>> kept;  // per object, per degree: surviving summands

    explicit Restrictor(const IdempotentQuotient& qq, const std::vector<ProjComplex>& Q) : q(&qq) {
        for (const auto& c : Q) {
            std::map<int, std::vector<int>> k;
            for (const auto& [deg, t] : c.terms)
                for (size_t i = 0; i < t.size(); ++i)
                    if (qq.vertex_map[t[i]] >= 0) k[deg].push_back(static_cast<int>(i));
            kept.push_back(k);
        }
    }

    GradedMap apply(const GradedMap& f, int a, int b) const {
        GradedMap g;
        g.degree = f.degree;
        for (const auto& [p, m] : f.comp) {
            auto si = kept[a].find(p);
            auto ti = kept[b].find(p + f.degree);
            if (si == kept[a].end() || ti == kept[b].end()) continue;
            ModMap r(static_cast<int>(ti->second.size()), static_cast<int>(si->second.size()), q->quotient->dim());
            for (size_t t = 0; t < ti->second.size(); ++t)
                for (size_t s = 0; s < si->second.size(); ++s)
                    r.at(static_cast<int>(t), static_cast<int>(s)) = q->project(m.at(ti->second[t], si->second[s]));
            if (!r.is_zero()) g.comp[p] = r;
        }
        return g;
    }
};

struct Pipeline {
    EndCategory E;
    Transfer T;
    Strictified S;
    Positive N;
};

std::unique_ptr<Pipeline> run_pipeline(const std::vector<ProjComplex>& objects, int K) {
    auto p = std::make_unique<Pipeline>();
    p->E = end_category(objects);
    p->T = transfer_minimal_model(p->E.dga, K);
    p->S = strictify_units(p->T.H);
    p->N = unitally_positive(*p->S.A);
    return p;
}

// H' ⇝ H (strictification) composed in front, H ⇝ H' behind, when they fired
FunctorPtr adapt(FunctorPtr F, const Strictified& src, const Strictified& tgt) {
    if (src.fired) F = compose_functors(F, src.phi);
    if (tgt.fired) F = compose_functors(ainfty_inverse(*tgt.phi), F);
    return F;
}

std::vector<ProjComplex> objects_of(const ValidatedSetup& vs) {
    std::vector<ProjComplex> out;
    for (const auto& R : vs.P) out.push_back(R.P);
    return out;
}

}  // namespace

// ---------- validation ----------

ValidatedSetup validate_setup(const IdempotentSetup& s) {
    ValidatedSetup vs;
    vs.setup = s;
    if (s.simples.empty()) throw ShapeError("setup needs at least one simple");
    std::vector<ProjComplex> P;
    std::vector<int> con_vertex;
    if (s.A) {
        const AlgebraPtr& A = s.A;
        auto q = quotient_by_idempotent(A, vertex_idempotent(*A, s.e));
        if (q.degenerate) throw PatternViolation("e is the identity: Acon is the zero ring");
        vs.quotient = q;
        vs.Acon = q.quotient;
        vs.vertex_map = q.vertex_map;
        auto simples = simple_modules(A);
        if (!s.Q.empty() && s.Q.size() != s.simples.size()) throw ShapeError("one resolution per simple expected");
        for (size_t j = 0; j < s.simples.size(); ++j) {
            int v = s.simples[j];
            if (v < 0 || v >= A->num_vertices()) throw ShapeError("simple vertex out of range");
            ProjComplex Q = s.Q.empty() ? finite_resolution(A, simples[v], s.max_length, static_cast<int>(j)) : s.Q[j];
            Q.check();
            // exact onto S_j: one-dimensional cohomology in degree 0 with top S_j
            GradedComplex U = underlying_complex(Q);
            int lo = U.dims.empty() ? 0 : U.dims.begin()->first, hi = U.dims.empty() ? 0 : U.dims.rbegin()->first;
            auto h = nonzero_dims(cohomology(U, lo, hi), lo, hi);
            if (h != std::map<int, int>{{0, 1}} || finite_ext(Q, simples[v]).count(0) == 0)
                throw PatternViolation("simple " + std::to_string(j) + ": Q is not a resolution of S_" +
                                       std::to_string(v));
            vs.Q.push_back(Q);
            P.push_back(restrict_scalars(q, Q));
            con_vertex.push_back(q.vertex_map[v]);
        }
        for (size_t i = 0; i < s.simples.size(); ++i)
            for (size_t j = 0; j < s.simples.size(); ++j) {
                auto d = finite_ext(vs.Q[i], simples[s.simples[j]]);
                if (!d.empty()) vs.ext_A[{static_cast<int>(i), static_cast<int>(j)}] = d;
            }
    } else {
        if (!s.carrier) throw ShapeError("setup needs an algebra or a quiver carrier");
        if (s.Qsym.size() != s.simples.size()) throw ShapeError("one symbolic resolution per simple expected");
        const QuiverPresentation& c = *s.carrier;
        Contracted C = contract(c, s.e);
        vs.Acon = std::make_shared<const Algebra>(Algebra::from_quiver(C.q));
        vs.vertex_map = C.vmap;
        for (size_t j = 0; j < s.simples.size(); ++j) {
            int v = s.simples[j];
            if (v < 0 || v >= c.vertices) throw ShapeError("simple vertex out of range");
            // after Hom(−, S): the top of Q^j is S_j and nothing else among the listed simples
            for (size_t i = 0; i < s.simples.size(); ++i) {
                auto d = symbolic_ext(c, s.Qsym[j], s.simples[i]);
                int h0 = d.count(0) ? d.at(0) : 0;
                if (h0 != (i == j ? 1 : 0))
                    throw PatternViolation("simple " + std::to_string(j) + ": Hom(Q, S_" + std::to_string(s.simples[i]) +
                                           ") has H^0 of dim " + std::to_string(h0));
                if (!d.empty()) vs.ext_A[{static_cast<int>(j), static_cast<int>(i)}] = d;
            }
            ProjComplex Pj = symbolic_restrict(c, C, vs.Acon, s.Qsym[j]);
            P.push_back(Pj);
            con_vertex.push_back(C.vmap[v]);
        }
    }
    auto con_simples = simple_modules(vs.Acon);
    for (size_t j = 0; j < P.size(); ++j) {
        if (con_vertex[j] < 0)
            throw PatternViolation("simple " + std::to_string(j) + " sits at a vertex of e, so i*S = 0");
        try {
            P[j].check();
        } catch (const NotComplex& e) {
            throw PatternViolation("simple " + std::to_string(j) + ": i*Q is not a complex (" + e.what() + ")");
        }
        int n = pattern_n(P[j], static_cast<int>(j));
        if (vs.n && n != vs.n)
            throw PatternViolation("simple " + std::to_string(j) + ": period " + std::to_string(n) + " differs from " +
                                   std::to_string(vs.n));
        vs.n = n;
    }
    for (size_t j = 0; j < P.size(); ++j)
        vs.P.push_back(periodic_from_pattern(vs.Acon, con_simples[con_vertex[j]], P[j], vs.n, static_cast<int>(j)));
    return vs;
}

// ---------- predictions and N ----------

PredictedDims predicted_dims(const ValidatedSetup& vs) {
    PredictedDims out;
    int n = vs.n, t = vs.t();
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
            GradedSpace ext = ext_oracle(vs.Acon, vs.P[i].M, vs.P[j].M, n - 1);
            std::vector<int> e;
            std::map<int, int> ed;
            for (int m = 0; m < n; ++m) {
                e.push_back(ext.dim(m));
                if (ext.dim(m)) ed[m] = ext.dim(m);
            }
            int r = rank_precompose_d0(vs.P[i], vs.P[j].M);
            auto H = predicted_table(n, e, r, -(n - 1), 2 * n - 1);
            std::map<int, int> N;
            if (i == j) N[0] = 1;
            for (const auto& [k, d] : H)
                if (k >= 1) N[k] = d;
            if (!ed.empty()) out.ext_con[{i, j}] = ed;
            out.im_d0[{i, j}] = r;
            if (!H.empty()) out.H_end[{i, j}] = H;
            if (!N.empty()) out.N[{i, j}] = N;
        }
    return out;
}

Reconstruction reconstruct_N(const ValidatedSetup& vs, int K) {
    auto p = run_pipeline(objects_of(vs), K);
    Reconstruction R{std::move(p->E), std::move(p->T), std::move(p->N), p->S.fired, {}};
    R.N_dims = block_dims(*R.N.N);
    auto pred = predicted_dims(vs).N;
    if (R.N_dims != pred) {
        for (const auto& [ij, d] : pred)
            if (!R.N_dims.count(ij) || R.N_dims.at(ij) != d)
                throw DimMismatch("pair " + pair_str(ij.first, ij.second) + ": N differs from the predicted table");
        throw DimMismatch("N has blocks outside the predicted table");
    }
    return R;
}

// ---------- comparison ----------

bool ComparisonReport::ok() const {
    bool phi = !phi_checked || (phi_functor.ok && phi_unital.ok && phi_linear.ok && istar_dg.ok);
    return two_routes && route_a_ok && window_ok && ext_ok && phi;
}

ComparisonReport compare_theorem(const ValidatedSetup& vs, int K) {
    ComparisonReport r;
    r.K = K;
    r.n = vs.n;
    r.t = vs.t();
    r.symbolic = vs.symbolic();
    r.L = 2;
    r.ext_A = vs.ext_A;
    r.predicted = predicted_dims(vs).N;

    auto con = run_pipeline(objects_of(vs), K);
    r.N_dims = block_dims(*con->N.N);
    r.two_routes = r.predicted == r.N_dims;

    // route (a): Hom_{Acon}(P^i, window of 𝒫^j)
    int lo = 0, hi = 2 * vs.n - 1;
    auto route = [&](int L) {
        PairDims out;
        for (int j = 0; j < r.t; ++j) {
            ResolutionWindow W = build_window(vs.P[j], L);
            for (int i = 0; i < r.t; ++i) {
                HomComplex hc = hom_complex(vs.P[i].P, W.C, lo - 1, hi + 1);
                auto d = nonzero_dims(cohomology(hc.complex, lo, hi), lo, hi);
                if (!d.empty()) out[{i, j}] = d;
            }
        }
        return out;
    };
    r.route_a = route(r.L);
    r.route_a_next = route(r.L + 1);
    r.route_a_ok = r.route_a == r.N_dims;
    r.window_ok = r.route_a == r.route_a_next;
    r.ext_ok = r.ext_A == r.N_dims;

    if (vs.symbolic()) {
        r.phi_note = "A is symbolic: End_A(Q) is not finite-dimensional, so only the degreewise routes run";
        return r;
    }
    // route (b): φ = Pfun_con ∘ i* ∘ I_A, restricted to the positive parts
    r.phi_checked = true;
    auto fa = run_pipeline(vs.Q, K);
    Restrictor res(*vs.quotient, vs.Q);
    auto istar = std::make_shared<StrictFunctor>();
    istar->source = fa->T.D;
    istar->target = con->T.D;
    istar->K = K;
    istar->obj.resize(r.t);
    std::iota(istar->obj.begin(), istar->obj.end(), 0);
    const DGAlg& DA = fa->E.dga;
    for (int b = 0; b < DA.dim(); ++b) {
        const auto& in = fa->E.info[b];
        SparseVec u;
        u.add(b, Scalar(1));
        GradedMap f = fa->E.to_map(u, in.a, in.b, in.degree);
        istar->images.push_back(con->E.from_map(res.apply(f, in.a, in.b), in.a, in.b));
    }
    r.istar_dg = functor_check(*istar, 2);
    FunctorPtr phi = compose_functors(con->T.Pfun, compose_functors(istar, fa->T.Ifun));
    phi = adapt(phi, fa->S, con->S);
    try {
        auto phiN = restrict_to_positive(*phi, fa->N, con->N);
        r.phi_functor = functor_check(*phiN);
        r.phi_unital = functor_unitality_check(*phiN);
        r.phi_linear = linear_part_invertible(*phiN);
        r.phi_note = "phi = Pfun_con . i* . I_A restricted to the positive parts";
    } catch (const Error& e) {
        r.phi_functor.fail(e.what());
        r.phi_note = e.what();
    }
    return r;
}

void enforce(const ComparisonReport& r) {
    if (!r.two_routes) throw DimMismatch("predicted table and transferred N disagree");
    if (!r.route_a_ok) throw DimMismatch("window cohomology H(Hom(P, window)) disagrees with N");
    if (!r.window_ok) throw DimMismatch("window cohomology changes between L and L+1");
    if (!r.ext_ok) throw DimMismatch("H(Hom_A(Q, S)) disagrees with N");
    if (r.phi_checked) {
        for (const CheckReport* c : {&r.istar_dg, &r.phi_functor, &r.phi_unital, &r.phi_linear})
            if (!c->ok) throw PhiNotIso(c->failure);
    }
}

// ---------- fixed setups ----------

IdempotentSetup setup_pagoda(int m) {
    if (m < 2) throw ShapeError("pagoda width must be at least 2");
    IdempotentSetup s;
    s.name = "PAGODA_CON" + std::to_string(m);
    QuiverPresentation q;
    q.vertices = 2;
    q.arrows.push_back({"x", 1, 1});
    q.arrows.push_back({"a", 1, 0});
    q.arrows.push_back({"b", 0, 1});
    q.relations.push_back(q.parse_expression("x^" + std::to_string(m) + " - a b"));
    s.carrier = q;
    s.e = {0};
    s.simples = {1};
    SymbolicComplex Q;
    for (int k = 0; k >= -3; --k) Q.terms[k] = {1};
    std::string mid = m - 1 == 1 ? "x" : "x^" + std::to_string(m - 1);
    Q.d[-1] = {{"x"}};
    Q.d[-2] = {{mid}};
    Q.d[-3] = {{"x"}};
    s.Qsym = {Q};
    return s;
}

IdempotentSetup setup_nakayama2() {
    IdempotentSetup s;
    s.name = "NAKAYAMA2";
    QuiverPresentation q;
    q.vertices = 3;
    q.arrows.push_back({"a", 1, 2});
    q.arrows.push_back({"b", 2, 1});
    q.arrows.push_back({"c", 1, 0});
    q.arrows.push_back({"d", 0, 1});
    q.relations.push_back(q.parse_expression("a b - c d"));
    q.relations.push_back(q.parse_expression("b a"));
    s.carrier = q;
    s.e = {0};
    s.simples = {1, 2};
    SymbolicComplex Q1, Q2;
    Q1.terms[0] = {1};
    Q1.terms[-1] = {2};
    Q1.d[-1] = {{"a"}};
    Q2.terms[0] = {2};
    Q2.terms[-1] = {1};
    Q2.d[-1] = {{"b"}};
    s.Qsym = {Q1, Q2};
    return s;
}

IdempotentSetup setup_finite_instance() {
    IdempotentSetup s;
    s.name = "FINITE_2CYCLE";
    QuiverPresentation q;
    q.vertices = 2;
    q.arrows.push_back({"a", 1, 0});
    q.arrows.push_back({"b", 0, 1});
    q.relations.push_back(q.parse_expression("a b"));
    s.A = std::make_shared<const Algebra>(Algebra::from_quiver(q));
    s.e = {0};
    s.simples = {1};
    return s;
}

// ---------- search ----------

namespace {

using ArrowList = std::vector<std::pair<int, int>>;

bool connected(int nv, const ArrowList& arrows) {
    std::vector<int> comp(nv);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (auto [s, t] : arrows) comp[find(s)] = find(t);
    for (int v = 0; v < nv; ++v)
        if (find(v) != find(0)) return false;
    return true;
}

bool canonical(int nv, const ArrowList& arrows) {
    std::vector<int> perm(nv);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        ArrowList m;
        for (auto [s, t] : arrows) m.push_back({perm[s], perm[t]});
        std::sort(m.begin(), m.end());
        if (m < arrows) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
}

// paths of length < bound not containing the arrow pair (x, y)
int count_paths(int nv, const ArrowList& arrows, int x, int y, int bound) {
    int total = 0;
    std::function<void(int, int, int)> walk = [&](int v, int last, int len) {
        ++total;
        if (len + 1 >= bound) return;
        for (int a = 0; a < static_cast<int>(arrows.size()); ++a)
            if (arrows[a].first == v && !(last == x && a == y)) walk(arrows[a].second, a, len + 1);
    };
    for (int v = 0; v < nv; ++v) walk(v, -1, 0);
    return total;
}

struct Candidate {
    int nv;
    ArrowList arrows;
    int rel_first = -1, rel_second = -1;  // zero relation "first second"
    int nilpotency;
};

std::vector<Candidate> enumerate_candidates(const SearchBounds& b) {
    std::vector<Candidate> out;
    for (int nv = 1; nv <= b.vertices; ++nv) {
        std::vector<std::pair<int, int>> slots;
        for (int s = 0; s < nv; ++s)
            for (int t = 0; t < nv; ++t) slots.push_back({s, t});
        for (int na = 0; na <= b.arrows; ++na) {
            // multisets of size na from slots, in lexicographic order
            std::vector<int> idx(na, 0);
            std::function<void(int, int)> rec = [&](int pos, int start) {
                if (pos == na) {
                    ArrowList arrows;
                    for (int i : idx) arrows.push_back(slots[i]);
                    if (!connected(nv, arrows) || !canonical(nv, arrows)) return;
                    std::vector<std::pair<int, int>> rels{{-1, -1}};
                    if (b.max_relations >= 1)
                        for (int x = 0; x < na; ++x)
                            for (int y = 0; y < na; ++y)
                                if (arrows[x].second == arrows[y].first) rels.push_back({x, y});
                    // monomial algebras: dim = paths of length < r avoiding the zero pair, so bounds
                    // or relations that change nothing repeat an earlier candidate
                    int free_prev = -1;
                    for (int r = 2; r <= b.nilpotency; ++r) {
                        int free_dim = count_paths(nv, arrows, -1, -1, r);
                        if (free_dim == free_prev) break;
                        free_prev = free_dim;
                        out.push_back({nv, arrows, -1, -1, r});
                    }
                    for (size_t k = 1; k < rels.size(); ++k) {
                        auto [x, y] = rels[k];
                        int prev = -1;
                        for (int r = 3; r <= b.nilpotency; ++r) {
                            int d = count_paths(nv, arrows, x, y, r);
                            if (d == prev || d == count_paths(nv, arrows, -1, -1, r)) break;
                            prev = d;
                            out.push_back({nv, arrows, x, y, r});
                        }
                    }
                    return;
                }
                for (int i = start; i < static_cast<int>(slots.size()); ++i) {
                    idx[pos] = i;
                    rec(pos + 1, i);
                }
            };
            rec(0, 0);
        }
    }
    return out;
}

const char* arrow_name(int i) {
    static const char* names[] = {"a", "b", "c", "d", "f", "g", "h", "k"};
    return names[i];
}

std::string describe(const Candidate& c) {
    std::ostringstream os;
    os << "vertices=" << c.nv << " arrows=[";
    for (size_t i = 0; i < c.arrows.size(); ++i)
        os << (i ? "," : "") << arrow_name(static_cast<int>(i)) << ":" << c.arrows[i].first << "->" << c.arrows[i].second;
    os << "]";
    if (c.rel_first >= 0) os << " zero=" << arrow_name(c.rel_first) << " " << arrow_name(c.rel_second);
    os << " nilpotency=" << c.nilpotency;
    return os.str();
}

struct CandidateResult {
    bool algebra = false;
    std::vector<SearchHit> hits;
};

CandidateResult examine(const Candidate& c, const SearchBounds& b) {
    CandidateResult out;
    QuiverPresentation q;
    q.vertices = c.nv;
    for (size_t i = 0; i < c.arrows.size(); ++i) q.arrows.push_back({arrow_name(static_cast<int>(i)), c.arrows[i].first, c.arrows[i].second});
    if (c.rel_first >= 0) {
        QuiverPresentation::Relation rel;
        rel.push_back({Scalar(1), Path{c.arrows[c.rel_first].first, {c.rel_first, c.rel_second}}});
        q.relations.push_back(rel);
    }
    q.nilpotency = c.nilpotency;
    AlgebraPtr A;
    try {
        A = std::make_shared<const Algebra>(Algebra::from_quiver(q));
    } catch (const Error&) {
        return out;
    }
    out.algebra = true;
    auto simples = simple_modules(A);
    std::vector<std::optional<ProjComplex>> Q(c.nv);
    for (int v = 0; v < c.nv; ++v) {
        try {
            Q[v] = finite_resolution(A, simples[v], b.max_length, v, b.max_summands);
        } catch (const Error&) {
        }
    }
    for (int mask = 0; mask < (1 << c.nv) - 1; ++mask) {
        std::vector<int> e;
        for (int v = 0; v < c.nv; ++v)
            if (mask >> v & 1) e.push_back(v);
        for (int v = 0; v < c.nv; ++v) {
            if (mask >> v & 1 || !Q[v]) continue;
            IdempotentSetup s;
            s.A = A;
            s.e = e;
            s.simples = {v};
            s.Q = {*Q[v]};
            s.max_length = b.max_length;
            try {
                ValidatedSetup vs = validate_setup(s);
                if (std::find(b.n_set.begin(), b.n_set.end(), vs.n) == b.n_set.end()) continue;
                std::ostringstream os;
                os << describe(c) << " e={";
                for (size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
                os << "} simple=" << v << " n=" << vs.n;
                s.name = os.str();
                out.hits.push_back({os.str(), s, vs.n});
            } catch (const Error&) {
            }
        }
    }
    return out;
}

}  // namespace

SearchResult instance_search(const SearchBounds& b) {
    SearchResult res;
    auto cands = enumerate_candidates(b);
    int threads = std::max(1, b.threads);
    size_t batch = static_cast<size_t>(threads) * 8;
    res.exhausted = true;
    for (size_t start = 0; start < cands.size(); start += batch) {
        size_t end = std::min(cands.size(), start + batch);
        std::vector<CandidateResult> out(end - start);
        if (threads == 1) {
            for (size_t i = start; i < end; ++i) out[i - start] = examine(cands[i], b);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t)
                pool.emplace_back([&, t] {
                    for (size_t i = start + t; i < end; i += threads) out[i - start] = examine(cands[i], b);
                });
            for (auto& th : pool) th.join();
        }
        // merge in enumeration order; the stopping point does not depend on the thread count
        for (size_t i = 0; i < out.size(); ++i) {
            ++res.candidates;
            if (out[i].algebra) ++res.algebras;
            for (auto& h : out[i].hits) {
                if (b.max_hits >= 0 && static_cast<int>(res.hits.size()) >= b.max_hits) break;
                res.hits.push_back(std::move(h));
            }
            if (b.max_hits >= 0 && static_cast<int>(res.hits.size()) >= b.max_hits) {
                res.exhausted = start + i + 1 == cands.size();
                return res;
            }
        }
    }
    return res;
}

// ---------- padding zigzag ----------

ZigzagReport padding_invariance(const PeriodicResolution& R, const PeriodicResolution& Rpad, int K) {
    ZigzagReport rep;
    EndCategory EP = end_category({R.P});
    EndCategory Epad = end_category({Rpad.P});
    auto in_P = [&](int p, int s) { return s < static_cast<int>(R.P.term(p).size()); };

    // W: maps without a component from P into the acyclic summand
    const DGAlg& D = Epad.dga;
    std::vector<int> keep, where(D.dim(), -1);
    for (int i = 0; i < D.dim(); ++i) {
        const auto& in = Epad.info[i];
        if (in_P(in.e.p, in.e.s) && !in_P(in.e.p + in.degree, in.e.t)) continue;
        where[i] = static_cast<int>(keep.size());
        keep.push_back(i);
    }
    auto sub = [&](const SparseVec& v) {
        SparseVec r;
        for (const auto& [i, c] : v.e) {
            if (where[i] < 0) throw ClosureViolation("W is not closed");
            r.add(where[i], c);
        }
        r.normalize();
        return r;
    };
    DGAlg W;
    W.nobj = 1;
    for (int i : keep) {
        W.deg.push_back(D.deg[i]);
        W.src.push_back(D.src[i]);
        W.tgt.push_back(D.tgt[i]);
        W.labels.push_back(D.labels[i]);
        W.d.push_back(sub(D.d[i]));
    }
    for (size_t x = 0; x < keep.size(); ++x)
        for (size_t y = 0; y < keep.size(); ++y)
            if (const SparseVec* v = D.product(keep[x], keep[y]); v && !v->empty())
                W.set_product(static_cast<int>(x), static_cast<int>(y), sub(*v));
    W.units.push_back(sub(D.units[0]));

    auto TP = transfer_minimal_model(EP.dga, K);
    auto TW = transfer_minimal_model(W, K);
    auto Tpad = transfer_minimal_model(D, K);
    auto SP = strictify_units(TP.H);
    auto Spad = strictify_units(Tpad.H);

    auto pi = std::make_shared<StrictFunctor>();
    pi->source = TW.D;
    pi->target = TP.D;
    pi->K = K;
    pi->obj = {0};
    auto iota = std::make_shared<StrictFunctor>();
    iota->source = TW.D;
    iota->target = Tpad.D;
    iota->K = K;
    iota->obj = {0};
    for (int i : keep) {
        const auto& in = Epad.info[i];
        SparseVec v;
        if (in_P(in.e.p, in.e.s) && in_P(in.e.p + in.degree, in.e.t))
            v.add(EP.index.at({0, 0, in.degree, in.e.p, in.e.t, in.e.s}) + in.e.k, Scalar(1));
        pi->images.push_back(v);
        SparseVec u;
        u.add(i, Scalar(1));
        iota->images.push_back(u);
    }
    rep.pi_dg = functor_check(*pi, 2);

    FunctorPtr alpha = compose_functors(TP.Pfun, compose_functors(pi, TW.Ifun));  // H_W ⇝ H_P
    FunctorPtr gamma = compose_functors(Tpad.Pfun, compose_functors(iota, TW.Ifun));  // H_W ⇝ H_pad
    rep.alpha_linear = linear_part_invertible(*alpha);
    rep.gamma_linear = linear_part_invertible(*gamma);
    if (!rep.alpha_linear.ok) return rep;
    FunctorPtr F = compose_functors(gamma, ainfty_inverse(*alpha));  // H_P ⇝ H_pad
    F = adapt(F, SP, Spad);
    Positive NP = unitally_positive(*SP.A);
    Positive Npad = unitally_positive(*Spad.A);
    rep.N_dims = block_dims(*NP.N)[{0, 0}];
    rep.Npad_dims = block_dims(*Npad.N)[{0, 0}];
    try {
        auto FN = restrict_to_positive(*F, NP, Npad);
        rep.functor = functor_check(*FN);
        rep.unital = functor_unitality_check(*FN);
        rep.linear = linear_part_invertible(*FN);
    } catch (const Error& e) {
        rep.functor.fail(e.what());
    }
    return rep;
}

// ---------- locality reduction ----------

namespace {

CheckReport check_algebra_iso(const Algebra& A, const Algebra& B, const Mat& iso) {
    CheckReport r;
    r.max_arity = 2;
    if (A.num_vertices() != 1 || B.num_vertices() != 1) r.fail("Acon is not local");
    if (iso.rows() != B.dim() || iso.cols() != A.dim() || !inverse(iso)) {
        r.fail("not a linear bijection");
        return r;
    }
    if (iso.apply(A.unit()) != B.unit()) r.fail("unit not preserved");
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j) {
            ++r.checked;
            Vec lhs = iso.apply(A.product(i, j).dense(A.dim()));
            Vec rhs = B.mul(iso.col(i), iso.col(j));
            if (lhs != rhs) r.fail("phi(b" + std::to_string(i) + " b" + std::to_string(j) + ") differs");
        }
    return r;
}

ModMap transport(const ModMap& m, const Mat& iso, int dimB) {
    ModMap out(m.rows, m.cols, dimB);
    for (int t = 0; t < m.rows; ++t)
        for (int s = 0; s < m.cols; ++s) out.at(t, s) = iso.apply(m.at(t, s));
    return out;
}

GradedMap transport(const GradedMap& f, const Mat& iso, int dimB) {
    GradedMap g;
    g.degree = f.degree;
    for (const auto& [p, m] : f.comp) g.comp[p] = transport(m, iso, dimB);
    return g;
}

}  // namespace

LocalityReport locality_reduction(const ValidatedSetup& a, const ValidatedSetup& b, const Mat& iso, int K) {
    LocalityReport rep;
    if (a.t() != 1 || b.t() != 1) throw ShapeError("locality reduction needs t = 1 on both sides");
    const Algebra& A = *a.Acon;
    const Algebra& B = *b.Acon;
    rep.iso = check_algebra_iso(A, B, iso);
    if (!rep.iso.ok) return rep;
    const PeriodicResolution& RA = a.P[0];
    const PeriodicResolution& RB = b.P[0];
    if (RA.n != RB.n) {
        rep.chain_iso.fail("periods differ");
        return rep;
    }

    // P_A over Bcon
    ProjComplex PAt;
    PAt.algebra = b.Acon;
    PAt.terms = RA.P.terms;
    for (const auto& [k, m] : RA.P.d) PAt.d[k] = transport(m, iso, B.dim());
    PAt.check();
    PeriodicResolution RAt = periodic_from_pattern(b.Acon, RB.M, PAt, RA.n, 0);

    ChainLift L = lift_identity(RAt, RB);
    GradedMap g, ginv;
    g.degree = ginv.degree = 0;
    for (int i = 0; i < RA.n; ++i) {
        const auto& src = RAt.term(i);
        const auto& tgt = RB.term(i);
        if (src.empty() && tgt.empty()) continue;
        ++rep.chain_iso.checked;
        Mat lin = linear_matrix(B, src, tgt, L.g[i]);
        auto inv = inverse(lin);
        if (!inv) {
            rep.chain_iso.fail("g_" + std::to_string(i) + " is not invertible");
            continue;
        }
        g.comp[-i] = L.g[i];
        ginv.comp[-i] = from_linear(B, tgt, src, *inv);
    }
    if (!rep.chain_iso.ok) return rep;

    EndCategory EA = end_category({RA.P});
    EndCategory EB = end_category({RB.P});
    auto TA = transfer_minimal_model(EA.dga, K);
    auto TB = transfer_minimal_model(EB.dga, K);
    auto conj = std::make_shared<StrictFunctor>();
    conj->source = TA.D;
    conj->target = TB.D;
    conj->K = K;
    conj->obj = {0};
    for (int i = 0; i < EA.dga.dim(); ++i) {
        SparseVec e;
        e.add(i, Scalar(1));
        GradedMap f = transport(EA.to_map(e, 0, 0, EA.dga.deg[i]), iso, B.dim());
        GradedMap c = compose(B, g, compose(B, f, ginv));
        conj->images.push_back(EB.from_map(c, 0, 0));
    }
    rep.conj_dg = functor_check(*conj, 2);

    auto SA = strictify_units(TA.H);
    auto SB = strictify_units(TB.H);
    FunctorPtr F = compose_functors(TB.Pfun, compose_functors(conj, TA.Ifun));  // H_A ⇝ H_B
    F = adapt(F, SA, SB);
    Positive NA = unitally_positive(*SA.A);
    Positive NB = unitally_positive(*SB.A);
    rep.NA_dims = block_dims(*NA.N)[{0, 0}];
    rep.NB_dims = block_dims(*NB.N)[{0, 0}];
    try {
        auto FN = restrict_to_positive(*F, NA, NB);
        rep.functor = functor_check(*FN);
        rep.unital = functor_unitality_check(*FN);
        rep.linear = linear_part_invertible(*FN);
    } catch (const Error& e) {
        rep.functor.fail(e.what());
    }
    return rep;
}

}  // namespace tx
