#include "tx/complexes.hpp"
#include "tx/errors.hpp"

#include <algorithm>
#include <set>

namespace tx {

namespace {
const std::vector<int> kEmpty;

uint64_t pair_key(int i, int j) { return (static_cast<uint64_t>(static_cast<uint32_t>(i)) << 32) | static_cast<uint32_t>(j); }
}  // namespace

// ---------- module maps ----------

bool ModMap::is_zero() const {
    for (const auto& e : entries)
        if (!tx::is_zero(e)) return false;
    return true;
}

ModMap compose(const Algebra& A, const ModMap& g, const ModMap& f) {
    if (g.cols != f.rows) throw ShapeError("composing module maps of incompatible shapes");
    ModMap r(g.rows, f.cols, A.dim());
    for (int t = 0; t < g.rows; ++t)
        for (int m = 0; m < g.cols; ++m) {
            const Vec& gv = g.at(t, m);
            if (tx::is_zero(gv)) continue;
            for (int s = 0; s < f.cols; ++s) {
                const Vec& fv = f.at(m, s);
                if (tx::is_zero(fv)) continue;
                Vec p = A.mul(gv, fv);
                axpy(r.at(t, s), Scalar(1), p);
            }
        }
    return r;
}

ModMap add(const ModMap& a, const ModMap& b, const Scalar& cb) {
    if (a.rows != b.rows || a.cols != b.cols) throw ShapeError("adding module maps of different shapes");
    ModMap r = a;
    for (size_t i = 0; i < r.entries.size(); ++i) axpy(r.entries[i], cb, b.entries[i]);
    return r;
}

Underlying underlying(const Algebra& A, const std::vector<int>& summands) {
    Underlying u;
    for (int v : summands) {
        u.offsets.push_back(u.dim);
        u.dim += A.right_ideal(v).dim();
    }
    return u;
}

Mat linear_matrix(const Algebra& A, const std::vector<int>& src, const std::vector<int>& tgt, const ModMap& f) {
    Underlying us = underlying(A, src), ut = underlying(A, tgt);
    Mat M(ut.dim, us.dim);
    for (size_t s = 0; s < src.size(); ++s) {
        const Subspace& S = A.right_ideal(src[s]);
        for (int k = 0; k < S.dim(); ++k)
            for (size_t t = 0; t < tgt.size(); ++t) {
                const Vec& e = f.at(static_cast<int>(t), static_cast<int>(s));
                if (is_zero(e)) continue;
                Vec img = A.mul(e, S.basis()[k]);
                Vec c = A.right_ideal(tgt[t]).coords(img);
                for (size_t j = 0; j < c.size(); ++j) M(ut.offsets[t] + static_cast<int>(j), us.offsets[s] + k) = c[j];
            }
    }
    return M;
}

ModMap from_linear(const Algebra& A, const std::vector<int>& src, const std::vector<int>& tgt, const Mat& lin) {
    Underlying us = underlying(A, src), ut = underlying(A, tgt);
    if (lin.rows() != ut.dim || lin.cols() != us.dim) throw ShapeError("linear map has wrong shape for the summands");
    ModMap f(static_cast<int>(tgt.size()), static_cast<int>(src.size()), A.dim());
    for (size_t s = 0; s < src.size(); ++s) {
        const Subspace& S = A.right_ideal(src[s]);
        Vec gen = zero_vec(us.dim);
        Vec c = S.coords(A.vertex(src[s]));
        for (size_t k = 0; k < c.size(); ++k) gen[us.offsets[s] + static_cast<int>(k)] = c[k];
        Vec img = lin.apply(gen);
        for (size_t t = 0; t < tgt.size(); ++t) {
            const Subspace& T = A.right_ideal(tgt[t]);
            Vec e = zero_vec(A.dim());
            for (int k = 0; k < T.dim(); ++k) axpy(e, img[ut.offsets[t] + k], T.basis()[k]);
            if (!A.peirce(tgt[t], src[s]).contains(e))
                throw NotModule("generator image outside e_t A e_s; map is not A-linear");
            f.at(static_cast<int>(t), static_cast<int>(s)) = e;
        }
    }
    if (linear_matrix(A, src, tgt, f) != lin) throw NotModule("linear map is not A-linear");
    return f;
}

RightModule projective_module(const AlgebraPtr& A, const std::vector<int>& summands) {
    if (summands.empty()) return RightModule::zero(A);
    std::vector<RightModule> parts;
    for (int v : summands) parts.push_back(RightModule::regular_projective(A, v));
    return RightModule::direct_sum(parts);
}

// ---------- complexes ----------

const std::vector<int>& ProjComplex::term(int k) const {
    auto it = terms.find(k);
    return it == terms.end() ? kEmpty : it->second;
}

ModMap ProjComplex::diff(int k) const {
    auto it = d.find(k);
    if (it != d.end()) return it->second;
    return ModMap(static_cast<int>(term(k + 1).size()), static_cast<int>(term(k).size()), algebra->dim());
}

void ProjComplex::normalize() {
    for (auto it = terms.begin(); it != terms.end();)
        it = it->second.empty() ? terms.erase(it) : std::next(it);
    for (auto it = d.begin(); it != d.end();)
        it = (it->second.is_zero() || !terms.count(it->first) || !terms.count(it->first + 1)) ? d.erase(it)
                                                                                           : std::next(it);
}

void ProjComplex::check() const {
    const Algebra& A = *algebra;
    for (const auto& [k, vs] : terms)
        for (int v : vs)
            if (v < 0 || v >= A.num_vertices()) throw ShapeError("summand vertex out of range in degree " + std::to_string(k));
    for (const auto& [k, m] : d) {
        const auto& s = term(k);
        const auto& t = term(k + 1);
        if (m.cols != static_cast<int>(s.size()) || m.rows != static_cast<int>(t.size()))
            throw ShapeError("differential in degree " + std::to_string(k) + " has wrong shape");
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j) {
                if (static_cast<int>(m.at(i, j).size()) != A.dim()) throw ShapeError("entry has wrong length");
                if (!A.peirce(t[i], s[j]).contains(m.at(i, j)))
                    throw NotComplex("entry (" + std::to_string(i) + "," + std::to_string(j) + ") of d^" +
                                     std::to_string(k) + " is not in e_t A e_s");
            }
    }
    for (const auto& [k, m] : d) {
        auto it = d.find(k + 1);
        if (it == d.end()) continue;
        if (!compose(A, it->second, m).is_zero())
            throw NotComplex("d^" + std::to_string(k + 1) + " d^" + std::to_string(k) + " != 0");
    }
}

ProjComplex shift(const ProjComplex& c, int k) {
    ProjComplex r;
    r.algebra = c.algebra;
    Scalar sg = Scalar(sgn_pow(k));
    for (const auto& [j, t] : c.terms) r.terms[j - k] = t;
    for (const auto& [j, m] : c.d) {
        ModMap s = m;
        for (auto& e : s.entries) e = scaled(e, sg);
        r.d[j - k] = s;
    }
    return r;
}

ProjComplex brutal_truncate(const ProjComplex& c, int bound, bool keep_le) {
    auto keep = [&](int k) { return keep_le ? k <= bound : k >= bound; };
    ProjComplex r;
    r.algebra = c.algebra;
    for (const auto& [j, t] : c.terms)
        if (keep(j)) r.terms[j] = t;
    for (const auto& [j, m] : c.d)
        if (keep(j) && keep(j + 1)) r.d[j] = m;
    return r;
}

ProjComplex direct_sum(const ProjComplex& a, const ProjComplex& b) {
    ProjComplex r;
    r.algebra = a.algebra;
    int dimA = a.algebra->dim();
    std::set<int> degs;
    for (const auto& [k, t] : a.terms) degs.insert(k);
    for (const auto& [k, t] : b.terms) degs.insert(k);
    for (int k : degs) {
        auto t = a.term(k);
        t.insert(t.end(), b.term(k).begin(), b.term(k).end());
        r.terms[k] = t;
    }
    for (int k : degs) {
        if (!degs.count(k + 1)) continue;
        ModMap da = a.diff(k), db = b.diff(k);
        ModMap m(da.rows + db.rows, da.cols + db.cols, dimA);
        for (int i = 0; i < da.rows; ++i)
            for (int j = 0; j < da.cols; ++j) m.at(i, j) = da.at(i, j);
        for (int i = 0; i < db.rows; ++i)
            for (int j = 0; j < db.cols; ++j) m.at(da.rows + i, da.cols + j) = db.at(i, j);
        if (!m.is_zero()) r.d[k] = m;
    }
    return r;
}

ProjComplex restrict_scalars(const IdempotentQuotient& q, const ProjComplex& c) {
    ProjComplex r;
    r.algebra = q.quotient;
    std::map<int, std::vector<int>> kept;  // indices of surviving summands
    for (const auto& [k, t] : c.terms) {
        std::vector<int> vs, idx;
        for (size_t i = 0; i < t.size(); ++i)
            if (q.vertex_map[t[i]] >= 0) {
                vs.push_back(q.vertex_map[t[i]]);
                idx.push_back(static_cast<int>(i));
            }
        r.terms[k] = vs;
        kept[k] = idx;
    }
    for (const auto& [k, m] : c.d) {
        const auto& si = kept[k];
        const auto& ti = kept[k + 1];
        ModMap pm(static_cast<int>(ti.size()), static_cast<int>(si.size()), q.quotient->dim());
        for (size_t i = 0; i < ti.size(); ++i)
            for (size_t j = 0; j < si.size(); ++j) pm.at(static_cast<int>(i), static_cast<int>(j)) = q.project(m.at(ti[i], si[j]));
        r.d[k] = pm;
    }
    r.normalize();
    return r;
}

bool same_complex(const ProjComplex& a, const ProjComplex& b) {
    ProjComplex x = a, y = b;
    x.normalize();
    y.normalize();
    return x.terms == y.terms && x.d == y.d;
}

// ---------- graded maps ----------

bool GradedMap::is_zero() const {
    for (const auto& [p, m] : comp)
        if (!m.is_zero()) return false;
    return true;
}

GradedMap compose(const Algebra& A, const GradedMap& g, const GradedMap& f) {
    GradedMap r;
    r.degree = g.degree + f.degree;
    for (const auto& [p, fm] : f.comp) {
        auto it = g.comp.find(p + f.degree);
        if (it == g.comp.end()) continue;
        ModMap m = compose(A, it->second, fm);
        if (!m.is_zero()) r.comp[p] = std::move(m);
    }
    return r;
}

GradedMap add(const GradedMap& a, const GradedMap& b, const Scalar& cb) {
    if (a.degree != b.degree && !a.comp.empty() && !b.comp.empty()) throw ShapeError("adding maps of different degrees");
    GradedMap r = a;
    if (a.comp.empty()) r.degree = b.degree;
    for (const auto& [p, m] : b.comp) {
        auto it = r.comp.find(p);
        if (it == r.comp.end()) {
            ModMap s = m;
            for (auto& e : s.entries) e = scaled(e, cb);
            r.comp[p] = s;
        } else {
            it->second = add(it->second, m, cb);
        }
    }
    for (auto it = r.comp.begin(); it != r.comp.end();)
        it = it->second.is_zero() ? r.comp.erase(it) : std::next(it);
    return r;
}

GradedMap differential_map(const ProjComplex& c) {
    GradedMap r;
    r.degree = 1;
    for (const auto& [k, m] : c.d)
        if (!m.is_zero()) r.comp[k] = m;
    return r;
}

GradedMap identity_map(const ProjComplex& c) {
    GradedMap r;
    r.degree = 0;
    const Algebra& A = *c.algebra;
    for (const auto& [k, t] : c.terms) {
        ModMap m(static_cast<int>(t.size()), static_cast<int>(t.size()), A.dim());
        for (size_t i = 0; i < t.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = A.vertex(t[i]);
        if (!t.empty()) r.comp[k] = m;
    }
    return r;
}

GradedMap hom_delta(const Algebra& A, const ProjComplex& x, const ProjComplex& y, const GradedMap& f) {
    GradedMap left = compose(A, differential_map(y), f);
    GradedMap right = compose(A, f, differential_map(x));
    left.degree = f.degree + 1;
    right.degree = f.degree + 1;
    return add(left, right, Scalar(-sgn_pow(f.degree)));
}

bool graded_equal(const GradedMap& a, const GradedMap& b) {
    GradedMap diff = add(a, b, Scalar(-1));
    return diff.is_zero();
}

ProjComplex cone(const ProjComplex& v, const ProjComplex& w, const GradedMap& f) {
    // C^j = W^j ⊕ V^{j+1}, d(x, y) = (d_W x + (−1)^{|y|} f(y), d_V y)
    const Algebra& A = *v.algebra;
    if (f.degree != 0) throw ShapeError("cone needs a degree-0 map");
    ProjComplex c;
    c.algebra = v.algebra;
    std::set<int> degs;
    for (const auto& [k, t] : w.terms) degs.insert(k);
    for (const auto& [k, t] : v.terms) degs.insert(k - 1);
    for (int j : degs) {
        auto t = w.term(j);
        t.insert(t.end(), v.term(j + 1).begin(), v.term(j + 1).end());
        c.terms[j] = t;
    }
    for (int j : degs) {
        if (!degs.count(j + 1)) continue;
        int w0 = static_cast<int>(w.term(j).size()), v0 = static_cast<int>(v.term(j + 1).size());
        int w1 = static_cast<int>(w.term(j + 1).size()), v1 = static_cast<int>(v.term(j + 2).size());
        ModMap m(w1 + v1, w0 + v0, A.dim());
        ModMap dw = w.diff(j), dv = v.diff(j + 1);
        for (int a = 0; a < w1; ++a)
            for (int b = 0; b < w0; ++b) m.at(a, b) = dw.at(a, b);
        auto fit = f.comp.find(j + 1);
        if (fit != f.comp.end()) {
            Scalar sg(sgn_pow(j + 1));
            for (int a = 0; a < w1; ++a)
                for (int b = 0; b < v0; ++b) m.at(a, w0 + b) = scaled(fit->second.at(a, b), sg);
        }
        for (int a = 0; a < v1; ++a)
            for (int b = 0; b < v0; ++b) m.at(w1 + a, w0 + b) = dv.at(a, b);
        if (!m.is_zero()) c.d[j] = m;
    }
    c.normalize();
    return c;
}

// ---------- hom spaces ----------

HomSpace hom_space(const ProjComplex& x, const ProjComplex& y, int degree) {
    HomSpace h;
    h.x = &x;
    h.y = &y;
    h.degree = degree;
    const Algebra& A = *x.algebra;
    for (const auto& [p, xs] : x.terms) {
        const auto& ys = y.term(p + degree);
        for (size_t t = 0; t < ys.size(); ++t)
            for (size_t s = 0; s < xs.size(); ++s) {
                int n = A.peirce(ys[t], xs[s]).dim();
                if (n == 0) continue;
                h.block_start[{p, static_cast<int>(t), static_cast<int>(s)}] = h.dim();
                for (int k = 0; k < n; ++k) h.basis.push_back({p, static_cast<int>(t), static_cast<int>(s), k});
            }
    }
    return h;
}

Vec HomSpace::coords(const GradedMap& f) const {
    const Algebra& A = *x->algebra;
    Vec c = zero_vec(dim());
    if (f.is_zero()) return c;
    if (f.degree != degree) throw ShapeError("map degree does not match the hom space");
    for (const auto& [p, m] : f.comp) {
        const auto& xs = x->term(p);
        const auto& ys = y->term(p + degree);
        for (int t = 0; t < m.rows; ++t)
            for (int s = 0; s < m.cols; ++s) {
                const Vec& e = m.at(t, s);
                if (is_zero(e)) continue;
                auto it = block_start.find({p, t, s});
                if (it == block_start.end()) throw ShapeError("map component outside the hom space");
                Vec pc = A.peirce(ys[t], xs[s]).coords(e);
                for (size_t k = 0; k < pc.size(); ++k) c[it->second + static_cast<int>(k)] = pc[k];
            }
    }
    return c;
}

GradedMap HomSpace::element(const Vec& c) const {
    const Algebra& A = *x->algebra;
    GradedMap f;
    f.degree = degree;
    for (int i = 0; i < dim(); ++i) {
        if (c[i].is_zero()) continue;
        const auto& e = basis[i];
        const auto& xs = x->term(e.p);
        const auto& ys = y->term(e.p + degree);
        auto it = f.comp.find(e.p);
        if (it == f.comp.end())
            it = f.comp.emplace(e.p, ModMap(static_cast<int>(ys.size()), static_cast<int>(xs.size()), A.dim())).first;
        axpy(it->second.at(e.t, e.s), c[i], A.peirce(ys[e.t], xs[e.s]).basis()[e.k]);
    }
    return f;
}

GradedMap HomSpace::basis_map(int i) const { return element(unit_vec(dim(), i)); }

// ---------- cohomology ----------

Mat GradedComplex::diff(int k) const {
    auto it = d.find(k);
    if (it != d.end()) return it->second;
    return Mat(dim(k + 1), dim(k));
}

Vec Cohomology::coords(int k, const Vec& z) const {
    auto it = pieces.find(k);
    if (it == pieces.end() || it->second.dim == 0) return {};
    const Piece& P = it->second;
    Vec r = P.boundaries.reduce(z);
    Vec sub(P.sel.size());
    for (size_t i = 0; i < P.sel.size(); ++i) sub[i] = r[P.sel[i]];
    Vec c = P.sel_inv.apply(sub);
    Vec back = zero_vec(static_cast<int>(r.size()));
    for (size_t j = 0; j < c.size(); ++j) axpy(back, c[j], P.reduced_reps[j]);
    if (back != r) throw ShapeError("vector is not a cocycle in degree " + std::to_string(k));
    return c;
}

GradedSpace Cohomology::dims() const {
    GradedSpace g;
    for (const auto& [k, p] : pieces) g.set(k, p.dim);
    return g;
}

Cohomology cohomology(const GradedComplex& c, int lo, int hi, const std::map<int, std::vector<Vec>>& preferred) {
    Cohomology H;
    for (int k = lo; k <= hi; ++k) {
        int n = c.dim(k);
        Cohomology::Piece P;
        P.boundaries = Subspace(n, image_basis(c.diff(k - 1)));
        if (n == 0) {
            H.pieces[k] = P;
            continue;
        }
        Mat dk = c.diff(k);
        std::vector<std::pair<Vec, bool>> cands;
        auto pit = preferred.find(k);
        if (pit != preferred.end())
            for (const auto& v : pit->second) {
                if (!is_zero(dk.apply(v))) throw ShapeError("preferred representative is not a cocycle");
                cands.push_back({v, true});
            }
        for (const auto& v : kernel_basis(dk)) cands.push_back({v, false});
        Subspace acc = P.boundaries;
        for (const auto& [v, pref] : cands) {
            if (!acc.add(v)) continue;
            P.reps.push_back(pref ? v : P.boundaries.reduce(v));
        }
        P.dim = static_cast<int>(P.reps.size());
        for (const auto& r : P.reps) P.reduced_reps.push_back(P.boundaries.reduce(r));
        if (P.dim > 0) {
            Mat M = Mat::from_cols(P.reduced_reps, n);
            Echelon e = rref(M.transpose());
            P.sel = e.pivots;
            Mat S(P.dim, P.dim);
            for (int i = 0; i < P.dim; ++i)
                for (int j = 0; j < P.dim; ++j) S(i, j) = M(P.sel[i], j);
            auto inv = inverse(S);
            if (!inv) throw SolverInconsistent("cohomology representative selection is singular");
            P.sel_inv = *inv;
        }
        H.pieces[k] = std::move(P);
    }
    return H;
}

Cohomology cohomology(const GradedComplex& c, const std::map<int, std::vector<Vec>>& preferred) {
    if (c.dims.empty()) return {};
    return cohomology(c, c.dims.begin()->first, c.dims.rbegin()->first, preferred);
}

HomComplex hom_complex(const ProjComplex& x, const ProjComplex& y, int lo, int hi) {
    HomComplex h;
    const Algebra& A = *x.algebra;
    for (int k = lo - 1; k <= hi + 1; ++k) {
        h.spaces.emplace(k, hom_space(x, y, k));
        h.complex.dims[k] = h.spaces.at(k).dim();
    }
    for (int k = lo - 1; k <= hi; ++k) {
        const HomSpace& s = h.spaces.at(k);
        const HomSpace& t = h.spaces.at(k + 1);
        Mat D(t.dim(), s.dim());
        for (int j = 0; j < s.dim(); ++j) {
            Vec c = t.coords(hom_delta(A, x, y, s.basis_map(j)));
            for (int i = 0; i < t.dim(); ++i) D(i, j) = c[i];
        }
        h.complex.d[k] = D;
    }
    return h;
}

HomComplex hom_complex(const ProjComplex& x, const ProjComplex& y) {
    if (x.terms.empty() || y.terms.empty()) return {};
    return hom_complex(x, y, y.lo() - x.hi(), y.hi() - x.lo());
}

GradedComplex underlying_complex(const ProjComplex& c) {
    GradedComplex g;
    const Algebra& A = *c.algebra;
    for (const auto& [k, t] : c.terms) g.dims[k] = underlying(A, t).dim;
    for (const auto& [k, m] : c.d) g.d[k] = linear_matrix(A, c.term(k), c.term(k + 1), m);
    return g;
}

// ---------- DG categories ----------

const SparseVec* DGAlg::product(int i, int j) const {
    auto it = prod.find(pair_key(i, j));
    return it == prod.end() ? nullptr : &it->second;
}

void DGAlg::set_product(int i, int j, SparseVec v) {
    if (v.empty())
        prod.erase(pair_key(i, j));
    else
        prod[pair_key(i, j)] = std::move(v);
}

SparseVec DGAlg::mul(const SparseVec& u, const SparseVec& v) const {
    SparseVec r;
    for (const auto& [i, a] : u.e)
        for (const auto& [j, b] : v.e) {
            if (src[i] != tgt[j]) continue;
            const SparseVec* p = product(i, j);
            if (!p) continue;
            Scalar ab = a * b;
            for (const auto& [k, c] : p->e) r.add(k, ab * c);
        }
    r.normalize();
    return r;
}

SparseVec DGAlg::diff(const SparseVec& u) const {
    SparseVec r;
    for (const auto& [i, a] : u.e)
        for (const auto& [k, c] : d[i].e) r.add(k, a * c);
    r.normalize();
    return r;
}

std::vector<int> DGAlg::block(int a, int b, int k) const {
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i)
        if (src[i] == a && tgt[i] == b && deg[i] == k) out.push_back(i);
    return out;
}

std::vector<int> DGAlg::degrees() const {
    std::set<int> s(deg.begin(), deg.end());
    return {s.begin(), s.end()};
}

GradedComplex DGAlg::block_complex(int a, int b, std::vector<int>* order) const {
    GradedComplex g;
    std::map<int, std::vector<int>> by_deg;
    for (int i = 0; i < dim(); ++i)
        if (src[i] == a && tgt[i] == b) by_deg[deg[i]].push_back(i);
    std::map<int, int> local;
    for (auto& [k, v] : by_deg) {
        g.dims[k] = static_cast<int>(v.size());
        for (size_t j = 0; j < v.size(); ++j) local[v[j]] = static_cast<int>(j);
        if (order) order->insert(order->end(), v.begin(), v.end());
    }
    for (auto& [k, v] : by_deg) {
        auto nx = by_deg.find(k + 1);
        if (nx == by_deg.end()) continue;
        Mat D(static_cast<int>(nx->second.size()), static_cast<int>(v.size()));
        for (size_t j = 0; j < v.size(); ++j)
            for (const auto& [i, c] : d[v[j]].e) D(local.at(i), static_cast<int>(j)) = c;
        g.d[k] = D;
    }
    return g;
}

std::string DGAlg::check_axioms() const {
    int n = dim();
    auto unitvec = [](int i) {
        SparseVec s;
        s.e.push_back({i, Scalar(1)});
        return s;
    };
    for (int i = 0; i < n; ++i)
        if (!diff(d[i]).empty()) return "d∘d != 0 on " + labels[i];
    // composable partners
    std::vector<std::vector<int>> right(n);
    for (const auto& [key, v] : prod) right[static_cast<int>(key >> 32)].push_back(static_cast<int>(key & 0xffffffffu));
    for (auto& r : right) std::sort(r.begin(), r.end());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (src[i] != tgt[j]) continue;
            SparseVec bi = unitvec(i), bj = unitvec(j);
            SparseVec lhs = diff(mul(bi, bj));
            SparseVec rhs = mul(d[i], bj);
            rhs.axpy(Scalar(sgn_pow(deg[i])), mul(bi, d[j]));
            if (!(lhs == rhs)) return "Leibniz fails on (" + labels[i] + ", " + labels[j] + ")";
        }
    for (int i = 0; i < n; ++i)
        for (int j : right[i]) {
            const SparseVec* ij = product(i, j);
            for (int k = 0; k < n; ++k) {
                if (src[j] != tgt[k]) continue;
                SparseVec lhs = mul(*ij, unitvec(k));
                const SparseVec* jk = product(j, k);
                SparseVec rhs = jk ? mul(unitvec(i), *jk) : SparseVec{};
                if (!(lhs == rhs)) return "associativity fails on (" + labels[i] + ", " + labels[j] + ", " + labels[k] + ")";
            }
        }
    // triples with b_i b_j = 0 but b_i (b_j b_k) possibly nonzero
    for (int j = 0; j < n; ++j)
        for (int k : right[j]) {
            const SparseVec* jk = product(j, k);
            for (int i = 0; i < n; ++i) {
                if (src[i] != tgt[j] || product(i, j)) continue;
                if (!mul(unitvec(i), *jk).empty())
                    return "associativity fails on (" + labels[i] + ", " + labels[j] + ", " + labels[k] + ")";
            }
        }
    for (int x = 0; x < nobj; ++x) {
        if (!diff(units[x]).empty()) return "unit of object " + std::to_string(x) + " is not a cocycle";
        for (int i = 0; i < n; ++i) {
            SparseVec bi = unitvec(i);
            if (tgt[i] == x && !(mul(units[x], bi) == bi)) return "left unit fails on " + labels[i];
            if (src[i] == x && !(mul(bi, units[x]) == bi)) return "right unit fails on " + labels[i];
        }
    }
    return "";
}

GradedMap EndCategory::to_map(const SparseVec& v, int a, int b, int degree) const {
    const Algebra& A = *objects[a].algebra;
    GradedMap f;
    f.degree = degree;
    const ProjComplex& X = objects[a];
    const ProjComplex& Y = objects[b];
    for (const auto& [i, c] : v.e) {
        const Info& in = info[i];
        if (in.a != a || in.b != b || in.degree != degree) throw ShapeError("vector outside the requested hom block");
        const auto& xs = X.term(in.e.p);
        const auto& ys = Y.term(in.e.p + degree);
        auto it = f.comp.find(in.e.p);
        if (it == f.comp.end())
            it = f.comp.emplace(in.e.p, ModMap(static_cast<int>(ys.size()), static_cast<int>(xs.size()), A.dim())).first;
        axpy(it->second.at(in.e.t, in.e.s), c, A.peirce(ys[in.e.t], xs[in.e.s]).basis()[in.e.k]);
    }
    return f;
}

SparseVec EndCategory::from_map(const GradedMap& f, int a, int b) const {
    const Algebra& A = *objects[a].algebra;
    const ProjComplex& X = objects[a];
    const ProjComplex& Y = objects[b];
    SparseVec r;
    for (const auto& [p, m] : f.comp) {
        const auto& xs = X.term(p);
        const auto& ys = Y.term(p + f.degree);
        for (int t = 0; t < m.rows; ++t)
            for (int s = 0; s < m.cols; ++s) {
                if (is_zero(m.at(t, s))) continue;
                auto it = index.find({a, b, f.degree, p, t, s});
                if (it == index.end()) throw ShapeError("map component outside the category basis");
                Vec c = A.peirce(ys[t], xs[s]).coords(m.at(t, s));
                for (size_t k = 0; k < c.size(); ++k)
                    if (!c[k].is_zero()) r.add(it->second + static_cast<int>(k), c[k]);
            }
    }
    r.normalize();
    return r;
}

EndCategory end_category(const std::vector<ProjComplex>& objects) {
    EndCategory E;
    E.objects = objects;
    const Algebra& A = *objects.at(0).algebra;
    int t = static_cast<int>(objects.size());
    DGAlg& D = E.dga;
    D.nobj = t;
    for (int a = 0; a < t; ++a)
        for (int b = 0; b < t; ++b) {
            const ProjComplex& X = E.objects[a];
            const ProjComplex& Y = E.objects[b];
            if (X.terms.empty() || Y.terms.empty()) continue;
            for (int k = Y.lo() - X.hi(); k <= Y.hi() - X.lo(); ++k) {
                HomSpace h = hom_space(X, Y, k);
                for (const auto& [key, start] : h.block_start)
                    E.index[{a, b, k, key[0], key[1], key[2]}] = D.dim() + start;
                for (const auto& e : h.basis) {
                    E.info.push_back({a, b, k, e});
                    D.deg.push_back(k);
                    D.src.push_back(a);
                    D.tgt.push_back(b);
                    const auto& xs = X.term(e.p);
                    const auto& ys = Y.term(e.p + k);
                    std::string lab = "[" + std::to_string(a) + ">" + std::to_string(b) + "|" + std::to_string(k) +
                                      "|" + std::to_string(e.p) + ":" + std::to_string(e.t) + "<" +
                                      std::to_string(e.s) + "] " +
                                      A.element_str(A.peirce(ys[e.t], xs[e.s]).basis()[e.k]);
                    D.labels.push_back(lab);
                }
            }
        }
    int n = D.dim();
    auto entry_vec = [&](int i) -> const Vec& {
        const auto& in = E.info[i];
        const auto& xs = E.objects[in.a].term(in.e.p);
        const auto& ys = E.objects[in.b].term(in.e.p + in.degree);
        return A.peirce(ys[in.e.t], xs[in.e.s]).basis()[in.e.k];
    };
    // add value (an algebra element) at entry (t, s), position p of Hom(a,b)^k into r
    auto add_entry = [&](SparseVec& r, int a, int b, int k, int p, int tt, int ss, const Vec& val, const Scalar& c) {
        if (is_zero(val)) return;
        auto it = E.index.find({a, b, k, p, tt, ss});
        if (it == E.index.end()) throw ShapeError("composition left the hom basis");
        const auto& xs = E.objects[a].term(p);
        const auto& ys = E.objects[b].term(p + k);
        Vec co = A.peirce(ys[tt], xs[ss]).coords(val);
        for (size_t q = 0; q < co.size(); ++q)
            if (!co[q].is_zero()) r.add(it->second + static_cast<int>(q), c * co[q]);
    };
    // products: b_i ∘ b_j needs a_i = b_j, p_i = p_j + deg_j, s_i = t_j
    std::map<std::array<int, 3>, std::vector<int>> by_source;
    for (int i = 0; i < n; ++i) by_source[{E.info[i].a, E.info[i].e.p, E.info[i].e.s}].push_back(i);
    for (int j = 0; j < n; ++j) {
        const auto& J = E.info[j];
        auto it = by_source.find({J.b, J.e.p + J.degree, J.e.t});
        if (it == by_source.end()) continue;
        for (int i : it->second) {
            const auto& I = E.info[i];
            SparseVec r;
            add_entry(r, J.a, I.b, I.degree + J.degree, J.e.p, I.e.t, J.e.s, A.mul(entry_vec(i), entry_vec(j)), Scalar(1));
            r.normalize();
            D.set_product(i, j, std::move(r));
        }
    }
    // differential δ(f) = d∘f − (−1)^{|f|} f∘d
    D.d.resize(n);
    for (int j = 0; j < n; ++j) {
        const auto& J = E.info[j];
        const ProjComplex& X = E.objects[J.a];
        const ProjComplex& Y = E.objects[J.b];
        SparseVec r;
        int q = J.e.p + J.degree;
        if (Y.d.count(q)) {
            const ModMap& dy = Y.d.at(q);
            for (int tt = 0; tt < dy.rows; ++tt)
                add_entry(r, J.a, J.b, J.degree + 1, J.e.p, tt, J.e.s, A.mul(dy.at(tt, J.e.t), entry_vec(j)), Scalar(1));
        }
        if (X.d.count(J.e.p - 1)) {
            const ModMap& dx = X.d.at(J.e.p - 1);
            Scalar sg(-sgn_pow(J.degree));
            for (int ss = 0; ss < dx.cols; ++ss)
                add_entry(r, J.a, J.b, J.degree + 1, J.e.p - 1, J.e.t, ss, A.mul(entry_vec(j), dx.at(J.e.s, ss)), sg);
        }
        r.normalize();
        D.d[j] = std::move(r);
    }
    for (int a = 0; a < t; ++a) D.units.push_back(E.from_map(identity_map(E.objects[a]), a, a));
    return E;
}

}  // namespace tx
