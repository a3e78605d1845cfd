#include "tx/trivext.hpp"
#include "tx/errors.hpp"

#include <unordered_map>

namespace tx {

namespace {

ModMap identity_modmap(const Algebra& A, const std::vector<int>& t) {
    ModMap m(static_cast<int>(t.size()), static_cast<int>(t.size()), A.dim());
    for (size_t i = 0; i < t.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = A.vertex(t[i]);
    return m;
}

ModMap scaled_modmap(ModMap m, const Scalar& c) {
    for (auto& e : m.entries) e = scaled(e, c);
    return m;
}

void prune(GradedMap& f) {
    for (auto it = f.comp.begin(); it != f.comp.end();)
        it = it->second.is_zero() ? f.comp.erase(it) : std::next(it);
}

void accumulate(const Algebra& A, GradedMap& f, int p, const ModMap& m, const Scalar& c = Scalar(1)) {
    (void)A;
    if (m.is_zero()) return;
    auto it = f.comp.find(p);
    if (it == f.comp.end())
        f.comp.emplace(p, c.is_one() ? m : scaled_modmap(m, c));
    else
        it->second = add(it->second, m, c);
}

int floor_block(int degree, int n) { return degree > 0 ? -1 : (-degree) / n; }

}  // namespace

int commutant_twist(int n, int degree, bool minus) {
    return sgn_pow(static_cast<long long>(n) * (degree + (minus ? 1 : 0)));
}

int min_window(int n, int i) {
    int lm = i < -(n - 1) ? -1 : (n - 1 + i) / n;
    int a = (i < 0 ? -i : i);
    int guard = (a + n - 1) / n + 2;
    return std::max(lm, guard);
}

// ---------- context ----------

PeriodicContext::PeriodicContext(PeriodicResolution R) : R_(std::move(R)) {
    const Algebra& A = algebra();
    const int n = R_.n;
    d_.degree = 1;
    d_.twist = sgn_pow(n);
    for (int p = -(n - 1); p <= -1; ++p) {
        ModMap m = R_.P.diff(p);
        if (!m.is_zero()) d_.first.comp[p] = m;
    }
    ModMap d0 = R_.d0();
    if (!d0.is_zero()) d_.first.comp[-n] = d0;
    d_.first.degree = 1;
    sigma_.degree = n;
    sigma_.twist = 1;
    sigma_.first.degree = n;
    for (int p = -(2 * n - 1); p <= -n; ++p) {
        const auto& t = R_.term(((-p) % n));
        if (!t.empty()) sigma_.first.comp[p] = identity_modmap(A, t);
    }
}

int PeriodicContext::block(int degree) const { return floor_block(degree, n()); }

int PeriodicContext::lmax(int i) const {
    if (i < -(n() - 1)) return -1;
    return block(-(n() - 1) - i);
}

const ResolutionWindow& PeriodicContext::window(int L) const {
    auto it = windows_.find(L);
    if (it == windows_.end()) it = windows_.emplace(L, std::make_unique<ResolutionWindow>(build_window(R_, L))).first;
    return *it->second;
}

const HomSpace& PeriodicContext::V(int i) const {
    auto it = spaces_.find(i);
    if (it == spaces_.end()) {
        int L = std::max(lmax(i), 0);
        it = spaces_.emplace(i, std::make_unique<HomSpace>(hom_space(window(L).C, R_.P, i))).first;
    }
    return *it->second;
}

PeriodicEndo PeriodicContext::zero(int degree, int twist) const {
    PeriodicEndo z;
    z.degree = degree;
    z.twist = twist;
    z.first.degree = degree;
    return z;
}

PeriodicEndo PeriodicContext::identity() const {
    PeriodicEndo e = zero(0, 1);
    e.first = identity_map(R_.P);
    return e;
}

PeriodicEndo PeriodicContext::compose(const PeriodicEndo& x, const PeriodicEndo& a) const {
    const Algebra& A = algebra();
    const int n = R_.n;
    PeriodicEndo r = zero(x.degree + a.degree, x.twist * a.twist);
    const int k = a.degree;
    for (const auto& [q, xm] : x.first.comp) {
        int m = block(q);
        int p = q - k;
        if (p > 0) continue;
        int src = p + m * n;
        auto it = a.first.comp.find(src);
        if (it == a.first.comp.end()) continue;
        Scalar s(sgn_pow(a.twist < 0 ? m : 0));
        ModMap c = tx::compose(A, xm, it->second);
        accumulate(A, r.first, p, c, s);
    }
    prune(r.first);
    return r;
}

PeriodicEndo PeriodicContext::add(const PeriodicEndo& x, const PeriodicEndo& y, const Scalar& c) const {
    if (x.degree != y.degree) throw ShapeError("adding periodic maps of different degrees");
    bool xz = x.first.comp.empty(), yz = y.first.comp.empty();
    if (!xz && !yz && x.twist != y.twist) throw ShapeError("adding periodic maps with different twists");
    PeriodicEndo r = zero(x.degree, xz ? y.twist : x.twist);
    r.first = tx::add(x.first, y.first, c);
    r.first.degree = x.degree;
    prune(r.first);
    return r;
}

PeriodicEndo PeriodicContext::scaled(const PeriodicEndo& x, const Scalar& c) const {
    return add(zero(x.degree, x.twist), x, c);
}

PeriodicEndo PeriodicContext::delta(const PeriodicEndo& x) const {
    return add(compose(d_, x), compose(x, d_), Scalar(-sgn_pow(x.degree)));
}

bool PeriodicContext::vanishes_on_block0(const PeriodicEndo& x) const {
    for (const auto& [p, m] : x.first.comp)
        if (block(p) == 0 && !m.is_zero()) return false;
    return true;
}

PeriodicEndo PeriodicContext::right_tau(const PeriodicEndo& x) const {
    if (!vanishes_on_block0(x)) throw ShapeError("x∘τ needs x to vanish on block 0");
    PeriodicEndo r = zero(x.degree - n(), x.twist);
    for (const auto& [q, m] : x.first.comp) r.first.comp[q + n()] = m;
    return r;
}

bool PeriodicContext::equal(const PeriodicEndo& a, const PeriodicEndo& b) const {
    if (a.degree != b.degree) return a.first.is_zero() && b.first.is_zero();
    return graded_equal(a.first, b.first);
}

PeriodicEndo PeriodicContext::element(int degree, int twist, const Vec& c) const {
    PeriodicEndo r = zero(degree, twist);
    r.first = V(degree).element(c);
    r.first.degree = degree;
    prune(r.first);
    return r;
}

GradedMap PeriodicContext::expand(const PeriodicEndo& x, int L) const {
    GradedMap f;
    f.degree = x.degree;
    const int n = R_.n;
    for (const auto& [q, m] : x.first.comp)
        for (int k = 0; block(q) + k <= L; ++k) {
            Scalar s(x.twist < 0 ? sgn_pow(k) : 1);
            f.comp[q - k * n] = scaled_modmap(m, s);
        }
    prune(f);
    return f;
}

GradedMap PeriodicContext::sigma_window(int L) const {
    GradedMap f;
    f.degree = n();
    for (const auto& [p, t] : window(L).C.terms)
        if (block(p) >= 1) f.comp[p] = identity_modmap(algebra(), t);
    return f;
}

GradedMap PeriodicContext::tau_window(int L) const {
    GradedMap f;
    f.degree = -n();
    for (const auto& [p, t] : window(L).C.terms)
        if (block(p) <= L - 1) f.comp[p] = identity_modmap(algebra(), t);
    return f;
}

GradedMap PeriodicContext::restrict_targets(const GradedMap& f, int maxblock) const {
    GradedMap r;
    r.degree = f.degree;
    for (const auto& [p, m] : f.comp)
        if (block(p + f.degree) <= maxblock) r.comp[p] = m;
    return r;
}

namespace {

GradedMap restrict_sources(const PeriodicContext& C, const GradedMap& f, int lo_block, int hi_block) {
    GradedMap r;
    r.degree = f.degree;
    for (const auto& [p, m] : f.comp)
        if (C.block(p) >= lo_block && C.block(p) <= hi_block) r.comp[p] = m;
    return r;
}

}  // namespace

SigmaTauReport sigma_tau_check(const PeriodicContext& C, int L) {
    if (L < 2) throw WindowTooSmall("σ/τ checks need L >= 2");
    const Algebra& A = C.algebra();
    const ProjComplex& W = C.window(L).C;
    GradedMap s = C.sigma_window(L), t = C.tau_window(L);
    GradedMap id = identity_map(W);
    SigmaTauReport r;
    r.sigma_tau_id = graded_equal(compose(A, s, t), restrict_sources(C, id, 0, L - 1));
    r.tau_sigma_id_ge_n = graded_equal(compose(A, t, s), restrict_sources(C, id, 1, L));
    r.delta_sigma_zero = C.restrict_targets(hom_delta(A, W, W, s), L - 1).is_zero();
    return r;
}

bool in_commutant(const PeriodicContext& C, const GradedMap& full, int L, bool minus) {
    const Algebra& A = C.algebra();
    GradedMap s = C.sigma_window(L);
    Scalar tw(commutant_twist(C.n(), full.degree, minus));
    GradedMap lhs = compose(A, s, full), rhs = compose(A, full, s);
    lhs.degree = rhs.degree = full.degree + C.n();
    return C.restrict_targets(add(lhs, rhs, -tw), L - 1).is_zero();
}

CommutantSolve commutant_solve(const PeriodicContext& C, int L, int i, bool minus) {
    if (L < min_window(C.n(), i))
        throw WindowTooSmall("degree " + std::to_string(i) + " needs L >= " + std::to_string(min_window(C.n(), i)));
    const Algebra& A = C.algebra();
    const ProjComplex& W = C.window(L).C;
    HomSpace H = hom_space(W, W, i), Hn = hom_space(W, W, i + C.n());
    GradedMap s = C.sigma_window(L);
    Scalar tw(commutant_twist(C.n(), i, minus));
    std::vector<Vec> cols;
    for (int j = 0; j < H.dim(); ++j) {
        GradedMap b = H.basis_map(j);
        GradedMap lhs = compose(A, s, b), rhs = compose(A, b, s);
        lhs.degree = rhs.degree = i + C.n();
        cols.push_back(Hn.coords(C.restrict_targets(add(lhs, rhs, -tw), L - 1)));
    }
    CommutantSolve out;
    auto ker = kernel_basis(Mat::from_cols(cols, Hn.dim()));
    out.solution_dim = static_cast<int>(ker.size());
    const HomSpace& V = C.V(i);
    out.first_row_dim = V.dim();
    std::vector<Vec> proj;
    for (const auto& v : ker) proj.push_back(V.coords(C.restrict_targets(H.element(v), 0)));
    out.first_row_rank = proj.empty() ? 0 : rank(Mat::from_cols(proj, V.dim()));
    return out;
}

std::vector<PeriodicEndo> commutant_basis(const PeriodicContext& C, int L, int i, bool minus) {
    CommutantSolve s = commutant_solve(C, L, i, minus);
    if (s.solution_dim != s.first_row_dim || s.first_row_rank != s.first_row_dim)
        throw SolverInconsistent("windowed commutant in degree " + std::to_string(i) + " does not match first rows");
    std::vector<PeriodicEndo> out;
    int tw = commutant_twist(C.n(), i, minus);
    for (int k = 0; k < s.first_row_dim; ++k) out.push_back(C.element(i, tw, unit_vec(s.first_row_dim, k)));
    return out;
}

// ---------- T ----------

TrivExt::TrivExt(std::shared_ptr<const PeriodicContext> ctx) : ctx_(std::move(ctx)) {}

int TrivExt::dim(int j) const { return ctx_->V(j).dim() + ctx_->V(j - n() + 1).dim(); }

TElem TrivExt::zero(int j) const {
    TElem t;
    t.degree = j;
    t.x = ctx_->zero(j, commutant_twist(n(), j, false));
    t.y = ctx_->zero(j - n() + 1, commutant_twist(n(), j - n() + 1, true));
    return t;
}

TElem TrivExt::basis(int j, int k) const {
    TElem t = zero(j);
    int dx = ctx_->V(j).dim();
    if (k < dx)
        t.x = ctx_->element(j, t.x.twist, unit_vec(dx, k));
    else {
        int dy = ctx_->V(j - n() + 1).dim();
        t.y = ctx_->element(j - n() + 1, t.y.twist, unit_vec(dy, k - dx));
    }
    return t;
}

Vec TrivExt::coords(const TElem& t) const {
    Vec a = ctx_->V(t.degree).coords(t.x.first);
    Vec b = ctx_->V(t.degree - n() + 1).coords(t.y.first);
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

TElem TrivExt::element(int j, const Vec& c) const {
    TElem t = zero(j);
    int dx = ctx_->V(j).dim();
    Vec a(c.begin(), c.begin() + dx), b(c.begin() + dx, c.end());
    t.x = ctx_->element(j, t.x.twist, a);
    t.y = ctx_->element(j - n() + 1, t.y.twist, b);
    return t;
}

TElem TrivExt::unit() const {
    TElem t = zero(0);
    t.x = ctx_->identity();
    return t;
}

TElem TrivExt::add(const TElem& a, const TElem& b, const Scalar& c) const {
    if (a.degree != b.degree) throw ShapeError("adding elements of T of different degrees");
    TElem t;
    t.degree = a.degree;
    t.x = ctx_->add(a.x, b.x, c);
    t.y = ctx_->add(a.y, b.y, c);
    return t;
}

TElem TrivExt::mul(const TElem& a, const TElem& b) const {
    // (x,y)(a,b) = (xa, xb + (−1)^{|a|(n+1)} ya)
    TElem t;
    t.degree = a.degree + b.degree;
    t.x = ctx_->compose(a.x, b.x);
    t.y = ctx_->add(ctx_->compose(a.x, b.y), ctx_->compose(a.y, b.x),
                    Scalar(sgn_pow(static_cast<long long>(b.degree) * (n() + 1))));
    return t;
}

TElem TrivExt::xi(const TElem& a) const {
    // ξ(x,y) = (δx − (−1)^{|x|} yσ, δy)
    TElem t;
    t.degree = a.degree + 1;
    t.x = ctx_->add(ctx_->delta(a.x), ctx_->compose(a.y, ctx_->sigma()), Scalar(-sgn_pow(a.degree)));
    t.y = ctx_->delta(a.y);
    return t;
}

bool TrivExt::equal(const TElem& a, const TElem& b) const {
    return ctx_->equal(a.x, b.x) && ctx_->equal(a.y, b.y);
}

bool TrivExt::is_zero(const TElem& a) const { return a.x.first.is_zero() && a.y.first.is_zero(); }

Mat TrivExt::xi_matrix(int j) const {
    std::vector<Vec> cols;
    for (int k = 0; k < dim(j); ++k) cols.push_back(coords(xi(basis(j, k))));
    return Mat::from_cols(cols, dim(j + 1));
}

GradedComplex TrivExt::complex(int lo, int hi) const {
    GradedComplex c;
    for (int j = lo; j <= hi; ++j)
        if (dim(j)) c.dims[j] = dim(j);
    for (int j = lo; j < hi; ++j)
        if (dim(j) && dim(j + 1)) c.d[j] = xi_matrix(j);
    return c;
}

AxiomReport trivext_axioms(const TrivExt& T, int lo, int hi) {
    AxiomReport r;
    auto fail = [&](bool& flag, const std::string& what) {
        flag = false;
        if (r.first_failure.empty()) r.first_failure = what;
    };
    // global basis over every degree reached, products cached by basis pair
    std::map<int, std::vector<TElem>> B;
    auto basis_of = [&](int j) -> const std::vector<TElem>& {
        auto it = B.find(j);
        if (it == B.end()) {
            std::vector<TElem> v;
            for (int k = 0; k < T.dim(j); ++k) v.push_back(T.basis(j, k));
            it = B.emplace(j, std::move(v)).first;
        }
        return it->second;
    };
    std::map<std::array<int, 4>, SparseVec> cache;
    auto prod = [&](int i, int a, int j, int b) -> const SparseVec& {
        std::array<int, 4> key{i, a, j, b};
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, SparseVec::from_dense(T.coords(T.mul(basis_of(i)[a], basis_of(j)[b])))).first;
        return it->second;
    };
    TElem u = T.unit();
    if (!T.is_zero(T.xi(u))) fail(r.unit, "ξ(unit) != 0");
    for (int i = lo; i <= hi; ++i)
        for (const auto& b : basis_of(i)) {
            ++r.checked;
            if (!T.equal(T.mul(u, b), b) || !T.equal(T.mul(b, u), b)) fail(r.unit, "unit law in degree " + std::to_string(i));
            if (!T.is_zero(T.xi(T.xi(b)))) fail(r.xi_squared, "ξ² != 0 in degree " + std::to_string(i));
        }
    // Leibniz: ξ(ab) = ξ(a)b + (−1)^{|a|} aξ(b)
    for (int i = lo; i <= hi; ++i)
        for (int j = lo; j <= hi; ++j)
            for (const auto& a : basis_of(i)) {
                TElem xa = T.xi(a);
                for (const auto& b : basis_of(j)) {
                    ++r.checked;
                    TElem lhs = T.xi(T.mul(a, b));
                    TElem rhs = T.add(T.mul(xa, b), T.mul(a, T.xi(b)), Scalar(sgn_pow(i)));
                    if (!T.equal(lhs, rhs))
                        fail(r.leibniz, "Leibniz in degrees (" + std::to_string(i) + ", " + std::to_string(j) + ")");
                }
            }
    // associativity through the cached product table
    for (int i = lo; i <= hi; ++i)
        for (int j = lo; j <= hi; ++j)
            for (int k = lo; k <= hi; ++k) {
                int ni = T.dim(i), nj = T.dim(j), nk = T.dim(k);
                for (int a = 0; a < ni; ++a)
                    for (int b = 0; b < nj; ++b) {
                        const SparseVec& ab = prod(i, a, j, b);
                        for (int c = 0; c < nk; ++c) {
                            const SparseVec& bc = prod(j, b, k, c);
                            if (ab.empty() && bc.empty()) continue;
                            ++r.checked;
                            SparseVec lhs, rhs;
                            for (const auto& [m, co] : ab.e) lhs.axpy(co, prod(i + j, m, k, c));
                            for (const auto& [m, co] : bc.e) rhs.axpy(co, prod(i, a, j + k, m));
                            if (!(lhs == rhs))
                                fail(r.associative, "associativity in degrees (" + std::to_string(i) + ", " +
                                                        std::to_string(j) + ", " + std::to_string(k) + ")");
                        }
                    }
            }
    return r;
}

// ---------- End(P), repetition, Δ, F, G ----------

GradedMap EndP::map(int i) const {
    SparseVec v;
    v.e.push_back({i, Scalar(1)});
    return cat.to_map(v, 0, 0, cat.dga.deg[i]);
}

EndP end_dga(const ProjComplex& P) {
    EndP E{end_category({P})};
    std::string why = E.cat.dga.check_axioms();
    if (!why.empty()) throw NotComplex("End(P) fails a DG axiom: " + why);
    return E;
}

PeriodicEndo graded_repetition(const PeriodicContext& C, const GradedMap& g) {
    PeriodicEndo r = C.zero(g.degree, commutant_twist(C.n(), g.degree, false));
    for (const auto& [p, m] : g.comp)
        if (!m.is_zero()) r.first.comp[p] = m;
    return r;
}

PeriodicEndo capital_delta(const PeriodicContext& C, const Algebra& A, const GradedMap& g) {
    PeriodicEndo bar = graded_repetition(C, g);
    PeriodicEndo dg = graded_repetition(C, hom_delta(A, C.P(), C.P(), g));
    dg.degree = g.degree + 1;
    dg.first.degree = g.degree + 1;
    dg.twist = commutant_twist(C.n(), g.degree + 1, false);
    return C.add(C.delta(bar), dg, Scalar(-1));
}

PeriodicEndo capital_delta_closed(const PeriodicContext& C, const GradedMap& g) {
    const Algebra& A = C.algebra();
    const int n = C.n(), k = g.degree;
    ModMap d0 = C.resolution().d0();
    PeriodicEndo r = C.zero(k + 1, commutant_twist(n, k + 1, false));
    auto gi = g.comp.find(-k);  // component landing in P_0
    if (gi != g.comp.end()) accumulate(A, r.first, -n - k, tx::compose(A, d0, gi->second), Scalar(sgn_pow(n * k)));
    auto go = g.comp.find(-n + 1);  // component leaving P_{n−1}
    if (go != g.comp.end()) accumulate(A, r.first, -n, tx::compose(A, go->second, d0), Scalar(-sgn_pow(k)));
    prune(r.first);
    return r;
}

TElem map_G(const TrivExt& T, const GradedMap& g) {
    const PeriodicContext& C = T.ctx();
    TElem t = T.zero(g.degree);
    t.x = graded_repetition(C, g);
    PeriodicEndo D = capital_delta(C, C.algebra(), g);
    if (!C.vanishes_on_block0(D)) throw SolverInconsistent("Δ(g) has a block-0 component");
    t.y = C.scaled(C.right_tau(D), Scalar(sgn_pow(g.degree)));
    t.y.twist = commutant_twist(C.n(), g.degree - C.n() + 1, true);
    return t;
}

GradedMap map_F(const TrivExt& T, const TElem& t) {
    GradedMap f;
    f.degree = t.degree;
    for (const auto& [p, m] : t.x.first.comp)
        if (T.ctx().block(p) == 0) f.comp[p] = m;
    return f;
}

namespace {

Mat matrix_from_cols(const std::vector<Vec>& cols, int rows) {
    return cols.empty() ? Mat(rows, 0) : Mat::from_cols(cols, rows);
}

Vec local_coords(const DGAlg& D, int k, const SparseVec& v) {
    auto idx = D.block(0, 0, k);
    Vec out = zero_vec(static_cast<int>(idx.size()));
    for (const auto& [i, c] : v.e) {
        auto it = std::lower_bound(idx.begin(), idx.end(), i);
        if (it == idx.end() || *it != i) throw ShapeError("vector outside the degree block");
        out[it - idx.begin()] = c;
    }
    return out;
}

SparseVec global_vec(const DGAlg& D, int k, const Vec& c) {
    auto idx = D.block(0, 0, k);
    SparseVec v;
    for (size_t j = 0; j < idx.size(); ++j)
        if (!c[j].is_zero()) v.add(idx[j], c[j]);
    v.normalize();
    return v;
}

}  // namespace

QuasiIsoReport quasi_iso_check(const TrivExt& T, const EndP& E, int lo, int hi) {
    QuasiIsoReport r;
    const PeriodicContext& C = T.ctx();
    const Algebra& A = C.algebra();
    const DGAlg& D = E.dga();
    auto fail = [&](bool& flag, const std::string& what) {
        flag = false;
        if (r.first_failure.empty()) r.first_failure = what;
    };
    if (!T.equal(map_G(T, identity_map(C.P())), T.unit())) fail(r.G_unital, "G(Id) != (Id, 0)");
    std::vector<TElem> G;
    for (int i = 0; i < D.dim(); ++i) G.push_back(map_G(T, E.map(i)));
    for (int i = 0; i < D.dim(); ++i) {
        GradedMap gi = E.map(i);
        if (!graded_equal(map_F(T, G[i]), gi)) fail(r.FG_identity, "F(G(g)) != g on " + D.labels[i]);
        SparseVec dv = D.d[i];
        TElem Gd = dv.empty() ? T.zero(D.deg[i] + 1) : map_G(T, E.map(dv, D.deg[i] + 1));
        if (!T.equal(T.xi(G[i]), Gd)) fail(r.G_differential, "ξG != Gδ on " + D.labels[i]);
        for (int j = 0; j < D.dim(); ++j) {
            const SparseVec* p = D.product(i, j);
            TElem lhs = p ? map_G(T, E.map(*p, D.deg[i] + D.deg[j])) : T.zero(D.deg[i] + D.deg[j]);
            if (!T.equal(lhs, T.mul(G[i], G[j])))
                fail(r.G_multiplicative, "G(gh) != G(g)G(h) on " + D.labels[i] + ", " + D.labels[j]);
        }
    }
    for (int k = lo; k < hi; ++k)
        for (int b = 0; b < T.dim(k); ++b) {
            TElem t = T.basis(k, b);
            GradedMap lhs = map_F(T, T.xi(t));
            GradedMap rhs = hom_delta(A, C.P(), C.P(), map_F(T, t));
            if (!graded_equal(lhs, rhs)) fail(r.F_chain, "Fξ != δF in degree " + std::to_string(k));
        }
    // cohomology
    Cohomology HT = cohomology(T.complex(lo - 1, hi + 1), lo, hi);
    Cohomology HE = cohomology(D.block_complex(0, 0), lo, hi);
    for (int k = lo; k <= hi; ++k) {
        int dt = HT.dim(k), de = HE.dim(k);
        if (dt != de) {
            fail(r.H_inverse, "H^" + std::to_string(k) + " dims differ");
            continue;
        }
        if (!dt) continue;
        std::vector<Vec> gcols, fcols;
        for (const auto& rep : HE.pieces.at(k).reps) {
            TElem g = T.zero(k);
            SparseVec v = global_vec(D, k, rep);
            if (!v.empty()) g = map_G(T, E.map(v, k));
            gcols.push_back(HT.coords(k, T.coords(g)));
        }
        for (const auto& rep : HT.pieces.at(k).reps) {
            GradedMap f = map_F(T, T.element(k, rep));
            fcols.push_back(HE.coords(k, local_coords(D, k, E.vec(f))));
        }
        Mat HG = matrix_from_cols(gcols, dt), HF = matrix_from_cols(fcols, de);
        if (HF * HG != Mat::identity(de) || HG * HF != Mat::identity(dt))
            fail(r.H_inverse, "H(F), H(G) not inverse in degree " + std::to_string(k));
        r.HG[k] = HG;
        r.HF[k] = HF;
    }
    return r;
}

std::map<int, int> predicted_table(int n, const std::vector<int>& ext, int im_d0, int lo, int hi) {
    auto a = [&](int m) {
        if (m < 0 || m > n - 1) return 0;
        return m <= n - 2 ? ext[m] : ext[n - 1] + im_d0;
    };
    std::map<int, int> out;
    for (int k = lo; k <= hi; ++k) {
        int v = a(k) + a(k - 1 + n);
        if (v) out[k] = v;
    }
    return out;
}

int rank_precompose_d0(const PeriodicResolution& R, const RightModule& N) {
    return rank(precompose_matrix(*R.algebra, R.term(0), R.term(R.n - 1), R.d0(), N));
}

TableReport cohomology_table(const TrivExt& T, const EndP& E, int lo, int hi) {
    TableReport r;
    const PeriodicResolution& R = T.ctx().resolution();
    Cohomology HT = cohomology(T.complex(lo - 1, hi + 1), lo, hi);
    Cohomology HE = cohomology(E.dga().block_complex(0, 0), lo, hi);
    for (int k = lo; k <= hi; ++k) {
        if (HT.dim(k)) r.T_dims[k] = HT.dim(k);
        if (HE.dim(k)) r.End_dims[k] = HE.dim(k);
    }
    GradedSpace ext = ext_oracle(R.algebra, R.M, R.M, R.n - 1);
    for (int m = 0; m < R.n; ++m) r.ext.push_back(ext.dim(m));
    r.im_d0 = rank_precompose_d0(R, R.M);
    r.predicted = predicted_table(R.n, r.ext, r.im_d0, lo, hi);
    return r;
}

TableReport cohomology_table_check(const TrivExt& T, const EndP& E, int lo, int hi) {
    TableReport r = cohomology_table(T, E, lo, hi);
    for (int k = lo; k <= hi; ++k) {
        auto get = [&](const std::map<int, int>& m) {
            auto it = m.find(k);
            return it == m.end() ? 0 : it->second;
        };
        int p = get(r.predicted);
        if (get(r.T_dims) != p)
            throw TableMismatch("H^" + std::to_string(k) + "(T): got " + std::to_string(get(r.T_dims)) + ", predicted " +
                                std::to_string(p));
        if (get(r.End_dims) != p)
            throw TableMismatch("H^" + std::to_string(k) + "(End P): got " + std::to_string(get(r.End_dims)) +
                                ", predicted " + std::to_string(p));
    }
    return r;
}

}  // namespace tx
