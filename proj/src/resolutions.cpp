#include "tx/resolutions.hpp"
#include "tx/errors.hpp"

#include <algorithm>

namespace tx {

// underlying coordinates of the generator of summand s
Vec generator_vec(const Algebra& A, const std::vector<int>& summands, int s) {
    Underlying u = underlying(A, summands);
    Vec g = zero_vec(u.dim);
    Vec c = A.right_ideal(summands[s]).coords(A.vertex(summands[s]));
    for (size_t k = 0; k < c.size(); ++k) g[u.offsets[s] + static_cast<int>(k)] = c[k];
    return g;
}

// algebra elements per summand of an underlying vector
std::vector<Vec> split_underlying(const Algebra& A, const std::vector<int>& summands, const Vec& v) {
    Underlying u = underlying(A, summands);
    std::vector<Vec> out;
    for (size_t t = 0; t < summands.size(); ++t) {
        const Subspace& T = A.right_ideal(summands[t]);
        Vec e = zero_vec(A.dim());
        for (int k = 0; k < T.dim(); ++k) axpy(e, v[u.offsets[t] + k], T.basis()[k]);
        out.push_back(std::move(e));
    }
    return out;
}

Vec join_underlying(const Algebra& A, const std::vector<int>& summands, const std::vector<Vec>& elems) {
    Underlying u = underlying(A, summands);
    Vec v = zero_vec(u.dim);
    for (size_t t = 0; t < summands.size(); ++t) {
        Vec c = A.right_ideal(summands[t]).coords(elems[t]);
        for (size_t k = 0; k < c.size(); ++k) v[u.offsets[t] + static_cast<int>(k)] = c[k];
    }
    return v;
}

// spanning vectors of U(P) e_a (one per Peirce basis element)
std::vector<Vec> corner_basis(const Algebra& A, const std::vector<int>& summands, int a) {
    Underlying u = underlying(A, summands);
    std::vector<Vec> out;
    for (size_t t = 0; t < summands.size(); ++t) {
        const Subspace& Pe = A.peirce(summands[t], a);
        for (const auto& v : Pe.basis()) {
            Vec w = zero_vec(u.dim);
            Vec c = A.right_ideal(summands[t]).coords(v);
            for (size_t k = 0; k < c.size(); ++k) w[u.offsets[t] + static_cast<int>(k)] = c[k];
            out.push_back(std::move(w));
        }
    }
    return out;
}

Mat map_from_generators(const Algebra& A, const std::vector<int>& summands, const RightModule& M,
                        const std::vector<Vec>& images) {
    Underlying u = underlying(A, summands);
    Mat R(M.dim, u.dim);
    for (size_t s = 0; s < summands.size(); ++s) {
        const Subspace& S = A.right_ideal(summands[s]);
        for (int k = 0; k < S.dim(); ++k) {
            Vec img = M.act(images[s], S.basis()[k]);
            for (int r = 0; r < M.dim; ++r) R(r, u.offsets[s] + k) = img[r];
        }
    }
    return R;
}

Mat map_into_projective(const Algebra& A, const std::vector<int>& summands,
                        const std::vector<std::vector<Vec>>& images) {
    std::vector<Vec> cols;
    for (const auto& im : images) cols.push_back(join_underlying(A, summands, im));
    return Mat::from_cols(cols, underlying(A, summands).dim);
}

namespace {

std::optional<Vec> solve_cols(const Mat& A, const Vec& b, bool reverse) {
    if (!reverse) return solve(A, b);
    int n = A.cols();
    Mat R(A.rows(), n);
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < n; ++j) R(i, j) = A(i, n - 1 - j);
    auto x = solve(R, b);
    if (!x) return x;
    Vec y(n);
    for (int j = 0; j < n; ++j) y[j] = (*x)[n - 1 - j];
    return y;
}

Mat lin(const Algebra& A, const ProjComplex& P, int deg) {
    return linear_matrix(A, P.term(deg), P.term(deg + 1), P.diff(deg));
}

Mat mat_from_cols_or_zero(const std::vector<Vec>& cols, int rows) { return Mat::from_cols(cols, rows); }

}  // namespace

// ---------- minimal resolutions ----------

std::vector<std::pair<int, Vec>> top_generators(const RightModule& V, const Subspace& K) {
    const Algebra& A = *V.algebra;
    std::vector<Vec> kj;
    for (const auto& k : K.basis())
        for (const auto& j : A.radical().basis()) kj.push_back(V.act(k, j));
    Subspace acc(V.dim, kj);
    std::vector<std::pair<int, Vec>> gens;
    for (int a = 0; a < A.num_vertices(); ++a) {
        std::vector<Vec> ka;
        for (const auto& k : K.basis()) ka.push_back(V.act(k, A.vertex(a)));
        Subspace Ka(V.dim, ka);
        for (const auto& x : Ka.basis())
            if (acc.add(x)) gens.push_back({a, x});
    }
    if (acc.dim() != K.dim()) throw SolverInconsistent("top generators do not generate the module");
    return gens;
}

AugmentedResolution minimal_projective_resolution(const AlgebraPtr& Ap, const RightModule& M, int length,
                                                 int max_summands) {
    if (length < 0) throw LengthExceeded("negative resolution length");
    const Algebra& A = *Ap;
    AugmentedResolution res;
    res.Q.algebra = Ap;
    res.length = length;
    std::vector<Vec> idb;
    for (int i = 0; i < M.dim; ++i) idb.push_back(unit_vec(M.dim, i));
    auto gens = top_generators(M, Subspace(M.dim, idb));
    std::vector<int> q0;
    for (const auto& g : gens) q0.push_back(g.first);
    res.Q.terms[0] = q0;
    {
        Underlying u = underlying(A, q0);
        res.eps = Mat(M.dim, u.dim);
        for (size_t i = 0; i < gens.size(); ++i) {
            const Subspace& S = A.right_ideal(q0[i]);
            for (int k = 0; k < S.dim(); ++k) {
                Vec img = M.act(gens[i].second, S.basis()[k]);
                for (int r = 0; r < M.dim; ++r) res.eps(r, u.offsets[i] + k) = img[r];
            }
        }
    }
    Subspace kernel(underlying(A, q0).dim, kernel_basis(res.eps));
    std::vector<int> prev = q0;
    for (int i = 1; i <= length && kernel.dim() > 0; ++i) {
        RightModule V = projective_module(Ap, prev);
        auto g = top_generators(V, kernel);
        std::vector<int> qi;
        for (const auto& x : g) qi.push_back(x.first);
        if (max_summands > 0 && static_cast<int>(qi.size()) > max_summands)
            throw LengthExceeded("term " + std::to_string(i) + " has " + std::to_string(qi.size()) + " summands");
        ModMap d(static_cast<int>(prev.size()), static_cast<int>(qi.size()), A.dim());
        for (size_t s = 0; s < g.size(); ++s) {
            auto elems = split_underlying(A, prev, g[s].second);
            for (size_t t = 0; t < prev.size(); ++t) d.at(static_cast<int>(t), static_cast<int>(s)) = elems[t];
        }
        res.Q.terms[-i] = qi;
        res.Q.d[-i] = d;
        kernel = Subspace(underlying(A, qi).dim, kernel_basis(linear_matrix(A, qi, prev, d)));
        prev = qi;
    }
    res.Q.normalize();
    return res;
}

Subspace module_corner(const RightModule& N, int vertex) {
    std::vector<Vec> gens;
    for (int i = 0; i < N.dim; ++i) gens.push_back(N.act(unit_vec(N.dim, i), N.algebra->vertex(vertex)));
    return Subspace(N.dim, gens);
}

Mat precompose_matrix(const Algebra& A, const std::vector<int>& x, const std::vector<int>& y, const ModMap& u,
                      const RightModule& N) {
    (void)A;
    std::vector<Subspace> cy, cx;
    std::vector<int> oy, ox;
    int ny = 0, nx = 0;
    for (int v : y) {
        cy.push_back(module_corner(N, v));
        oy.push_back(ny);
        ny += cy.back().dim();
    }
    for (int v : x) {
        cx.push_back(module_corner(N, v));
        ox.push_back(nx);
        nx += cx.back().dim();
    }
    Mat R(nx, ny);
    for (size_t t = 0; t < y.size(); ++t)
        for (int c = 0; c < cy[t].dim(); ++c)
            for (size_t s = 0; s < x.size(); ++s) {
                const Vec& e = u.at(static_cast<int>(t), static_cast<int>(s));
                if (is_zero(e)) continue;
                Vec img = N.act(cy[t].basis()[c], e);
                Vec co = cx[s].coords(img);
                for (size_t k = 0; k < co.size(); ++k) R(ox[s] + static_cast<int>(k), oy[t] + c) += co[k];
            }
    return R;
}

GradedComplex hom_into_module(const ProjComplex& Q, const RightModule& N) {
    GradedComplex C;
    const Algebra& A = *Q.algebra;
    for (const auto& [deg, t] : Q.terms) {
        int n = 0;
        for (int v : t) n += module_corner(N, v).dim();
        C.dims[-deg] = n;
    }
    for (const auto& [deg, t] : Q.terms) {
        // δ^k : Hom(Q_{-k}, N) -> Hom(Q_{-k-1}, N), k = -deg
        int k = -deg;
        if (!Q.terms.count(deg - 1)) continue;
        C.d[k] = precompose_matrix(A, Q.term(deg - 1), t, Q.diff(deg - 1), N);
    }
    return C;
}

GradedSpace ext_oracle(const AlgebraPtr& A, const RightModule& M, const RightModule& N, int kmax) {
    auto res = minimal_projective_resolution(A, M, kmax + 1);
    GradedComplex C = hom_into_module(res.Q, N);
    Cohomology H = cohomology(C, 0, kmax);
    GradedSpace g;
    for (int k = 0; k <= kmax; ++k) g.set(k, H.dim(k));
    return g;
}

// ---------- periodic resolutions ----------

ModMap PeriodicResolution::d0() const {
    return from_linear(*algebra, term(0), term(n - 1), beta * alpha);
}

PeriodicResolution validate_periodic(const AlgebraPtr& Ap, const RightModule& M, const ProjComplex& P, const Mat& alpha,
                                     const Mat& beta, int n) {
    const Algebra& A = *Ap;
    if (n < 1) throw ShapeError("period n must be at least 1");
    for (const auto& [k, t] : P.terms)
        if (!t.empty() && (k > 0 || k < -(n - 1)))
            throw ShapeError("term in degree " + std::to_string(k) + " outside -(n-1)..0");
    P.check();
    M.check();
    PeriodicResolution R;
    R.algebra = Ap;
    R.M = M;
    R.P = P;
    R.P.normalize();
    R.alpha = alpha;
    R.beta = beta;
    R.n = n;
    const auto& p0 = R.term(0);
    const auto& pn = R.term(n - 1);
    int u0 = underlying(A, p0).dim, un = underlying(A, pn).dim;
    if (alpha.rows() != M.dim || alpha.cols() != u0) throw ShapeError("alpha has wrong shape");
    if (beta.rows() != un || beta.cols() != M.dim) throw ShapeError("beta has wrong shape");
    if (!is_module_map(projective_module(Ap, p0), M, alpha)) throw NotModule("alpha is not A-linear");
    if (!is_module_map(M, projective_module(Ap, pn), beta)) throw NotModule("beta is not A-linear");
    // sequence X_0 = M -β-> P_{n-1} -> ... -> P_0 -α-> M
    std::vector<Mat> maps;
    std::vector<int> dims;
    dims.push_back(M.dim);
    maps.push_back(beta);
    for (int i = n - 1; i >= 0; --i) {
        dims.push_back(underlying(A, R.term(i)).dim);
        maps.push_back(i > 0 ? lin(A, R.P, -i) : alpha);
    }
    dims.push_back(M.dim);
    auto fail = [&](const std::string& pos, int r_in, int r_out, int dim) {
        throw NotExact("position " + pos + ": rank in " + std::to_string(r_in) + ", rank out " + std::to_string(r_out) +
                       ", dim " + std::to_string(dim));
    };
    for (int i = 0; i < n; ++i) {
        int j = n - i;  // X_j = P_i
        const Mat& in = maps[j - 1];
        const Mat& out = maps[j];
        int ri = rank(in), ro = rank(out);
        if (!(out * in).is_zero() || ri + ro != dims[j]) fail(std::to_string(i), ri, ro, dims[j]);
    }
    if (rank(alpha) != M.dim) fail("M (alpha onto)", rank(alpha), 0, M.dim);
    if (rank(beta) != M.dim) fail("M (beta into)", 0, rank(beta), M.dim);
    return R;
}

PeriodicResolution rescale(const PeriodicResolution& R, const Scalar& lambda) {
    PeriodicResolution r = R;
    r.beta = R.beta.scaled(lambda);
    return validate_periodic(r.algebra, r.M, r.P, r.alpha, r.beta, r.n);
}

PeriodicResolution pad_split_acyclic(const PeriodicResolution& R, int vertex, int i) {
    if (i < 0 || i + 1 > R.n - 1) throw ShapeError("split acyclic summand needs 0 <= i <= n-2");
    const Algebra& A = *R.algebra;
    ProjComplex C;
    C.algebra = R.algebra;
    C.terms[-(i + 1)] = {vertex};
    C.terms[-i] = {vertex};
    ModMap id(1, 1, A.dim());
    id.at(0, 0) = A.vertex(vertex);
    C.d[-(i + 1)] = id;
    ProjComplex P = direct_sum(R.P, C);
    int extra = A.right_ideal(vertex).dim();
    Mat alpha = R.alpha, beta = R.beta;
    if (i == 0) alpha = Mat::hstack(R.alpha, Mat(R.M.dim, extra));
    if (i + 1 == R.n - 1) beta = Mat::vstack(R.beta, Mat(extra, R.M.dim));
    return validate_periodic(R.algebra, R.M, P, alpha, beta, R.n);
}

ResolutionWindow build_window(const PeriodicResolution& R, int L) {
    if (L < 0) throw ShapeError("window needs L >= 0");
    ResolutionWindow W;
    W.L = L;
    W.n = R.n;
    const int n = R.n;
    W.C.algebra = R.algebra;
    ModMap d0 = R.d0();
    for (int l = 0; l <= L; ++l) {
        Scalar sg(sgn_pow(static_cast<long long>(l) * n));
        for (int j = 0; j < n; ++j) W.C.terms[ResolutionWindow::degree(n, l, j)] = R.term(j);
        for (int j = 1; j < n; ++j) {
            ModMap m = R.P.diff(-j);
            for (auto& e : m.entries) e = scaled(e, sg);
            W.C.d[ResolutionWindow::degree(n, l, j)] = m;
        }
        if (l >= 1) {
            Scalar sc(sgn_pow(static_cast<long long>(l - 1) * n));
            ModMap m = d0;
            for (auto& e : m.entries) e = scaled(e, sc);
            W.C.d[ResolutionWindow::degree(n, l, 0)] = m;
        }
    }
    W.C.normalize();
    return W;
}

// ---------- Yoneda ----------

Vec flatten(const Mat& m) {
    Vec v;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    return v;
}

PrecomposeBeta precompose_beta(const PeriodicResolution& R) {
    const Algebra& A = *R.algebra;
    const auto& pn = R.term(R.n - 1);
    PrecomposeBeta out;
    // β(m) split per summand
    std::vector<std::vector<Vec>> bsplit;
    for (int m = 0; m < R.M.dim; ++m) bsplit.push_back(split_underlying(A, pn, R.beta.col(m)));
    for (size_t t = 0; t < pn.size(); ++t) {
        Subspace c = module_corner(R.M, pn[t]);
        for (const auto& x : c.basis()) {
            std::vector<Vec> h(pn.size(), zero_vec(R.M.dim));
            h[t] = x;
            Mat hb(R.M.dim, R.M.dim);
            for (int m = 0; m < R.M.dim; ++m) {
                Vec img = R.M.act(x, bsplit[m][t]);
                for (int r = 0; r < R.M.dim; ++r) hb(r, m) = img[r];
            }
            out.h.push_back(std::move(h));
            out.hbeta.push_back(std::move(hb));
        }
    }
    return out;
}

YonedaClass yoneda_product_image(const PeriodicResolution& R, const Mat& g) {
    if (!is_module_map(R.M, R.M, g)) throw NotModule("g is not an endomorphism of M");
    YonedaClass y;
    y.rep = g;
    y.hom = hom_basis(R.M, R.M);
    for (const auto& hb : precompose_beta(R).hbeta) y.image.push_back(flatten(hb));
    std::vector<Vec> hf;
    for (const auto& h : y.hom) hf.push_back(flatten(h));
    y.quotient_dim = subquotient_dim(hf, y.image);
    Subspace im(R.M.dim * R.M.dim, y.image);
    y.is_zero = im.contains(flatten(g));
    // the class map Hom(M,M) -> quotient is onto: hom spans the quotient by construction
    Subspace all = im;
    for (const auto& v : hf) all.add(v);
    if (all.dim() - im.dim() != y.quotient_dim) throw SolverInconsistent("Yoneda quotient rank mismatch");
    return y;
}

YonedaClass yoneda_class(const PeriodicResolution& R) { return yoneda_product_image(R, Mat::identity(R.M.dim)); }

// ---------- lifting ----------

ChainLift lift_identity(const PeriodicResolution& R, const PeriodicResolution& Rp, bool reverse) {
    if (R.n != Rp.n) throw ShapeError("resolutions have different periods");
    if (R.M.dim != Rp.M.dim) throw ShapeError("resolutions of different modules");
    const Algebra& A = *R.algebra;
    const int n = R.n;
    ChainLift L;
    std::vector<Mat> G;  // linear matrices of g_i
    for (int i = 0; i < n; ++i) {
        const auto& src = R.term(i);
        const auto& tgt = Rp.term(i);
        ModMap gi(static_cast<int>(tgt.size()), static_cast<int>(src.size()), A.dim());
        Mat Phi_full = i == 0 ? Rp.alpha : lin(A, Rp.P, -i);
        for (size_t s = 0; s < src.size(); ++s) {
            Vec gen = generator_vec(A, src, static_cast<int>(s));
            Vec target = i == 0 ? R.alpha.apply(gen) : G[i - 1].apply(lin(A, R.P, -i).apply(gen));
            auto B = corner_basis(A, tgt, src[s]);
            int ut = underlying(A, tgt).dim;
            Vec z = zero_vec(ut);
            if (!B.empty()) {
                Mat Bm = mat_from_cols_or_zero(B, ut);
                auto c = solve_cols(Phi_full * Bm, target, reverse);
                if (!c) throw SolverInconsistent("lifting system at P_" + std::to_string(i) + " has no solution");
                z = Bm.apply(*c);
            } else if (!is_zero(target)) {
                throw SolverInconsistent("lifting system at P_" + std::to_string(i) + " has no solution");
            }
            auto elems = split_underlying(A, tgt, z);
            for (size_t t = 0; t < tgt.size(); ++t) gi.at(static_cast<int>(t), static_cast<int>(s)) = elems[t];
        }
        G.push_back(linear_matrix(A, src, tgt, gi));
        L.g.push_back(std::move(gi));
    }
    L.gn = Mat(R.M.dim, R.M.dim);
    for (int m = 0; m < R.M.dim; ++m) {
        Vec target = G[n - 1].apply(R.beta.col(m));
        auto x = solve(Rp.beta, target);
        if (!x) throw SolverInconsistent("top map of the lift does not exist");
        for (int r = 0; r < R.M.dim; ++r) L.gn(r, m) = (*x)[r];
    }
    // A zero class leaves g_{n-1} free along β'. The lifting equations can then pick g_n = 0
    // (e.g. P_{n-2} = 0); add β'φ with φβ = Id − g_n so that g_n = Id.
    if (!inverse(L.gn)) {
        PrecomposeBeta pb = precompose_beta(R);
        if (!pb.hbeta.empty()) {
            Mat span = Mat::from_cols([&] {
                std::vector<Vec> cols;
                for (const auto& hb : pb.hbeta) cols.push_back(flatten(hb));
                return cols;
            }(), R.M.dim * R.M.dim);
            if (auto c = solve(span, flatten(Mat::identity(R.M.dim) - L.gn))) {
                const auto& src = R.term(n - 1);
                const auto& tgt = Rp.term(n - 1);
                Mat phi(R.M.dim, underlying(A, src).dim);
                for (size_t k = 0; k < pb.h.size(); ++k)
                    if (!(*c)[k].is_zero())
                        phi = phi + map_from_generators(A, src, R.M, pb.h[k]).scaled((*c)[k]);
                Mat gl = G[n - 1] + Rp.beta * phi;
                L.g[n - 1] = from_linear(A, src, tgt, gl);
                L.gn = Mat::identity(R.M.dim);
            }
        }
    }
    return L;
}

bool is_lift(const PeriodicResolution& R, const PeriodicResolution& Rp, const ChainLift& g, std::string* why) {
    const Algebra& A = *R.algebra;
    const int n = R.n;
    auto G = [&](int i) { return linear_matrix(A, R.term(i), Rp.term(i), g.g[i]); };
    auto bad = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (Rp.alpha * G(0) != R.alpha) return bad("alpha' g_0 != alpha");
    for (int i = 1; i < n; ++i)
        if (lin(A, Rp.P, -i) * G(i) != G(i - 1) * lin(A, R.P, -i)) return bad("square at P_" + std::to_string(i));
    if (Rp.beta * g.gn != G(n - 1) * R.beta) return bad("beta' g_n != g_{n-1} beta");
    return true;
}

std::optional<Homotopy> chain_homotopy_between(const PeriodicResolution& R, const PeriodicResolution& Rp,
                                               const ChainLift& g, const ChainLift& h) {
    const Algebra& A = *R.algebra;
    const int n = R.n;
    // unknown blocks (i, s) with spanning vectors in U(P'_{i+1}) or in M
    struct Block {
        int i, s, offset;
        std::vector<Vec> B;
    };
    std::vector<std::vector<Block>> blocks(n);
    int nu = 0;
    for (int i = 0; i < n; ++i) {
        const auto& src = R.term(i);
        for (size_t s = 0; s < src.size(); ++s) {
            Block b{i, static_cast<int>(s), nu, {}};
            if (i <= n - 2)
                b.B = corner_basis(A, Rp.term(i + 1), src[s]);
            else
                b.B = module_corner(Rp.M, src[s]).basis();
            nu += static_cast<int>(b.B.size());
            blocks[i].push_back(std::move(b));
        }
    }
    std::vector<Vec> rows;
    Vec rhs;
    for (int i = 0; i < n; ++i) {
        const auto& src = R.term(i);
        const auto& tgt = Rp.term(i);
        int ut = underlying(A, tgt).dim;
        Mat Gi = linear_matrix(A, src, tgt, g.g[i]), Hi = linear_matrix(A, src, tgt, h.g[i]);
        Mat D = i <= n - 2 ? lin(A, Rp.P, -(i + 1)) : Rp.beta;
        RightModule V = projective_module(R.algebra, tgt);
        ModMap di = i >= 1 ? R.P.diff(-i) : ModMap();
        for (size_t s = 0; s < src.size(); ++s) {
            Vec gen = generator_vec(A, src, static_cast<int>(s));
            Vec target = (Gi - Hi).apply(gen);
            Mat E(ut, nu);
            const Block& b = blocks[i][s];
            for (size_t j = 0; j < b.B.size(); ++j) {
                Vec col = D.apply(b.B[j]);
                for (int r = 0; r < ut; ++r) E(r, b.offset + static_cast<int>(j)) += col[r];
            }
            if (i >= 1) {
                // k_{i-1}(d_i gen_s) = sum_b k_{i-1}(gen_b) . d_i(b, s)
                for (const Block& pb : blocks[i - 1]) {
                    const Vec& u = di.at(pb.s, static_cast<int>(s));
                    if (is_zero(u)) continue;
                    for (size_t j = 0; j < pb.B.size(); ++j) {
                        Vec col = V.act(pb.B[j], u);
                        for (int r = 0; r < ut; ++r) E(r, pb.offset + static_cast<int>(j)) += col[r];
                    }
                }
            }
            for (int r = 0; r < ut; ++r) {
                rows.push_back(E.row(r));
                rhs.push_back(target[r]);
            }
        }
    }
    Homotopy H;
    Vec x = zero_vec(nu);
    if (!rows.empty()) {
        auto sol = solve(Mat::from_rows(rows, nu), rhs);
        if (!sol) return std::nullopt;
        x = *sol;
    }
    for (int i = 0; i < n; ++i) {
        const auto& src = R.term(i);
        if (i <= n - 2) {
            const auto& tgt = Rp.term(i + 1);
            ModMap k(static_cast<int>(tgt.size()), static_cast<int>(src.size()), A.dim());
            for (const Block& b : blocks[i]) {
                Vec z = zero_vec(underlying(A, tgt).dim);
                for (size_t j = 0; j < b.B.size(); ++j) axpy(z, x[b.offset + static_cast<int>(j)], b.B[j]);
                auto elems = split_underlying(A, tgt, z);
                for (size_t t = 0; t < tgt.size(); ++t) k.at(static_cast<int>(t), b.s) = elems[t];
            }
            H.k.push_back(std::move(k));
        } else {
            for (const Block& b : blocks[i]) {
                Vec z = zero_vec(Rp.M.dim);
                for (size_t j = 0; j < b.B.size(); ++j) axpy(z, x[b.offset + static_cast<int>(j)], b.B[j]);
                H.top.push_back(std::move(z));
            }
        }
    }
    return H;
}

bool module_is_simple(const RightModule& M) {
    if (M.dim != 1) return false;
    try {
        for (const auto& j : M.algebra->radical().basis())
            if (!is_zero(M.act(unit_vec(1, 0), j))) return false;
    } catch (const NotBasic&) {
        return hom_basis(M, M).size() == 1;
    }
    return true;
}

std::string ClassComparison::str() const {
    switch (kind) {
        case Equal: return "Equal";
        case BothZero: return "BothZero";
        default: return "Scalar(" + lambda.str() + ")";
    }
}

namespace {

// c with g_n - c Id in Im(∘β), or nullopt
std::optional<Scalar> proportionality(const PeriodicResolution& R, const Mat& gn) {
    Subspace im(R.M.dim * R.M.dim);
    for (const auto& hb : precompose_beta(R).hbeta) im.add(flatten(hb));
    Vec id = flatten(Mat::identity(R.M.dim));
    Vec g = flatten(gn);
    Vec rid = im.reduce(id), rg = im.reduce(g);
    if (is_zero(rid)) return Scalar(1);  // class zero: every c works, pick 1
    // rg = c * rid
    Scalar c(0);
    bool found = false;
    for (size_t k = 0; k < rid.size(); ++k)
        if (!rid[k].is_zero()) {
            c = rg[k] / rid[k];
            found = true;
            break;
        }
    if (!found) return std::nullopt;
    for (size_t k = 0; k < rid.size(); ++k)
        if (rg[k] != c * rid[k]) return std::nullopt;
    return c;
}

}  // namespace

ClassComparison compare_classes(const PeriodicResolution& R, const PeriodicResolution& Rp) {
    YonedaClass a = yoneda_class(R), b = yoneda_class(Rp);
    ClassComparison out;
    if (a.is_zero && b.is_zero) {
        out.kind = ClassComparison::BothZero;
        return out;
    }
    if (a.is_zero != b.is_zero) throw ClassMismatch("exactly one of the two classes vanishes");
    ChainLift g = lift_identity(R, Rp);
    auto c = proportionality(R, g.gn);
    if (!c || c->is_zero()) throw ClassMismatch("[g_n] is not a multiple of the class of the identity");
    out.lambda = *c;
    out.kind = c->is_one() ? ClassComparison::Equal : ClassComparison::ScalarMultiple;
    if (out.kind == ClassComparison::Equal) periodic_quasi_iso(R, Rp);  // certificate
    return out;
}

PeriodicQuasiIso periodic_quasi_iso(const PeriodicResolution& R, const PeriodicResolution& Rp) {
    const Algebra& A = *R.algebra;
    const int n = R.n;
    ChainLift g = lift_identity(R, Rp);
    auto c = proportionality(R, g.gn);
    if (!c || c->is_zero()) throw ClassMismatch("classes are not proportional");
    bool simple = module_is_simple(R.M);
    bool zero = yoneda_class(R).is_zero;
    if (!simple && !zero && !c->is_one()) throw ClassMismatch("module is not simple and the classes differ");
    // h with h∘β = g_n − c Id
    PrecomposeBeta pb = precompose_beta(R);
    Mat target = g.gn - Mat::identity(R.M.dim).scaled(*c);
    std::vector<Vec> cols;
    for (const auto& hb : pb.hbeta) cols.push_back(flatten(hb));
    std::vector<Vec> hgen(R.term(n - 1).size(), zero_vec(R.M.dim));
    if (!is_zero(flatten(target))) {
        auto x = solve(Mat::from_cols(cols, R.M.dim * R.M.dim), flatten(target));
        if (!x) throw SolverInconsistent("g_n − λ Id is not in Im(∘β)");
        for (size_t j = 0; j < pb.h.size(); ++j)
            for (size_t t = 0; t < hgen.size(); ++t) axpy(hgen[t], (*x)[j], pb.h[j][t]);
    }
    // β'∘h as a module map P_{n-1} -> P'_{n-1}
    const auto& pn = R.term(n - 1);
    const auto& ppn = Rp.term(n - 1);
    Underlying un = underlying(A, pn);
    Mat Hlin(R.M.dim, un.dim);
    for (size_t t = 0; t < pn.size(); ++t) {
        const Subspace& S = A.right_ideal(pn[t]);
        for (int k = 0; k < S.dim(); ++k) {
            Vec img = R.M.act(hgen[t], S.basis()[k]);
            for (int r = 0; r < R.M.dim; ++r) Hlin(r, un.offsets[t] + k) = img[r];
        }
    }
    ModMap bh = from_linear(A, pn, ppn, Rp.beta * Hlin);
    PeriodicQuasiIso Q;
    Q.g = g.g;
    Q.g[n - 1] = add(Q.g[n - 1], bh, Scalar(-1));
    Q.lambda = *c;
    // verify: chain map, α' g_0 = α, g_{n-1} β = λ β'
    std::vector<Mat> G;
    for (int i = 0; i < n; ++i) G.push_back(linear_matrix(A, R.term(i), Rp.term(i), Q.g[i]));
    if (Rp.alpha * G[0] != R.alpha) throw SolverInconsistent("corrected ladder breaks alpha");
    for (int i = 1; i < n; ++i)
        if (lin(A, Rp.P, -i) * G[i] != G[i - 1] * lin(A, R.P, -i)) throw SolverInconsistent("corrected ladder is not a chain map");
    if (G[n - 1] * R.beta != Rp.beta.scaled(*c)) throw SolverInconsistent("corrected ladder does not commute with beta");
    GradedComplex UP = underlying_complex(R.P), UQ = underlying_complex(Rp.P);
    Cohomology HP = cohomology(UP, -(n - 1), 0), HQ = cohomology(UQ, -(n - 1), 0);
    for (int k = -(n - 1); k <= 0; ++k) {
        int dp = HP.dim(k), dq = HQ.dim(k);
        if (dp != dq) throw SolverInconsistent("cohomology dimensions differ in degree " + std::to_string(k));
        if (dp == 0) continue;
        Mat Mk(dq, dp);
        for (int j = 0; j < dp; ++j) {
            Vec img = G[-k].apply(HP.pieces.at(k).reps[j]);
            Vec co = HQ.coords(k, img);
            for (int i = 0; i < dq; ++i) Mk(i, j) = co[i];
        }
        if (!inverse(Mk)) throw SolverInconsistent("induced map on H^" + std::to_string(k) + " is not invertible");
        Q.cohomology_maps[k] = Mk;
    }
    return Q;
}

}  // namespace tx
