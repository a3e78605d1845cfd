#include "tx/ainfty.hpp"

#include <algorithm>
#include <sstream>

#include "tx/errors.hpp"

namespace tx {

namespace {

SparseVec single(int i, const Scalar& c = Scalar(1)) {
    SparseVec s;
    s.add(i, c);
    return s;
}

// apply a basis-wise linear map
SparseVec lin(const std::vector<SparseVec>& M, const SparseVec& v) {
    SparseVec r;
    for (const auto& [i, c] : v.e)
        for (const auto& [j, x] : M[i].e) r.add(j, c * x);
    r.normalize();
    return r;
}

std::string tuple_str(const AInfCat& A, const Tuple& t) {
    std::string s = "(";
    for (size_t j = 0; j < t.size(); ++j) {
        if (j) s += ", ";
        s += A.labels.empty() ? std::to_string(t[j]) : A.labels[t[j]];
    }
    return s + ")";
}

// multilinear expansion of args over composable basis tuples of A
void expand(const AInfCat& A, const std::vector<SparseVec>& args, size_t q, Tuple& cur, const Scalar& coef,
            const std::function<void(const Tuple&, const Scalar&)>& f) {
    if (q == args.size()) {
        f(cur, coef);
        return;
    }
    for (const auto& [i, c] : args[q].e) {
        if (q > 0 && A.src[cur.back()] != A.tgt[i]) continue;
        cur.push_back(i);
        expand(A, args, q + 1, cur, coef * c, f);
        cur.pop_back();
    }
}

void expand(const AInfCat& A, const std::vector<SparseVec>& args,
            const std::function<void(const Tuple&, const Scalar&)>& f) {
    for (const auto& a : args)
        if (a.empty()) return;
    Tuple cur;
    expand(A, args, 0, cur, Scalar(1), f);
}

int shifted_sum(const AInfCat& A, const Tuple& t, size_t upto) {
    int s = 0;
    for (size_t j = 0; j < upto; ++j) s += A.deg[t[j]] - 1;
    return s;
}

Tuple splice(const Tuple& t, size_t r, size_t s, int x) {
    Tuple out(t.begin(), t.begin() + r);
    out.push_back(x);
    out.insert(out.end(), t.begin() + r + s, t.end());
    return out;
}

// compositions of k as cut masks: pieces of t
std::vector<std::vector<Tuple>> compositions(const Tuple& t) {
    std::vector<std::vector<Tuple>> out;
    int k = static_cast<int>(t.size());
    for (int mask = 0; mask < (1 << (k - 1)); ++mask) {
        std::vector<Tuple> pieces;
        Tuple cur{t[0]};
        for (int j = 1; j < k; ++j) {
            if (mask & (1 << (j - 1))) {
                pieces.push_back(cur);
                cur.clear();
            }
            cur.push_back(t[j]);
        }
        pieces.push_back(cur);
        out.push_back(std::move(pieces));
    }
    return out;
}

std::vector<int> identity_objects(int n) {
    std::vector<int> o(n);
    for (int i = 0; i < n; ++i) o[i] = i;
    return o;
}

}  // namespace

// ---------- categories ----------

bool AInfCat::composable(const Tuple& t) const {
    for (size_t j = 0; j + 1 < t.size(); ++j)
        if (src[t[j]] != tgt[t[j + 1]]) return false;
    return true;
}

const SparseVec* AInfCat::mk(const Tuple& t) const {
    size_t k = t.size();
    if (k >= m.size()) return nullptr;
    auto it = m[k].find(t);
    return it == m[k].end() ? nullptr : &it->second;
}

bool AInfCat::has(int s, int t, int d) const { return present.count({s, t, d}) > 0; }

void AInfCat::index() {
    present.clear();
    for (int i = 0; i < dim(); ++i) present.insert({src[i], tgt[i], deg[i]});
}

std::vector<int> AInfCat::unit_indices() const {
    std::vector<int> u;
    for (const auto& v : units)
        u.push_back(v.e.size() == 1 && v.e[0].second.is_one() ? v.e[0].first : -1);
    return u;
}

AInfCat from_dga(const DGAlg& D, int K) {
    AInfCat A;
    A.nobj = D.nobj;
    A.deg = D.deg;
    A.src = D.src;
    A.tgt = D.tgt;
    A.labels = D.labels;
    A.units = D.units;
    A.K = std::max(K, 2);
    A.m.resize(A.K + 1);
    for (int i = 0; i < D.dim(); ++i)
        if (!D.d[i].empty()) A.m[1][{i}] = D.d[i];
    for (const auto& [key, v] : D.prod)
        if (!v.empty()) A.m[2][{static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu)}] = v;
    A.index();
    return A;
}

int bar_sign(const AInfCat& A, const Tuple& t) {
    long long s = 0;
    int k = static_cast<int>(t.size());
    for (int j = 0; j < k; ++j) s += static_cast<long long>(k - 1 - j) * (A.deg[t[j]] - 1);
    return sgn_pow(s + static_cast<long long>(k) * (k - 1) / 2);
}

SparseVec apply_m(const AInfCat& A, int k, const std::vector<SparseVec>& args) {
    SparseVec r;
    if (static_cast<int>(args.size()) != k) throw ShapeError("arity mismatch");
    expand(A, args, [&](const Tuple& t, const Scalar& c) {
        if (const SparseVec* v = A.mk(t))
            for (const auto& [i, x] : v->e) r.add(i, c * x);
    });
    r.normalize();
    return r;
}

SparseVec apply_b(const AInfCat& A, int k, const std::vector<SparseVec>& args) {
    SparseVec r;
    if (static_cast<int>(args.size()) != k) throw ShapeError("arity mismatch");
    expand(A, args, [&](const Tuple& t, const Scalar& c) {
        if (const SparseVec* v = A.mk(t)) {
            Scalar cc = bar_sign(A, t) < 0 ? -c : c;
            for (const auto& [i, x] : v->e) r.add(i, cc * x);
        }
    });
    r.normalize();
    return r;
}

void for_each_tuple(const AInfCat& A, int k, int shift, const AInfCat& target, const std::vector<int>& obj,
                    const std::function<bool(const Tuple&)>& visit) {
    if (k < 1) return;
    std::vector<std::vector<int>> ending_at(A.nobj);  // basis elements with tgt == object
    for (int i = 0; i < A.dim(); ++i) ending_at[A.tgt[i]].push_back(i);
    auto om = [&](int x) { return obj.empty() ? x : obj[x]; };
    Tuple cur;
    bool stop = false;
    std::function<void(int)> rec = [&](int degsum) {
        if (stop) return;
        if (static_cast<int>(cur.size()) == k) {
            if (target.has(om(A.src[cur.back()]), om(A.tgt[cur.front()]), degsum + shift))
                if (!visit(cur)) stop = true;
            return;
        }
        const std::vector<int>* cands = nullptr;
        std::vector<int> all;
        if (cur.empty()) {
            all.resize(A.dim());
            for (int i = 0; i < A.dim(); ++i) all[i] = i;
            cands = &all;
        } else {
            cands = &ending_at[A.src[cur.back()]];
        }
        for (int i : *cands) {
            cur.push_back(i);
            rec(degsum + A.deg[i]);
            cur.pop_back();
            if (stop) return;
        }
    };
    rec(0);
}

CheckReport stasheff_check(const AInfCat& A, int maxN) {
    CheckReport rep;
    if (maxN < 0) maxN = A.K;
    rep.max_arity = maxN;
    for (int N = 1; N <= maxN && rep.ok; ++N) {
        for_each_tuple(A, N, 3 - N, A, {}, [&](const Tuple& a) {
            SparseVec acc;
            for (int s = 1; s <= std::min(N, A.K); ++s)
                for (int r = 0; r + s <= N; ++r) {
                    int t = N - r - s, u = r + 1 + t;
                    if (u > A.K) continue;
                    Tuple sub(a.begin() + r, a.begin() + r + s);
                    const SparseVec* inner = A.mk(sub);
                    if (!inner) continue;
                    int pre = 0;
                    for (int j = 0; j < r; ++j) pre += A.deg[a[j]];
                    int sign = sgn_pow(r + s * t) * sgn_pow(static_cast<long long>(s) * pre);
                    for (const auto& [x, c] : inner->e) {
                        const SparseVec* outer = A.mk(splice(a, r, s, x));
                        if (!outer) continue;
                        Scalar cc = sign < 0 ? -c : c;
                        for (const auto& [y, v] : outer->e) acc.add(y, cc * v);
                    }
                }
            acc.normalize();
            ++rep.checked;
            if (!acc.empty()) {
                rep.fail("Stasheff identity fails at arity " + std::to_string(N) + " on " + tuple_str(A, a));
                return false;
            }
            return true;
        });
    }
    return rep;
}

CheckReport strict_unitality_check(const AInfCat& A) {
    CheckReport rep;
    rep.max_arity = A.K;
    auto u = A.unit_indices();
    std::set<int> units;
    for (size_t x = 0; x < u.size(); ++x) {
        if (u[x] < 0) {
            rep.fail("unit of object " + std::to_string(x) + " is not a basis vector");
            return rep;
        }
        units.insert(u[x]);
    }
    for (int a = 0; a < A.dim(); ++a) {
        int el = u[A.tgt[a]], er = u[A.src[a]];
        const SparseVec* l = A.mk({el, a});
        const SparseVec* r = A.mk({a, er});
        rep.checked += 2;
        if (!l || !(*l == single(a))) rep.fail("m_2(e, " + A.labels[a] + ") != " + A.labels[a]);
        if (!r || !(*r == single(a))) rep.fail("m_2(" + A.labels[a] + ", e) != " + A.labels[a]);
    }
    for (int k = 1; k < static_cast<int>(A.m.size()); ++k) {
        if (k == 2) continue;
        for (const auto& [t, v] : A.m[k]) {
            ++rep.checked;
            if (v.empty()) continue;
            for (int x : t)
                if (units.count(x)) {
                    rep.fail("m_" + std::to_string(k) + " nonzero on unit input " + tuple_str(A, t));
                    break;
                }
        }
    }
    return rep;
}

std::map<std::pair<int, int>, std::map<int, int>> block_dims(const AInfCat& A) {
    std::map<std::pair<int, int>, std::map<int, int>> out;
    for (int i = 0; i < A.dim(); ++i) out[{A.src[i], A.tgt[i]}][A.deg[i]]++;
    return out;
}

// ---------- functors ----------

SparseVec AInfFunctor::apply(const std::vector<SparseVec>& args) const {
    SparseVec r;
    expand(*source, args, [&](const Tuple& t, const Scalar& c) {
        SparseVec v = component(t);
        for (const auto& [i, x] : v.e) r.add(i, c * x);
    });
    r.normalize();
    return r;
}

SparseVec TableFunctor::component(const Tuple& t) const {
    auto it = table.find(t);
    return it == table.end() ? SparseVec{} : it->second;
}

SparseVec StrictFunctor::component(const Tuple& t) const {
    if (t.size() != 1) return {};
    return images[t[0]];
}

CompositeFunctor::CompositeFunctor(FunctorPtr g, FunctorPtr f) : g_(std::move(g)), f_(std::move(f)) {
    if (g_->source.get() != f_->target.get() && g_->source->dim() != f_->target->dim())
        throw ShapeError("functors do not compose");
    source = f_->source;
    target = g_->target;
    K = std::min(g_->K, f_->K);
    for (int x : f_->obj) obj.push_back(g_->obj[x]);
}

SparseVec CompositeFunctor::component(const Tuple& t) const {
    auto it = memo_.find(t);
    if (it != memo_.end()) return it->second;
    SparseVec r;
    for (const auto& pieces : compositions(t)) {
        std::vector<SparseVec> args;
        bool zero = false;
        for (const auto& p : pieces) {
            args.push_back(f_->component(p));
            if (args.back().empty()) {
                zero = true;
                break;
            }
        }
        if (zero) continue;
        r.axpy(Scalar(1), g_->apply(args));
    }
    memo_.emplace(t, r);
    return r;
}

FunctorPtr identity_functor(std::shared_ptr<const AInfCat> A, int K) {
    auto F = std::make_shared<StrictFunctor>();
    F->source = A;
    F->target = A;
    F->K = K;
    F->obj = identity_objects(A->nobj);
    for (int i = 0; i < A->dim(); ++i) F->images.push_back(single(i));
    return F;
}

FunctorPtr compose_functors(FunctorPtr g, FunctorPtr f) { return std::make_shared<CompositeFunctor>(g, f); }

std::shared_ptr<TableFunctor> materialize(const AInfFunctor& F) {
    auto T = std::make_shared<TableFunctor>();
    T->source = F.source;
    T->target = F.target;
    T->obj = F.obj;
    T->K = F.K;
    for (int k = 1; k <= F.K; ++k)
        for_each_tuple(*F.source, k, 1 - k, *F.target, F.obj, [&](const Tuple& t) {
            SparseVec v = F.component(t);
            if (!v.empty()) T->table.emplace(t, std::move(v));
            return true;
        });
    return T;
}

CheckReport functor_check(const AInfFunctor& F, int maxk) {
    CheckReport rep;
    if (maxk < 0 || maxk > F.K) maxk = F.K;
    rep.max_arity = maxk;
    const AInfCat& A = *F.source;
    const AInfCat& B = *F.target;
    for (int k = 1; k <= maxk && rep.ok; ++k) {
        for_each_tuple(A, k, 2 - k, B, F.obj, [&](const Tuple& a) {
            SparseVec acc;
            for (const auto& pieces : compositions(a)) {
                int r = static_cast<int>(pieces.size());
                if (r >= static_cast<int>(B.m.size())) continue;
                if (B.m[r].empty()) continue;
                std::vector<SparseVec> args;
                bool zero = false;
                for (const auto& p : pieces) {
                    args.push_back(F.component(p));
                    if (args.back().empty()) {
                        zero = true;
                        break;
                    }
                }
                if (zero) continue;
                acc.axpy(Scalar(1), apply_b(B, r, args));
            }
            for (int s = 1; s <= std::min(k, A.K); ++s)
                for (int r = 0; r + s <= k; ++r) {
                    Tuple sub(a.begin() + r, a.begin() + r + s);
                    const SparseVec* inner = A.mk(sub);
                    if (!inner) continue;
                    int sign = sgn_pow(shifted_sum(A, a, r)) * bar_sign(A, sub);
                    for (const auto& [x, c] : inner->e) {
                        SparseVec v = F.component(splice(a, r, s, x));
                        acc.axpy(sign < 0 ? c : -c, v);
                    }
                }
            ++rep.checked;
            if (!acc.empty()) {
                rep.fail("functor identity fails at arity " + std::to_string(k) + " on " + tuple_str(A, a));
                return false;
            }
            return true;
        });
    }
    return rep;
}

CheckReport functor_unitality_check(const AInfFunctor& F) {
    CheckReport rep;
    rep.max_arity = F.K;
    const AInfCat& A = *F.source;
    const AInfCat& B = *F.target;
    auto u = A.unit_indices();
    std::set<int> units;
    for (size_t x = 0; x < u.size(); ++x) {
        if (u[x] < 0) {
            rep.fail("source unit is not a basis vector");
            return rep;
        }
        units.insert(u[x]);
        ++rep.checked;
        if (!(F.component({u[x]}) == B.units[F.obj[x]])) rep.fail("F_1 does not preserve the unit of object " + std::to_string(x));
    }
    for (int k = 2; k <= F.K; ++k)
        for_each_tuple(A, k, 1 - k, B, F.obj, [&](const Tuple& t) {
            bool hit = false;
            for (int x : t) hit = hit || units.count(x);
            if (!hit) return true;
            ++rep.checked;
            if (!F.component(t).empty()) {
                rep.fail("F_" + std::to_string(k) + " nonzero on unit input " + tuple_str(A, t));
                return false;
            }
            return true;
        });
    return rep;
}

namespace {

struct BlockKey {
    int s, t, d;
    bool operator<(const BlockKey& o) const { return std::tie(s, t, d) < std::tie(o.s, o.t, o.d); }
};

std::map<BlockKey, std::vector<int>> blocks_of(const AInfCat& A) {
    std::map<BlockKey, std::vector<int>> b;
    for (int i = 0; i < A.dim(); ++i) b[{A.src[i], A.tgt[i], A.deg[i]}].push_back(i);
    return b;
}

// per source block: F_1 matrix (target block basis x source block basis); throws on stray output
std::map<BlockKey, Mat> linear_blocks(const AInfFunctor& F, std::map<BlockKey, std::vector<int>>& sb,
                                      std::map<BlockKey, std::vector<int>>& tb) {
    const AInfCat& A = *F.source;
    const AInfCat& B = *F.target;
    sb = blocks_of(A);
    tb = blocks_of(B);
    std::map<BlockKey, Mat> out;
    for (const auto& [key, idx] : sb) {
        BlockKey tk{F.obj[key.s], F.obj[key.t], key.d};
        const auto& tidx = tb[tk];
        std::map<int, int> loc;
        for (size_t j = 0; j < tidx.size(); ++j) loc[tidx[j]] = static_cast<int>(j);
        Mat M(static_cast<int>(tidx.size()), static_cast<int>(idx.size()));
        for (size_t j = 0; j < idx.size(); ++j)
            for (const auto& [y, c] : F.component({idx[j]}).e) {
                auto it = loc.find(y);
                if (it == loc.end()) throw ShapeError("F_1 leaves its block on " + A.labels[idx[j]]);
                M(it->second, static_cast<int>(j)) = c;
            }
        out[key] = M;
    }
    (void)B;
    return out;
}

}  // namespace

CheckReport linear_part_invertible(const AInfFunctor& F) {
    CheckReport rep;
    rep.max_arity = 1;
    std::map<BlockKey, std::vector<int>> sb, tb;
    auto mats = linear_blocks(F, sb, tb);
    for (const auto& [key, M] : mats) {
        ++rep.checked;
        if (M.rows() != M.cols() || !inverse(M))
            rep.fail("F_1 not invertible on block " + std::to_string(key.s) + "->" + std::to_string(key.t) +
                     " degree " + std::to_string(key.d));
    }
    // target blocks missed by the source
    for (const auto& [key, idx] : tb) {
        bool hit = false;
        for (const auto& [sk, _] : sb)
            if (F.obj[sk.s] == key.s && F.obj[sk.t] == key.t && sk.d == key.d) hit = true;
        if (!hit) rep.fail("target block " + std::to_string(key.s) + "->" + std::to_string(key.t) + " degree " +
                           std::to_string(key.d) + " is not hit");
    }
    return rep;
}

CheckReport is_identity_functor(const AInfFunctor& F) {
    CheckReport rep;
    rep.max_arity = F.K;
    const AInfCat& A = *F.source;
    if (A.dim() != F.target->dim()) {
        rep.fail("source and target differ");
        return rep;
    }
    for (int i = 0; i < A.dim(); ++i) {
        ++rep.checked;
        if (!(F.component({i}) == single(i))) rep.fail("F_1 is not the identity on " + A.labels[i]);
    }
    for (int k = 2; k <= F.K && rep.ok; ++k)
        for_each_tuple(A, k, 1 - k, *F.target, F.obj, [&](const Tuple& t) {
            ++rep.checked;
            if (!F.component(t).empty()) {
                rep.fail("F_" + std::to_string(k) + " nonzero on " + tuple_str(A, t));
                return false;
            }
            return true;
        });
    return rep;
}

std::shared_ptr<TableFunctor> ainfty_inverse(const AInfFunctor& F) {
    const AInfCat& A = *F.source;
    const AInfCat& B = *F.target;
    auto G = std::make_shared<TableFunctor>();
    G->source = F.target;
    G->target = F.source;
    G->K = F.K;
    G->obj.assign(B.nobj, -1);
    for (int x = 0; x < A.nobj; ++x) {
        if (F.obj[x] < 0 || F.obj[x] >= B.nobj || G->obj[F.obj[x]] >= 0)
            throw LinearNotInvertible("object map is not a bijection");
        G->obj[F.obj[x]] = x;
    }
    if (A.nobj != B.nobj) throw LinearNotInvertible("object counts differ");
    std::map<BlockKey, std::vector<int>> sb, tb;
    auto mats = linear_blocks(F, sb, tb);
    std::vector<SparseVec> g1(B.dim());
    std::vector<bool> covered(B.dim(), false);
    for (const auto& [key, M] : mats) {
        auto inv = M.rows() == M.cols() ? inverse(M) : std::nullopt;
        if (!inv) throw LinearNotInvertible("F_1 is singular on a block of degree " + std::to_string(key.d));
        const auto& sidx = sb[key];
        const auto& tidx = tb[{F.obj[key.s], F.obj[key.t], key.d}];
        for (size_t j = 0; j < tidx.size(); ++j) {
            SparseVec v;
            for (size_t i = 0; i < sidx.size(); ++i) v.add(sidx[i], (*inv)(static_cast<int>(i), static_cast<int>(j)));
            v.normalize();
            g1[tidx[j]] = v;
            covered[tidx[j]] = true;
        }
    }
    for (int j = 0; j < B.dim(); ++j) {
        if (!covered[j]) throw LinearNotInvertible("F_1 misses " + B.labels[j]);
        if (!g1[j].empty()) G->table[{j}] = g1[j];
    }
    for (int k = 2; k <= F.K; ++k) {
        std::map<Tuple, SparseVec> add;
        for_each_tuple(B, k, 1 - k, A, G->obj, [&](const Tuple& y) {
            std::vector<SparseVec> xs;
            for (int j : y) xs.push_back(g1[j]);
            SparseVec S;
            expand(A, xs, [&](const Tuple& a, const Scalar& c) {
                for (const auto& pieces : compositions(a)) {
                    if (static_cast<int>(pieces.size()) == k) continue;
                    std::vector<SparseVec> args;
                    bool zero = false;
                    for (const auto& p : pieces) {
                        args.push_back(F.component(p));
                        if (args.back().empty()) {
                            zero = true;
                            break;
                        }
                    }
                    if (zero) continue;
                    S.axpy(c, G->apply(args));
                }
            });
            if (!S.empty()) add[y] = S.scaled(Scalar(-1));
            return true;
        });
        for (auto& [t, v] : add) G->table[t] = std::move(v);
    }
    return G;
}

// ---------- transfer ----------

namespace {

class PfunFunctor : public AInfFunctor {
public:
    PfunFunctor(std::shared_ptr<const DGAlg> D, const Splitting& S) : D_(std::move(D)), S_(S) {
        for (const auto& v : S_.p) ip_.push_back(lin(S_.i, v));
    }
    SparseVec component(const Tuple& t) const override {
        if (t.size() == 1) return S_.p[t[0]];
        auto it = memo_.find(t);
        if (it != memo_.end()) return it->second;
        std::map<Tuple, Scalar> T{{t, Scalar(1)}};
        for (size_t step = 1; step < t.size() && !T.empty(); ++step) T = delta(homotopy(T));
        SparseVec r;
        for (const auto& [x, c] : T)
            if (x.size() == 1)
                for (const auto& [h, v] : S_.p[x[0]].e) r.add(h, c * v);
        r.normalize();
        memo_.emplace(t, r);
        return r;
    }

private:
    using Tensor = std::map<Tuple, Scalar>;

    static void put(Tensor& T, const Tuple& x, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = T.emplace(x, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) T.erase(it);
        }
    }

    // H_T = sum_q 1^q ⊗ h ⊗ (ip)^{rest}, Koszul signs on shifted degrees
    Tensor homotopy(const Tensor& T) const {
        Tensor out;
        for (const auto& [x, c] : T) {
            int pre = 0;
            for (size_t q = 0; q < x.size(); ++q) {
                std::vector<const SparseVec*> f;
                bool zero = false;
                if (S_.h[x[q]].empty()) zero = true;
                for (size_t a = q + 1; a < x.size() && !zero; ++a)
                    if (ip_[x[a]].empty()) zero = true;
                if (!zero) {
                    Tuple cur(x.begin(), x.begin() + q);
                    Scalar cc = sgn_pow(pre) < 0 ? -c : c;
                    std::function<void(size_t, const Scalar&)> rec = [&](size_t a, const Scalar& coef) {
                        if (a == x.size()) {
                            put(out, cur, coef);
                            return;
                        }
                        const SparseVec& v = a == q ? S_.h[x[a]] : ip_[x[a]];
                        for (const auto& [y, cy] : v.e) {
                            if (!cur.empty() && D_->src[cur.back()] != D_->tgt[y]) continue;
                            cur.push_back(y);
                            rec(a + 1, coef * cy);
                            cur.pop_back();
                        }
                    };
                    rec(q, cc);
                }
                pre += D_->deg[x[q]] - 1;
            }
        }
        return out;
    }

    // δ = sum_r 1^r ⊗ b_2 ⊗ 1^t
    Tensor delta(const Tensor& T) const {
        Tensor out;
        for (const auto& [y, c] : T) {
            int pre = 0;
            for (size_t r = 0; r + 1 < y.size(); ++r) {
                if (D_->src[y[r]] == D_->tgt[y[r + 1]])
                    if (const SparseVec* p = D_->product(y[r], y[r + 1])) {
                        int sign = sgn_pow(pre) * sgn_pow(D_->deg[y[r]]);
                        for (const auto& [z, cz] : p->e) {
                            Tuple nt(y.begin(), y.begin() + r);
                            nt.push_back(z);
                            nt.insert(nt.end(), y.begin() + r + 2, y.end());
                            put(out, nt, sign < 0 ? -(c * cz) : c * cz);
                        }
                    }
                pre += D_->deg[y[r]] - 1;
            }
        }
        return out;
    }

    std::shared_ptr<const DGAlg> D_;
    Splitting S_;
    std::vector<SparseVec> ip_;
    mutable std::map<Tuple, SparseVec> memo_;
};

}  // namespace

CheckReport check_splitting(const DGAlg& D, const Splitting& S) {
    CheckReport rep;
    rep.max_arity = 1;
    for (size_t a = 0; a < S.i.size(); ++a) {
        ++rep.checked;
        if (!(lin(S.p, S.i[a]) == single(static_cast<int>(a)))) rep.fail("p∘i != 1");
        if (!lin(S.h, S.i[a]).empty()) rep.fail("h∘i != 0");
        if (!D.diff(S.i[a]).empty()) rep.fail("representative is not a cocycle");
    }
    for (int x = 0; x < D.dim(); ++x) {
        ++rep.checked;
        SparseVec lhs = D.diff(S.h[x]);
        lhs.axpy(Scalar(1), lin(S.h, D.d[x]));
        SparseVec rhs = lin(S.i, S.p[x]);
        rhs.axpy(Scalar(-1), single(x));
        if (!(lhs == rhs)) rep.fail("dh + hd != ip - 1 on " + D.labels[x]);
        if (!lin(S.h, S.h[x]).empty()) rep.fail("h∘h != 0 on " + D.labels[x]);
        if (!lin(S.p, S.h[x]).empty()) rep.fail("p∘h != 0 on " + D.labels[x]);
    }
    return rep;
}

Transfer transfer_minimal_model(const DGAlg& D, int K) {
    if (K < 2) throw ArityOverflow("transfer needs K >= 2");
    Transfer T;
    T.D = std::make_shared<AInfCat>(from_dga(D, K));
    T.D->K = 2;
    T.D->m.resize(3);
    auto H = std::make_shared<AInfCat>();
    H->nobj = D.nobj;
    H->K = K;
    H->m.resize(K + 1);
    H->units.resize(D.nobj);
    const int nD = D.dim();
    T.S.p.assign(nD, {});
    T.S.h.assign(nD, {});
    T.d_local.assign(nD, -1);

    for (int a = 0; a < D.nobj; ++a)
        for (int b = 0; b < D.nobj; ++b) {
            GradedComplex g = D.block_complex(a, b);
            if (g.dims.empty()) continue;
            std::map<int, std::vector<int>> glob;  // degree -> global indices
            for (int x = 0; x < nD; ++x)
                if (D.src[x] == a && D.tgt[x] == b) {
                    T.d_local[x] = static_cast<int>(glob[D.deg[x]].size());
                    glob[D.deg[x]].push_back(x);
                }
            std::map<int, std::vector<Vec>> preferred;
            Vec unit_local;
            if (a == b) {
                const SparseVec& u = D.units[a];
                if (u.empty()) throw UnitCoboundary("object " + std::to_string(a) + " has a zero identity");
                unit_local = zero_vec(g.dim(0));
                for (const auto& [x, c] : u.e) {
                    if (D.deg[x] != 0 || D.src[x] != a || D.tgt[x] != a) throw ShapeError("identity outside End^0");
                    unit_local[T.d_local[x]] = c;
                }
                preferred[0] = {unit_local};
            }
            Cohomology coh = cohomology(g, preferred);
            if (a == b) {
                const auto& P0 = coh.pieces.at(0);
                if (P0.boundaries.contains(unit_local) || P0.reps.empty() || P0.reps[0] != unit_local)
                    throw UnitCoboundary("identity of object " + std::to_string(a) + " is a coboundary");
            }
            // H basis
            for (const auto& [k, piece] : coh.pieces)
                for (int r = 0; r < piece.dim; ++r) {
                    int idx = H->dim();
                    T.h_index[{a, b, k, r}] = idx;
                    T.h_key.push_back({a, b, k, r});
                    H->deg.push_back(k);
                    H->src.push_back(a);
                    H->tgt.push_back(b);
                    std::ostringstream os;
                    os << "h" << a << ">" << b << "|" << k << "#" << r;
                    H->labels.push_back(os.str());
                    SparseVec rep;
                    for (size_t j = 0; j < piece.reps[r].size(); ++j) rep.add(glob[k][j], piece.reps[r][j]);
                    rep.normalize();
                    T.S.i.push_back(rep);
                }
            if (a == b) H->units[a] = single(T.h_index.at({a, a, 0, 0}));
            // decomposition C^k = B ⊕ H ⊕ C per degree
            struct Deg {
                int nB = 0, nH = 0;
                std::vector<int> C;  // local indices spanning the complement of Z
                Mat Minv;
            };
            std::map<int, Deg> dd;
            for (const auto& [k, n] : g.dims) {
                Deg e;
                auto B = image_basis(g.diff(k - 1));
                auto Z = kernel_basis(g.diff(k));
                const auto& reps = coh.pieces.at(k).reps;
                Subspace zs(n, Z);
                for (int j = 0; j < n; ++j)
                    if (zs.add(unit_vec(n, j))) e.C.push_back(j);
                std::vector<Vec> cols = B;
                cols.insert(cols.end(), reps.begin(), reps.end());
                for (int j : e.C) cols.push_back(unit_vec(n, j));
                if (static_cast<int>(cols.size()) != n) throw SolverInconsistent("splitting dimensions do not add up");
                auto inv = inverse(Mat::from_cols(cols, n));
                if (!inv) throw SolverInconsistent("splitting basis is singular");
                e.nB = static_cast<int>(B.size());
                e.nH = static_cast<int>(reps.size());
                e.Minv = *inv;
                dd[k] = std::move(e);
            }
            for (const auto& [k, n] : g.dims) {
                const Deg& e = dd[k];
                // (d restricted to C^{k-1}) in B^k coordinates, inverted
                Mat Qinv;
                auto pit = dd.find(k - 1);
                if (e.nB > 0) {
                    if (pit == dd.end()) throw SolverInconsistent("boundaries without a source");
                    const Deg& prev = pit->second;
                    Mat dk = g.diff(k - 1);
                    Mat Q(e.nB, static_cast<int>(prev.C.size()));
                    for (size_t c = 0; c < prev.C.size(); ++c) {
                        Vec img = dk.col(prev.C[c]);
                        Vec co = e.Minv.apply(img);
                        for (int r = 0; r < e.nB; ++r) Q(r, static_cast<int>(c)) = co[r];
                    }
                    auto qi = inverse(Q);
                    if (!qi) throw SolverInconsistent("d is not an isomorphism from the complement onto the boundaries");
                    Qinv = *qi;
                }
                for (int j = 0; j < n; ++j) {
                    int x = glob[k][j];
                    Vec co = e.Minv.col(j);
                    SparseVec p;
                    for (int r = 0; r < e.nH; ++r) p.add(T.h_index.at({a, b, k, r}), co[e.nB + r]);
                    p.normalize();
                    T.S.p[x] = p;
                    if (e.nB > 0) {
                        Vec beta(co.begin(), co.begin() + e.nB);
                        Vec hc = Qinv.apply(beta);
                        const Deg& prev = pit->second;
                        SparseVec h;
                        for (size_t c = 0; c < prev.C.size(); ++c) h.add(glob[k - 1][prev.C[c]], -hc[c]);
                        h.normalize();
                        T.S.h[x] = h;
                    }
                }
            }
            T.coh.emplace(std::make_pair(a, b), std::move(coh));
        }
    H->index();

    // tree recursion in bar form: R_k = sum b_2(I_{k1} ⊗ I_{k2}), I_k = h R_k, b_k = p R_k,
    // with b_2(u, v) = (−1)^{|u|} uv
    T.I.resize(K + 1);
    for (int x = 0; x < H->dim(); ++x) T.I[1][{x}] = T.S.i[x];
    auto b2 = [&](const SparseVec& u, const SparseVec& v, std::map<int, Scalar>& acc) {
        for (const auto& [i, cu] : u.e)
            for (const auto& [j, cv] : v.e) {
                if (D.src[i] != D.tgt[j]) continue;
                const SparseVec* pr = D.product(i, j);
                if (!pr) continue;
                Scalar c = cu * cv;
                if (sgn_pow(D.deg[i]) < 0) c = -c;
                for (const auto& [z, cz] : pr->e) acc[z] += c * cz;
            }
    };
    for (int k = 2; k <= K; ++k) {
        std::map<Tuple, std::map<int, Scalar>> R;
        for (int k1 = 1; k1 < k; ++k1) {
            int k2 = k - k1;
            std::map<int, std::vector<const std::pair<const Tuple, SparseVec>*>> right;
            for (const auto& e : T.I[k2]) right[H->tgt[e.first.front()]].push_back(&e);
            for (const auto& [t1, v1] : T.I[k1]) {
                auto it = right.find(H->src[t1.back()]);
                if (it == right.end()) continue;
                for (const auto* e : it->second) {
                    Tuple t = t1;
                    t.insert(t.end(), e->first.begin(), e->first.end());
                    b2(v1, e->second, R[t]);
                }
            }
        }
        for (auto& [t, acc] : R) {
            SparseVec r;
            for (const auto& [z, c] : acc) r.add(z, c);
            r.normalize();
            if (r.empty()) continue;
            SparseVec Ik = lin(T.S.h, r);
            if (!Ik.empty()) T.I[k][t] = Ik;
            SparseVec bk = lin(T.S.p, r);
            if (!bk.empty()) H->m[k][t] = bar_sign(*H, t) < 0 ? bk.scaled(Scalar(-1)) : bk;
        }
    }
    T.H = H;

    auto If = std::make_shared<TableFunctor>();
    If->source = T.H;
    If->target = T.D;
    If->K = K;
    If->obj = identity_objects(D.nobj);
    for (int k = 1; k <= K; ++k)
        for (const auto& [t, v] : T.I[k]) If->table[t] = v;
    T.Ifun = If;

    auto Pf = std::make_shared<PfunFunctor>(std::make_shared<const DGAlg>(D), T.S);
    Pf->source = T.D;
    Pf->target = T.H;
    Pf->K = K;
    Pf->obj = identity_objects(D.nobj);
    T.Pfun = Pf;
    return T;
}

CheckReport m2_representative_check(const DGAlg& D, const Transfer& T) {
    CheckReport rep;
    rep.max_arity = 2;
    const AInfCat& H = *T.H;
    for (int x = 0; x < H.dim(); ++x)
        for (int y = 0; y < H.dim(); ++y) {
            if (H.src[x] != H.tgt[y]) continue;
            int a = H.src[y], b = H.tgt[x], k = H.deg[x] + H.deg[y];
            if (!H.has(a, b, k)) continue;
            ++rep.checked;
            SparseVec prod = D.mul(T.S.i[x], T.S.i[y]);
            const Cohomology& coh = T.coh.at({a, b});
            int n = 0;
            for (int z = 0; z < D.dim(); ++z)
                if (D.src[z] == a && D.tgt[z] == b && D.deg[z] == k) ++n;
            Vec local = zero_vec(n);
            for (const auto& [z, c] : prod.e) local[T.d_local[z]] = c;
            Vec co = coh.coords(k, local);
            SparseVec expect;
            for (size_t r = 0; r < co.size(); ++r) expect.add(T.h_index.at({a, b, k, static_cast<int>(r)}), co[r]);
            expect.normalize();
            const SparseVec* m2 = H.mk({x, y});
            if (!(expect == (m2 ? *m2 : SparseVec{})))
                rep.fail("m_2 differs from the class of the composite on (" + H.labels[x] + ", " + H.labels[y] + ")");
        }
    return rep;
}

// ---------- units ----------

AInfCat gauge(const AInfCat& A, const std::map<Tuple, SparseVec>& phi) {
    if (!A.is_minimal()) throw ShapeError("gauge needs a minimal category");
    AInfCat B = A;
    for (auto& mk : B.m) mk.clear();
    auto phik = [&](const Tuple& t) -> SparseVec {
        if (t.size() == 1) return single(t[0]);
        auto it = phi.find(t);
        return it == phi.end() ? SparseVec{} : it->second;
    };
    for (int k = 2; k <= A.K; ++k) {
        std::map<Tuple, SparseVec> add;
        for_each_tuple(A, k, 2 - k, A, {}, [&](const Tuple& a) {
            SparseVec acc;
            for (const auto& pieces : compositions(a)) {
                int r = static_cast<int>(pieces.size());
                if (r < 2 || r > A.K) continue;
                std::vector<SparseVec> args;
                bool zero = false;
                for (const auto& p : pieces) {
                    args.push_back(phik(p));
                    if (args.back().empty()) {
                        zero = true;
                        break;
                    }
                }
                if (zero) continue;
                acc.axpy(Scalar(1), apply_b(A, r, args));
            }
            for (int s = 2; s < k; ++s)
                for (int r = 0; r + s <= k; ++r) {
                    Tuple sub(a.begin() + r, a.begin() + r + s);
                    const SparseVec* inner = B.mk(sub);
                    if (!inner) continue;
                    int sign = sgn_pow(shifted_sum(A, a, r)) * bar_sign(A, sub);
                    for (const auto& [x, c] : inner->e) acc.axpy(sign < 0 ? c : -c, phik(splice(a, r, s, x)));
                }
            if (!acc.empty()) add[a] = bar_sign(A, a) < 0 ? acc.scaled(Scalar(-1)) : acc;
            return true;
        });
        B.m[k] = std::move(add);
    }
    return B;
}

Strictified strictify_units(std::shared_ptr<const AInfCat> A) {
    Strictified out;
    auto make_phi = [&](const std::map<Tuple, SparseVec>& higher, std::shared_ptr<AInfCat> src) {
        auto F = std::make_shared<TableFunctor>();
        F->source = src;
        F->target = A;
        F->K = A->K;
        F->obj = identity_objects(A->nobj);
        for (int i = 0; i < A->dim(); ++i) F->table[{i}] = single(i);
        for (const auto& [t, v] : higher) F->table[t] = v;
        return F;
    };
    if (strict_unitality_check(*A).ok) {
        out.A = std::make_shared<AInfCat>(*A);
        out.phi = make_phi({}, out.A);
        return out;
    }
    auto u = A->unit_indices();
    std::set<int> units;
    for (int x : u) {
        if (x < 0) throw UnitCoboundary("units are not basis vectors");
        units.insert(x);
    }
    for (int a = 0; a < A->dim(); ++a) {
        const SparseVec* l = A->mk({u[A->tgt[a]], a});
        const SparseVec* r = A->mk({a, u[A->src[a]]});
        if (!l || !(*l == single(a)) || !r || !(*r == single(a)))
            throw UnitCoboundary("m_2 is not strictly unital; higher corrections cannot fix it");
    }
    auto has_unit = [&](const Tuple& t) {
        for (int x : t)
            if (units.count(x)) return true;
        return false;
    };
    std::map<Tuple, SparseVec> phi;
    out.fired = true;
    for (int k = 3; k <= A->K; ++k) {
        AInfCat cur = gauge(*A, phi);
        // variables: φ_{k−1}(σ) coefficient on y, σ unit-containing
        std::map<std::pair<Tuple, int>, int> var;
        std::vector<std::pair<Tuple, int>> vars;
        for_each_tuple(*A, k - 1, 2 - k, *A, {}, [&](const Tuple& s) {
            if (!has_unit(s)) return true;
            int d = 2 - k;
            for (int y : s) d += A->deg[y];
            for (int y = 0; y < A->dim(); ++y)
                if (A->src[y] == A->src[s.back()] && A->tgt[y] == A->tgt[s.front()] && A->deg[y] == d) {
                    var[{s, y}] = static_cast<int>(vars.size());
                    vars.push_back({s, y});
                }
            return true;
        });
        if (vars.empty()) continue;
        std::vector<std::vector<std::pair<int, Scalar>>> rows;
        std::vector<Scalar> rhs;
        for_each_tuple(*A, k, 2 - k, *A, {}, [&](const Tuple& a) {
            if (!has_unit(a)) return true;
            std::map<int, std::map<int, Scalar>> eq;  // output basis -> var -> coef
            auto contrib = [&](const Tuple& s, const Scalar& c, const std::function<SparseVec(int)>& image) {
                for (int y = 0; y < A->dim(); ++y) {
                    auto it = var.find({s, y});
                    if (it == var.end()) continue;
                    SparseVec img = image(y);
                    for (const auto& [z, cz] : img.e) eq[z][it->second] += c * cz;
                }
            };
            Tuple head(a.begin(), a.end() - 1), tail(a.begin() + 1, a.end());
            contrib(head, Scalar(1), [&](int y) { return apply_b(*A, 2, {single(y), single(a.back())}); });
            contrib(tail, Scalar(1), [&](int y) { return apply_b(*A, 2, {single(a.front()), single(y)}); });
            for (size_t r = 0; r + 2 <= a.size(); ++r) {
                SparseVec inner = apply_b(*A, 2, {single(a[r]), single(a[r + 1])});
                int sign = sgn_pow(shifted_sum(*A, a, r));
                for (const auto& [x, c] : inner.e)
                    contrib(splice(a, r, 2, x), sign < 0 ? c : -c, [&](int y) { return single(y); });
            }
            const SparseVec* known = cur.mk(a);
            SparseVec kb = known ? *known : SparseVec{};
            if (bar_sign(*A, a) < 0) kb = kb.scaled(Scalar(-1));
            std::set<int> outs;
            for (const auto& [z, _] : eq) outs.insert(z);
            for (const auto& [z, _] : kb.e) outs.insert(z);
            for (int z : outs) {
                std::vector<std::pair<int, Scalar>> row;
                for (const auto& [v, c] : eq[z])
                    if (!c.is_zero()) row.push_back({v, c});
                Scalar r0;
                for (const auto& [zz, c] : kb.e)
                    if (zz == z) r0 = -c;
                rows.push_back(row);
                rhs.push_back(r0);
            }
            return true;
        });
        if (rows.empty()) continue;
        Mat M(static_cast<int>(rows.size()), static_cast<int>(vars.size()));
        Vec b(rows.size());
        for (size_t r = 0; r < rows.size(); ++r) {
            for (const auto& [v, c] : rows[r]) M(static_cast<int>(r), v) += c;
            b[r] = rhs[r];
        }
        auto sol = solve(M, b);
        if (!sol) throw SolverInconsistent("no unit-strictifying correction at arity " + std::to_string(k - 1));
        for (size_t v = 0; v < vars.size(); ++v)
            if (!(*sol)[v].is_zero()) {
                SparseVec& e = phi[vars[v].first];
                e.add(vars[v].second, (*sol)[v]);
                e.normalize();
            }
    }
    out.A = std::make_shared<AInfCat>(gauge(*A, phi));
    out.A->index();
    out.phi = make_phi(phi, out.A);
    return out;
}

Positive unitally_positive(const AInfCat& A) {
    Positive P;
    auto u = A.unit_indices();
    std::set<int> units;
    for (size_t x = 0; x < u.size(); ++x) {
        if (u[x] < 0) throw UnitCoboundary("object " + std::to_string(x) + " has no unit line in H^0");
        units.insert(u[x]);
    }
    auto N = std::make_shared<AInfCat>();
    N->nobj = A.nobj;
    N->K = A.K;
    N->m.resize(A.m.size());
    for (int i = 0; i < A.dim(); ++i)
        if (A.deg[i] > 0 || units.count(i)) {
            P.from_parent[i] = N->dim();
            P.to_parent.push_back(i);
            N->deg.push_back(A.deg[i]);
            N->src.push_back(A.src[i]);
            N->tgt.push_back(A.tgt[i]);
            N->labels.push_back(A.labels[i]);
        }
    for (int x : u) N->units.push_back(single(P.from_parent.at(x)));
    for (size_t k = 1; k < A.m.size(); ++k)
        for (const auto& [t, v] : A.m[k]) {
            Tuple nt;
            bool inside = true;
            for (int x : t) {
                auto it = P.from_parent.find(x);
                if (it == P.from_parent.end()) {
                    inside = false;
                    break;
                }
                nt.push_back(it->second);
            }
            if (!inside) continue;
            SparseVec nv;
            for (const auto& [y, c] : v.e) {
                auto it = P.from_parent.find(y);
                if (it == P.from_parent.end())
                    throw ClosureViolation("m_" + std::to_string(k) + " leaves N on " + tuple_str(A, t));
                nv.add(it->second, c);
            }
            nv.normalize();
            N->m[k][nt] = nv;
        }
    N->index();
    P.N = N;
    return P;
}

std::shared_ptr<TableFunctor> restrict_to_positive(const AInfFunctor& F, const Positive& NA, const Positive& NB) {
    auto G = std::make_shared<TableFunctor>();
    G->source = NA.N;
    G->target = NB.N;
    G->obj = F.obj;
    G->K = F.K;
    for (int k = 1; k <= F.K; ++k)
        for_each_tuple(*NA.N, k, 1 - k, *F.target, F.obj, [&](const Tuple& t) {
            Tuple pt;
            for (int x : t) pt.push_back(NA.to_parent[x]);
            SparseVec v = F.component(pt);
            if (v.empty()) return true;
            SparseVec nv;
            for (const auto& [y, c] : v.e) {
                auto it = NB.from_parent.find(y);
                if (it == NB.from_parent.end())
                    throw ClosureViolation("F_" + std::to_string(k) + " leaves N on " + tuple_str(*NA.N, t));
                nv.add(it->second, c);
            }
            nv.normalize();
            G->table[t] = nv;
            return true;
        });
    return G;
}

}  // namespace tx
