#include "tx/algebra.hpp"
#include "tx/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace tx {

// ---------- quiver presentation ----------

int QuiverPresentation::arrow_index(const std::string& name) const {
    for (size_t i = 0; i < arrows.size(); ++i)
        if (arrows[i].name == name) return static_cast<int>(i);
    return -1;
}

int QuiverPresentation::path_target(const Path& p) const {
    return p.arrows.empty() ? p.vertex : arrows[p.arrows.back()].tgt;
}

std::string QuiverPresentation::path_name(const Path& p) const {
    if (p.arrows.empty()) return "e" + std::to_string(p.vertex);
    std::string out;
    size_t i = 0;
    while (i < p.arrows.size()) {
        size_t j = i;
        while (j < p.arrows.size() && p.arrows[j] == p.arrows[i]) ++j;
        if (!out.empty()) out += "*";
        out += arrows[p.arrows[i]].name;
        if (j - i > 1) out += "^" + std::to_string(j - i);
        i = j;
    }
    return out;
}

namespace {

struct Tok {
    enum Kind { Num, Ident, Plus, Minus, Caret, End } kind;
    std::string text;
};

std::vector<Tok> tokenize(const std::string& s) {
    std::vector<Tok> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '*') {
            ++i;
        } else if (c == '+') {
            out.push_back({Tok::Plus, "+"});
            ++i;
        } else if (c == '-') {
            out.push_back({Tok::Minus, "-"});
            ++i;
        } else if (c == '^') {
            out.push_back({Tok::Caret, "^"});
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
            out.push_back({Tok::Num, s.substr(i, j - i)});
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
                ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i)});
            i = j;
        } else {
            throw ParseError("unexpected character '" + std::string(1, c) + "' in \"" + s + "\"");
        }
    }
    out.push_back({Tok::End, ""});
    return out;
}

}  // namespace

std::vector<QuiverPresentation::Term> QuiverPresentation::parse_expression(const std::string& text) const {
    auto toks = tokenize(text);
    std::vector<Term> terms;
    size_t k = 0;
    bool first = true;
    while (toks[k].kind != Tok::End) {
        Scalar sign(1);
        if (toks[k].kind == Tok::Plus || toks[k].kind == Tok::Minus) {
            if (toks[k].kind == Tok::Minus) sign = Scalar(-1);
            ++k;
        } else if (!first) {
            throw ParseError("expected + or - in \"" + text + "\"");
        }
        first = false;
        Scalar coef(1);
        bool have_coef = false;
        if (toks[k].kind == Tok::Num) {
            coef = Scalar::parse(toks[k].text);
            have_coef = true;
            ++k;
        }
        Path p;
        bool have_vertex = false, have_arrow = false;
        while (toks[k].kind == Tok::Ident) {
            const std::string& id = toks[k].text;
            ++k;
            int reps = 1;
            if (toks[k].kind == Tok::Caret) {
                ++k;
                if (toks[k].kind != Tok::Num) throw ParseError("expected exponent in \"" + text + "\"");
                reps = std::stoi(toks[k].text);
                ++k;
            }
            int a = arrow_index(id);
            if (a >= 0) {
                if (!have_arrow && !have_vertex) p.vertex = arrows[a].src;
                for (int r = 0; r < reps; ++r) {
                    if (have_arrow || have_vertex) {
                        if (path_target(p) != arrows[a].src)
                            throw BadRelation("non-composable path in \"" + text + "\"");
                    }
                    p.arrows.push_back(a);
                    have_arrow = true;
                }
            } else if (id.size() > 1 && id[0] == 'e' &&
                       std::all_of(id.begin() + 1, id.end(), [](char c) { return std::isdigit(c); })) {
                int v = std::stoi(id.substr(1));
                if (v < 0 || v >= vertices) throw ParseError("unknown vertex " + id);
                if (have_arrow) {
                    if (path_target(p) != v) {
                        coef = Scalar(0);  // path times a foreign idempotent
                    }
                } else if (have_vertex && p.vertex != v) {
                    coef = Scalar(0);
                } else {
                    p.vertex = v;
                }
                have_vertex = true;
            } else {
                throw ParseError("unknown arrow \"" + id + "\"");
            }
        }
        if (!have_vertex && !have_arrow) {
            if (!have_coef) throw ParseError("empty term in \"" + text + "\"");
            throw ParseError("bare scalar term in \"" + text + "\"; write the idempotent, e.g. 1*e0");
        }
        coef *= sign;
        if (!coef.is_zero()) terms.push_back({coef, p});
    }
    return terms;
}

// ---------- algebra ----------

Vec Algebra::mul(const Vec& a, const Vec& b) const {
    Vec out = zero_vec(n_);
    for (int i = 0; i < n_; ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; j < n_; ++j) {
            if (b[j].is_zero()) continue;
            Scalar c = a[i] * b[j];
            for (const auto& [k, v] : product(i, j).e) out[k].add_mul(c, v);
        }
    }
    return out;
}

Mat Algebra::left_mult(const Vec& a) const {
    std::vector<Vec> cols;
    for (int j = 0; j < n_; ++j) cols.push_back(mul(a, basis(j)));
    return Mat::from_cols(cols, n_);
}

Mat Algebra::right_mult(const Vec& a) const {
    std::vector<Vec> cols;
    for (int j = 0; j < n_; ++j) cols.push_back(mul(basis(j), a));
    return Mat::from_cols(cols, n_);
}

void Algebra::check_axioms() const {
    // sparse structure constants: (b_i b_j) b_k and b_i (b_j b_k)
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            const SparseVec& bij = product(i, j);
            for (int k = 0; k < n_; ++k) {
                SparseVec lhs, rhs;
                for (const auto& [m, c] : bij.e) lhs.axpy(c, product(m, k));
                for (const auto& [m, c] : product(j, k).e) rhs.axpy(c, product(i, m));
                if (!(lhs == rhs))
                    throw NotAssociative("(" + labels_[i] + "*" + labels_[j] + ")*" + labels_[k] + " != " + labels_[i] +
                                         "*(" + labels_[j] + "*" + labels_[k] + ")");
            }
        }
    for (int i = 0; i < n_; ++i) {
        if (mul(unit_, basis(i)) != basis(i) || mul(basis(i), unit_) != basis(i))
            throw NotAssociative("unit axiom fails on " + labels_[i]);
    }
}

void Algebra::finish() {
    if (vertices_.empty() && n_ > 0) vertices_.push_back(unit_);
    Vec sum = zero_vec(n_);
    for (size_t v = 0; v < vertices_.size(); ++v) {
        const Vec& e = vertices_[v];
        if (mul(e, e) != e) throw NotIdempotent("vertex idempotent " + std::to_string(v));
        for (size_t w = 0; w < vertices_.size(); ++w)
            if (w != v && !is_zero(mul(e, vertices_[w])))
                throw NotIdempotent("vertex idempotents " + std::to_string(v) + "," + std::to_string(w) +
                                    " not orthogonal");
        sum = sum + e;
    }
    if (n_ > 0 && sum != unit_) throw NotIdempotent("vertex idempotents do not sum to the unit");
    size_t t = vertices_.size();
    right_ideals_.clear();
    peirce_.clear();
    for (size_t a = 0; a < t; ++a) {
        std::vector<Vec> gens;
        for (int j = 0; j < n_; ++j) gens.push_back(mul(vertices_[a], basis(j)));
        right_ideals_.emplace_back(n_, gens);
    }
    for (size_t b = 0; b < t; ++b)
        for (size_t a = 0; a < t; ++a) {
            std::vector<Vec> gens;
            for (int j = 0; j < n_; ++j) gens.push_back(mul(mul(vertices_[b], basis(j)), vertices_[a]));
            peirce_.emplace_back(n_, gens);
        }
}

Algebra Algebra::from_structure_constants(std::vector<std::string> labels, std::vector<std::vector<Vec>> products,
                                          Vec unit, std::vector<Vec> vertices) {
    Algebra A;
    A.n_ = static_cast<int>(products.size());
    if (labels.empty())
        for (int i = 0; i < A.n_; ++i) labels.push_back("b" + std::to_string(i));
    if (static_cast<int>(labels.size()) != A.n_) throw ShapeError("label count does not match dimension");
    if (static_cast<int>(unit.size()) != A.n_) throw ShapeError("unit has wrong length");
    A.labels_ = std::move(labels);
    A.mult_.resize(static_cast<size_t>(A.n_) * A.n_);
    for (int i = 0; i < A.n_; ++i) {
        if (static_cast<int>(products[i].size()) != A.n_) throw ShapeError("structure constant table is not square");
        for (int j = 0; j < A.n_; ++j) {
            if (static_cast<int>(products[i][j].size()) != A.n_) throw ShapeError("product vector has wrong length");
            A.mult_[static_cast<size_t>(i) * A.n_ + j] = SparseVec::from_dense(products[i][j]);
        }
    }
    A.unit_ = std::move(unit);
    for (auto& v : vertices)
        if (static_cast<int>(v.size()) != A.n_) throw ShapeError("vertex idempotent has wrong length");
    A.vertices_ = std::move(vertices);
    A.check_axioms();
    A.finish();
    return A;
}

namespace {

bool path_less(const Path& a, const Path& b) {
    if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
    if (a.vertex != b.vertex) return a.vertex < b.vertex;
    return a.arrows < b.arrows;
}

constexpr size_t kMaxPaths = 20000;

// all paths of length < bound, ascending order
std::vector<Path> enumerate_paths(const QuiverPresentation& q, int bound) {
    std::vector<Path> out;
    std::vector<Path> layer;
    for (int v = 0; v < q.vertices; ++v) layer.push_back(Path{v, {}});
    for (int len = 0; len < bound && !layer.empty(); ++len) {
        std::sort(layer.begin(), layer.end(), path_less);
        out.insert(out.end(), layer.begin(), layer.end());
        if (out.size() > kMaxPaths) throw InfiniteDimensional("path space exceeds " + std::to_string(kMaxPaths));
        std::vector<Path> next;
        for (const Path& p : layer) {
            int t = q.path_target(p);
            for (size_t a = 0; a < q.arrows.size(); ++a)
                if (q.arrows[a].src == t) {
                    Path np = p;
                    np.arrows.push_back(static_cast<int>(a));
                    next.push_back(std::move(np));
                }
        }
        layer = std::move(next);
    }
    return out;
}

bool has_cycle(const QuiverPresentation& q) {
    std::vector<int> state(q.vertices, 0);
    std::function<bool(int)> dfs = [&](int v) {
        state[v] = 1;
        for (const auto& a : q.arrows)
            if (a.src == v) {
                if (state[a.tgt] == 1) return true;
                if (state[a.tgt] == 0 && dfs(a.tgt)) return true;
            }
        state[v] = 2;
        return false;
    };
    for (int v = 0; v < q.vertices; ++v)
        if (state[v] == 0 && dfs(v)) return true;
    return false;
}

Path concat(const Path& a, const Path& b) {
    Path r = a;
    r.arrows.insert(r.arrows.end(), b.arrows.begin(), b.arrows.end());
    return r;
}

}  // namespace

Algebra Algebra::from_quiver(const QuiverPresentation& q) {
    if (q.vertices < 1) throw ShapeError("quiver needs at least one vertex");
    for (const auto& a : q.arrows)
        if (a.src < 0 || a.src >= q.vertices || a.tgt < 0 || a.tgt >= q.vertices)
            throw ShapeError("arrow " + a.name + " has an endpoint outside the vertex range");
    bool homogeneous = true;
    for (const auto& rel : q.relations) {
        if (rel.empty()) continue;
        int s = q.path_source(rel[0].second), t = q.path_target(rel[0].second);
        for (const auto& [c, p] : rel) {
            for (size_t i = 0; i + 1 < p.arrows.size(); ++i)
                if (q.arrows[p.arrows[i]].tgt != q.arrows[p.arrows[i + 1]].src)
                    throw BadRelation("non-composable path " + q.path_name(p));
            if (!p.arrows.empty() && q.arrows[p.arrows[0]].src != p.vertex)
                throw BadRelation("path " + q.path_name(p) + " does not start at its vertex");
            if (q.path_source(p) != s || q.path_target(p) != t)
                throw BadRelation("relation mixes (source,target) pairs: " + q.path_name(rel[0].second) + " vs " +
                                  q.path_name(p));
            if (p.arrows.size() != rel[0].second.arrows.size()) homogeneous = false;
        }
    }

    // relations applied inside the space of paths of length < bound
    auto build_ideal = [&](int bound, const std::vector<Path>& paths,
                           const std::map<std::pair<int, std::vector<int>>, int>& index) {
        int np = static_cast<int>(paths.size());
        Subspace ideal(np);
        auto col = [&](int k) { return np - 1 - k; };
        for (const auto& rel : q.relations) {
            if (rel.empty()) continue;
            int s = q.path_source(rel[0].second), t = q.path_target(rel[0].second);
            size_t minlen = rel[0].second.arrows.size();
            for (const auto& term : rel) minlen = std::min(minlen, term.second.arrows.size());
            for (const Path& u : paths) {
                if (q.path_target(u) != s) continue;
                if (static_cast<int>(u.arrows.size() + minlen) >= bound) continue;
                for (const Path& v : paths) {
                    if (v.vertex != t) continue;
                    if (static_cast<int>(u.arrows.size() + minlen + v.arrows.size()) >= bound) continue;
                    Vec g = zero_vec(np);
                    for (const auto& [c, p] : rel) {
                        Path w = concat(concat(u, p), v);
                        if (static_cast<int>(w.arrows.size()) >= bound) continue;
                        g[col(index.at({w.vertex, w.arrows}))] += c;
                    }
                    if (!is_zero(g)) ideal.add(g);
                }
            }
        }
        return ideal;
    };

    int bound = q.nilpotency;
    if (bound <= 0) {
        if (!has_cycle(q)) {
            bound = static_cast<int>(q.vertices) + 1;  // longest path has < vertices arrows
        } else {
            if (!homogeneous)
                throw InfiniteDimensional("cyclic quiver with inhomogeneous relations needs a nilpotency bound");
            // find L with every path of length L inside the relation ideal
            bound = 0;
            for (int L = 1; L <= 64 && bound == 0; ++L) {
                auto paths = enumerate_paths(q, L + 1);
                std::map<std::pair<int, std::vector<int>>, int> index;
                for (size_t k = 0; k < paths.size(); ++k) index[{paths[k].vertex, paths[k].arrows}] = static_cast<int>(k);
                Subspace ideal = build_ideal(L + 1, paths, index);
                int np = static_cast<int>(paths.size());
                bool all = true;
                for (size_t k = 0; k < paths.size() && all; ++k)
                    if (static_cast<int>(paths[k].arrows.size()) == L &&
                        !ideal.contains(unit_vec(np, np - 1 - static_cast<int>(k))))
                        all = false;
                if (all) bound = L;
            }
            if (bound == 0) throw InfiniteDimensional("normal forms do not terminate below length 64");
        }
    }

    Algebra A;
    A.quiver_ = q;
    A.path_bound_ = bound;
    A.all_paths_ = enumerate_paths(q, bound);
    int np = static_cast<int>(A.all_paths_.size());
    for (int k = 0; k < np; ++k) A.path_index_[{A.all_paths_[k].vertex, A.all_paths_[k].arrows}] = k;
    A.ideal_ = build_ideal(bound, A.all_paths_, A.path_index_);
    std::set<int> piv(A.ideal_.pivots().begin(), A.ideal_.pivots().end());
    for (int k = 0; k < np; ++k)
        if (!piv.count(np - 1 - k)) A.basis_path_index_.push_back(k);
    A.n_ = static_cast<int>(A.basis_path_index_.size());
    for (int k : A.basis_path_index_) {
        A.paths_.push_back(A.all_paths_[k]);
        A.labels_.push_back(q.path_name(A.all_paths_[k]));
    }
    A.mult_.assign(static_cast<size_t>(A.n_) * A.n_, SparseVec{});
    for (int i = 0; i < A.n_; ++i)
        for (int j = 0; j < A.n_; ++j) {
            const Path& a = A.paths_[i];
            const Path& b = A.paths_[j];
            if (q.path_target(a) != b.vertex) continue;
            A.mult_[static_cast<size_t>(i) * A.n_ + j] = SparseVec::from_dense(A.path_element(concat(a, b)));
        }
    A.unit_ = zero_vec(A.n_);
    for (int v = 0; v < q.vertices; ++v) {
        Vec e = A.path_element(Path{v, {}});
        if (is_zero(e)) throw BadRelation("vertex idempotent e" + std::to_string(v) + " lies in the relation ideal");
        A.unit_ = A.unit_ + e;
        A.vertices_.push_back(e);
    }
    A.check_axioms();
    A.finish();
    return A;
}

Vec Algebra::path_element(const Path& p) const {
    if (!quiver_) throw ShapeError("algebra has no quiver presentation");
    if (static_cast<int>(p.arrows.size()) >= path_bound_) return zero_vec(n_);
    auto it = path_index_.find({p.vertex, p.arrows});
    if (it == path_index_.end()) throw ParseError("path " + quiver_->path_name(p) + " not in the path space");
    int np = static_cast<int>(all_paths_.size());
    Vec v = ideal_.reduce(unit_vec(np, np - 1 - it->second));
    Vec out(n_);
    for (int i = 0; i < n_; ++i) out[i] = v[np - 1 - basis_path_index_[i]];
    return out;
}

Vec Algebra::element(const std::string& expr) const {
    if (!quiver_) throw ShapeError("path expressions need a quiver presentation");
    Vec out = zero_vec(n_);
    for (const auto& [c, p] : quiver_->parse_expression(expr)) axpy(out, c, path_element(p));
    return out;
}

std::string Algebra::element_str(const Vec& v) const {
    std::string out;
    for (int i = 0; i < n_; ++i) {
        if (v[i].is_zero()) continue;
        std::string c = v[i].str();
        bool neg = c[0] == '-';
        if (neg) c = c.substr(1);
        if (!out.empty()) out += neg ? " - " : " + ";
        else if (neg) out += "-";
        if (c != "1") out += c + "*";
        out += labels_[i];
    }
    return out.empty() ? "0" : out;
}

namespace {

Subspace product_span(const Algebra& A, const std::vector<Vec>& xs, const std::vector<Vec>& ys) {
    std::vector<Vec> gens;
    for (const auto& x : xs)
        for (const auto& y : ys) gens.push_back(A.mul(x, y));
    return Subspace(A.dim(), gens);
}

// two-sided ideal with nilpotent powers and quotient dimension = #vertices
bool verify_radical(const Algebra& A, const Subspace& J) {
    if (A.dim() - J.dim() != A.num_vertices()) return false;
    std::vector<Vec> all;
    for (int i = 0; i < A.dim(); ++i) all.push_back(A.basis(i));
    for (const auto& x : J.basis())
        for (const auto& a : all)
            if (!J.contains(A.mul(x, a)) || !J.contains(A.mul(a, x))) return false;
    Subspace power = J;
    int prev = power.dim() + 1;
    while (power.dim() > 0) {
        if (power.dim() >= prev) return false;
        prev = power.dim();
        power = product_span(A, power.basis(), J.basis());
    }
    for (int v = 0; v < A.num_vertices(); ++v)
        if (J.contains(A.vertex(v))) return false;
    return true;
}

}  // namespace

const Subspace& Algebra::radical() const {
    if (radical_) return *radical_;
    if (quiver_) {
        std::vector<Vec> gens;
        for (int i = 0; i < n_; ++i)
            if (!paths_[i].arrows.empty()) gens.push_back(basis(i));
        Subspace J(n_, gens);
        if (verify_radical(*this, J)) {
            radical_ = J;
            return *radical_;
        }
    }
    // trace form: J = {x : Tr(L_{xy}) = 0 for all y}
    Mat T(n_, n_);
    std::vector<Mat> L;
    for (int i = 0; i < n_; ++i) L.push_back(left_mult(basis(i)));
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            Mat P = L[i] * L[j];
            Scalar tr(0);
            for (int k = 0; k < n_; ++k) tr += P(k, k);
            T(i, j) = tr;
        }
    Subspace J(n_, kernel_basis(T.transpose()));
    if (!verify_radical(*this, J))
        throw NotBasic("no split basic radical found: dim A = " + std::to_string(n_) + ", vertices = " +
                       std::to_string(num_vertices()));
    radical_ = J;
    return *radical_;
}

Vec Algebra::vertex_character(int v) const {
    const Subspace& J = radical();
    std::vector<Vec> cols;
    for (int w = 0; w < num_vertices(); ++w) cols.push_back(vertices_[w]);
    for (const auto& b : J.basis()) cols.push_back(b);
    auto inv = inverse(Mat::from_cols(cols, n_));
    if (!inv) throw NotBasic("vertex idempotents and radical do not span the algebra");
    return inv->row(v);
}

// ---------- modules ----------

Vec RightModule::act(const Vec& m, const Vec& a) const {
    Vec out = zero_vec(dim);
    for (size_t b = 0; b < a.size(); ++b) {
        if (a[b].is_zero()) continue;
        Vec r = act_basis(m, static_cast<int>(b));
        axpy(out, a[b], r);
    }
    return out;
}

Vec RightModule::act_basis(const Vec& m, int b) const {
    Vec out = zero_vec(dim);
    const Mat& R = rho[b];
    for (int k = 0; k < dim; ++k) {
        if (m[k].is_zero()) continue;
        for (int j = 0; j < dim; ++j) out[j].add_mul(m[k], R(k, j));
    }
    return out;
}

void RightModule::check() const {
    const Algebra& A = *algebra;
    if (static_cast<int>(rho.size()) != A.dim()) throw ShapeError("one action matrix per algebra basis element required");
    for (const auto& r : rho)
        if (r.rows() != dim || r.cols() != dim) throw ShapeError("action matrix has wrong shape");
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j) {
            Mat lhs = rho[i] * rho[j];
            Mat rhs(dim, dim);
            for (const auto& [k, c] : A.product(i, j).e) rhs = rhs + rho[k].scaled(c);
            if (lhs != rhs)
                throw NotModule("rho(" + A.labels()[i] + ") rho(" + A.labels()[j] + ") != rho(product)");
        }
    Mat u(dim, dim);
    for (int k = 0; k < A.dim(); ++k)
        if (!A.unit()[k].is_zero()) u = u + rho[k].scaled(A.unit()[k]);
    if (u != Mat::identity(dim)) throw NotModule("unit does not act as the identity");
}

RightModule RightModule::regular_projective(AlgebraPtr a, int vertex) {
    RightModule M;
    M.algebra = a;
    const Subspace& S = a->right_ideal(vertex);
    M.dim = S.dim();
    for (int b = 0; b < a->dim(); ++b) {
        Mat R(M.dim, M.dim);
        for (int k = 0; k < M.dim; ++k) {
            Vec c = S.coords(a->mul(S.basis()[k], a->basis(b)));
            for (int j = 0; j < M.dim; ++j) R(k, j) = c[j];
        }
        M.rho.push_back(std::move(R));
    }
    return M;
}

RightModule RightModule::from_subspace(const RightModule& amb, const Subspace& sub) {
    RightModule M;
    M.algebra = amb.algebra;
    M.dim = sub.dim();
    for (int b = 0; b < amb.algebra->dim(); ++b) {
        Mat R(M.dim, M.dim);
        for (int k = 0; k < M.dim; ++k) {
            Vec img = amb.act_basis(sub.basis()[k], b);
            if (!sub.contains(img)) throw NotModule("subspace not closed under the action");
            Vec c = sub.coords(img);
            for (int j = 0; j < M.dim; ++j) R(k, j) = c[j];
        }
        M.rho.push_back(std::move(R));
    }
    return M;
}

RightModule RightModule::quotient(const RightModule& amb, const Subspace& sub, Mat* projection) {
    std::set<int> piv(sub.pivots().begin(), sub.pivots().end());
    std::vector<int> keep;
    for (int i = 0; i < amb.dim; ++i)
        if (!piv.count(i)) keep.push_back(i);
    auto project = [&](const Vec& v) {
        Vec r = sub.reduce(v);
        Vec out(keep.size());
        for (size_t k = 0; k < keep.size(); ++k) out[k] = r[keep[k]];
        return out;
    };
    RightModule M;
    M.algebra = amb.algebra;
    M.dim = static_cast<int>(keep.size());
    for (int b = 0; b < amb.algebra->dim(); ++b) {
        Mat R(M.dim, M.dim);
        for (int k = 0; k < M.dim; ++k) {
            Vec img = amb.act_basis(unit_vec(amb.dim, keep[k]), b);
            Vec c = project(img);
            for (int j = 0; j < M.dim; ++j) R(k, j) = c[j];
        }
        M.rho.push_back(std::move(R));
    }
    for (const auto& s : sub.basis())
        for (int b = 0; b < amb.algebra->dim(); ++b)
            if (!sub.contains(amb.act_basis(s, b))) throw NotModule("quotient by a non-submodule");
    if (projection) {
        std::vector<Vec> cols;
        for (int i = 0; i < amb.dim; ++i) cols.push_back(project(unit_vec(amb.dim, i)));
        *projection = Mat::from_cols(cols, M.dim);
    }
    return M;
}

RightModule RightModule::direct_sum(const std::vector<RightModule>& parts) {
    if (parts.empty()) throw ShapeError("direct sum of nothing");
    RightModule M;
    M.algebra = parts[0].algebra;
    for (const auto& p : parts) M.dim += p.dim;
    for (int b = 0; b < M.algebra->dim(); ++b) {
        Mat R(M.dim, M.dim);
        int off = 0;
        for (const auto& p : parts) {
            for (int i = 0; i < p.dim; ++i)
                for (int j = 0; j < p.dim; ++j) R(off + i, off + j) = p.rho[b](i, j);
            off += p.dim;
        }
        M.rho.push_back(std::move(R));
    }
    return M;
}

RightModule RightModule::zero(AlgebraPtr a) {
    RightModule M;
    M.algebra = a;
    M.rho.assign(a->dim(), Mat(0, 0));
    return M;
}

std::vector<Mat> hom_basis(const RightModule& x, const RightModule& y) {
    // unknown f (dy x dx), column convention: f R_x(b) = R_y(b) f with R = rho^T
    int dx = x.dim, dy = y.dim;
    int nv = dx * dy;
    if (nv == 0) return {};
    int nb = x.algebra->dim();
    Mat E(nb * nv, nv);
    for (int b = 0; b < nb; ++b) {
        const Mat& Rx = x.rho[b];  // row convention: (f Rx^T)(i,j) = sum_k f(i,k) Rx(j,k)
        const Mat& Ry = y.rho[b];  // (Ry^T f)(i,j) = sum_k Ry(k,i) f(k,j)
        for (int i = 0; i < dy; ++i)
            for (int j = 0; j < dx; ++j) {
                int row = b * nv + i * dx + j;
                for (int k = 0; k < dx; ++k) E(row, i * dx + k) += Rx(j, k);
                for (int k = 0; k < dy; ++k) E(row, k * dx + j) -= Ry(k, i);
            }
    }
    std::vector<Mat> out;
    for (const auto& v : kernel_basis(E)) {
        Mat f(dy, dx);
        for (int i = 0; i < dy; ++i)
            for (int j = 0; j < dx; ++j) f(i, j) = v[i * dx + j];
        out.push_back(std::move(f));
    }
    return out;
}

bool is_module_map(const RightModule& x, const RightModule& y, const Mat& f) {
    if (f.rows() != y.dim || f.cols() != x.dim) return false;
    for (int b = 0; b < x.algebra->dim(); ++b)
        if (f * x.rho[b].transpose() != y.rho[b].transpose() * f) return false;
    return true;
}

// ---------- idempotent quotients ----------

Idempotent vertex_idempotent(const Algebra& a, const std::vector<int>& vertices) {
    Idempotent e{zero_vec(a.dim())};
    for (int v : vertices) {
        if (v < 0 || v >= a.num_vertices()) throw ShapeError("idempotent vertex out of range");
        e.coords = e.coords + a.vertex(v);
    }
    return e;
}

IdempotentQuotient quotient_by_idempotent(const AlgebraPtr& ap, const Idempotent& e) {
    const Algebra& A = *ap;
    if (static_cast<int>(e.coords.size()) != A.dim()) throw ShapeError("idempotent has wrong length");
    if (A.mul(e.coords, e.coords) != e.coords) throw NotIdempotent("e*e != e");
    IdempotentQuotient Q;
    std::vector<Vec> gens;
    for (int i = 0; i < A.dim(); ++i) {
        Vec be = A.mul(A.basis(i), e.coords);
        if (is_zero(be)) continue;
        for (int j = 0; j < A.dim(); ++j) gens.push_back(A.mul(be, A.basis(j)));
    }
    Q.ideal = Subspace(A.dim(), gens);
    std::set<int> piv(Q.ideal.pivots().begin(), Q.ideal.pivots().end());
    std::vector<int> keep;
    for (int i = 0; i < A.dim(); ++i)
        if (!piv.count(i)) keep.push_back(i);
    int m = static_cast<int>(keep.size());
    Q.projection = Mat(m, A.dim());
    for (int i = 0; i < A.dim(); ++i) {
        Vec r = Q.ideal.reduce(A.basis(i));
        for (int k = 0; k < m; ++k) Q.projection(k, i) = r[keep[k]];
    }
    auto B = std::make_shared<Algebra>();
    B->n_ = m;
    for (int k : keep) B->labels_.push_back(A.labels()[k]);
    B->mult_.assign(static_cast<size_t>(m) * m, SparseVec{});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            B->mult_[static_cast<size_t>(i) * m + j] =
                SparseVec::from_dense(Q.project(A.product(keep[i], keep[j]).dense(A.dim())));
    B->unit_ = Q.project(A.unit());
    for (int v = 0; v < A.num_vertices(); ++v) {
        Vec ev = Q.project(A.vertex(v));
        if (is_zero(ev)) {
            Q.vertex_map.push_back(-1);
        } else {
            Q.vertex_map.push_back(static_cast<int>(B->vertices_.size()));
            B->vertices_.push_back(ev);
        }
    }
    Q.degenerate = m == 0;
    if (m > 0) {
        B->check_axioms();
        B->finish();
        // J(A/AeA) is the image of J(A)
        try {
            std::vector<Vec> jg;
            for (const auto& x : A.radical().basis()) jg.push_back(Q.project(x));
            Subspace J(m, jg);
            if (verify_radical(*B, J)) B->radical_ = J;
        } catch (const NotBasic&) {
        }
    }
    Q.quotient = B;
    return Q;
}

std::vector<int> restrict_scalars(const IdempotentQuotient& q, const std::vector<int>& summands) {
    std::vector<int> out;
    for (int v : summands) {
        if (v < 0 || v >= static_cast<int>(q.vertex_map.size())) throw ShapeError("summand vertex out of range");
        if (q.vertex_map[v] >= 0) out.push_back(q.vertex_map[v]);
    }
    return out;
}

RightModule restrict_scalars(const IdempotentQuotient& q, const RightModule& m) {
    const Algebra& A = *m.algebra;
    // projective iff dim M equals the dimension of its projective cover
    std::vector<Vec> mj;
    for (int k = 0; k < m.dim; ++k)
        for (const auto& j : A.radical().basis()) mj.push_back(m.act(unit_vec(m.dim, k), j));
    Subspace MJ(m.dim, mj);
    int cover = 0;
    for (int v = 0; v < A.num_vertices(); ++v) {
        std::vector<Vec> mv;
        for (int k = 0; k < m.dim; ++k) mv.push_back(m.act(unit_vec(m.dim, k), A.vertex(v)));
        Subspace Mv(m.dim, mv);
        int top = 0;
        Subspace acc = MJ;
        for (const auto& x : Mv.basis())
            if (acc.add(x)) ++top;
        cover += top * A.right_ideal(v).dim();
    }
    if (cover != m.dim) throw NotProjective("module of dim " + std::to_string(m.dim) + " has projective cover of dim " +
                                           std::to_string(cover));
    std::vector<Vec> gens;
    for (int k = 0; k < m.dim; ++k)
        for (const auto& x : q.ideal.basis()) gens.push_back(m.act(unit_vec(m.dim, k), x));
    Subspace sub(m.dim, gens);
    RightModule quot = RightModule::quotient(m, sub);
    // re-index the action by the quotient algebra's basis (kept A-basis elements)
    RightModule out;
    out.algebra = q.quotient;
    out.dim = quot.dim;
    std::set<int> piv(q.ideal.pivots().begin(), q.ideal.pivots().end());
    for (int i = 0; i < A.dim(); ++i)
        if (!piv.count(i)) out.rho.push_back(quot.rho[i]);
    return out;
}

std::vector<RightModule> simple_modules(const AlgebraPtr& a) {
    const Algebra& A = *a;
    if (A.dim() == 0) return {};
    const Subspace& J = A.radical();
    (void)J;
    std::vector<RightModule> out;
    for (int v = 0; v < A.num_vertices(); ++v) {
        // top of e_v A must be one-dimensional
        std::vector<Vec> gens;
        for (const auto& x : A.right_ideal(v).basis())
            for (const auto& j : A.radical().basis()) gens.push_back(A.mul(x, j));
        Subspace vj(A.dim(), gens);
        if (A.right_ideal(v).dim() - vj.dim() != 1)
            throw NotBasic("top of projective at vertex " + std::to_string(v) + " is not one-dimensional");
        Vec chi = A.vertex_character(v);
        RightModule S;
        S.algebra = a;
        S.dim = 1;
        for (int b = 0; b < A.dim(); ++b) {
            Mat R(1, 1);
            R(0, 0) = chi[b];
            S.rho.push_back(R);
        }
        S.check();
        for (const auto& j : A.radical().basis())
            if (!is_zero(S.act(unit_vec(1, 0), j))) throw NotBasic("radical acts nontrivially on a simple");
        out.push_back(std::move(S));
    }
    return out;
}

}  // namespace tx
