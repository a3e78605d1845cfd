#include "tx/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tx/errors.hpp"
#include "tx/fixtures.hpp"

namespace tx::io {

std::string fnv1a64(const std::string& bytes) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string Document::kind() const { return body.is_object() ? body.value("kind", std::string()) : std::string(); }

json parse_text(const std::string& text, const std::string& where) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset -> line / column
        size_t line = 1, col = 1;
        for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(where + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
}

Document load_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    Document d;
    d.path = path;
    std::string text = ss.str();
    d.digest = fnv1a64(text);
    d.body = parse_text(text, path);
    return d;
}

// ---------- numbers ----------

Scalar parse_scalar(const json& j) {
    if (j.is_string()) return Scalar::parse(j.get<std::string>());
    if (j.is_number_integer()) return Scalar(j.get<long long>());
    throw ParseError("expected a rational string, got " + j.dump());
}

json scalar_json(const Scalar& s) { return s.str(); }

Vec parse_vec(const json& j, int expected) {
    if (!j.is_array()) throw ParseError("expected a vector, got " + j.dump());
    Vec v;
    for (const auto& x : j) v.push_back(parse_scalar(x));
    if (expected >= 0 && static_cast<int>(v.size()) != expected)
        throw ShapeError("vector of length " + std::to_string(v.size()) + ", expected " + std::to_string(expected));
    return v;
}

json vec_json(const Vec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.str());
    return a;
}

Mat parse_mat(const json& j, int rows, int cols) {
    if (!j.is_array()) throw ParseError("expected a matrix, got " + j.dump());
    int r = static_cast<int>(j.size());
    int c = r ? static_cast<int>(j[0].size()) : (cols >= 0 ? cols : 0);
    if (rows >= 0 && r != rows) throw ShapeError("matrix has " + std::to_string(r) + " rows, expected " + std::to_string(rows));
    if (cols >= 0 && c != cols) throw ShapeError("matrix has " + std::to_string(c) + " columns, expected " + std::to_string(cols));
    Mat m(r, c);
    for (int i = 0; i < r; ++i) {
        Vec row = parse_vec(j[i], c);
        for (int k = 0; k < c; ++k) m(i, k) = row[k];
    }
    return m;
}

json mat_json(const Mat& m) {
    json a = json::array();
    for (int i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i)));
    return a;
}

// ---------- algebra, modules, complexes ----------

QuiverPresentation parse_quiver(const json& j) {
    QuiverPresentation q;
    q.vertices = j.at("vertices").get<int>();
    for (const auto& a : j.value("arrows", json::array()))
        q.arrows.push_back({a.at("name").get<std::string>(), a.at("src").get<int>(), a.at("tgt").get<int>()});
    for (const auto& r : j.value("relations", json::array())) q.relations.push_back(q.parse_expression(r.get<std::string>()));
    q.nilpotency = j.value("nilpotency", 0);
    return q;
}

namespace {

std::string path_expr(const QuiverPresentation& q, const Path& p) {
    if (p.arrows.empty()) return "e" + std::to_string(p.vertex);
    std::string out;
    size_t i = 0;
    while (i < p.arrows.size()) {
        size_t k = i;
        while (k < p.arrows.size() && p.arrows[k] == p.arrows[i]) ++k;
        if (!out.empty()) out += " ";
        out += q.arrows[p.arrows[i]].name;
        if (k - i > 1) out += "^" + std::to_string(k - i);
        i = k;
    }
    return out;
}

json quiver_json(const QuiverPresentation& q) {
    json j;
    j["vertices"] = q.vertices;
    j["arrows"] = json::array();
    for (const auto& a : q.arrows) j["arrows"].push_back({{"name", a.name}, {"src", a.src}, {"tgt", a.tgt}});
    j["relations"] = json::array();
    for (const auto& rel : q.relations) {
        std::string s;
        for (const auto& [c, p] : rel) {
            std::string cs = c.str();
            bool neg = cs[0] == '-';
            if (neg) cs = cs.substr(1);
            if (!s.empty()) s += neg ? " - " : " + ";
            else if (neg) s += "-";
            if (cs != "1") s += cs + "*";
            s += path_expr(q, p);
        }
        j["relations"].push_back(s);
    }
    j["nilpotency"] = q.nilpotency;
    return j;
}

// entries are coordinate vectors, or path expressions when the algebra has a quiver
Vec parse_element(const json& j, const Algebra& A) {
    if (j.is_string()) return A.element(j.get<std::string>());
    return parse_vec(j, A.dim());
}

}  // namespace

AlgebraPtr parse_algebra(const json& j) {
    if (j.contains("fixture")) return fixture(j.at("fixture").get<std::string>()).resolutions.at(0).algebra;
    if (j.contains("quiver")) return std::make_shared<const Algebra>(Algebra::from_quiver(parse_quiver(j.at("quiver"))));
    if (!j.contains("structure_constants")) throw ParseError("algebra needs structure_constants or quiver");
    const auto& sc = j.at("structure_constants");
    int n = static_cast<int>(sc.size());
    std::vector<std::string> labels;
    if (j.contains("labels"))
        labels = j.at("labels").get<std::vector<std::string>>();
    else
        for (int i = 0; i < n; ++i) labels.push_back("b" + std::to_string(i));
    if (static_cast<int>(labels.size()) != n) throw ShapeError("label count differs from dimension");
    std::vector<std::vector<Vec>> prod(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(sc[i].size()) != n) throw ShapeError("structure constants must be dim x dim");
        for (int k = 0; k < n; ++k) prod[i].push_back(parse_vec(sc[i][k], n));
    }
    Vec unit = parse_vec(j.at("unit"), n);
    std::vector<Vec> vertices;
    for (const auto& v : j.value("vertices", json::array())) vertices.push_back(parse_vec(v, n));
    return std::make_shared<const Algebra>(Algebra::from_structure_constants(labels, prod, unit, vertices));
}

json algebra_json(const Algebra& A) {
    json j;
    if (A.quiver()) {
        j["quiver"] = quiver_json(*A.quiver());
        return j;
    }
    j["labels"] = A.labels();
    json sc = json::array();
    for (int i = 0; i < A.dim(); ++i) {
        json row = json::array();
        for (int k = 0; k < A.dim(); ++k) row.push_back(vec_json(A.product(i, k).dense(A.dim())));
        sc.push_back(row);
    }
    j["structure_constants"] = sc;
    j["unit"] = vec_json(A.unit());
    j["vertices"] = json::array();
    for (int v = 0; v < A.num_vertices(); ++v) j["vertices"].push_back(vec_json(A.vertex(v)));
    return j;
}

RightModule parse_module(const json& j, const AlgebraPtr& A) {
    if (j.contains("simple")) {
        int v = j.at("simple").get<int>();
        auto s = simple_modules(A);
        if (v < 0 || v >= static_cast<int>(s.size())) throw ShapeError("simple vertex out of range");
        return s[v];
    }
    if (j.contains("projective")) return RightModule::regular_projective(A, j.at("projective").get<int>());
    RightModule M;
    M.algebra = A;
    M.dim = j.at("dim").get<int>();
    const auto& act = j.at("action");
    for (int b = 0; b < A->dim(); ++b) {
        const std::string& label = A->labels()[b];
        if (!act.contains(label)) throw ShapeError("module has no action matrix for basis element " + label);
        M.rho.push_back(parse_mat(act.at(label), M.dim, M.dim));
    }
    M.check();
    return M;
}

json module_json(const RightModule& M) {
    json j;
    j["dim"] = M.dim;
    j["action"] = json::object();
    for (int b = 0; b < M.algebra->dim(); ++b) j["action"][M.algebra->labels()[b]] = mat_json(M.rho[b]);
    return j;
}

ProjComplex parse_complex(const json& j, const AlgebraPtr& A) {
    ProjComplex c;
    c.algebra = A;
    for (const auto& t : j.at("terms")) c.terms[t.at("degree").get<int>()] = t.at("summands").get<std::vector<int>>();
    for (const auto& d : j.value("differentials", json::array())) {
        int k = d.at("degree").get<int>();
        const auto& src = c.term(k);
        const auto& tgt = c.term(k + 1);
        const auto& rows = d.at("matrix");
        if (rows.size() != tgt.size()) throw ShapeError("differential from degree " + std::to_string(k) + " has wrong row count");
        ModMap m(static_cast<int>(tgt.size()), static_cast<int>(src.size()), A->dim());
        for (size_t t = 0; t < tgt.size(); ++t) {
            if (rows[t].size() != src.size()) throw ShapeError("differential has wrong column count");
            for (size_t s = 0; s < src.size(); ++s) m.at(static_cast<int>(t), static_cast<int>(s)) = parse_element(rows[t][s], *A);
        }
        c.d[k] = m;
    }
    c.check();
    return c;
}

json complex_json(const ProjComplex& c) {
    const Algebra& A = *c.algebra;
    json j;
    j["terms"] = json::array();
    for (const auto& [k, t] : c.terms) j["terms"].push_back({{"degree", k}, {"summands", t}});
    j["differentials"] = json::array();
    for (const auto& [k, m] : c.d) {
        json rows = json::array();
        for (int t = 0; t < m.rows; ++t) {
            json row = json::array();
            for (int s = 0; s < m.cols; ++s)
                row.push_back(A.quiver() ? json(A.element_str(m.at(t, s))) : vec_json(m.at(t, s)));
            rows.push_back(row);
        }
        j["differentials"].push_back({{"degree", k}, {"matrix", rows}});
    }
    return j;
}

SymbolicComplex parse_symbolic(const json& j) {
    SymbolicComplex c;
    for (const auto& t : j.at("terms")) c.terms[t.at("degree").get<int>()] = t.at("summands").get<std::vector<int>>();
    for (const auto& d : j.value("differentials", json::array()))
        c.d[d.at("degree").get<int>()] = d.at("matrix").get<std::vector<std::vector<std::string>>>();
    return c;
}

std::vector<PeriodicResolution> parse_resolutions(const json& j) {
    std::string kind = j.value("kind", std::string());
    if (kind == "fixture") return fixture(j.at("name").get<std::string>()).resolutions;
    if (kind != "periodic") throw ParseError("expected a periodic or fixture document, got kind '" + kind + "'");
    AlgebraPtr A = parse_algebra(j.at("algebra"));
    std::vector<PeriodicResolution> out;
    auto one = [&](const json& r) {
        RightModule M = parse_module(r.at("module"), A);
        ProjComplex P = parse_complex(r.at("complex"), A);
        int n = r.at("n").get<int>();
        int u0 = underlying(*A, P.term(0)).dim, un = underlying(*A, P.term(-(n - 1))).dim;
        Mat alpha = parse_mat(r.at("alpha"), M.dim, u0);
        Mat beta = parse_mat(r.at("beta"), un, M.dim);
        return validate_periodic(A, M, P, alpha, beta, n);
    };
    if (j.contains("resolutions"))
        for (const auto& r : j.at("resolutions")) out.push_back(one(r));
    else
        out.push_back(one(j));
    return out;
}

json periodic_json(const PeriodicResolution& R, const std::string& name) {
    json j;
    j["kind"] = "periodic";
    j["name"] = name;
    j["algebra"] = algebra_json(*R.algebra);
    j["module"] = module_json(R.M);
    j["complex"] = complex_json(R.P);
    j["alpha"] = mat_json(R.alpha);
    j["beta"] = mat_json(R.beta);
    j["n"] = R.n;
    return j;
}

IdempotentSetup parse_setup(const json& j) {
    if (j.contains("preset")) {
        std::string p = j.at("preset").get<std::string>();
        if (p.rfind("PAGODA_CON", 0) == 0 && p.size() == 11) return setup_pagoda(p[10] - '0');
        if (p == "NAKAYAMA2") return setup_nakayama2();
        if (p == "FINITE_2CYCLE") return setup_finite_instance();
        throw ParseError("unknown setup preset " + p);
    }
    IdempotentSetup s;
    s.name = j.value("name", std::string("setup"));
    s.max_length = j.value("max_length", 8);
    s.simples = j.at("simples").get<std::vector<int>>();
    if (j.contains("algebra")) {
        s.A = parse_algebra(j.at("algebra"));
        if (j.contains("idempotent")) {
            // coordinates: must be idempotent and a sum of vertex idempotents
            Vec e = parse_vec(j.at("idempotent"), s.A->dim());
            if (s.A->mul(e, e) != e) throw NotIdempotent("e*e != e");
            Vec acc = zero_vec(s.A->dim());
            for (int v = 0; v < s.A->num_vertices(); ++v)
                if (s.A->mul(e, s.A->vertex(v)) == s.A->vertex(v)) {
                    s.e.push_back(v);
                    acc = acc + s.A->vertex(v);
                }
            if (acc != e) throw ShapeError("idempotent is not a sum of vertex idempotents");
        } else {
            s.e = j.value("e", std::vector<int>{});
        }
        for (const auto& c : j.value("resolutions", json::array())) s.Q.push_back(parse_complex(c, s.A));
    } else {
        s.carrier = parse_quiver(j.at("carrier"));
        s.e = j.value("e", std::vector<int>{});
        for (const auto& c : j.at("resolutions")) s.Qsym.push_back(parse_symbolic(c));
    }
    return s;
}

// ---------- reports ----------

json dims_json(const std::map<int, int>& d) {
    json j = json::object();
    for (const auto& [k, v] : d) j[std::to_string(k)] = v;
    return j;
}

json pair_dims_json(const std::map<std::pair<int, int>, std::map<int, int>>& d) {
    json j = json::object();
    for (const auto& [ij, m] : d) j[std::to_string(ij.first) + "->" + std::to_string(ij.second)] = dims_json(m);
    return j;
}

json check_json(const CheckReport& c) {
    json j;
    j["ok"] = c.ok;
    j["checked"] = c.checked;
    j["max_arity"] = c.max_arity;
    if (!c.ok) j["failure"] = c.failure;
    return j;
}

json ainf_json(const AInfCat& A) {
    json j;
    j["objects"] = A.nobj;
    j["K"] = A.K;
    j["dims"] = pair_dims_json(block_dims(A));
    json basis = json::array();
    for (int i = 0; i < A.dim(); ++i)
        basis.push_back({{"label", A.labels[i]}, {"degree", A.deg[i]}, {"src", A.src[i]}, {"tgt", A.tgt[i]}});
    j["basis"] = basis;
    json prods = json::object();
    for (int k = 2; k < static_cast<int>(A.m.size()); ++k) {
        json list = json::array();
        for (const auto& [t, v] : A.m[k]) {
            if (v.empty()) continue;
            json out = json::array();
            for (const auto& [i, c] : v.e) out.push_back({i, c.str()});
            list.push_back({{"inputs", t}, {"output", out}});
        }
        prods["m" + std::to_string(k)] = list;
    }
    j["products"] = prods;
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace tx::io
