// txbench: batch driver over the tx library. One JSON report per job, one summary stream.
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "tx/errors.hpp"
#include "tx/fixtures.hpp"
#include "tx/io.hpp"
#include "tx/trivext.hpp"

using namespace tx;
using io::json;

namespace {

struct Options {
    std::string field = "q";
    int periods = -1;  // -1: minimum legal window
    int arity = 6;
    std::string range;  // "a..b"
    std::string out;
    uint64_t seed = 1;
    int threads = 1;
};

struct Job {
    std::string command;
    Options opt;
    std::vector<io::Document> inputs;
    json results = json::array();
    json errors = json::array();
    std::vector<std::string> summary;
    bool pass = true;

    json report() const {
        json r;
        r["schema"] = io::kSchema;
        r["command"] = command;
        json o;
        o["field"] = Field::name();
        o["periods"] = opt.periods;
        o["arity"] = opt.arity;
        o["range"] = opt.range;
        o["seed"] = opt.seed;
        r["options"] = o;
        json in = json::array();
        for (const auto& d : inputs) in.push_back({{"path", d.path}, {"digest", d.digest}});
        r["inputs"] = in;
        r["results"] = results;
        r["errors"] = errors;
        r["pass"] = pass;
        return r;
    }
    void say(const std::string& s) { summary.push_back(s); }
    void verdict(const std::string& what, bool ok) {
        say(std::string(ok ? "PASS " : "FAIL ") + what);
        pass = pass && ok;
    }
};

json error_json(const std::exception& e) {
    if (auto* t = dynamic_cast<const Error*>(&e)) return {{"kind", t->kind()}, {"detail", t->what()}};
    return {{"kind", "Error"}, {"detail", e.what()}};
}

void set_field(const std::string& f) {
    if (f == "q" || f == "Q") {
        Field::use_rationals();
    } else if (f.rfind("fp:", 0) == 0) {
        Field::use_prime(std::stoll(f.substr(3)));
    } else {
        throw ParseError("--field must be q or fp:<p>");
    }
}

std::pair<int, int> parse_range(const std::string& r, int lo, int hi) {
    if (r.empty()) return {lo, hi};
    auto pos = r.find("..");
    if (pos == std::string::npos) throw ParseError("--range expects a..b");
    return {std::stoi(r.substr(0, pos)), std::stoi(r.substr(pos + 2))};
}

std::string dims_str(const std::map<int, int>& d) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [k, v] : d) {
        os << (first ? "" : ", ") << k << ":" << v;
        first = false;
    }
    os << "}";
    return os.str();
}

std::string pair_dims_str(const PairDims& p) {
    std::ostringstream os;
    for (const auto& [ij, d] : p) os << " " << ij.first << "->" << ij.second << dims_str(d);
    return os.str();
}

std::vector<ProjComplex> complexes_of(const std::vector<PeriodicResolution>& rs) {
    std::vector<ProjComplex> out;
    for (const auto& r : rs) out.push_back(r.P);
    return out;
}

std::string name_of(const io::Document& d) {
    if (d.body.contains("name") && d.body["name"].is_string()) return d.body["name"].get<std::string>();
    return d.path;
}

// ---------- commands ----------

// randomized exactla property: M x = b solvable iff rank [M | b] = rank M
json seeded_properties(uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(1, 4), val(-2, 2);
    int ok = 0;
    for (int t = 0; t < count; ++t) {
        int r = dim(rng), c = dim(rng);
        Mat m(r, c);
        Vec b(r);
        for (int i = 0; i < r; ++i) {
            for (int k = 0; k < c; ++k) m(i, k) = Scalar(val(rng));
            b[i] = Scalar(val(rng));
        }
        Mat aug(r, c + 1);
        for (int i = 0; i < r; ++i) {
            for (int k = 0; k < c; ++k) aug(i, k) = m(i, k);
            aug(i, c) = b[i];
        }
        bool solvable = solve(m, b).has_value();
        bool nullity = rank(m) + static_cast<int>(kernel_basis(m).size()) == c;
        if (solvable == (rank(aug) == rank(m)) && nullity) ++ok;
    }
    return {{"cases", count}, {"passed", ok}};
}

void cmd_validate(Job& job) {
    json props = seeded_properties(job.opt.seed, 32);
    job.results.push_back({{"property", "solve-vs-rank"}, {"result", props}});
    job.verdict("seeded linear-algebra properties", props["passed"] == props["cases"]);
    for (const auto& d : job.inputs) {
        json r;
        r["path"] = d.path;
        std::string kind = d.kind();
        r["kind"] = kind;
        try {
            const json& b = d.body;
            if (kind == "algebra") {
                auto A = io::parse_algebra(b);
                r["dim"] = A->dim();
                r["vertices"] = A->num_vertices();
            } else if (kind == "module") {
                auto A = io::parse_algebra(b.at("algebra"));
                r["dim"] = io::parse_module(b.at("module"), A).dim;
            } else if (kind == "complex") {
                auto A = io::parse_algebra(b.at("algebra"));
                auto c = io::parse_complex(b.at("complex"), A);
                r["degrees"] = {c.lo(), c.hi()};
            } else if (kind == "periodic" || kind == "fixture") {
                auto rs = io::parse_resolutions(b);
                json per = json::array();
                for (const auto& R : rs) per.push_back({{"n", R.n}, {"module_dim", R.M.dim}});
                r["resolutions"] = per;
            } else if (kind == "setup") {
                auto vs = validate_setup(io::parse_setup(b));
                r["n"] = vs.n;
                r["t"] = vs.t();
                r["symbolic"] = vs.symbolic();
                r["acon_dim"] = vs.Acon->dim();
            } else {
                throw ParseError("unknown document kind '" + kind + "'");
            }
            r["ok"] = true;
            job.verdict(d.path + " (" + kind + ")", true);
        } catch (const std::exception& e) {
            r["ok"] = false;
            r["error"] = error_json(e);
            job.errors.push_back(error_json(e));
            job.verdict(d.path + " (" + kind + "): " + e.what(), false);
        }
        job.results.push_back(r);
    }
}

void cmd_trivext(Job& job) {
    for (const auto& d : job.inputs) {
        auto rs = io::parse_resolutions(d.body);
        for (size_t idx = 0; idx < rs.size(); ++idx) {
            const auto& R = rs[idx];
            int n = R.n;
            auto [lo, hi] = parse_range(job.opt.range, -n, n);
            auto ctx = std::make_shared<PeriodicContext>(R);
            int L = 0;
            for (int i = lo - 1; i <= hi + 1; ++i) {
                L = std::max(L, min_window(n, i));
                L = std::max(L, min_window(n, i - n + 1));
            }
            if (job.opt.periods >= 0) {
                if (job.opt.periods < L) throw WindowTooSmall("--periods " + std::to_string(job.opt.periods) +
                                                              " below the minimum " + std::to_string(L));
                L = job.opt.periods;
            }
            TrivExt T(ctx);
            EndP E = end_dga(R.P);
            json r;
            std::string tag = name_of(d) + (rs.size() > 1 ? "#" + std::to_string(idx) : "");
            r["input"] = tag;
            r["n"] = n;
            r["L"] = L;
            r["range"] = {lo, hi};
            auto st = sigma_tau_check(*ctx, L);
            r["sigma_tau"] = {{"sigma_tau_id", st.sigma_tau_id},
                              {"tau_sigma_id_ge_n", st.tau_sigma_id_ge_n},
                              {"delta_sigma_zero", st.delta_sigma_zero}};
            auto ax = trivext_axioms(T, lo, hi);
            r["axioms"] = {{"xi_squared", ax.xi_squared},     {"leibniz", ax.leibniz}, {"associative", ax.associative},
                           {"unit", ax.unit},                 {"checked", ax.checked}, {"first_failure", ax.first_failure}};
            auto qi = quasi_iso_check(T, E, lo, hi);
            r["quasi_iso"] = {{"G_unital", qi.G_unital},         {"G_multiplicative", qi.G_multiplicative},
                              {"G_differential", qi.G_differential}, {"FG_identity", qi.FG_identity},
                              {"F_chain", qi.F_chain},           {"H_inverse", qi.H_inverse},
                              {"first_failure", qi.first_failure}};
            auto tab = cohomology_table(T, E, lo, hi);
            r["table"] = {{"T", io::dims_json(tab.T_dims)},
                          {"End", io::dims_json(tab.End_dims)},
                          {"predicted", io::dims_json(tab.predicted)},
                          {"ext", tab.ext},
                          {"im_d0", tab.im_d0}};
            // window independence: first-row ranks of the windowed commutant at L and L+1
            json win = json::object();
            bool win_ok = true;
            for (int i = lo; i <= hi; ++i) {
                int dims[2];
                for (int w = 0; w < 2; ++w) {
                    auto x = commutant_solve(*ctx, L + w, i, false);
                    auto y = commutant_solve(*ctx, L + w, i - n + 1, true);
                    dims[w] = x.first_row_rank + y.first_row_rank;
                }
                win[std::to_string(i)] = {dims[0], dims[1], T.dim(i)};
                win_ok = win_ok && dims[0] == dims[1] && dims[0] == T.dim(i);
            }
            r["window"] = {{"L", L}, {"dims", win}, {"ok", win_ok}};
            job.results.push_back(r);
            job.verdict(tag + ": sigma/tau identities", st.ok());
            job.verdict(tag + ": T axioms on degrees " + std::to_string(lo) + ".." + std::to_string(hi), ax.ok());
            job.verdict(tag + ": F, G quasi-isomorphism", qi.ok());
            job.verdict(tag + ": H(T) = H(End P) = predicted " + dims_str(tab.predicted), tab.ok());
            job.verdict(tag + ": window L=" + std::to_string(L) + " vs L+1", win_ok);
        }
    }
}

void cmd_transfer(Job& job, bool positive) {
    int K = job.opt.arity;
    for (const auto& d : job.inputs) {
        auto rs = io::parse_resolutions(d.body);
        EndCategory E = end_category(complexes_of(rs));
        Transfer T = transfer_minimal_model(E.dga, K);
        json r;
        std::string tag = name_of(d);
        r["input"] = tag;
        r["K"] = K;
        auto split = check_splitting(E.dga, T.S);
        auto st = stasheff_check(*T.H);
        auto su = strict_unitality_check(*T.H);
        auto m2 = m2_representative_check(E.dga, T);
        auto id = is_identity_functor(*compose_functors(T.Pfun, T.Ifun));
        r["checks"] = {{"splitting", io::check_json(split)},
                       {"stasheff", io::check_json(st)},
                       {"strict_unitality", io::check_json(su)},
                       {"m2_representatives", io::check_json(m2)},
                       {"pfun_after_i", io::check_json(id)}};
        if (!positive) {
            r["model"] = io::ainf_json(*T.H);
            job.verdict(tag + ": splitting", split.ok);
            job.verdict(tag + ": Stasheff identities to K=" + std::to_string(K), st.ok);
            job.verdict(tag + ": strict unitality", su.ok);
            job.verdict(tag + ": m2 matches representatives", m2.ok);
            job.verdict(tag + ": Pfun . I = id", id.ok);
        } else {
            auto S = strictify_units(T.H);
            Positive N = unitally_positive(*S.A);
            auto nst = stasheff_check(*N.N);
            auto nsu = strict_unitality_check(*N.N);
            r["strictification_fired"] = S.fired;
            r["N"] = io::ainf_json(*N.N);
            r["N_checks"] = {{"stasheff", io::check_json(nst)}, {"strict_unitality", io::check_json(nsu)}};
            job.say("N dims" + pair_dims_str(block_dims(*N.N)) + (S.fired ? " (strictified)" : ""));
            job.verdict(tag + ": transferred model", st.ok && su.ok && split.ok);
            job.verdict(tag + ": N Stasheff identities to K=" + std::to_string(K), nst.ok);
            job.verdict(tag + ": N strictly unital", nsu.ok);
        }
        job.results.push_back(r);
    }
}

void cmd_yoneda(Job& job, const std::string& rescale) {
    std::vector<std::vector<PeriodicResolution>> rs;
    for (const auto& d : job.inputs) rs.push_back(io::parse_resolutions(d.body));
    const PeriodicResolution& R = rs.at(0).at(0);
    auto cls = yoneda_class(R);
    GradedSpace ext = ext_oracle(R.algebra, R.M, R.M, R.n);
    json r;
    r["class"] = {{"is_zero", cls.is_zero}, {"quotient_dim", cls.quotient_dim}, {"ext_n", ext.dim(R.n)}};
    job.say("class " + std::string(cls.is_zero ? "zero" : "nonzero") + ", dim Ext^n = " + std::to_string(ext.dim(R.n)));
    const PeriodicResolution* other = nullptr;
    PeriodicResolution scaled;
    if (!rescale.empty()) {
        scaled = tx::rescale(R, Scalar::parse(rescale));
        other = &scaled;
        r["rescale"] = rescale;
    } else if (rs.size() > 1) {
        other = &rs[1].at(0);
    }
    if (other) {
        try {
            auto cmp = compare_classes(R, *other);
            r["comparison"] = {{"verdict", cmp.str()}, {"lambda", cmp.lambda.str()}};
            job.say("comparison " + cmp.str());
            auto q = periodic_quasi_iso(R, *other);
            json maps = json::object();
            bool iso = true;
            for (const auto& [k, m] : q.cohomology_maps) {
                maps[std::to_string(k)] = io::mat_json(m);
                iso = iso && m.rows() == m.cols() && inverse(m).has_value();
            }
            r["quasi_iso"] = {{"lambda", q.lambda.str()}, {"cohomology_maps", maps}, {"isomorphisms", iso}};
            job.verdict("periodic quasi-isomorphism induces cohomology isomorphisms", iso);
        } catch (const Error& e) {
            r["comparison"] = {{"error", error_json(e)}};
            job.errors.push_back(error_json(e));
            job.verdict(std::string("comparison: ") + e.what(), e.kind() == "ClassMismatch");
        }
    }
    job.results.push_back(r);
}

json comparison_json(const ComparisonReport& c) {
    json j;
    j["K"] = c.K;
    j["L"] = c.L;
    j["n"] = c.n;
    j["t"] = c.t;
    j["symbolic"] = c.symbolic;
    j["predicted"] = io::pair_dims_json(c.predicted);
    j["N"] = io::pair_dims_json(c.N_dims);
    j["route_a"] = io::pair_dims_json(c.route_a);
    j["route_a_next_window"] = io::pair_dims_json(c.route_a_next);
    j["ext_A"] = io::pair_dims_json(c.ext_A);
    j["verdicts"] = {{"two_routes", c.two_routes}, {"route_a", c.route_a_ok}, {"window", c.window_ok}, {"ext_A", c.ext_ok}};
    j["phi"] = {{"checked", c.phi_checked}, {"note", c.phi_note}};
    if (c.phi_checked) {
        j["phi"]["functor"] = io::check_json(c.phi_functor);
        j["phi"]["unital"] = io::check_json(c.phi_unital);
        j["phi"]["linear_invertible"] = io::check_json(c.phi_linear);
        j["phi"]["istar_dg"] = io::check_json(c.istar_dg);
    }
    j["ok"] = c.ok();
    return j;
}

void cmd_reconstruct(Job& job) {
    for (const auto& d : job.inputs) {
        auto s = io::parse_setup(d.body);
        auto vs = validate_setup(s);
        auto c = compare_theorem(vs, job.opt.arity);
        json r = comparison_json(c);
        r["input"] = s.name;
        job.results.push_back(r);
        job.say(s.name + ": n=" + std::to_string(c.n) + " N" + pair_dims_str(c.N_dims));
        job.verdict(s.name + ": predicted table = N", c.two_routes);
        job.verdict(s.name + ": route (a) window cohomology = N", c.route_a_ok && c.window_ok);
        job.verdict(s.name + ": H(Hom_A(Q, S)) = N", c.ext_ok);
        if (c.phi_checked)
            job.verdict(s.name + ": phi is an A-infinity isomorphism onto N",
                        c.phi_functor.ok && c.phi_unital.ok && c.phi_linear.ok && c.istar_dg.ok);
        else
            job.say("note: " + c.phi_note);
    }
}

void cmd_search(Job& job, const SearchBounds& b) {
    auto res = instance_search(b);
    json r;
    r["bounds"] = {{"vertices", b.vertices},     {"arrows", b.arrows},       {"nilpotency", b.nilpotency},
                   {"max_relations", b.max_relations}, {"n_set", b.n_set}, {"max_hits", b.max_hits},
                   {"max_length", b.max_length}, {"max_summands", b.max_summands}};
    r["candidates"] = res.candidates;
    r["algebras"] = res.algebras;
    r["exhausted"] = res.exhausted;
    json hits = json::array();
    for (const auto& h : res.hits) {
        json hj = {{"description", h.description}, {"n", h.n}};
        hj["algebra"] = io::algebra_json(*h.setup.A);
        hj["e"] = h.setup.e;
        hj["simples"] = h.setup.simples;
        hits.push_back(hj);
    }
    r["hits"] = hits;
    job.results.push_back(r);
    if (res.hits.empty())
        job.say("no instance within the bounds (" + std::to_string(res.candidates) + " candidates)");
    for (const auto& h : res.hits) job.say("hit: " + h.description);
}

void cmd_fixture(Job& job, const std::string& name) {
    json doc;
    if (name == "PAGODA_SETUP2" || name == "PAGODA_SETUP3" || name == "PAGODA_SETUP4")
        doc = {{"kind", "setup"}, {"preset", "PAGODA_CON" + name.substr(12)}};
    else if (name == "NAKAYAMA2_SETUP")
        doc = {{"kind", "setup"}, {"preset", "NAKAYAMA2"}};
    else if (name == "FINITE_2CYCLE")
        doc = {{"kind", "setup"}, {"preset", "FINITE_2CYCLE"}};
    else {
        auto f = fixture(name);
        if (f.resolutions.size() == 1) {
            doc = io::periodic_json(f.resolutions[0], name);
        } else {
            doc = {{"kind", "periodic"}, {"name", name}, {"algebra", io::algebra_json(*f.resolutions[0].algebra)}};
            for (const auto& R : f.resolutions) {
                json p = io::periodic_json(R, name);
                doc["resolutions"].push_back(
                    {{"module", p["module"]}, {"complex", p["complex"]}, {"alpha", p["alpha"]}, {"beta", p["beta"]}, {"n", p["n"]}});
            }
        }
    }
    job.results.push_back(doc);
    job.say("fixture " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"txbench: trivial extensions, A-infinity minimal models and reconstruction"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--field", opt.field, "q or fp:<p>");
    app.add_option("--periods", opt.periods, "window size L (default: minimum legal)");
    app.add_option("--arity", opt.arity, "arity bound K");
    app.add_option("--range", opt.range, "degree range a..b");
    app.add_option("--out", opt.out, "report path (summary goes to stdout)");
    app.add_option("--seed", opt.seed, "seed for randomized property checks");
    app.add_option("--threads", opt.threads, "worker threads (does not change results)");

    std::vector<std::string> paths;
    std::string rescale, fixture_name;
    SearchBounds bounds;
    auto* v = app.add_subcommand("validate", "validate algebra/module/complex/periodic/setup documents");
    v->add_option("paths", paths)->required();
    auto* t = app.add_subcommand("trivext", "build T, check axioms, quasi-isomorphisms and the cohomology table");
    t->add_option("paths", paths)->required();
    auto* tr = app.add_subcommand("transfer", "A-infinity minimal model of End(P) by homotopy transfer");
    tr->add_option("paths", paths)->required();
    auto* po = app.add_subcommand("positive", "unitally positive N of the minimal model");
    po->add_option("paths", paths)->required();
    auto* yo = app.add_subcommand("yoneda", "Yoneda class of one resolution, or comparison of two");
    yo->add_option("paths", paths)->required();
    yo->add_option("--rescale", rescale, "compare against the same resolution with beta scaled by this");
    auto* re = app.add_subcommand("reconstruct", "validate a setup and compare N with the A side");
    re->add_option("paths", paths)->required();
    auto* se = app.add_subcommand("search", "enumerate small quiver algebras for valid setups");
    se->add_option("--vertices", bounds.vertices);
    se->add_option("--arrows", bounds.arrows);
    se->add_option("--nilpotency", bounds.nilpotency);
    se->add_option("--relations", bounds.max_relations);
    se->add_option("--n-set", bounds.n_set);
    se->add_option("--max-hits", bounds.max_hits, "-1 for all");
    se->add_option("--max-length", bounds.max_length);
    se->add_option("--max-summands", bounds.max_summands);
    auto* fx = app.add_subcommand("fixture", "emit a built-in fixture document");
    fx->add_option("name", fixture_name)->required();

    CLI11_PARSE(app, argc, argv);

    Job job;
    job.opt = opt;
    int status = 0;
    try {
        set_field(opt.field);
        job.command = app.get_subcommands().front()->get_name();
        for (const auto& p : paths) job.inputs.push_back(io::load_document(p));
        if (job.command == "validate")
            cmd_validate(job);
        else if (job.command == "trivext")
            cmd_trivext(job);
        else if (job.command == "transfer")
            cmd_transfer(job, false);
        else if (job.command == "positive")
            cmd_transfer(job, true);
        else if (job.command == "yoneda")
            cmd_yoneda(job, rescale);
        else if (job.command == "reconstruct")
            cmd_reconstruct(job);
        else if (job.command == "search") {
            bounds.threads = opt.threads;
            cmd_search(job, bounds);
        } else if (job.command == "fixture")
            cmd_fixture(job, fixture_name);
    } catch (const std::exception& e) {
        job.errors.push_back(error_json(e));
        job.say(std::string("ERROR ") + e.what());
        job.pass = false;
    }
    if (!job.pass) status = 1;

    std::string text = job.command == "fixture" && job.pass ? io::dump(job.results.at(0)) : io::dump(job.report());
    std::ostream* summary = &std::cerr;
    if (!opt.out.empty()) {
        std::ofstream f(opt.out, std::ios::binary);
        if (!f) {
            std::cerr << "cannot write " << opt.out << "\n";
            return 2;
        }
        f << text;
        summary = &std::cout;
    } else {
        std::cout << text;
    }
    for (const auto& s : job.summary) *summary << s << "\n";
    *summary << (job.pass ? "ok" : "FAILED") << "\n";
    return status;
}
