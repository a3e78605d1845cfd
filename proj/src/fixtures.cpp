#include "tx/fixtures.hpp"
#include "tx/errors.hpp"

namespace tx {

AlgebraPtr truncated_polynomial(int m) {
    QuiverPresentation q;
    q.vertices = 1;
    q.arrows.push_back({"x", 0, 0});
    q.relations.push_back(q.parse_expression("x^" + std::to_string(m)));
    return std::make_shared<const Algebra>(Algebra::from_quiver(q));
}

AlgebraPtr nakayama2() {
    QuiverPresentation q;
    q.vertices = 2;
    q.arrows.push_back({"a", 0, 1});
    q.arrows.push_back({"b", 1, 0});
    q.relations.push_back(q.parse_expression("a b"));
    q.relations.push_back(q.parse_expression("b a"));
    return std::make_shared<const Algebra>(Algebra::from_quiver(q));
}

PeriodicResolution local_periodic(const AlgebraPtr& A, const std::vector<std::string>& diffs, const std::string& beta) {
    const int n = static_cast<int>(diffs.size()) + 1;
    ProjComplex P;
    P.algebra = A;
    for (int j = 0; j < n; ++j) P.terms[-j] = {0};
    for (int j = 1; j < n; ++j) {
        ModMap d(1, 1, A->dim());
        d.at(0, 0) = A->element(diffs[j - 1]);
        P.d[-j] = d;
    }
    P.normalize();
    RightModule S = simple_modules(A)[0];
    Mat alpha = map_from_generators(*A, {0}, S, {unit_vec(1, 0)});
    Mat b = map_into_projective(*A, {0}, {{A->element(beta)}});
    return validate_periodic(A, S, P, alpha, b, n);
}

PeriodicResolution fixture_dual_numbers() { return local_periodic(truncated_polynomial(2), {}, "x"); }

PeriodicResolution fixture_jordan3() { return local_periodic(truncated_polynomial(3), {"x"}, "x^2"); }

PeriodicResolution fixture_pagoda_con(int m) {
    std::string top = m == 2 ? "x" : "x^" + std::to_string(m - 1);
    return local_periodic(truncated_polynomial(m), {"x", top, "x"}, top);
}

PeriodicResolution fixture_gamma_itself() {
    AlgebraPtr A = truncated_polynomial(2);
    ProjComplex P;
    P.algebra = A;
    P.terms[0] = {0};
    P.terms[-1] = {0};
    RightModule M = RightModule::regular_projective(A, 0);
    const Subspace& R = A->right_ideal(0);
    Mat alpha = map_from_generators(*A, {0}, M, {R.coords(A->unit())});
    std::vector<std::vector<Vec>> imgs;
    for (const auto& b : R.basis()) imgs.push_back({b});
    Mat beta = map_into_projective(*A, {0}, imgs);
    return validate_periodic(A, M, P, alpha, beta, 2);
}

PeriodicResolution fixture_nakayama2(int simple) {
    if (simple != 0 && simple != 1) throw ShapeError("NAKAYAMA2 has simples 0 and 1");
    AlgebraPtr A = nakayama2();
    int v = simple, w = 1 - simple;
    // P_1 = e_w A --(arrow v -> w)·--> P_0 = e_v A, β(1) = arrow w -> v
    std::string in = v == 0 ? "a" : "b", out = v == 0 ? "b" : "a";
    ProjComplex P;
    P.algebra = A;
    P.terms[0] = {v};
    P.terms[-1] = {w};
    ModMap d(1, 1, A->dim());
    d.at(0, 0) = A->element(in);
    P.d[-1] = d;
    RightModule S = simple_modules(A)[v];
    Mat alpha = map_from_generators(*A, {v}, S, {unit_vec(1, 0)});
    Mat beta = map_into_projective(*A, {w}, {{A->element(out)}});
    return validate_periodic(A, S, P, alpha, beta, 2);
}

std::vector<std::string> fixture_names() {
    return {"DUAL_NUMBERS", "JORDAN3", "PAGODA_CON2", "PAGODA_CON3", "PAGODA_CON4", "GAMMA_ITSELF", "NAKAYAMA2"};
}

Fixture fixture(const std::string& name) {
    Fixture f{name, {}};
    if (name == "DUAL_NUMBERS")
        f.resolutions.push_back(fixture_dual_numbers());
    else if (name == "JORDAN3")
        f.resolutions.push_back(fixture_jordan3());
    else if (name.rfind("PAGODA_CON", 0) == 0 && name.size() == 11 && name[10] >= '2' && name[10] <= '9')
        f.resolutions.push_back(fixture_pagoda_con(name[10] - '0'));
    else if (name == "GAMMA_ITSELF")
        f.resolutions.push_back(fixture_gamma_itself());
    else if (name == "NAKAYAMA2") {
        f.resolutions.push_back(fixture_nakayama2(0));
        f.resolutions.push_back(fixture_nakayama2(1));
    } else
        throw ParseError("unknown fixture " + name);
    return f;
}

}  // namespace tx
