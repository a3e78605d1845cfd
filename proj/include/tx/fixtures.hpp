#pragma once

#include <string>
#include <vector>

#include "tx/resolutions.hpp"

namespace tx {

AlgebraPtr truncated_polynomial(int m);  // Q[x]/(x^m)
AlgebraPtr nakayama2();                  // 0 <-> 1 with a: 0 -> 1, b: 1 -> 0, ab = ba = 0

// one-vertex periodic data: P_{n-1} -> ... -> P_0 all equal to Γ, d_j given by
// left multiplication by diffs[j-1] (d_j : P_j -> P_{j-1}), M simple, β(1) = beta
PeriodicResolution local_periodic(const AlgebraPtr& A, const std::vector<std::string>& diffs, const std::string& beta);

PeriodicResolution fixture_dual_numbers();
PeriodicResolution fixture_jordan3();
PeriodicResolution fixture_pagoda_con(int m);
PeriodicResolution fixture_gamma_itself();
PeriodicResolution fixture_nakayama2(int simple);  // simple in {0, 1}

struct Fixture {
    std::string name;
    std::vector<PeriodicResolution> resolutions;  // one per simple (t objects)
};
std::vector<std::string> fixture_names();
Fixture fixture(const std::string& name);  // throws ParseError for unknown names

}  // namespace tx
