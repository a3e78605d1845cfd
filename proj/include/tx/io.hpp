#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tx/ainfty.hpp"
#include "tx/reconstruct.hpp"
#include "tx/resolutions.hpp"

namespace tx::io {

using json = nlohmann::json;

inline constexpr const char* kSchema = "txbench-report/1";

std::string fnv1a64(const std::string& bytes);  // 16 hex digits

struct Document {
    std::string path;
    std::string digest;
    json body;
    std::string kind() const;
};
// ParseError carries line and column of malformed JSON
Document load_document(const std::string& path);
json parse_text(const std::string& text, const std::string& where);

// scalars are strings "p" or "p/q"; integers are accepted on input
Scalar parse_scalar(const json& j);
json scalar_json(const Scalar& s);
Vec parse_vec(const json& j, int expected = -1);
json vec_json(const Vec& v);
Mat parse_mat(const json& j, int rows = -1, int cols = -1);  // row-major
json mat_json(const Mat& m);

AlgebraPtr parse_algebra(const json& j);
QuiverPresentation parse_quiver(const json& j);
RightModule parse_module(const json& j, const AlgebraPtr& A);
ProjComplex parse_complex(const json& j, const AlgebraPtr& A);
SymbolicComplex parse_symbolic(const json& j);
// a periodic document, or {"kind": "fixture", "name": ...} with one resolution per simple
std::vector<PeriodicResolution> parse_resolutions(const json& j);
IdempotentSetup parse_setup(const json& j);

json algebra_json(const Algebra& A);
json module_json(const RightModule& M);
json complex_json(const ProjComplex& c);
json periodic_json(const PeriodicResolution& R, const std::string& name);

json dims_json(const std::map<int, int>& d);
json pair_dims_json(const std::map<std::pair<int, int>, std::map<int, int>>& d);
json check_json(const CheckReport& c);
json ainf_json(const AInfCat& A);  // objects, per-pair dims, nonzero m_k entries

// sorted keys, two-space indent, trailing newline
std::string dump(const json& j);

}  // namespace tx::io
