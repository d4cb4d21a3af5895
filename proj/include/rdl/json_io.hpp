#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdl/consistency.hpp"
#include "rdl/map_builder.hpp"
#include "rdl/state_family.hpp"
#include "rdl/subspace.hpp"
#include "rdl/two_qubit.hpp"

// JSON encodings shared by every module. Matrices are
// {"rows": n, "cols": n, "data": [[re, im], ...]} in row-major order.
// Decoders throw InputError on malformed input.

namespace rdl::json_io {

using nlohmann::json;

/// Parses text; syntax errors become InputError("<source>:<line>:<col>: ...").
json parse(const std::string& text, const std::string& source);
json load_file(const std::string& path);

json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);
std::vector<ComplexMatrix> matrices_from_json(const json& j);

json to_json(const StateFamily& f);
StateFamily family_from_json(const json& j, const ToleranceConfig& tol = {});

json to_json(const TwoQubitParams& p);
TwoQubitParams params_from_json(const json& j);

json to_json(const SubspaceV& v);
json to_json(const ConsistencyReport& r);
json to_json(const Superoperator& s);
json to_json(const SignedKraus& k);
json to_json(const Verdicts& v);
json to_json(const ToleranceConfig& t);
ToleranceConfig tolerances_from_json(const json& j, ToleranceConfig base = {});

json to_json(const LinearityCoefficients& c);
LinearityCoefficients coefficients_from_json(const json& j);
json to_json(const std::vector<LinearityResidual>& r);
json to_json(const std::vector<PairDistance>& pairs);
json to_json(const std::vector<BlochRow>& rows);

}  // namespace rdl::json_io
