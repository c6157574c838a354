#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "voacoh/cohomology.hpp"
#include "voacoh/modes.hpp"

namespace voacoh::tools {

using nlohmann::json;

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parsed instance file: algebra, module, grading and certify depth.
struct Instance {
  json spec;
  std::unique_ptr<VertexAlgebra> algebra;
  std::unique_ptr<GradedModule> owned;
  const GradedModule* module = nullptr;
  Grading grading;
  int depth = 6;
  std::string expect;  // "", "equal" or "counterexample"
};

Scalar parse_scalar(const json& j, const char* what);
Grading parse_grading(const json& j);
json grading_json(const Grading& g);

// Depth precedence: explicit override, then VOACOH_DEPTH, then the spec's "depth", then 6.
Instance load_instance(const json& spec, std::optional<int> depth_override);
Instance load_instance_file(const std::string& path, std::optional<int> depth_override);

// {"basis_key": "coeff"}
json vector_json(const GradedModule& m, const Vector& v);
json report_json(const Instance& inst, const CohomologyReport& r);

std::optional<int> env_depth();

}  // namespace voacoh::tools
