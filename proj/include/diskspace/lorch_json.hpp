#pragma once

#include <filesystem>

#include "diskspace/json_util.hpp"
#include "diskspace/lorch.hpp"

namespace diskspace {

// Vector-map schema. Elements are arrays of complex numbers; a bare complex
// in a coefficient list means that multiple of e (needs "dim").
//   {"kind": "permutation", "perm": [1, 0]}
//   {"kind": "pointwise_poly", "dim": d, "coeffs": [c0, c1, ...]}
//   {"kind": "power_series", "rule": R, "terms": N}
//   {"kind": "functional_power", "phi": F, "rule": R, "terms": N}
//   {"kind": "sum", "children": [...]}
//   {"kind": "scale_arg", "alpha": c, "child": map}
//   {"kind": "nonlorch_g", "phi": F, "rule": R, "terms": N}   (build_nonlorch_g)
// F is {"weights": [...]} or {"separating": x0}, the latter built with
// make_separating_functional. R is one of
//   {"kind": "explicit", "terms": [element, ...]}
//   {"kind": "geometric", "omega": c, "base": element}
//   {"kind": "inv_factorial", "base": element}
//   {"kind": "exp_neg_square", "q": q, "base": element}

json to_json(const AlgebraElement& x);
json to_json(const LinearFunctional& phi);
json to_json(const CoefficientRule& rule);
json to_json(const VectorMap& F);
json to_json(const LorchFit& fit);

/// Each throws ParseError on malformed input or invalid parameters.
AlgebraElement element_from_json(const json& j);
LinearFunctional functional_from_json(const json& j);
CoefficientRule rule_from_json(const json& j);
VectorMapPtr vector_map_from_json(const json& j);
VectorMapPtr load_vector_map(const std::filesystem::path& path);

}  // namespace diskspace
