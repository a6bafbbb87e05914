#pragma once

#include <filesystem>

#include "diskspace/expr.hpp"
#include "diskspace/json_util.hpp"

namespace diskspace {

// Function-spec schema:
//   {"kind": "constant", "value": c}
//   {"kind": "monomial", "degree": k}
//   {"kind": "log_one_minus", "alpha": c}
//   {"kind": "pow_neg", "beta": b}
//   {"kind": "gap_series", "exponents": [...], "coeffs": [c...], "terms": N,
//    "tail": {"scale": c, "power": s}}
//   {"kind": "dilate", "r": r, "children": [f]}
//   {"kind": "rotate", "alpha": c, "children": [f]}
//   {"kind": "lin_comb", "coeffs": [c...], "children": [f...]}
//   {"kind": "product", "children": [f...]}
//   {"kind": "half_log_ratio", "t": t}
// where c is {"re": x, "im": y}. Doubles are written in shortest round-trip
// form, so to_json(expr_from_json(j)) reproduces j.

json to_json(const AnalyticExpr& f);
json to_json(const GapSeries& gs);

/// Throws ParseError on malformed input or invalid parameters.
AnalyticExpr expr_from_json(const json& j);
GapSeries gap_series_from_json(const json& j);
AnalyticExpr load_expr(const std::filesystem::path& path);

}  // namespace diskspace
