#pragma once

// Verification manifests: a list of checks, each naming an operation, its
// parameters, an expected outcome and a tolerance.
//
//   {"seed": 1, "output_dir": "out", "grid": {...},
//    "checks": [{"id": "...", "module": "...", "operation": "...",
//                "params": {...}, "expected": E, "tolerance": T}]}
//
// E is a number, a boolean, a string, {"min": a, "max": b} or
// {"error": kind}. T is a number (absolute), {"abs": x} or {"rel": x}.
// Function, map and series parameters are inline JSON or a path relative to
// the manifest.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diskspace/json_util.hpp"
#include "diskspace/norm.hpp"

namespace diskspace {

struct Tolerance {
  double abs = 0.0;
  double rel = 0.0;
};

struct Check {
  std::string id;
  std::string module;
  std::string operation;
  json params;
  json expected;
  Tolerance tolerance;
};

struct RunManifest {
  std::vector<Check> checks;
  std::uint64_t seed = 0x5eedULL;
  std::optional<std::filesystem::path> output_dir;
  GridConfig grid;
  std::filesystem::path base_dir;
};

/// Overrides the fields of `base` present in j (rings, angles,
/// refine_iterations, quad_order, rtol, divergence_cap, little_bloch_eps,
/// little_bloch_floor, seed).
GridConfig grid_from_json(const json& j, GridConfig base = {});

/// Throws ParseError for malformed manifests, duplicate ids or checks
/// without a tolerance.
RunManifest parse_manifest(const json& j, const std::filesystem::path& base_dir = ".");
RunManifest load_manifest(const std::filesystem::path& path);

struct CheckContext {
  GridConfig grid;
  std::uint64_t seed;
  std::filesystem::path base_dir;
};

/// An operation maps parameters to an observed number, boolean or string.
using Operation = std::function<json(const json& params, const CheckContext& ctx)>;
const std::map<std::string, Operation>& operation_registry();

struct CheckRow {
  std::string id;
  std::string module;
  std::string operation;
  json observed;
  json expected;
  Tolerance tolerance;
  bool pass;
  std::string error;  ///< error kind when the operation threw
  std::string message;
};

/// Error kind names used in {"error": kind} expectations.
std::string error_kind(const std::exception& e);

CheckRow run_check(const Check& check, const RunManifest& manifest);
std::vector<CheckRow> run_manifest(const RunManifest& manifest);

json to_json(const CheckRow& row);
/// id, observed, expected, tolerance, PASS/FAIL; one line per row.
std::string format_table(const std::vector<CheckRow>& rows);

}  // namespace diskspace
