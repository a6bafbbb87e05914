#include "diskspace/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "diskspace/errors.hpp"
#include "diskspace/expr_json.hpp"
#include "diskspace/lorch_json.hpp"
#include "diskspace/report.hpp"
#include "diskspace/witness.hpp"

namespace diskspace {

GridConfig grid_from_json(const json& j, GridConfig g) {
  if (j.is_null()) return g;
  if (!j.is_object()) throw ParseError("grid must be an object");
  try {
    g.rings = j.value("rings", g.rings);
    g.angles = j.value("angles", g.angles);
    g.refine_iterations = j.value("refine_iterations", g.refine_iterations);
    g.quad_order = j.value("quad_order", g.quad_order);
    g.rtol = j.value("rtol", g.rtol);
    g.divergence_cap = j.value("divergence_cap", g.divergence_cap);
    g.little_bloch_eps = j.value("little_bloch_eps", g.little_bloch_eps);
    g.little_bloch_floor = j.value("little_bloch_floor", g.little_bloch_floor);
    g.seed = j.value("seed", g.seed);
  } catch (const json::exception& e) {
    throw ParseError(std::string("grid: ") + e.what());
  }
  return g;
}

namespace {

Tolerance tolerance_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_object() || (!j.contains("abs") && !j.contains("rel"))) {
    throw ParseError("tolerance must be a number or {\"abs\": x} / {\"rel\": x}");
  }
  Tolerance t{j.value("abs", 0.0), j.value("rel", 0.0)};
  if (t.abs < 0.0 || t.rel < 0.0) throw ParseError("tolerances must be nonnegative");
  return t;
}

json tolerance_to_json(const Tolerance& t) {
  json j = json::object();
  if (t.abs != 0.0 || t.rel == 0.0) j["abs"] = t.abs;
  if (t.rel != 0.0) j["rel"] = t.rel;
  return j;
}

// ---- parameter helpers ----

json resolve(const json& v, const CheckContext& ctx) {
  if (v.is_string()) return read_json_file(ctx.base_dir / v.get<std::string>());
  return v;
}

AnalyticExpr expr_param(const json& p, const char* key, const CheckContext& ctx) {
  return expr_from_json(resolve(p.at(key), ctx));
}

std::vector<AnalyticExpr> exprs_param(const json& p, const char* key, const CheckContext& ctx) {
  std::vector<AnalyticExpr> out;
  for (const auto& f : p.at(key)) out.push_back(expr_from_json(resolve(f, ctx)));
  return out;
}

VectorMapPtr map_param(const json& p, const CheckContext& ctx) { return vector_map_from_json(resolve(p.at("map"), ctx)); }

std::vector<complex> complex_list(const json& j) {
  std::vector<complex> out;
  for (const auto& v : j) out.push_back(complex_from_json(v));
  return out;
}

std::vector<AlgebraElement> elements(const json& j) {
  std::vector<AlgebraElement> out;
  for (const auto& v : j) out.push_back(element_from_json(v));
  return out;
}

GridConfig grid(const json& p, const CheckContext& ctx) { return grid_from_json(p.value("grid", json()), ctx.grid); }

std::string field(const json& p, const char* fallback) { return p.value("field", std::string(fallback)); }

json norm_field(const NormEstimate& e, const json& p) {
  const std::string f = field(p, "value");
  if (f == "value") return e.value;
  if (f == "divergent") return e.divergent;
  if (f == "converged") return e.converged;
  if (f == "infinite") return e.infinite;
  throw ParseError("unknown NormEstimate field '" + f + "'");
}

json witness_field(const WitnessResult& w, const json& p) {
  const std::string f = field(p, "found");
  if (f == "found") return true;
  if (f == "achieved") return w.achieved();
  if (f == "modulus") return w.point().modulus();
  if (f == "offset") return w.point().offset();
  throw ParseError("unknown witness field '" + f + "'");
}

std::optional<std::size_t> opt_size(const json& p, const char* key) {
  if (!p.contains(key)) return std::nullopt;
  return p.at(key).get<std::size_t>();
}

std::map<std::string, Operation> build_registry() {
  std::map<std::string, Operation> r;
  r["bloch_seminorm"] = [](const json& p, const CheckContext& c) {
    return norm_field(bloch_seminorm(expr_param(p, "f", c), grid(p, c)), p);
  };
  r["bloch_norm"] = [](const json& p, const CheckContext& c) {
    return norm_field(bloch_norm(expr_param(p, "f", c), grid(p, c)), p);
  };
  r["sup_norm"] = [](const json& p, const CheckContext& c) {
    return norm_field(sup_norm_estimate(expr_param(p, "f", c), grid(p, c)), p);
  };
  r["multiplier_bound"] = [](const json& p, const CheckContext& c) {
    return norm_field(multiplier_bound(expr_param(p, "f", c), grid(p, c)), p);
  };
  r["bergman_norm"] = [](const json& p, const CheckContext& c) {
    std::optional<double> alpha;
    if (p.contains("weight_alpha")) alpha = p.at("weight_alpha").get<double>();
    return norm_field(bergman_norm(expr_param(p, "f", c), p.at("p").get<double>(), alpha, grid(p, c)), p);
  };
  r["dilate_deviation"] = [](const json& p, const CheckContext& c) {
    return norm_field(dilate_deviation(expr_param(p, "f", c), p.at("r").get<double>(), grid(p, c)), p);
  };
  r["ring_profile"] = [](const json& p, const CheckContext& c) -> json {
    const RingProfile prof = ring_profile(expr_param(p, "f", c), grid(p, c));
    const std::string f = field(p, "tail_estimate");
    if (f == "tail_estimate") return prof.tail_estimate;
    if (f == "tail_decreasing") return prof.tail_decreasing;
    if (f == "little_bloch_consistent") return prof.little_bloch_consistent;
    if (f == "last_ring") return prof.rings.back().ring_max;
    throw ParseError("unknown profile field '" + f + "'");
  };
  r["growth_bound_check"] = [](const json& p, const CheckContext& c) -> json {
    const GrowthCheck g = growth_bound_check(expr_param(p, "f", c), p.at("r").get<double>(), grid(p, c));
    const std::string f = field(p, "holds");
    if (f == "holds") return g.holds;
    if (f == "lhs") return g.lhs;
    if (f == "rhs") return g.rhs;
    throw ParseError("unknown growth field '" + f + "'");
  };
  r["growth_bound_corpus"] = [](const json& p, const CheckContext& c) -> json {
    const auto cfg = grid(p, c);
    bool all = true;
    for (const auto& f : exprs_param(p, "fs", c)) {
      for (double rad : p.at("radii").get<std::vector<double>>()) all = growth_bound_check(f, rad, cfg).holds && all;
    }
    return all;
  };
  r["unboundedness_witness"] = [](const json& p, const CheckContext& c) {
    return witness_field(unboundedness_witness(expr_param(p, "f", c), p.at("n").get<double>(), grid(p, c)), p);
  };
  r["seminorm_witness"] = [](const json& p, const CheckContext& c) {
    return witness_field(seminorm_witness(expr_param(p, "f", c), p.at("n").get<double>(), grid(p, c)), p);
  };
  r["perturbation_norm"] = [](const json& p, const CheckContext& c) {
    const AnalyticExpr h = expr_param(p, "h", c);
    const AnalyticExpr g = perturb_to_unbounded(h, p.at("eps").get<double>());
    return norm_field(bloch_norm(g - h, grid(p, c)), p);
  };
  r["classify"] = [](const json& p, const CheckContext& c) -> json {
    std::vector<BergmanRequest> reqs;
    for (const auto& b : p.value("bergman", json::array())) {
      BergmanRequest req{b.at("p").get<double>(), std::nullopt};
      if (b.contains("weight_alpha")) req.alpha = b.at("weight_alpha").get<double>();
      reqs.push_back(req);
    }
    const auto rep = classify(expr_param(p, "f", c), reqs, grid(p, c));
    const std::string f = field(p, "bloch");
    if (f == "bloch") return verdict_name(rep.bloch);
    if (f == "little_bloch") return verdict_name(rep.little_bloch);
    if (f == "hinf") return verdict_name(rep.hinf);
    if (f.rfind("bergman", 0) == 0) return verdict_name(rep.bergman.at(std::stoul(f.substr(7))).verdict);
    throw ParseError("unknown classification field '" + f + "'");
  };
  r["independence_rank"] = [](const json& p, const CheckContext& c) -> json {
    auto fs = exprs_param(p, "fs", c);
    if (p.contains("rescale")) {
      const auto& rs = p.at("rescale");
      const auto i = rs.at("index").get<std::size_t>();
      fs.at(i) = complex_from_json(rs.at("factor")) * fs.at(i);
    }
    return independence_rank(fs, p.at("N").get<std::size_t>()).rank;
  };
  r["bound_2sum_check"] = [](const json& p, const CheckContext& c) -> json {
    const auto res = bound_2sum_check(complex_list(p.at("coeffs")), complex_list(p.at("alphas")), grid(p, c));
    const std::string f = field(p, "holds");
    if (f == "holds") return res.holds;
    if (f == "seminorm") return res.seminorm;
    if (f == "bound") return res.bound;
    throw ParseError("unknown bound field '" + f + "'");
  };
  r["bound_2sum_trials"] = [](const json& p, const CheckContext& c) -> json {
    const auto trials = bound_2sum_trials(p.at("trials").get<std::size_t>(), p.value("max_terms", std::size_t{6}),
                                          c.seed, grid(p, c));
    return static_cast<double>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.check.holds; }));
  };
  r["quotient_independence_check"] = [](const json& p, const CheckContext&) -> json {
    const auto q = quotient_independence_check(complex_list(p.at("betas")), complex_list(p.at("alphas")),
                                               p.at("m_max").get<std::size_t>());
    const std::string f = field(p, "limit");
    if (f == "limit") return q.limit;
    if (f == "nonzero_class") return q.nonzero_class;
    throw ParseError("unknown quotient field '" + f + "'");
  };
  r["build_gap_series"] = [](const json& p, const CheckContext&) -> json {
    return gap_series_from_json(p).gap_ratio();
  };
  r["lacunary_classify"] = [](const json& p, const CheckContext& c) -> json {
    const auto rep = lacunary_classify(gap_series_from_json(resolve(p.at("series"), c)), grid(p, c));
    const std::string f = field(p, "bloch");
    if (f == "bloch") return verdict_name(rep.bloch);
    if (f == "little_bloch") return verdict_name(rep.little_bloch);
    if (f == "numeric_little_bloch") return verdict_name(rep.numeric_little_bloch);
    if (f == "cross_check_agrees") return rep.cross_check_agrees;
    if (f == "tail_estimate") return rep.tail_estimate;
    throw ParseError("unknown lacunary field '" + f + "'");
  };
  r["lacunary_trials"] = [](const json& p, const CheckContext& c) -> json {
    const auto trials = lacunary_trials(p.at("trials").get<std::size_t>(), c.seed, grid(p, c));
    return static_cast<double>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.agrees; }));
  };
  r["make_separating_functional"] = [](const json& p, const CheckContext&) -> json {
    const AlgebraElement x0 = element_from_json(p.at("x0"));
    const LinearFunctional phi = make_separating_functional(x0);
    const double err = std::max(std::abs(phi(AlgebraElement::identity(x0.dim())) - 1.0), std::abs(phi(x0)));
    return err;
  };
  r["lorch_residual"] = [](const json& p, const CheckContext& c) -> json {
    const auto F = map_param(p, c);
    const auto fit = lorch_fit(*F, p.at("fit_degree").get<std::size_t>(), p.value("rho", 1.0), opt_size(p, "samples"));
    return lorch_residual(*F, fit, elements(p.at("points"))).max_deviation;
  };
  r["lorch_verdict"] = [](const json& p, const CheckContext& c) -> json {
    const auto F = map_param(p, c);
    const auto a = lorch_assess(*F, p.at("fit_degree").get<std::size_t>(), p.value("rho", 1.0), opt_size(p, "samples"),
                                elements(p.at("points")));
    return lorch_verdict_name(a.verdict);
  };
  r["lorch_coefficient_error"] = [](const json& p, const CheckContext& c) -> json {
    const auto F = map_param(p, c);
    const auto fit = lorch_fit(*F, p.at("fit_degree").get<std::size_t>(), p.value("rho", 1.0), opt_size(p, "samples"));
    const auto expected = elements(p.at("coefficients"));
    double err = 0.0;
    for (std::size_t n = 0; n < fit.coeffs.size(); ++n) {
      const AlgebraElement want = n < expected.size() ? expected[n] : AlgebraElement::filled(F->dim, 0.0);
      err = std::max(err, (fit.coeffs[n] - want).norm());
    }
    return err;
  };
  r["coefficient_decay"] = [](const json& p, const CheckContext&) -> json {
    const auto d = coefficient_decay(rule_from_json(p.at("rule")), p.at("N").get<std::size_t>());
    const std::string f = field(p, "estimate");
    if (f == "estimate") return d.estimate;
    if (f == "entire_consistent") return d.entire_consistent;
    throw ParseError("unknown decay field '" + f + "'");
  };
  r["diagonal_coeff_criterion"] = [](const json& p, const CheckContext&) -> json {
    const auto d = diagonal_coeff_criterion(complex_list(p.at("c")), p.at("beta").get<std::vector<double>>(),
                                            p.at("n_max").get<std::size_t>());
    const std::string f = field(p, "all_zero");
    if (f == "all_zero") return d.all_zero;
    if (f == "max_abs") return d.max_abs;
    if (f == "certifies_zero") return d.certifies_zero;
    throw ParseError("unknown diagonal field '" + f + "'");
  };
  r["diagonal_trials"] = [](const json& p, const CheckContext& c) -> json {
    const auto trials = diagonal_trials(p.at("trials").get<std::size_t>(), c.seed);
    return static_cast<double>(
        std::count_if(trials.begin(), trials.end(), [](const auto& t) { return !t.report.all_zero; }));
  };
  r["rescaling_invariance"] = [](const json& p, const CheckContext& c) -> json {
    const auto F = map_param(p, c);
    const complex alpha = complex_from_json(p.at("alpha"));
    const auto N = p.at("fit_degree").get<std::size_t>();
    const double rho = p.value("rho", 1.0);
    const auto base = lorch_fit(*F, N, rho);
    const auto scaled = lorch_fit(*make_scale_arg(F, alpha), N, rho);
    double err = 0.0;
    for (std::size_t n = 0; n <= N; ++n) {
      err = std::max(err, (scaled.coeffs[n] - base.coeffs[n] * std::pow(alpha, static_cast<double>(n))).norm());
    }
    return err;
  };
  r["hb_ball_norm"] = [](const json& p, const CheckContext& c) -> json {
    const auto F = map_param(p, c);
    return hb_ball_norm(*F, p.at("R").get<double>(), p.value("samples", std::size_t{256}), c.seed).value;
  };
  return r;
}

bool within(double observed, double expected, const Tolerance& t) {
  return std::abs(observed - expected) <= t.abs + t.rel * std::abs(expected);
}

bool compare(const json& observed, const json& expected, const Tolerance& t) {
  if (expected.is_object() && (expected.contains("min") || expected.contains("max"))) {
    if (!observed.is_number()) return false;
    const double v = observed.get<double>();
    const double slack_lo = expected.contains("min") ? t.abs + t.rel * std::abs(expected["min"].get<double>()) : 0.0;
    const double slack_hi = expected.contains("max") ? t.abs + t.rel * std::abs(expected["max"].get<double>()) : 0.0;
    if (expected.contains("min") && v < expected["min"].get<double>() - slack_lo) return false;
    if (expected.contains("max") && v > expected["max"].get<double>() + slack_hi) return false;
    return true;
  }
  if (expected.is_number()) return observed.is_number() && within(observed.get<double>(), expected.get<double>(), t);
  return observed == expected;
}

}  // namespace

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const DomainError*>(&e)) return "domain_error";
  if (dynamic_cast<const ParameterError*>(&e)) return "parameter_error";
  if (dynamic_cast<const UnsupportedNode*>(&e)) return "unsupported_node";
  if (dynamic_cast<const NotAGapSequence*>(&e)) return "not_a_gap_sequence";
  if (dynamic_cast<const SearchExhausted*>(&e)) return "search_exhausted";
  if (dynamic_cast<const ZeroClassError*>(&e)) return "zero_class";
  if (dynamic_cast<const ParseError*>(&e)) return "parse_error";
  return "error";
}

const std::map<std::string, Operation>& operation_registry() {
  static const std::map<std::string, Operation> registry = build_registry();
  return registry;
}

RunManifest parse_manifest(const json& j, const std::filesystem::path& base_dir) {
  RunManifest m;
  m.base_dir = base_dir;
  try {
    if (!j.is_object()) throw ParseError("manifest must be a JSON object");
    m.seed = j.value("seed", m.seed);
    if (j.contains("output_dir")) m.output_dir = j.at("output_dir").get<std::string>();
    m.grid = grid_from_json(j.value("grid", json()), m.grid);
    m.grid.seed = m.seed;
    m.grid.validate();
    std::set<std::string> ids;
    const auto& registry = operation_registry();
    for (const auto& c : j.value("checks", json::array())) {
      Check check;
      check.id = c.at("id").get<std::string>();
      if (!ids.insert(check.id).second) throw ParseError("duplicate check id '" + check.id + "'");
      check.module = c.value("module", std::string());
      check.operation = c.at("operation").get<std::string>();
      if (!registry.count(check.operation)) throw ParseError("unknown operation '" + check.operation + "'");
      check.params = c.value("params", json::object());
      if (!c.contains("expected")) throw ParseError("check '" + check.id + "' has no expected outcome");
      check.expected = c.at("expected");
      if (!c.contains("tolerance")) throw ParseError("check '" + check.id + "' has no tolerance");
      check.tolerance = tolerance_from_json(c.at("tolerance"));
      m.checks.push_back(std::move(check));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  } catch (const ParameterError& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_json_file(path), path.has_parent_path() ? path.parent_path() : ".");
}

CheckRow run_check(const Check& check, const RunManifest& manifest) {
  CheckRow row{check.id, check.module, check.operation, json(nullptr), check.expected, check.tolerance, false, "", ""};
  const CheckContext ctx{manifest.grid, manifest.seed, manifest.base_dir};
  try {
    row.observed = operation_registry().at(check.operation)(check.params, ctx);
    row.pass = compare(row.observed, check.expected, check.tolerance);
  } catch (const std::exception& e) {
    row.error = error_kind(e);
    row.message = e.what();
    row.observed = json{{"error", row.error}};
    row.pass = check.expected.is_object() && check.expected.contains("error") && check.expected["error"] == row.error;
  }
  return row;
}

std::vector<CheckRow> run_manifest(const RunManifest& manifest) {
  std::vector<CheckRow> rows;
  for (const auto& c : manifest.checks) rows.push_back(run_check(c, manifest));
  return rows;
}

json to_json(const CheckRow& row) {
  json j{{"id", row.id},
         {"module", row.module},
         {"operation", row.operation},
         {"observed", row.observed},
         {"expected", row.expected},
         {"tolerance", tolerance_to_json(row.tolerance)},
         {"pass", row.pass}};
  if (!row.message.empty()) j["message"] = row.message;
  return j;
}

std::string format_table(const std::vector<CheckRow>& rows) {
  std::size_t width = 2;
  for (const auto& r : rows) width = std::max(width, r.id.size());
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %-24s  %-24s  %-18s  %s\n", static_cast<int>(width), "id", "observed",
                "expected", "tolerance", "result");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-*s  %-24s  %-24s  %-18s  %s\n", static_cast<int>(width), r.id.c_str(),
                  r.observed.dump().c_str(), r.expected.dump().c_str(), tolerance_to_json(r.tolerance).dump().c_str(),
                  r.pass ? "PASS" : "FAIL");
    out += line;
  }
  return out;
}

}  // namespace diskspace
