// diskspace: norms, witnesses, Lorch fits and verification manifests.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "diskspace/errors.hpp"
#include "diskspace/expr_json.hpp"
#include "diskspace/kernels.hpp"
#include "diskspace/lorch_json.hpp"
#include "diskspace/report.hpp"
#include "diskspace/verify.hpp"
#include "diskspace/witness.hpp"

using namespace diskspace;

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitFailure = 1;
constexpr int kExitDivergent = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitNotFound = 4;
constexpr int kExitParse = 64;
constexpr int kExitDomain = 65;

struct GridFlags {
  int rings = GridConfig{}.rings;
  int angles = GridConfig{}.angles;
  double rtol = GridConfig{}.rtol;
  std::uint64_t seed = GridConfig{}.seed;

  void add(CLI::App* app) {
    app->add_option("--grid-k", rings, "ring count K (radii 1 - 2^-k, k = 0..K)");
    app->add_option("--angles", angles, "angles per ring, a power of two >= 64");
    app->add_option("--rtol", rtol, "relative convergence tolerance");
    app->add_option("--seed", seed, "64-bit seed recorded in the report");
  }
  GridConfig config() const {
    GridConfig g;
    g.rings = rings;
    g.angles = angles;
    g.rtol = rtol;
    g.seed = seed;
    g.validate();
    return g;
  }
};

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(out, text);
  }
}

int exit_for(const NormEstimate& e) {
  if (e.divergent) return kExitDivergent;
  return e.converged ? kExitConverged : kExitInconclusive;
}

std::vector<AlgebraElement> parse_points(const std::string& arg) {
  const json j = !arg.empty() && arg.front() == '[' ? json::parse(arg) : read_json_file(arg);
  std::vector<AlgebraElement> pts;
  for (const auto& p : j) pts.push_back(element_from_json(p));
  return pts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms and membership evidence for analytic function spaces on the unit disk"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "force kernel variant: scalar, avx2 or neon");

  // norm
  auto* norm = app.add_subcommand("norm", "estimate a norm of a function spec");
  std::string norm_spec, norm_space = "bloch", norm_out, norm_csv;
  double norm_p = 2.0;
  std::optional<double> norm_alpha;
  GridFlags norm_grid;
  norm->add_option("spec", norm_spec, "function spec JSON")->required();
  norm->add_option("--space", norm_space, "bloch | bloch-norm | bloch0-profile | sup | multiplier | bergman")
      ->check(CLI::IsMember({"bloch", "bloch-norm", "bloch0-profile", "sup", "multiplier", "bergman"}));
  norm->add_option("--p", norm_p, "Bergman exponent p >= 1");
  norm->add_option("--weight-alpha", norm_alpha, "Bergman weight alpha > -1");
  norm->add_option("--out", norm_out, "JSON report path (stdout when omitted)");
  norm->add_option("--csv", norm_csv, "CSV ring profile path");
  norm_grid.add(norm);

  // classify
  auto* cls = app.add_subcommand("classify", "membership verdicts for a function spec");
  std::string cls_spec, cls_out;
  std::vector<double> cls_p;
  GridFlags cls_grid;
  cls->add_option("spec", cls_spec, "function spec JSON")->required();
  cls->add_option("--p", cls_p, "Bergman exponents to test");
  cls->add_option("--out", cls_out, "JSON report path");
  cls_grid.add(cls);

  // witness
  auto* wit = app.add_subcommand("witness", "find a point where |f| or (1-|z|^2)|f'| exceeds n");
  std::string wit_spec, wit_kind = "value", wit_out;
  double wit_n = 1.0;
  GridFlags wit_grid;
  wit->add_option("spec", wit_spec, "function spec JSON")->required();
  wit->add_option("--n", wit_n, "target level")->required();
  wit->add_option("--kind", wit_kind, "value | seminorm")->check(CLI::IsMember({"value", "seminorm"}));
  wit->add_option("--out", wit_out, "JSON report path");
  wit_grid.add(wit);

  // lorch
  auto* lor = app.add_subcommand("lorch", "fit a power series to a vector map and test it off the diagonal");
  std::string lor_map, lor_points, lor_out;
  std::size_t lor_degree = 16;
  double lor_rho = 1.0;
  std::optional<std::size_t> lor_samples;
  std::size_t lor_decay_n = 0;
  lor->add_option("map", lor_map, "vector map JSON")->required();
  lor->add_option("--fit-degree", lor_degree, "fit degree N");
  lor->add_option("--rho", lor_rho, "sample radius");
  lor->add_option("--samples", lor_samples, "sample count M (default 4(N+1))");
  lor->add_option("--test-points", lor_points, "JSON array of elements, inline or a file path");
  lor->add_option("--decay-n", lor_decay_n, "also report coefficient decay of the fit over this many terms");
  lor->add_option("--out", lor_out, "JSON report path");

  // verify
  auto* ver = app.add_subcommand("verify", "run a verification manifest");
  std::string ver_manifest, ver_out;
  ver->add_option("manifest", ver_manifest, "manifest JSON")->required();
  ver->add_option("--out", ver_out, "JSON report path (default: <output_dir>/verify-report.json when set)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (!isa.empty()) {
      if (isa == "scalar") kernels::force_isa(kernels::Isa::scalar);
      else if (isa == "avx2") kernels::force_isa(kernels::Isa::avx2);
      else if (isa == "neon") kernels::force_isa(kernels::Isa::neon);
      else throw ParseError("unknown --isa '" + isa + "'");
    }

    if (*norm) {
      const AnalyticExpr f = load_expr(norm_spec);
      const GridConfig cfg = norm_grid.config();
      json report{{"command", "norm"}, {"space", norm_space}, {"grid", to_json(cfg)}, {"spec", to_json(f)}};
      int code = kExitConverged;
      std::vector<RingRecord> rings;
      if (norm_space == "bloch0-profile") {
        const RingProfile prof = ring_profile(f, cfg);
        report["profile"] = to_json(prof);
        std::vector<double> maxima;
        for (const auto& r : prof.rings) maxima.push_back(r.ring_max);
        if (growth_diverges(maxima, cfg.divergence_cap)) {
          code = kExitDivergent;
        } else if (!prof.little_bloch_consistent && !prof.little_bloch_excluded) {
          code = kExitInconclusive;
        }
        rings = prof.rings;
      } else {
        NormEstimate est;
        if (norm_space == "bloch") est = bloch_seminorm(f, cfg);
        else if (norm_space == "bloch-norm") est = bloch_norm(f, cfg);
        else if (norm_space == "sup") est = sup_norm_estimate(f, cfg);
        else if (norm_space == "multiplier") est = multiplier_bound(f, cfg);
        else {
          est = bergman_norm(f, norm_p, norm_alpha, cfg);
          report["p"] = norm_p;
          report["weight_alpha"] = norm_alpha ? json(*norm_alpha) : json(nullptr);
        }
        report["estimate"] = to_json(est);
        code = exit_for(est);
        rings = est.rings;
      }
      emit(report, norm_out);
      if (!norm_csv.empty()) write_file_atomic(norm_csv, profile_csv(rings));
      return code;
    }

    if (*cls) {
      const AnalyticExpr f = load_expr(cls_spec);
      const GridConfig cfg = cls_grid.config();
      std::vector<BergmanRequest> reqs;
      for (double p : cls_p) reqs.push_back({p, std::nullopt});
      const auto rep = classify(f, reqs, cfg);
      emit(json{{"command", "classify"}, {"grid", to_json(cfg)}, {"spec", to_json(f)}, {"report", to_json(rep)}},
           cls_out);
      return kExitConverged;
    }

    if (*wit) {
      const AnalyticExpr f = load_expr(wit_spec);
      const GridConfig cfg = wit_grid.config();
      json report{{"command", "witness"}, {"kind", wit_kind}, {"grid", to_json(cfg)}, {"spec", to_json(f)}};
      try {
        const auto w = wit_kind == "value" ? unboundedness_witness(f, wit_n, cfg) : seminorm_witness(f, wit_n, cfg);
        report["witness"] = to_json(w);
        emit(report, wit_out);
        return kExitConverged;
      } catch (const SearchExhausted& e) {
        report["witness"] = nullptr;
        report["error"] = e.what();
        emit(report, wit_out);
        return kExitNotFound;
      }
    }

    if (*lor) {
      const VectorMapPtr F = load_vector_map(lor_map);
      std::vector<AlgebraElement> points;
      if (!lor_points.empty()) points = parse_points(lor_points);
      const auto assessment = lorch_assess(*F, lor_degree, lor_rho, lor_samples, points);
      json table = json::array();
      for (std::size_t i = 0; i < points.size(); ++i) {
        table.push_back(json{{"point", to_json(points[i])}, {"residual", assessment.residual.deviations[i]}});
      }
      json report{{"command", "lorch"},
                  {"map", to_json(*F)},
                  {"assessment", to_json(assessment)},
                  {"residual_table", std::move(table)}};
      if (lor_decay_n > 0) {
        CoefficientRule fitted;
        fitted.terms = assessment.fit.coeffs;
        report["decay"] = to_json(coefficient_decay(fitted, std::max<std::size_t>(lor_decay_n, 8)));
      }
      emit(report, lor_out);
      return kExitConverged;
    }

    if (*ver) {
      const RunManifest manifest = load_manifest(ver_manifest);
      const auto rows = run_manifest(manifest);
      std::cout << format_table(rows);
      std::size_t failed = 0;
      json arr = json::array();
      for (const auto& r : rows) {
        arr.push_back(to_json(r));
        if (!r.pass) ++failed;
      }
      std::cout << rows.size() - failed << "/" << rows.size() << " checks passed\n";
      json report{{"command", "verify"},
                  {"seed", manifest.seed},
                  {"grid", to_json(manifest.grid)},
                  {"rows", std::move(arr)},
                  {"passed", rows.size() - failed},
                  {"failed", failed}};
      std::string out = ver_out;
      if (out.empty() && manifest.output_dir) out = (manifest.base_dir / *manifest.output_dir / "verify-report.json").string();
      if (!out.empty()) write_file_atomic(out, report.dump(2) + "\n");
      return failed == 0 ? kExitConverged : kExitFailure;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
