#include "diskspace/report.hpp"

#include <cstdio>

#include "diskspace/lorch_json.hpp"

namespace diskspace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const GridConfig& cfg) {
  return json{{"rings", cfg.rings},
              {"angles", cfg.angles},
              {"refine_iterations", cfg.refine_iterations},
              {"quad_order", cfg.quad_order},
              {"rtol", cfg.rtol},
              {"divergence_cap", cfg.divergence_cap},
              {"little_bloch_eps", cfg.little_bloch_eps},
              {"little_bloch_floor", cfg.little_bloch_floor},
              {"seed", cfg.seed}};
}

json to_json(const DiskPoint& p) {
  return json{{"z", complex_to_json(p.z())}, {"offset", p.offset()}, {"direction", complex_to_json(p.direction())}};
}

json to_json(const RingRecord& r) {
  return json{{"k", r.k},
              {"radius", r.radius},
              {"ring_max", r.ring_max},
              {"refined_max", r.refined_max},
              {"argmax", to_json(r.argmax)}};
}

json to_json(const NormEstimate& e) {
  json j{{"value", e.value},
         {"infinite", e.infinite},
         {"converged", e.converged},
         {"divergent", e.divergent},
         {"trace", e.trace}};
  j["achieved_at"] = e.achieved_at ? to_json(*e.achieved_at) : json(nullptr);
  if (!e.rings.empty()) {
    json rings = json::array();
    for (const auto& r : e.rings) rings.push_back(to_json(r));
    j["rings"] = std::move(rings);
  }
  if (!e.levels.empty()) j["levels"] = e.levels;
  return j;
}

json to_json(const RingProfile& p) {
  json rings = json::array();
  for (const auto& r : p.rings) rings.push_back(to_json(r));
  return json{{"tail_estimate", p.tail_estimate},
              {"tail_decreasing", p.tail_decreasing},
              {"tail_ratio", p.tail_ratio},
              {"little_bloch_excluded", p.little_bloch_excluded},
              {"little_bloch_consistent", p.little_bloch_consistent},
              {"rings", std::move(rings)}};
}

json to_json(const GrowthCheck& g) {
  return json{{"lhs", g.lhs},
              {"rhs", g.rhs},
              {"growth_constant", g.growth_constant},
              {"bloch_norm", g.bloch_norm},
              {"holds", g.holds}};
}

json to_json(const WitnessResult& w) {
  return json{{"target", w.target()}, {"achieved", w.achieved()}, {"point", to_json(w.point())}};
}

json to_json(const ClassificationReport& r) {
  json bergman = json::array();
  for (const auto& b : r.bergman) {
    bergman.push_back(json{{"p", b.request.p},
                           {"weight_alpha", b.request.alpha ? json(*b.request.alpha) : json(nullptr)},
                           {"verdict", verdict_name(b.verdict)},
                           {"estimate", to_json(b.estimate)}});
  }
  return json{{"verdicts",
               {{"bloch", verdict_name(r.bloch)},
                {"little_bloch", verdict_name(r.little_bloch)},
                {"hinf", verdict_name(r.hinf)}}},
              {"bergman", std::move(bergman)},
              {"bloch_seminorm", to_json(r.bloch_estimate)},
              {"sup_norm", to_json(r.sup_estimate)},
              {"profile", to_json(r.profile)},
              {"notes", r.notes}};
}

json to_json(const LacunaryReport& r) {
  return json{{"bloch", verdict_name(r.bloch)},
              {"little_bloch", verdict_name(r.little_bloch)},
              {"numeric_bloch", verdict_name(r.numeric_bloch)},
              {"numeric_little_bloch", verdict_name(r.numeric_little_bloch)},
              {"tail_estimate", r.tail_estimate},
              {"cross_check_agrees", r.cross_check_agrees}};
}

json to_json(const RankResult& r) {
  return json{{"rank", r.rank}, {"condition", r.condition}, {"singular_values", r.singular_values}};
}

json to_json(const SumBoundCheck& c) {
  return json{{"seminorm", c.seminorm}, {"bound", c.bound}, {"holds", c.holds}};
}

json to_json(const QuotientCheck& q) {
  json samples = json::array();
  for (const auto& [m, v] : q.samples) samples.push_back(json::array({m, v}));
  return json{{"limit", q.limit},
              {"leading_index", q.leading_index},
              {"nonzero_class", q.nonzero_class},
              {"samples", std::move(samples)}};
}

json to_json(const ResidualReport& r) {
  return json{{"deviations", r.deviations}, {"max_deviation", r.max_deviation}};
}

json to_json(const LorchAssessment& a) {
  return json{{"fit", to_json(a.fit)},
              {"residual", to_json(a.residual)},
              {"doubled_residual", to_json(a.doubled_residual)},
              {"verdict", lorch_verdict_name(a.verdict)}};
}

json to_json(const DecayReport& d) {
  return json{{"estimate", d.estimate},
              {"decreasing", d.decreasing},
              {"entire_consistent", d.entire_consistent},
              {"trend", d.trend}};
}

json to_json(const DiagonalReport& d) {
  json values = json::array();
  for (complex v : d.d) values.push_back(complex_to_json(v));
  return json{{"d", std::move(values)},
              {"max_abs", d.max_abs},
              {"all_zero", d.all_zero},
              {"vandermonde_rank", d.vandermonde_rank},
              {"certifies_zero", d.certifies_zero}};
}

std::string profile_csv(const std::vector<RingRecord>& rings) {
  std::string out = "k,r_k,ring_max,refined_max\n";
  for (const auto& r : rings) {
    out += std::to_string(r.k) + "," + format_double(r.radius) + "," + format_double(r.ring_max) + "," +
           format_double(r.refined_max) + "\n";
  }
  return out;
}

}  // namespace diskspace
