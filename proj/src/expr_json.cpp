#include "diskspace/expr_json.hpp"

#include <fstream>
#include <sstream>

#include "diskspace/errors.hpp"

namespace diskspace {

json complex_to_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::complex<double> complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_object()) throw ParseError("expected a complex number {\"re\", \"im\"}");
  return {j.value("re", 0.0), j.value("im", 0.0)};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const auto parent = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(parent);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw Error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json children_json(const std::vector<AnalyticExpr>& children) {
  json arr = json::array();
  for (const auto& c : children) arr.push_back(to_json(c));
  return arr;
}

std::vector<AnalyticExpr> children_from(const json& j) {
  std::vector<AnalyticExpr> out;
  for (const auto& c : j.at("children")) out.push_back(expr_from_json(c));
  return out;
}

AnalyticExpr single_child(const json& j) {
  const auto& ch = j.at("children");
  if (!ch.is_array() || ch.size() != 1) throw ParseError("node needs exactly one child");
  return expr_from_json(ch[0]);
}

}  // namespace

json to_json(const GapSeries& gs) {
  json j{{"kind", "gap_series"}, {"exponents", gs.exponents()}, {"terms", gs.truncation()}};
  json coeffs = json::array();
  for (const auto& c : gs.prefix()) coeffs.push_back(complex_to_json(c));
  j["coeffs"] = std::move(coeffs);
  if (gs.tail_rule()) j["tail"] = json{{"scale", complex_to_json(gs.tail_rule()->scale)}, {"power", gs.tail_rule()->power}};
  return j;
}

json to_json(const AnalyticExpr& f) {
  return std::visit(
      Overloaded{
          [](const node::Constant& n) { return json{{"kind", "constant"}, {"value", complex_to_json(n.value)}}; },
          [](const node::Monomial& n) { return json{{"kind", "monomial"}, {"degree", n.degree}}; },
          [](const node::LogOneMinus& n) { return json{{"kind", "log_one_minus"}, {"alpha", complex_to_json(n.alpha)}}; },
          [](const node::PowNeg& n) { return json{{"kind", "pow_neg"}, {"beta", n.beta}}; },
          [](const node::Lacunary& n) { return to_json(*n.series); },
          [](const node::Dilate& n) { return json{{"kind", "dilate"}, {"r", n.r}, {"children", json::array({to_json(n.child)})}}; },
          [](const node::Rotate& n) {
            return json{{"kind", "rotate"}, {"alpha", complex_to_json(n.alpha)}, {"children", json::array({to_json(n.child)})}};
          },
          [](const node::LinComb& n) {
            json coeffs = json::array();
            for (const auto& c : n.coeffs) coeffs.push_back(complex_to_json(c));
            return json{{"kind", "lin_comb"}, {"coeffs", std::move(coeffs)}, {"children", children_json(n.children)}};
          },
          [](const node::Product& n) { return json{{"kind", "product"}, {"children", children_json(n.children)}}; },
          [](const node::HalfLogRatio& n) { return json{{"kind", "half_log_ratio"}, {"t", n.t}}; },
      },
      f.node().data);
}

GapSeries gap_series_from_json(const json& j) {
  try {
    auto exponents = j.at("exponents").get<std::vector<std::uint64_t>>();
    std::vector<complex> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(complex_from_json(c));
    std::optional<std::size_t> terms;
    if (j.contains("terms")) terms = j.at("terms").get<std::size_t>();
    std::optional<TailRule> tail;
    if (j.contains("tail")) {
      const auto& t = j.at("tail");
      tail = TailRule{complex_from_json(t.at("scale")), t.at("power").get<double>()};
    }
    return GapSeries::build(std::move(exponents), std::move(coeffs), terms, tail);
  } catch (const json::exception& e) {
    throw ParseError(std::string("gap series: ") + e.what());
  }
}

AnalyticExpr expr_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant(complex_from_json(j.at("value")));
    if (kind == "monomial") return monomial(j.at("degree").get<unsigned>());
    if (kind == "log_one_minus") return log_one_minus(complex_from_json(j.at("alpha")));
    if (kind == "pow_neg") return pow_neg(j.at("beta").get<double>());
    if (kind == "gap_series") return lacunary(gap_series_from_json(j));
    if (kind == "dilate") return dilate(single_child(j), j.at("r").get<double>());
    if (kind == "rotate") return rotate(single_child(j), complex_from_json(j.at("alpha")));
    if (kind == "lin_comb") {
      std::vector<complex> coeffs;
      for (const auto& c : j.at("coeffs")) coeffs.push_back(complex_from_json(c));
      return lin_comb(std::move(coeffs), children_from(j));
    }
    if (kind == "product") return product(children_from(j));
    if (kind == "half_log_ratio") return half_log_ratio(j.at("t").get<double>());
    throw ParseError("unknown function kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("function spec: ") + e.what());
  } catch (const ParameterError& e) {
    throw ParseError(std::string("function spec: ") + e.what());
  } catch (const NotAGapSequence& e) {
    throw ParseError(std::string("function spec: ") + e.what());
  }
}

AnalyticExpr load_expr(const std::filesystem::path& path) { return expr_from_json(read_json_file(path)); }

}  // namespace diskspace
