#include "diskspace/lorch_json.hpp"

#include <string>

#include "diskspace/errors.hpp"

namespace diskspace {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json optional_base(const CoefficientRule& rule) { return rule.base ? to_json(*rule.base) : json(nullptr); }

// A coefficient is an element array, or a scalar meaning that multiple of e.
AlgebraElement coefficient_from_json(const json& j, std::optional<std::size_t> dim) {
  if (j.is_array()) return element_from_json(j);
  if (!dim) throw ParseError("scalar coefficient needs \"dim\"");
  return AlgebraElement::filled(*dim, complex_from_json(j));
}

template <class F>
auto wrap(const char* what, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const ParameterError& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json to_json(const AlgebraElement& x) {
  json arr = json::array();
  for (complex c : x.components()) arr.push_back(complex_to_json(c));
  return arr;
}

json to_json(const LinearFunctional& phi) {
  json arr = json::array();
  for (complex c : phi.weights()) arr.push_back(complex_to_json(c));
  return json{{"weights", std::move(arr)}};
}

json to_json(const CoefficientRule& rule) {
  switch (rule.kind) {
    case CoefficientRule::Kind::explicit_list: {
      json terms = json::array();
      for (const auto& t : rule.terms) terms.push_back(to_json(t));
      return json{{"kind", "explicit"}, {"terms", std::move(terms)}};
    }
    case CoefficientRule::Kind::geometric:
      return json{{"kind", "geometric"}, {"omega", complex_to_json(rule.omega)}, {"base", optional_base(rule)}};
    case CoefficientRule::Kind::inv_factorial:
      return json{{"kind", "inv_factorial"}, {"base", optional_base(rule)}};
    case CoefficientRule::Kind::exp_neg_square:
      return json{{"kind", "exp_neg_square"}, {"q", rule.q}, {"base", optional_base(rule)}};
  }
  return json(nullptr);
}

json to_json(const VectorMap& F) {
  return std::visit(
      Overloaded{
          [](const vmap::Permutation& n) { return json{{"kind", "permutation"}, {"perm", n.perm}}; },
          [&](const vmap::PointwisePoly& n) {
            json coeffs = json::array();
            for (const auto& c : n.coeffs) coeffs.push_back(to_json(c));
            return json{{"kind", "pointwise_poly"}, {"dim", F.dim}, {"coeffs", std::move(coeffs)}};
          },
          [](const vmap::PowerSeries& n) {
            return json{{"kind", "power_series"}, {"rule", to_json(n.rule)}, {"terms", n.terms}};
          },
          [](const vmap::FunctionalPower& n) {
            return json{{"kind", "functional_power"}, {"phi", to_json(n.phi)}, {"rule", to_json(n.rule)}, {"terms", n.terms}};
          },
          [](const vmap::Sum& n) {
            json children = json::array();
            for (const auto& c : n.children) children.push_back(to_json(*c));
            return json{{"kind", "sum"}, {"children", std::move(children)}};
          },
          [](const vmap::ScaleArg& n) {
            return json{{"kind", "scale_arg"}, {"alpha", complex_to_json(n.alpha)}, {"child", to_json(*n.child)}};
          },
      },
      F.data);
}

json to_json(const LorchFit& fit) {
  json coeffs = json::array();
  for (const auto& a : fit.coeffs) coeffs.push_back(to_json(a));
  return json{{"rho", fit.rho},
              {"samples", fit.samples},
              {"degree", fit.coeffs.size() - 1},
              {"decay_estimate", fit.decay_estimate},
              {"aliasing_gap", fit.aliasing_gap},
              {"aliasing_detected", fit.aliasing_detected},
              {"coefficients", std::move(coeffs)}};
}

AlgebraElement element_from_json(const json& j) {
  return wrap("algebra element", [&] {
    if (!j.is_array()) throw ParseError("algebra element must be an array of complex numbers");
    std::vector<complex> c;
    for (const auto& v : j) c.push_back(complex_from_json(v));
    return AlgebraElement(std::move(c));
  });
}

LinearFunctional functional_from_json(const json& j) {
  return wrap("functional", [&] {
    if (j.contains("separating")) return make_separating_functional(element_from_json(j.at("separating")));
    std::vector<complex> w;
    for (const auto& v : j.at("weights")) w.push_back(complex_from_json(v));
    return LinearFunctional(std::move(w));
  });
}

CoefficientRule rule_from_json(const json& j) {
  return wrap("coefficient rule", [&] {
    CoefficientRule rule;
    const std::string kind = j.at("kind").get<std::string>();
    if (j.contains("base") && !j.at("base").is_null()) rule.base = element_from_json(j.at("base"));
    if (kind == "explicit") {
      rule.kind = CoefficientRule::Kind::explicit_list;
      for (const auto& t : j.at("terms")) rule.terms.push_back(element_from_json(t));
    } else if (kind == "geometric") {
      rule.kind = CoefficientRule::Kind::geometric;
      rule.omega = complex_from_json(j.at("omega"));
    } else if (kind == "inv_factorial") {
      rule.kind = CoefficientRule::Kind::inv_factorial;
    } else if (kind == "exp_neg_square") {
      rule.kind = CoefficientRule::Kind::exp_neg_square;
      rule.q = j.value("q", 0.5);
    } else {
      throw ParseError("unknown coefficient rule '" + kind + "'");
    }
    (void)rule.dim();
    return rule;
  });
}

VectorMapPtr vector_map_from_json(const json& j) {
  return wrap("vector map", [&]() -> VectorMapPtr {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "permutation") return make_permutation(j.at("perm").get<std::vector<std::size_t>>());
    if (kind == "pointwise_poly") {
      std::optional<std::size_t> dim;
      if (j.contains("dim")) dim = j.at("dim").get<std::size_t>();
      std::vector<AlgebraElement> coeffs;
      for (const auto& c : j.at("coeffs")) coeffs.push_back(coefficient_from_json(c, dim));
      return make_pointwise_poly(std::move(coeffs));
    }
    if (kind == "power_series") return make_power_series(rule_from_json(j.at("rule")), j.at("terms").get<std::size_t>());
    if (kind == "functional_power") {
      return make_functional_power(functional_from_json(j.at("phi")), rule_from_json(j.at("rule")),
                                   j.at("terms").get<std::size_t>());
    }
    if (kind == "nonlorch_g") {
      return build_nonlorch_g(rule_from_json(j.at("rule")), functional_from_json(j.at("phi")),
                              j.at("terms").get<std::size_t>());
    }
    if (kind == "sum") {
      std::vector<VectorMapPtr> children;
      for (const auto& c : j.at("children")) children.push_back(vector_map_from_json(c));
      return make_sum(std::move(children));
    }
    if (kind == "scale_arg") return make_scale_arg(vector_map_from_json(j.at("child")), complex_from_json(j.at("alpha")));
    throw ParseError("unknown vector map kind '" + kind + "'");
  });
}

VectorMapPtr load_vector_map(const std::filesystem::path& path) { return vector_map_from_json(read_json_file(path)); }

}  // namespace diskspace
