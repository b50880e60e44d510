#include "hrvlab/spec_json.hpp"

#include <string>

namespace hrvlab {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* field, const char* where) {
  if (!j.is_object() || !j.contains(field)) {
    throw ConfigError(std::string(where) + ": missing field '" + field + "'");
  }
  return j.at(field);
}

double number(const json& j, const char* field, const char* where) {
  const json& v = require(j, field, where);
  if (!v.is_number()) {
    throw ConfigError(std::string(where) + ": field '" + field + "' must be a number");
  }
  return v.get<double>();
}

template <class T>
T checked(const json& j, const char* field, const char* where) {
  const double v = number(j, field, where);
  try {
    return T(v);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(where) + ": field '" + field + "': " + e.what());
  }
}

TailIndex tail_index(const json& j, const char* field, const char* where) {
  return checked<TailIndex>(j, field, where);
}

Probability probability(const json& j, const char* field, const char* where) {
  return checked<Probability>(j, field, where);
}

std::string text(const json& j, const char* field, const char* where) {
  const json& v = require(j, field, where);
  if (!v.is_string()) {
    throw ConfigError(std::string(where) + ": field '" + field + "' must be a string");
  }
  return v.get<std::string>();
}

json axes_y_json(const gen::AxesY& y) {
  json j{{"type", "axes_y"}, {"axis_prob", y.axis_prob.value()}};
  if (const auto* p = std::get_if<law::Pareto>(&y.magnitude)) {
    j["alpha"] = p->alpha.value();
  } else {
    j["magnitude"] = to_json(y.magnitude);
  }
  return j;
}

gen::AxesY axes_y_from(const json& j) {
  const Probability axis_prob =
      j.contains("axis_prob") ? probability(j, "axis_prob", "axes_y") : Probability(0.5);
  if (j.contains("magnitude")) {
    if (j.contains("alpha")) throw ConfigError("axes_y: give either 'alpha' or 'magnitude'");
    return {scalar_law_from_json(j.at("magnitude")), axis_prob};
  }
  return {law::Pareto{tail_index(j, "alpha", "axes_y")}, axis_prob};
}

gen::HiddenE0 hidden_from(const json& j) {
  return {tail_index(j, "alpha0", "hidden_e0"),
          hidden_angular_from_json(require(j, "angular", "hidden_e0"))};
}

gen::RadialAngularE radial_from(const json& j) {
  return {tail_index(j, "alpha", "radial_angular_e"),
          angular_law_from_json(require(j, "angular", "radial_angular_e"))};
}

json hidden_json(const gen::HiddenE0& h) {
  return {{"type", "hidden_e0"}, {"alpha0", h.alpha0.value()}, {"angular", to_json(h.angular)}};
}

json radial_json(const gen::RadialAngularE& r) {
  return {{"type", "radial_angular_e"}, {"alpha", r.alpha.value()}, {"angular", to_json(r.angular)}};
}

}  // namespace

json to_json(const ScalarLaw& l) {
  struct {
    json operator()(const law::Pareto& p) const {
      return {{"kind", "pareto"}, {"alpha", p.alpha.value()}};
    }
    json operator()(const law::UnitExponential&) const { return {{"kind", "unit_exponential"}}; }
    json operator()(const law::ShiftedUnitExponential&) const {
      return {{"kind", "shifted_unit_exponential"}};
    }
    json operator()(const law::PointMass& p) const { return {{"kind", "point_mass"}, {"c", p.c}}; }
  } visitor;
  return std::visit(visitor, l);
}

json to_json(const AngularLawE& a) {
  struct {
    json operator()(const angular::Uniform01&) const { return {{"kind", "uniform01"}}; }
    json operator()(const angular::TwoPoint& t) const {
      return {{"kind", "two_point"}, {"a", t.a}, {"b", t.b}, {"prob_a", t.prob_a.value()}};
    }
    json operator()(const angular::PointMass& p) const {
      return {{"kind", "point_mass"}, {"w", p.w}};
    }
  } visitor;
  return std::visit(visitor, a);
}

json to_json(const HiddenAngularSpec& s) {
  return {{"p", s.p.value()}, {"g1", to_json(s.g1)}, {"g2", to_json(s.g2)}};
}

json to_json(const GeneratorSpec& spec) {
  struct {
    json operator()(const gen::RadialAngularE& r) const { return radial_json(r); }
    json operator()(const gen::HiddenE0& h) const { return hidden_json(h); }
    json operator()(const gen::AxesY& y) const { return axes_y_json(y); }
    json operator()(const gen::Mixture& m) const {
      return {{"type", "mixture"},
              {"mix_prob", m.mix_prob.value()},
              {"y", axes_y_json(m.y)},
              {"v", hidden_json(m.v)}};
    }
    json operator()(const gen::Additive& a) const {
      json y = std::visit(
          [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, gen::AxesY>) {
              return axes_y_json(c);
            } else {
              return {{"type", "iid_pareto_pair"}, {"alpha", c.alpha.value()}};
            }
          },
          a.y);
      json v = std::visit(
          [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, gen::IidParetoPair>) {
              return {{"type", "iid_pareto_pair"}, {"alpha", c.alpha.value()}};
            } else if constexpr (std::is_same_v<T, gen::HiddenE0>) {
              return hidden_json(c);
            } else if constexpr (std::is_same_v<T, gen::RadialRatio>) {
              return {{"type", "radial_ratio"},
                      {"alpha0", c.alpha0.value()},
                      {"theta", to_json(c.theta)},
                      {"p", c.p.value()}};
            } else {
              return radial_json(c);
            }
          },
          a.v);
      json out{{"type", "additive"}, {"y", y}, {"v", v}};
      if (auto r = additive_regime(a)) out["regime"] = to_string(*r);
      return out;
    }
  } visitor;
  return std::visit(visitor, spec);
}

ScalarLaw scalar_law_from_json(const json& j) {
  const std::string kind = text(j, "kind", "scalar law");
  if (kind == "pareto") return law::Pareto{tail_index(j, "alpha", "pareto law")};
  if (kind == "unit_exponential") return law::UnitExponential{};
  if (kind == "shifted_unit_exponential") return law::ShiftedUnitExponential{};
  if (kind == "point_mass") return law::PointMass{number(j, "c", "point_mass law")};
  throw ConfigError("unknown scalar law kind '" + kind + "'");
}

AngularLawE angular_law_from_json(const json& j) {
  const std::string kind = text(j, "kind", "angular law");
  AngularLawE out;
  if (kind == "uniform01") {
    out = angular::Uniform01{};
  } else if (kind == "two_point") {
    out = angular::TwoPoint{number(j, "a", "two_point"), number(j, "b", "two_point"),
                            probability(j, "prob_a", "two_point")};
  } else if (kind == "point_mass") {
    out = angular::PointMass{number(j, "w", "angular point_mass")};
  } else {
    throw ConfigError("unknown angular law kind '" + kind + "'");
  }
  validate(out);
  return out;
}

HiddenAngularSpec hidden_angular_from_json(const json& j) {
  HiddenAngularSpec s{probability(j, "p", "hidden angular"),
                      scalar_law_from_json(require(j, "g1", "hidden angular")),
                      scalar_law_from_json(require(j, "g2", "hidden angular"))};
  validate(s);
  return s;
}

GeneratorSpec spec_from_json(const json& j) {
  const std::string type = text(j, "type", "generator spec");
  GeneratorSpec spec = [&]() -> GeneratorSpec {
    if (type == "radial_angular_e") return radial_from(j);
    if (type == "hidden_e0") return hidden_from(j);
    if (type == "axes_y") return axes_y_from(j);
    if (type == "mixture") {
      const double mix = j.contains("mix_prob") ? number(j, "mix_prob", "mixture") : 0.5;
      return gen::Mixture{Probability(mix), axes_y_from(require(j, "y", "mixture")),
                          hidden_from(require(j, "v", "mixture"))};
    }
    if (type == "additive") {
      const json& jy = require(j, "y", "additive");
      const json& jv = require(j, "v", "additive");
      const std::string ty = text(jy, "type", "additive.y");
      const std::string tv = text(jv, "type", "additive.v");
      gen::AdditiveY y = [&]() -> gen::AdditiveY {
        if (ty == "axes_y") return axes_y_from(jy);
        if (ty == "iid_pareto_pair") return gen::IidParetoPair{tail_index(jy, "alpha", "additive.y")};
        throw ConfigError("additive.y: unsupported type '" + ty + "'");
      }();
      gen::AdditiveV v = [&]() -> gen::AdditiveV {
        if (tv == "iid_pareto_pair") return gen::IidParetoPair{tail_index(jv, "alpha", "additive.v")};
        if (tv == "hidden_e0") return hidden_from(jv);
        if (tv == "radial_ratio") {
          return gen::RadialRatio{tail_index(jv, "alpha0", "radial_ratio"),
                                  scalar_law_from_json(require(jv, "theta", "radial_ratio")),
                                  probability(jv, "p", "radial_ratio")};
        }
        if (tv == "radial_angular_e") return radial_from(jv);
        throw ConfigError("additive.v: unsupported type '" + tv + "'");
      }();
      gen::Additive a{std::move(y), std::move(v)};
      if (j.contains("regime")) {
        const std::string tag = text(j, "regime", "additive");
        const auto r = additive_regime(a);
        if (!r || tag != to_string(*r)) {
          throw ConfigError("additive: regime tag '" + tag +
                            "' is inconsistent with sign(alpha_star - (alpha0 - alpha))");
        }
      }
      return a;
    }
    throw ConfigError("unknown generator type '" + type + "'");
  }();
  validate(spec);
  return spec;
}

}  // namespace hrvlab
