#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <eqk/errors.hpp>
#include <eqk/norm.hpp>
#include <eqk/perturb.hpp>
#include <eqk/pointset.hpp>
#include <eqk/verify.hpp>
#include <eqk/young.hpp>

namespace eqk {

using nlohmann::json;

// --- Young functions -------------------------------------------------------
//
// {"power":{"p":2.0}} | {"indicator":{"b":1.0}}
// | {"piecewise_linear":{"breakpoints":[...],"slopes":[...],"cutoff":b?}}
// | {"affine_mix":{"base":{...},"w":0.9,"s":0.1}}

inline json young_to_json(const YoungFunction& f) {
  if (const auto* p = std::get_if<YoungFunction::Power>(&f.family())) {
    return json{{"power", {{"p", p->p}}}};
  }
  if (const auto* p = std::get_if<YoungFunction::Indicator>(&f.family())) {
    return json{{"indicator", {{"b", p->b}}}};
  }
  if (const auto* p = std::get_if<YoungFunction::PiecewiseLinear>(&f.family())) {
    json body{{"breakpoints", p->breakpoints}, {"slopes", p->slopes}};
    if (p->cutoff != kInf) body["cutoff"] = p->cutoff;
    return json{{"piecewise_linear", body}};
  }
  const auto& mix = std::get<YoungFunction::AffineMix>(f.family());
  return json{{"affine_mix", {{"base", young_to_json(*mix.base)}, {"w", mix.w}, {"s", mix.s}}}};
}

inline YoungFunction young_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw ParameterError("json: young function must be a single-key object");
  }
  const auto it = j.begin();
  const std::string& key = it.key();
  const json& body = it.value();
  if (key == "power") return YoungFunction::power(body.at("p").get<double>());
  if (key == "indicator") return YoungFunction::indicator(body.at("b").get<double>());
  if (key == "piecewise_linear") {
    const double cutoff = body.contains("cutoff") ? body.at("cutoff").get<double>() : kInf;
    return YoungFunction::piecewise_linear(body.at("breakpoints").get<std::vector<double>>(),
                                           body.at("slopes").get<std::vector<double>>(), cutoff);
  }
  if (key == "affine_mix") {
    return YoungFunction::affine_mix(young_from_json(body.at("base")),
                                     body.at("w").get<double>(), body.at("s").get<double>());
  }
  throw ParameterError("json: unknown young function family '" + key + "'");
}

// --- Norm specs -------------------------------------------------------------
//
// {"dim":n,"family":{"lp":{"p":2.0}}} with p = "inf" for the sup norm;
// families: lp, musielak_orlicz, owl, perm_mix, linfty_hyperplane, scaled.

inline json p_to_json(double p) {
  if (p == kInf) return json("inf");
  return json(p);
}

inline double p_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInf;
    throw ParameterError("json: unrecognized exponent '" + s + "'");
  }
  return j.get<double>();
}

inline json norm_spec_to_json(const NormSpec& spec);

inline json transform_body(const Transform& t) {
  switch (t.kind) {
    case Transform::Kind::uniform:
      return json{{"scale", t.scale}};
    case Transform::Kind::diagonal:
      return json{{"diag", t.diag}};
    case Transform::Kind::permutation:
      return json{{"perm", t.perm}};
    case Transform::Kind::general:
      return json{{"matrix", t.matrix}};
  }
  throw ParameterError("json: unknown transform kind");
}

inline json norm_spec_to_json(const NormSpec& spec) {
  json family;
  if (const auto* f = std::get_if<NormSpec::Lp>(&spec.family())) {
    family = json{{"lp", {{"p", p_to_json(f->p)}}}};
  } else if (const auto* f = std::get_if<NormSpec::MusielakOrlicz>(&spec.family())) {
    json fs = json::array();
    for (const auto& yf : f->functions) fs.push_back(young_to_json(yf));
    family = json{{"musielak_orlicz",
                   {{"gauge", f->gauge == Gauge::luxemburg ? "luxemburg" : "amemiya"},
                    {"functions", fs}}}};
  } else if (const auto* f = std::get_if<NormSpec::Owl>(&spec.family())) {
    family = json{{"owl", {{"w", f->weights}}}};
  } else if (const auto* f = std::get_if<NormSpec::PermMix>(&spec.family())) {
    family = json{{"perm_mix", {{"p", p_to_json(f->p)}, {"alpha", f->alpha}, {"beta", f->beta}}}};
  } else if (const auto* f = std::get_if<NormSpec::LinftyHyperplane>(&spec.family())) {
    family = json{{"linfty_hyperplane", {{"a", f->a}}}};
  } else {
    const auto& sc = std::get<NormSpec::Scaled>(spec.family());
    json body = transform_body(sc.transform);
    body["base"] = norm_spec_to_json(*sc.base);
    family = json{{"scaled", body}};
  }
  return json{{"dim", spec.dim()}, {"family", family}};
}

inline NormSpec norm_spec_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  const json& fam = j.at("family");
  if (!fam.is_object() || fam.size() != 1) {
    throw ParameterError("json: norm family must be a single-key object");
  }
  const auto it = fam.begin();
  const std::string& key = it.key();
  const json& body = it.value();
  if (key == "lp") return NormSpec::lp(dim, p_from_json(body.at("p")));
  if (key == "musielak_orlicz") {
    std::vector<YoungFunction> fs;
    for (const auto& yj : body.at("functions")) fs.push_back(young_from_json(yj));
    const std::string gauge = body.value("gauge", "luxemburg");
    if (static_cast<int>(fs.size()) != dim) {
      throw ParameterError("json: musielak_orlicz function count must equal dim");
    }
    return NormSpec::musielak_orlicz(std::move(fs),
                                     gauge == "amemiya" ? Gauge::amemiya : Gauge::luxemburg);
  }
  if (key == "owl") {
    auto w = body.at("w").get<std::vector<double>>();
    if (static_cast<int>(w.size()) != dim) throw ParameterError("json: owl weight count must equal dim");
    return NormSpec::owl(std::move(w));
  }
  if (key == "perm_mix") {
    return NormSpec::perm_mix(dim, p_from_json(body.at("p")), body.at("alpha").get<double>(),
                              body.at("beta").get<double>());
  }
  if (key == "linfty_hyperplane") {
    auto a = body.at("a").get<std::vector<double>>();
    if (static_cast<int>(a.size()) != dim) {
      throw ParameterError("json: hyperplane coefficient count must equal dim");
    }
    return NormSpec::linfty_hyperplane(std::move(a));
  }
  if (key == "scaled") {
    NormSpec base = norm_spec_from_json(body.at("base"));
    Transform t;
    if (body.contains("scale")) {
      t = Transform::uniform(body.at("scale").get<double>());
    } else if (body.contains("diag")) {
      t = Transform::diagonal(body.at("diag").get<std::vector<double>>());
    } else if (body.contains("perm")) {
      t = Transform::permutation(body.at("perm").get<std::vector<int>>());
    } else if (body.contains("matrix")) {
      t = Transform::general(body.at("matrix").get<std::vector<std::vector<double>>>());
    } else {
      throw ParameterError("json: scaled norm needs one of scale/diag/perm/matrix");
    }
    return NormSpec::scaled(std::move(base), std::move(t));
  }
  throw ParameterError("json: unknown norm family '" + key + "'");
}

// --- Point sets and certificates -------------------------------------------

inline json norm_ref_to_json(const NormRef& ref) {
  if (const auto* spec = std::get_if<NormSpec>(&ref)) return norm_spec_to_json(*spec);
  return json{{"hyperplane", {{"a", std::get<Hyperplane>(ref).a}}}};
}

inline NormRef norm_ref_from_json(const json& j) {
  if (j.contains("hyperplane")) {
    return Hyperplane{j.at("hyperplane").at("a").get<std::vector<double>>()};
  }
  NormSpec spec = norm_spec_from_json(j);
  // As a point-set reference the hyperplane family means the subspace itself,
  // with membership enforced per point rather than per difference.
  if (const auto* lh = std::get_if<NormSpec::LinftyHyperplane>(&spec.family())) {
    return Hyperplane{lh->a};
  }
  return spec;
}

inline json point_set_to_json(const PointSet& ps) {
  return json{{"points", ps.points},
              {"claimed_distance", ps.claimed_distance},
              {"norm", norm_ref_to_json(ps.norm)}};
}

inline PointSet point_set_from_json(const json& j) {
  PointSet ps;
  ps.points = j.at("points").get<std::vector<std::vector<double>>>();
  ps.claimed_distance = j.at("claimed_distance").get<double>();
  if (j.contains("norm")) ps.norm = norm_ref_from_json(j.at("norm"));
  return ps;
}

inline json certificate_to_json(const EquilateralCertificate& cert) {
  return json{{"m", cert.m},
              {"distance_min", cert.distances.min},
              {"distance_max", cert.distances.max},
              {"distance_mean", cert.distances.mean},
              {"claimed", cert.claimed},
              {"tolerance", cert.tolerance},
              {"verdict", cert.pass ? "pass" : "fail"},
              {"heuristic_flags", cert.heuristic_flags}};
}

inline json sandwich_to_json(const SandwichReport& rep) {
  return json{{"min_ratio", rep.min_ratio},
              {"max_ratio", rep.max_ratio},
              {"pass", rep.pass},
              {"samples", rep.samples},
              {"seed", rep.seed}};
}

inline json solution_to_json(const FixedPointSolution& sol) {
  return json{{"epsilon", sol.epsilon},
              {"residual_inf", sol.residual_inf},
              {"iterations", sol.iterations},
              {"method", sol.method == FixedPointMethod::damped_iteration ? "damped-iteration"
                                                                          : "quasi-newton"}};
}

}  // namespace eqk
