// Command-line front end: construct equilateral sets, verify certificates,
// solve the perturbation fixed-point problems, evaluate radii, run the
// brute-force oracle, and estimate moduli of smoothness. JSON in, JSON out.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include <eqk/eqk.hpp>
#include <eqk/json_io.hpp>

namespace {

using eqk::json;

constexpr int kExitOk = 0;
constexpr int kExitCertifiedFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolverFailure = 3;

constexpr const char* kConstructionPermInvariant = "theorem-1.4";
constexpr const char* kConstructionMusielakOrlicz = "theorem-1.6";
constexpr const char* kConstructionLinftySubspace = "theorem-1.8";

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 0;  // 0: resolve from EQK_THREADS or hardware
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("EQK_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw eqk::ParameterError("cannot open input file '" + path + "'");
  return json::parse(in);
}

void emit(const json& payload, const std::optional<std::string>& out_path) {
  if (out_path.has_value()) {
    std::ofstream out(*out_path);
    if (!out) throw eqk::ParameterError("cannot open output file '" + *out_path + "'");
    out << payload.dump(2) << "\n";
  } else {
    std::cout << payload.dump(2) << "\n";
  }
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    const auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(now - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json make_manifest(const std::string& subcommand, json inputs, json parameters,
                   const GlobalOptions& g, const Stopwatch& watch,
                   std::vector<std::string> heuristic_flags = {}) {
  return json{{"subcommand", subcommand}, {"inputs", std::move(inputs)},
              {"parameters", std::move(parameters)}, {"seed", g.seed},
              {"version", eqk::kVersion}, {"timing_ms", watch.elapsed_ms()},
              {"heuristic_flags", std::move(heuristic_flags)}};
}

int cmd_construct(const std::string& norm_path, std::optional<int> k,
                  std::optional<std::string> out_path, double tol_override,
                  const GlobalOptions& g) {
  Stopwatch watch;
  const json spec_json = load_json(norm_path);
  const eqk::NormSpec spec = eqk::norm_spec_from_json(spec_json);

  eqk::PointSet set;
  std::string construction;
  json parameters = json::object();
  double tol = tol_override;

  if (const auto* hyper = std::get_if<eqk::NormSpec::LinftyHyperplane>(&spec.family())) {
    auto built = eqk::linfty_subspace_equilateral(eqk::Hyperplane{hyper->a}, k);
    set = std::move(built.set);
    construction = kConstructionLinftySubspace;
    parameters["k"] = built.k;
    if (tol <= 0.0) tol = 1e-12;
  } else if (const auto* mo = std::get_if<eqk::NormSpec::MusielakOrlicz>(&spec.family())) {
    if (k.has_value()) {
      throw eqk::ParameterError("construct: --k applies only to hyperplane subspaces");
    }
    if (mo->gauge != eqk::Gauge::luxemburg) {
      throw eqk::ParameterError("construct: only the luxemburg gauge is constructive");
    }
    auto built = eqk::musielak_orlicz_equilateral(mo->functions);
    set = std::move(built.set);
    construction = kConstructionMusielakOrlicz;
    parameters["regularized"] = built.regularized;
    if (built.regularized) parameters["regularization_k"] = built.regularization_k;
    if (tol <= 0.0) tol = 1e-9;
  } else {
    if (k.has_value()) {
      throw eqk::ParameterError("construct: --k applies only to hyperplane subspaces");
    }
    set = eqk::perm_invariant_equilateral(spec);
    construction = kConstructionPermInvariant;
    if (tol <= 0.0) tol = 1e-9;
  }

  const auto cert = eqk::certify_equilateral(set, tol);
  parameters["tol"] = tol;
  json output = eqk::point_set_to_json(set);
  output["certificate"] = eqk::certificate_to_json(cert);
  output["construction"] = construction;
  output["parameters"] = parameters;
  output["manifest"] = make_manifest("construct", json{{"norm", norm_path}}, parameters, g, watch);
  emit(output, out_path);
  return cert.pass ? kExitOk : kExitCertifiedFailure;
}

int cmd_verify(const std::string& points_path, std::optional<std::string> norm_path, double tol,
               const GlobalOptions& g) {
  Stopwatch watch;
  const json points_json = load_json(points_path);
  eqk::PointSet set = eqk::point_set_from_json(points_json);
  if (norm_path.has_value()) {
    set.norm = eqk::norm_ref_from_json(load_json(*norm_path));
  } else if (!points_json.contains("norm")) {
    throw eqk::ParameterError("verify: no norm given and none embedded in the point file");
  }

  eqk::EquilateralCertificate cert;
  bool membership_failed = false;
  std::string membership_message;
  try {
    cert = eqk::certify_equilateral(set, tol);
  } catch (const eqk::MembershipError& e) {
    membership_failed = true;
    membership_message = e.what();
  }

  json output;
  if (membership_failed) {
    output = json{{"verdict", "fail"}, {"reason", membership_message}};
  } else {
    output = eqk::certificate_to_json(cert);
  }
  output["manifest"] = make_manifest(
      "verify", json{{"points", points_path}, {"norm", norm_path.value_or("(embedded)")}},
      json{{"tol", tol}}, g, watch);
  emit(output, std::nullopt);
  return (!membership_failed && cert.pass) ? kExitOk : kExitCertifiedFailure;
}

eqk::PerturbationProblem build_problem(const std::string& variant, const json& base_json,
                                       const eqk::NormSpec& target, std::optional<int> k,
                                       int budget, int samples, std::uint64_t seed) {
  if (k.has_value() && variant != "subspace") {
    throw eqk::ParameterError("perturb: --k applies only to the subspace variant");
  }
  if (variant == "symmetric") {
    return eqk::make_symmetric_problem(eqk::norm_spec_from_json(base_json), target, budget,
                                       samples, seed);
  }
  if (variant == "orlicz") {
    const eqk::NormSpec base = eqk::norm_spec_from_json(base_json);
    const auto* mo = std::get_if<eqk::NormSpec::MusielakOrlicz>(&base.family());
    if (mo == nullptr) {
      throw eqk::ParameterError("perturb: orlicz variant needs a musielak_orlicz base");
    }
    return eqk::make_orlicz_problem(mo->functions, target, samples, seed);
  }
  if (variant == "subspace") {
    const eqk::NormRef base = eqk::norm_ref_from_json(base_json);
    eqk::Hyperplane h = [&] {
      if (const auto* hp = std::get_if<eqk::Hyperplane>(&base)) return *hp;
      const auto& spec = std::get<eqk::NormSpec>(base);
      const auto* lh = std::get_if<eqk::NormSpec::LinftyHyperplane>(&spec.family());
      if (lh == nullptr) {
        throw eqk::ParameterError("perturb: subspace variant needs a hyperplane base");
      }
      return eqk::Hyperplane{lh->a};
    }();
    return eqk::make_subspace_problem(h, k, target, samples, seed);
  }
  throw eqk::ParameterError("perturb: unknown variant '" + variant + "'");
}

json problem_parameters(const eqk::PerturbationProblem& pb) {
  json parameters{{"box_beta", pb.box_beta},        {"gammas", pb.gammas},
                  {"r_lower", pb.r_lower},          {"eps", pb.eps},
                  {"target_scale", pb.target_scale}, {"point_count", pb.point_count}};
  if (pb.variant == eqk::PerturbVariant::symmetric) {
    parameters["eps0"] = pb.eps0;
    parameters["c"] = pb.c;
  }
  if (pb.variant == eqk::PerturbVariant::musielak_orlicz) {
    parameters["K"] = pb.K;
    parameters["m"] = pb.orlicz_m;
    parameters["coordinate_order"] = pb.coordinate_order;
    parameters["function_scale"] = pb.function_scale;
  }
  if (pb.variant == eqk::PerturbVariant::linfty_subspace) {
    parameters["k"] = pb.subspace_k;
  }
  parameters["sandwich"] = eqk::sandwich_to_json(pb.sandwich);
  return parameters;
}

int cmd_perturb(const std::string& base_path, const std::string& target_path,
                const std::string& variant, std::optional<int> k, int budget, int samples,
                std::optional<std::string> out_path, const GlobalOptions& g) {
  Stopwatch watch;
  const json base_json = load_json(base_path);
  const eqk::NormSpec target = eqk::norm_spec_from_json(load_json(target_path));

  const auto pb = build_problem(variant, base_json, target, k, budget, samples, g.seed);
  const auto solution = eqk::solve_fixed_point(pb);

  const auto working_points = eqk::point_map(pb, solution.epsilon);
  std::vector<std::vector<double>> points;
  points.reserve(working_points.size());
  for (const auto& p : working_points) points.push_back(pb.to_input_coordinates(p));

  const auto cert = eqk::certify_equilateral(working_points, eqk::NormRef{pb.target}, 1.0, 1e-9,
                                             pb.heuristic_flags);

  json output{{"points", points},
              {"solution", eqk::solution_to_json(solution)},
              {"certificate", eqk::certificate_to_json(cert)},
              {"parameters", problem_parameters(pb)}};
  output["manifest"] = make_manifest(
      "perturb", json{{"base", base_path}, {"target", target_path}},
      json{{"variant", variant}, {"budget", budget}, {"samples", samples}}, g, watch,
      pb.heuristic_flags);
  emit(output, out_path);
  return cert.pass ? kExitOk : kExitCertifiedFailure;
}

int cmd_radius(std::optional<double> p, std::optional<int> n, std::optional<std::string> base_path,
               const std::string& variant, int budget, const GlobalOptions& g) {
  Stopwatch watch;
  if (p.has_value() || n.has_value()) {
    if (!p.has_value() || !n.has_value()) {
      throw eqk::ParameterError("radius: --p and --n must be given together");
    }
    const double r = eqk::radius_lp(*p, *n);
    json output{{"R", r}, {"p", *p}, {"n", *n}};
    output["manifest"] = make_manifest("radius", json::object(),
                                       json{{"p", *p}, {"n", *n}}, g, watch);
    emit(output, std::nullopt);
    return kExitOk;
  }
  if (!base_path.has_value()) {
    throw eqk::ParameterError("radius: need either --p/--n or --base/--variant");
  }
  const json base_json = load_json(*base_path);
  json output;
  std::vector<std::string> flags;
  if (variant == "symmetric") {
    const eqk::NormSpec base_raw = eqk::norm_spec_from_json(base_json);
    const int dim = base_raw.dim();
    std::vector<double> e1(static_cast<std::size_t>(dim), 0.0);
    e1[0] = 1.0;
    const double basis_norm = base_raw.eval(e1);
    const eqk::NormSpec base =
        basis_norm == 1.0 ? base_raw
                          : eqk::NormSpec::scaled(base_raw, eqk::Transform::uniform(1.0 / basis_norm));
    const auto params = eqk::select_parameters_symmetric(base, dim, budget, g.seed);
    flags = {"rho-estimate-only"};
    output = json{{"R_lower", params.r_lower},
                  {"parameters", json{{"c", params.c}, {"eps0", params.eps0}, {"eps", params.eps},
                                      {"gamma", params.gamma}, {"beta", params.beta}}},
                  {"heuristic_flags", flags}};
  } else if (variant == "orlicz") {
    const eqk::NormSpec base = eqk::norm_spec_from_json(base_json);
    const auto* mo = std::get_if<eqk::NormSpec::MusielakOrlicz>(&base.family());
    if (mo == nullptr) {
      throw eqk::ParameterError("radius: orlicz variant needs a musielak_orlicz base");
    }
    std::vector<eqk::YoungFunction> fs = mo->functions;
    std::stable_partition(fs.begin(), fs.end(), [](const eqk::YoungFunction& f) {
      return f.sup_finite_value() < 0.5;
    });
    const auto params = eqk::select_parameters_orlicz(fs);
    flags = params.flags;
    output = json{{"R_lower", params.r_lower},
                  {"parameters", json{{"K", params.K}, {"eps", params.eps}, {"beta", params.beta},
                                      {"gammas", params.gammas}, {"m", params.m}}},
                  {"heuristic_flags", flags}};
  } else if (variant == "subspace") {
    output = json{{"R_lower", 2.0}, {"parameters", json::object()},
                  {"heuristic_flags", json::array()}};
  } else {
    throw eqk::ParameterError("radius: unknown variant '" + variant + "'");
  }
  output["manifest"] = make_manifest("radius", json{{"base", *base_path}},
                                     json{{"variant", variant}, {"budget", budget}}, g, watch,
                                     flags);
  emit(output, std::nullopt);
  return kExitOk;
}

int cmd_oracle(const std::string& norm_path, int m, int restarts, std::optional<std::string> warm_path,
               std::optional<std::string> out_path, const GlobalOptions& g) {
  Stopwatch watch;
  eqk::SearchConfig cfg{eqk::norm_spec_from_json(load_json(norm_path)), m, restarts};
  std::optional<std::vector<std::vector<double>>> warm;
  if (warm_path.has_value()) {
    warm = eqk::point_set_from_json(load_json(*warm_path)).points;
  }
  const auto result = eqk::search_equilateral(cfg, g.seed, warm ? &*warm : nullptr,
                                              resolve_threads(g.threads));

  json output{{"found", result.found},
              {"residual", result.residual},
              {"restarts", result.restarts_used},
              {"inconclusive", !result.found}};
  if (result.found) {
    output["points"] = result.points;
    const auto cert =
        eqk::certify_equilateral(result.points, eqk::NormRef{cfg.norm}, 1.0, 1e-7);
    output["certificate"] = eqk::certificate_to_json(cert);
  }
  output["manifest"] = make_manifest("oracle", json{{"norm", norm_path}},
                                     json{{"m", m}, {"restarts", restarts}}, g, watch,
                                     result.found ? std::vector<std::string>{}
                                                  : std::vector<std::string>{"inconclusive"});
  emit(output, out_path);
  return result.found ? kExitOk : kExitCertifiedFailure;
}

int cmd_smoothness(const std::string& norm_path, double t, int budget, std::optional<int> n,
                   const GlobalOptions& g) {
  Stopwatch watch;
  const eqk::NormSpec spec = eqk::norm_spec_from_json(load_json(norm_path));
  json output{{"t", t},
              {"rho_lower_estimate", eqk::modulus_of_smoothness(spec, t, budget, g.seed)},
              {"heuristic_flags", json::array({"rho-estimate-only"})}};
  if (n.has_value()) {
    output["eps0"] = eqk::find_eps0(spec, *n, budget, g.seed);
    output["n"] = *n;
  }
  output["manifest"] = make_manifest("smoothness", json{{"norm", norm_path}},
                                     json{{"t", t}, {"budget", budget}}, g, watch,
                                     {"rho-estimate-only"});
  emit(output, std::nullopt);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equilateral set construction kit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", eqk::kVersion);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "seed for all stochastic operations")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (0: EQK_THREADS or all cores)");
  app.fallthrough();  // let subcommands inherit the global flags

  // construct
  auto* construct = app.add_subcommand("construct", "build an equilateral set for a norm");
  std::string construct_norm;
  std::optional<int> construct_k;
  std::optional<std::string> construct_out;
  double construct_tol = 0.0;
  construct->add_option("--norm", construct_norm, "norm spec JSON")->required();
  construct->add_option("--k", construct_k, "partition index for hyperplane subspaces");
  construct->add_option("--out", construct_out, "output file (stdout if omitted)");
  construct->add_option("--tol", construct_tol, "certificate tolerance override");

  // verify
  auto* verify = app.add_subcommand("verify", "certify pairwise distances of a point set");
  std::string verify_points;
  std::optional<std::string> verify_norm;
  double verify_tol = 1e-9;
  verify->add_option("--points", verify_points, "point set JSON")->required();
  verify->add_option("--norm", verify_norm, "norm spec JSON (overrides embedded norm)");
  verify->add_option("--tol", verify_tol, "relative tolerance")->capture_default_str();

  // perturb
  auto* perturb = app.add_subcommand("perturb", "solve the perturbation fixed-point problem");
  std::string perturb_base, perturb_target, perturb_variant;
  std::optional<int> perturb_k;
  std::optional<std::string> perturb_out;
  int perturb_budget = 100;
  int perturb_samples = 1000;
  perturb->add_option("--base", perturb_base, "structured base space JSON")->required();
  perturb->add_option("--target", perturb_target, "target norm JSON")->required();
  perturb->add_option("--variant", perturb_variant, "symmetric | orlicz | subspace")->required();
  perturb->add_option("--k", perturb_k, "partition index (subspace variant)");
  perturb->add_option("--budget", perturb_budget, "smoothness sampling budget");
  perturb->add_option("--samples", perturb_samples, "sandwich sampling count");
  perturb->add_option("--out", perturb_out, "output file (stdout if omitted)");

  // radius
  auto* radius = app.add_subcommand("radius", "distortion radii");
  std::optional<double> radius_p;
  std::optional<int> radius_n;
  std::optional<std::string> radius_base;
  std::string radius_variant = "symmetric";
  int radius_budget = 100;
  radius->add_option("--p", radius_p, "lp exponent (closed-form radius)");
  radius->add_option("--n", radius_n, "dimension (closed-form radius)");
  radius->add_option("--base", radius_base, "base space JSON (R_lower mode)");
  radius->add_option("--variant", radius_variant, "symmetric | orlicz | subspace");
  radius->add_option("--budget", radius_budget, "smoothness sampling budget");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "brute-force equilateral search");
  std::string oracle_norm;
  int oracle_m = 3;
  int oracle_restarts = 64;
  std::optional<std::string> oracle_warm, oracle_out;
  oracle->add_option("--norm", oracle_norm, "norm spec JSON")->required();
  oracle->add_option("--m", oracle_m, "target set size")->required();
  oracle->add_option("--restarts", oracle_restarts, "random restarts")->capture_default_str();
  oracle->add_option("--warm", oracle_warm, "point set JSON used as a warm start");
  oracle->add_option("--out", oracle_out, "output file (stdout if omitted)");

  // smoothness
  auto* smoothness = app.add_subcommand("smoothness", "estimate the modulus of smoothness");
  std::string smoothness_norm;
  double smoothness_t = 0.1;
  int smoothness_budget = 100;
  std::optional<int> smoothness_n;
  smoothness->add_option("--norm", smoothness_norm, "norm spec JSON")->required();
  smoothness->add_option("--t", smoothness_t, "evaluation point")->capture_default_str();
  smoothness->add_option("--budget", smoothness_budget, "sample budget")->capture_default_str();
  smoothness->add_option("--n", smoothness_n, "also search eps0 for this dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (construct->parsed()) {
      return cmd_construct(construct_norm, construct_k, construct_out, construct_tol, g);
    }
    if (verify->parsed()) return cmd_verify(verify_points, verify_norm, verify_tol, g);
    if (perturb->parsed()) {
      return cmd_perturb(perturb_base, perturb_target, perturb_variant, perturb_k, perturb_budget,
                         perturb_samples, perturb_out, g);
    }
    if (radius->parsed()) {
      return cmd_radius(radius_p, radius_n, radius_base, radius_variant, radius_budget, g);
    }
    if (oracle->parsed()) {
      return cmd_oracle(oracle_norm, oracle_m, oracle_restarts, oracle_warm, oracle_out, g);
    }
    if (smoothness->parsed()) {
      return cmd_smoothness(smoothness_norm, smoothness_t, smoothness_budget, smoothness_n, g);
    }
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const eqk::json::parse_error& e) {
    std::cerr << "malformed JSON: " << e.what() << "\n";
    return kExitUsage;
  } catch (const eqk::SmoothnessBudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const eqk::ParameterSelectionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const eqk::SelfMapAlarm& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const eqk::SolverFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const eqk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const eqk::json::exception& e) {
    std::cerr << "malformed JSON: " << e.what() << "\n";
    return kExitUsage;
  }
}
