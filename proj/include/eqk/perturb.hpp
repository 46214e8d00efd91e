#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <eqk/construct.hpp>
#include <eqk/errors.hpp>
#include <eqk/norm.hpp>
#include <eqk/rng.hpp>
#include <eqk/smoothness.hpp>
#include <eqk/young.hpp>

namespace eqk {

enum class PerturbVariant { symmetric, musielak_orlicz, linfty_subspace };
enum class FixedPointMethod { damped_iteration, quasi_newton };

struct SandwichReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool pass = false;
  int samples = 0;
  std::uint64_t seed = 0;
};

// Samples the ratio ||x||_target / ||x||_base; passes when all sampled ratios
// lie in [1, R] up to 1e-9. Heuristic: sampling, not a certificate.
inline SandwichReport check_sandwich(const NormSpec& base, const NormSpec& target, double R,
                                     int samples, std::uint64_t seed) {
  if (base.dim() != target.dim()) throw DomainError("perturb: dimension mismatch");
  if (samples < 1) throw ParameterError("perturb: samples must be >= 1");
  const auto n = static_cast<std::size_t>(base.dim());
  Rng rng(seed);
  SandwichReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.min_ratio = kInf;
  rep.max_ratio = 0.0;

  auto take = [&](std::span<const double> x) {
    const double bn = base.eval(x);
    if (!(bn > 0.0)) return;
    const double r = target.eval(x) / bn;
    rep.min_ratio = std::min(rep.min_ratio, r);
    rep.max_ratio = std::max(rep.max_ratio, r);
  };

  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = 1.0;
    take(e);
    e[i] = 0.0;
  }
  for (int t = 0; t < samples; ++t) take(rng.gaussian_vector(n));
  rep.pass = rep.min_ratio >= 1.0 - 1e-9 && rep.max_ratio <= R + 1e-9;
  return rep;
}

struct SymmetricParameters {
  double c = 0.0;
  double eps0 = 0.0;
  double eps = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double r_lower = 0.0;
};

// Parameters gamma = c - eps, beta = 3 eps with eps = eps0 / (3n), verified
// against the two defining norm inequalities. Expects a base with unit basis
// vectors. Because rho is estimated from below, eps0 is shrunk on
// verification failure before giving up.
inline SymmetricParameters select_parameters_symmetric(const NormSpec& base, int n, int budget,
                                                       std::uint64_t seed) {
  const auto un = static_cast<std::size_t>(base.dim());
  const SupportingFunctional support = supporting_functional_symmetric(base);
  const double c = support.c;
  double eps0 = find_eps0(base, n, budget, seed);

  std::vector<double> interior(un, 0.0), edge(un, 0.0);
  for (int attempt = 0; attempt < 14; ++attempt) {
    const double eps = eps0 / (3.0 * static_cast<double>(n));
    const double gamma = c - eps;
    const double beta = 3.0 * eps;
    if (gamma > 0.0) {
      std::fill(interior.begin(), interior.end(), beta);
      interior[0] = gamma;
      interior[1] = gamma;
      const double inside = base.eval(interior);

      std::fill(edge.begin(), edge.end(), 0.0);
      edge[0] = gamma + beta;
      edge[1] = gamma;
      const double r_lower = base.eval(edge);

      const double r_target = 1.0 + eps0 / (6.0 * static_cast<double>(n));
      if (inside <= 1.0 + 1e-12 && r_lower >= r_target - 1e-12) {
        return {c, eps0, eps, gamma, beta, r_lower};
      }
    }
    eps0 *= 0.5;
  }
  throw ParameterSelectionError(
      "perturb: could not verify the box inequalities; the smoothness estimate may be too "
      "optimistic for this space");
}

struct OrliczParameters {
  std::vector<double> c;       // half-value points (thresholds for the first m)
  std::vector<double> gammas;  // c_i - eps
  double beta = 0.0;           // (K + 1) eps
  double K = 0.0;
  double eps = 0.0;
  double r_lower = 0.0;
  int m = 0;  // count of functions that never reach 1/2
  std::vector<std::string> flags;
};

namespace detail {

inline bool orlicz_reaches_half(const YoungFunction& f) {
  return f.sup_finite_value() >= 0.5;
}

}  // namespace detail

// Parameter selection for Musielak-Orlicz perturbation. Requires f_i'(0) = 0
// and the functions ordered so the ones never reaching 1/2 come first.
inline OrliczParameters select_parameters_orlicz(const std::vector<YoungFunction>& fs) {
  const int n = static_cast<int>(fs.size());
  if (n < 3) throw ParameterError("perturb: need at least three coordinate functions");
  for (const auto& f : fs) {
    if (f.one_sided_derivative(0.0, Side::right) != 0.0) {
      throw HypothesisError("perturb: coordinate functions must satisfy f'(0) = 0");
    }
  }

  OrliczParameters out;
  int m = 0;
  while (m < n && !detail::orlicz_reaches_half(fs[static_cast<std::size_t>(m)])) ++m;
  for (int i = m; i < n; ++i) {
    if (!detail::orlicz_reaches_half(fs[static_cast<std::size_t>(i)])) {
      throw ParameterError("perturb: functions must be ordered with degenerate ones first");
    }
  }
  out.m = m;
  if (m == n || n - m < 2) out.flags.push_back("orlicz-degenerate-m");

  out.c.resize(fs.size());
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out.c[ui] = i < m ? fs[ui].finite_threshold() : inverse_solve(fs[ui], 0.5);
  }

  double max_ratio = 0.0;
  for (int i = m; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double num = fs[static_cast<std::size_t>(j)].one_sided_derivative(
          out.c[static_cast<std::size_t>(j)], Side::left);
      const double den = fs[static_cast<std::size_t>(i)].one_sided_derivative(
          out.c[static_cast<std::size_t>(i)], Side::right);
      const double ratio = den == kInf ? 0.0 : num / den;
      max_ratio = std::max(max_ratio, ratio);
    }
  }
  out.K = max_ratio > 0.0 ? 2.0 * max_ratio : 1.0;

  auto conditions_hold = [&](double eps) {
    for (int i = 0; i < n; ++i) {
      if (!(out.c[static_cast<std::size_t>(i)] - eps > 0.0)) return false;
    }
    double sum = 0.0;
    for (const auto& f : fs) {
      const double v = f((out.K + 1.0) * eps);
      if (v == kInf) return false;
      sum += v;
    }
    if (n - m >= 2) {
      double bound = kInf;
      for (int i = m; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          bound = std::min(bound, fs[static_cast<std::size_t>(i)].one_sided_derivative(
                                      out.c[static_cast<std::size_t>(i)], Side::left) +
                                      fs[static_cast<std::size_t>(j)].one_sided_derivative(
                                          out.c[static_cast<std::size_t>(j)], Side::left));
        }
      }
      if (sum / eps > bound) return false;
    }
    if (m >= 1) {
      double bound = kInf;
      for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < n; ++j) {
          bound = std::min(bound, 1.0 - fs[static_cast<std::size_t>(i)](out.c[static_cast<std::size_t>(i)]) -
                                      fs[static_cast<std::size_t>(j)](out.c[static_cast<std::size_t>(j)]));
        }
      }
      if (sum > bound) return false;
    }
    return true;
  };

  double eps = 1.0;
  while (!conditions_hold(eps)) {
    eps *= 0.5;
    if (eps < 1e-300) {
      throw ParameterSelectionError("perturb: epsilon underflow during parameter selection");
    }
  }
  out.eps = eps;
  out.beta = (out.K + 1.0) * eps;
  out.gammas.resize(fs.size());
  for (int i = 0; i < n; ++i) {
    out.gammas[static_cast<std::size_t>(i)] = out.c[static_cast<std::size_t>(i)] - eps;
  }

  const NormSpec space = NormSpec::musielak_orlicz(fs, Gauge::luxemburg);
  double r_lower = kInf;
  std::vector<double> v(fs.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::fill(v.begin(), v.end(), 0.0);
      v[static_cast<std::size_t>(i)] = out.c[static_cast<std::size_t>(i)] + out.K * eps;
      v[static_cast<std::size_t>(j)] = out.c[static_cast<std::size_t>(j)] - eps;
      r_lower = std::min(r_lower, space.eval(v));
    }
  }
  out.r_lower = r_lower;
  return out;
}

struct PerturbationProblem {
  explicit PerturbationProblem(PerturbVariant v, NormSpec positioned_target)
      : variant(v), target(std::move(positioned_target)) {}

  PerturbVariant variant;
  int ambient_dim = 0;
  int point_count = 0;
  double box_beta = 0.0;
  std::vector<double> gammas;  // one per point (symmetric: all equal)
  NormSpec target;             // positioned: ||x||_target <= ||x||_base
  double target_scale = 1.0;   // multiplier applied to the raw target norm
  std::optional<NormSpec> base;
  std::optional<CanonicalHyperplane> canonical;  // linfty_subspace
  std::vector<double> b_ratios;                  // linfty_subspace
  int subspace_k = 0;
  std::vector<int> coordinate_order;  // musielak_orlicz: working -> input index
  double function_scale = 1.0;        // musielak_orlicz basis normalization
  double eps0 = 0.0;
  double eps = 0.0;
  double K = 0.0;
  double r_lower = 0.0;
  double c = 0.0;
  int orlicz_m = -1;
  SandwichReport sandwich;
  std::vector<std::string> heuristic_flags;

  int pair_count() const { return point_count * (point_count - 1) / 2; }

  // Flat index of the pair (i, j), 0 <= i < j < point_count.
  int pair_index(int i, int j) const {
    return i * (2 * point_count - i - 1) / 2 + (j - i - 1);
  }

  // Solutions of the musielak_orlicz variant live in reordered coordinates;
  // map a working-coordinate point back to the caller's coordinate order.
  std::vector<double> to_input_coordinates(std::span<const double> p) const {
    if (coordinate_order.empty()) return {p.begin(), p.end()};
    std::vector<double> out(p.size());
    for (std::size_t s = 0; s < p.size(); ++s) {
      out[static_cast<std::size_t>(coordinate_order[s])] = p[s];
    }
    return out;
  }
};

struct FixedPointSolution {
  std::vector<double> epsilon;
  double residual_inf = 0.0;
  int iterations = 0;
  FixedPointMethod method = FixedPointMethod::damped_iteration;
};

namespace detail {

inline void check_box(const PerturbationProblem& pb, std::span<const double> eps) {
  if (static_cast<int>(eps.size()) != pb.pair_count()) {
    throw DomainError("perturb: epsilon length must equal the pair count");
  }
  const double slack = 1e-9 * std::max(1.0, pb.box_beta);
  for (double v : eps) {
    if (!(v >= -slack) || !(v <= pb.box_beta + slack)) {
      throw DomainError("perturb: epsilon outside [0, beta]");
    }
  }
}

struct PositionedTarget {
  NormSpec positioned;
  double scale;
  SandwichReport report;
};

// Scales the target by the reciprocal of the largest sampled ratio
// ||x||_target / ||x||_base so that ||x||_target <= ||x||_base empirically,
// then checks the residual spread against the allowed distortion.
inline PositionedTarget position_target(const NormSpec& target,
                                        const std::vector<std::vector<double>>& samples,
                                        const std::function<double(std::span<const double>)>& base_eval,
                                        double allowed, int sample_count, std::uint64_t seed) {
  double rmin = kInf;
  double rmax = 0.0;
  for (const auto& x : samples) {
    const double bn = base_eval(x);
    if (!(bn > 0.0)) continue;
    const double r = target.eval(x) / bn;
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (!(rmax > 0.0) || rmin == kInf) {
    throw ParameterSelectionError("perturb: could not sample the target/base ratio");
  }
  const double spread = rmax / rmin;
  if (spread > allowed + 1e-9) {
    std::ostringstream msg;
    msg << "perturb: sampled distortion " << spread << " exceeds the allowed bound " << allowed;
    throw ParameterSelectionError(msg.str());
  }
  PositionedTarget out{NormSpec::scaled(target, Transform::uniform(1.0 / rmax)), 1.0 / rmax, {}};
  out.report.min_ratio = rmin / rmax;
  out.report.max_ratio = 1.0;
  out.report.pass = true;
  out.report.samples = sample_count;
  out.report.seed = seed;
  return out;
}

}  // namespace detail

// The point maps p_j(eps). Variants symmetric / musielak_orlicz place the
// epsilon column above a -gamma_j diagonal entry; the subspace variant builds
// the cube-facet points with the compensating h/H coordinates and returns
// them in the caller's original coordinates.
inline std::vector<std::vector<double>> point_map(const PerturbationProblem& pb,
                                                  std::span<const double> eps) {
  detail::check_box(pb, eps);
  const auto P = static_cast<std::size_t>(pb.point_count);
  std::vector<std::vector<double>> pts(P);

  if (pb.variant != PerturbVariant::linfty_subspace) {
    for (std::size_t j = 0; j < P; ++j) {
      std::vector<double> p(static_cast<std::size_t>(pb.ambient_dim), 0.0);
      for (std::size_t i = 0; i < j; ++i) {
        p[i] = eps[static_cast<std::size_t>(pb.pair_index(static_cast<int>(i), static_cast<int>(j)))];
      }
      p[j] = -pb.gammas[j];
      pts[j] = std::move(p);
    }
    return pts;
  }

  const auto& a = pb.canonical->canonical.a;
  const auto n = static_cast<std::size_t>(pb.ambient_dim);
  double denom = 0.0;
  for (std::size_t i = P; i < n; ++i) denom += a[i];
  std::vector<double> canonical_point(n, 0.0);
  for (std::size_t j = 0; j < P; ++j) {
    std::fill(canonical_point.begin(), canonical_point.end(), 0.0);
    double num = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      const double e = eps[static_cast<std::size_t>(pb.pair_index(static_cast<int>(i), static_cast<int>(j)))];
      canonical_point[i] = e;
      num += a[i] * e;
    }
    if (j < P - 1) {
      canonical_point[j] = -1.0;
      canonical_point[P - 1] = pb.b_ratios[j];
    }
    const double hv = num / denom;
    for (std::size_t i = P; i < n; ++i) canonical_point[i] = -hv;
    pts[j] = pb.canonical->to_original(canonical_point);
  }
  return pts;
}

// phi_{i,j}(eps) = 1 + eps_{i,j} - ||p_i(eps) - p_j(eps)||_target. On a
// correctly parameterized problem the image stays inside [0, beta]^N; leaving
// the box beyond rounding slack raises instead of clamping silently.
inline std::vector<double> phi(const PerturbationProblem& pb, std::span<const double> eps) {
  const auto pts = point_map(pb, eps);
  std::vector<double> out(static_cast<std::size_t>(pb.pair_count()));
  std::vector<double> diff(static_cast<std::size_t>(pb.ambient_dim));
  const double slack = 1e-9 * std::max(1.0, pb.box_beta);
  for (int i = 0; i < pb.point_count; ++i) {
    for (int j = i + 1; j < pb.point_count; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = pts[ui][k] - pts[uj][k];
      const double idx_eps = eps[static_cast<std::size_t>(pb.pair_index(i, j))];
      const double value = 1.0 + idx_eps - pb.target.eval(diff);
      if (value < -slack || value > pb.box_beta + slack) {
        std::ostringstream msg;
        msg << "perturb: phi left the box at pair (" << i << ", " << j << ") with value " << value
            << "; the problem parameters do not certify a self-map";
        throw SelfMapAlarm(msg.str());
      }
      out[static_cast<std::size_t>(pb.pair_index(i, j))] =
          std::clamp(value, 0.0, pb.box_beta);
    }
  }
  return out;
}

// Damped iteration eps <- (1 - lambda) eps + lambda phi(eps) with lambda 1/2,
// falling back to a derivative-free Broyden solve of phi(eps) - eps = 0
// restricted to the box when the iteration stalls.
inline FixedPointSolution solve_fixed_point(const PerturbationProblem& pb) {
  const auto N = static_cast<std::size_t>(pb.pair_count());
  std::vector<double> eps(N, 0.0);
  constexpr double lambda = 0.5;
  constexpr double tol = 1e-10;

  double res = kInf;
  double res_checkpoint = kInf;
  int it = 0;
  for (it = 1; it <= 100000; ++it) {
    const std::vector<double> f = phi(pb, eps);
    res = 0.0;
    for (std::size_t k = 0; k < N; ++k) res = std::max(res, std::abs(f[k] - eps[k]));
    if (res <= tol) {
      return {eps, res, it, FixedPointMethod::damped_iteration};
    }
    if (it % 500 == 0) {
      if (res > 0.5 * res_checkpoint) break;  // stalled; hand over to Broyden
      res_checkpoint = res;
    }
    for (std::size_t k = 0; k < N; ++k) {
      eps[k] = std::clamp((1.0 - lambda) * eps[k] + lambda * f[k], 0.0, pb.box_beta);
    }
  }

  // Broyden (good) update on F(eps) = phi(eps) - eps with box projection.
  auto F = [&](const std::vector<double>& e) {
    const std::vector<double> f = phi(pb, e);
    std::vector<double> out(N);
    for (std::size_t k = 0; k < N; ++k) out[k] = f[k] - e[k];
    return out;
  };
  std::vector<std::vector<double>> H(N, std::vector<double>(N, 0.0));
  for (std::size_t k = 0; k < N; ++k) H[k][k] = -0.5;  // seed with the damped step
  std::vector<double> Fe = F(eps);
  for (int qit = 1; qit <= 2000; ++qit) {
    res = 0.0;
    for (double v : Fe) res = std::max(res, std::abs(v));
    if (res <= tol) {
      return {eps, res, it + qit - 1, FixedPointMethod::quasi_newton};
    }
    std::vector<double> step(N, 0.0);
    for (std::size_t r = 0; r < N; ++r) {
      double acc = 0.0;
      for (std::size_t c2 = 0; c2 < N; ++c2) acc += H[r][c2] * Fe[c2];
      step[r] = -acc;
    }
    std::vector<double> next(N);
    for (std::size_t k = 0; k < N; ++k) {
      next[k] = std::clamp(eps[k] + step[k], 0.0, pb.box_beta);
    }
    const std::vector<double> Fn = F(next);
    std::vector<double> s(N), y(N);
    for (std::size_t k = 0; k < N; ++k) {
      s[k] = next[k] - eps[k];
      y[k] = Fn[k] - Fe[k];
    }
    std::vector<double> Hy(N, 0.0);
    for (std::size_t r = 0; r < N; ++r) {
      double acc = 0.0;
      for (std::size_t c2 = 0; c2 < N; ++c2) acc += H[r][c2] * y[c2];
      Hy[r] = acc;
    }
    std::vector<double> stH(N, 0.0);
    for (std::size_t c2 = 0; c2 < N; ++c2) {
      double acc = 0.0;
      for (std::size_t r = 0; r < N; ++r) acc += s[r] * H[r][c2];
      stH[c2] = acc;
    }
    double denom = 0.0;
    for (std::size_t k = 0; k < N; ++k) denom += s[k] * Hy[k];
    if (std::abs(denom) > 1e-300) {
      for (std::size_t r = 0; r < N; ++r) {
        const double factor = (s[r] - Hy[r]) / denom;
        for (std::size_t c2 = 0; c2 < N; ++c2) H[r][c2] += factor * stH[c2];
      }
    } else {
      for (std::size_t r = 0; r < N; ++r) {
        for (std::size_t c2 = 0; c2 < N; ++c2) H[r][c2] = r == c2 ? -0.5 : 0.0;
      }
    }
    eps = next;
    Fe = Fn;
  }
  std::ostringstream msg;
  msg << "perturb: fixed-point solve did not converge; final residual " << res;
  throw SolverFailure(msg.str());
}

// Problem factory for smooth symmetric base spaces. Rescales the base so the
// basis vectors have unit norm, selects parameters, and positions the target
// inside the certified distortion bound.
inline PerturbationProblem make_symmetric_problem(const NormSpec& base_raw,
                                                  const NormSpec& target_raw, int budget,
                                                  int samples, std::uint64_t seed) {
  if (base_raw.dim() != target_raw.dim()) throw DomainError("perturb: dimension mismatch");
  const int n = base_raw.dim();
  if (n < 2) throw DomainError("perturb: dimension must be at least 2");
  const auto un = static_cast<std::size_t>(n);

  std::vector<double> e1(un, 0.0);
  e1[0] = 1.0;
  const double basis_norm = base_raw.eval(e1);
  const NormSpec base = basis_norm == 1.0
                            ? base_raw
                            : NormSpec::scaled(base_raw, Transform::uniform(1.0 / basis_norm));

  const SymmetricParameters params = select_parameters_symmetric(base, n, budget, seed);

  Rng rng(seed ^ 0x5eed5eedULL);
  std::vector<std::vector<double>> probes;
  probes.reserve(un + static_cast<std::size_t>(samples));
  for (std::size_t i = 0; i < un; ++i) {
    std::vector<double> e(un, 0.0);
    e[i] = 1.0;
    probes.push_back(std::move(e));
  }
  for (int t = 0; t < samples; ++t) probes.push_back(rng.gaussian_vector(un));
  auto positioned = detail::position_target(
      target_raw, probes, [&](std::span<const double> x) { return base.eval(x); },
      params.r_lower, samples, seed);

  PerturbationProblem pb(PerturbVariant::symmetric, std::move(positioned.positioned));
  pb.ambient_dim = n;
  pb.point_count = n;
  pb.box_beta = params.beta;
  pb.gammas.assign(un, params.gamma);
  pb.target_scale = positioned.scale;
  pb.base = base;
  pb.eps0 = params.eps0;
  pb.eps = params.eps;
  pb.r_lower = params.r_lower;
  pb.c = params.c;
  pb.sandwich = positioned.report;
  pb.heuristic_flags = {"rho-estimate-only", "sandwich-sampled"};
  return pb;
}

// Problem factory for Musielak-Orlicz base spaces (f_i'(0) = 0). Functions are
// reordered so degenerate ones come first and rescaled so basis vectors have
// norm below one; both adjustments are recorded on the problem.
inline PerturbationProblem make_orlicz_problem(const std::vector<YoungFunction>& functions,
                                               const NormSpec& target_raw, int samples,
                                               std::uint64_t seed) {
  const int n = static_cast<int>(functions.size());
  if (n < 3) throw ParameterError("perturb: need at least three coordinate functions");
  if (target_raw.dim() != n) throw DomainError("perturb: dimension mismatch");
  const auto un = static_cast<std::size_t>(n);

  std::vector<int> order(un);
  for (std::size_t i = 0; i < un; ++i) order[i] = static_cast<int>(i);
  std::stable_partition(order.begin(), order.end(), [&](int i) {
    return !detail::orlicz_reaches_half(functions[static_cast<std::size_t>(i)]);
  });
  std::vector<YoungFunction> sorted;
  sorted.reserve(un);
  for (int i : order) sorted.push_back(functions[static_cast<std::size_t>(i)]);

  // ||e_i|| < 1 is required by the monotonicity argument; scale arguments so
  // the largest basis norm lands just below one.
  double max_basis = 0.0;
  {
    const NormSpec probe = NormSpec::musielak_orlicz(sorted, Gauge::luxemburg);
    std::vector<double> e(un, 0.0);
    for (std::size_t i = 0; i < un; ++i) {
      e[i] = 1.0;
      max_basis = std::max(max_basis, probe.eval(e));
      e[i] = 0.0;
    }
  }
  double function_scale = 1.0;
  if (max_basis >= 1.0) {
    function_scale = (1.0 - 1e-9) / max_basis;
    for (auto& f : sorted) f = scale_argument(f, function_scale);
  }

  const OrliczParameters params = select_parameters_orlicz(sorted);
  const NormSpec base = NormSpec::musielak_orlicz(sorted, Gauge::luxemburg);

  std::vector<int> inverse_order(un);
  for (std::size_t s = 0; s < un; ++s) inverse_order[static_cast<std::size_t>(order[s])] = static_cast<int>(s);
  // Working coordinates are the sorted ones; conjugate the target accordingly.
  std::vector<int> perm(un);
  for (std::size_t j = 0; j < un; ++j) perm[j] = inverse_order[j];
  const NormSpec target_sorted = NormSpec::scaled(target_raw, Transform::permutation(perm));

  Rng rng(seed ^ 0x0a11ceULL);
  std::vector<std::vector<double>> probes;
  probes.reserve(un + static_cast<std::size_t>(samples));
  for (std::size_t i = 0; i < un; ++i) {
    std::vector<double> e(un, 0.0);
    e[i] = 1.0;
    probes.push_back(std::move(e));
  }
  for (int t = 0; t < samples; ++t) probes.push_back(rng.gaussian_vector(un));
  auto positioned = detail::position_target(
      target_sorted, probes, [&](std::span<const double> x) { return base.eval(x); },
      params.r_lower, samples, seed);

  PerturbationProblem pb(PerturbVariant::musielak_orlicz, std::move(positioned.positioned));
  pb.ambient_dim = n;
  pb.point_count = n;
  pb.box_beta = params.beta;
  pb.gammas = params.gammas;
  pb.target_scale = positioned.scale;
  pb.base = base;
  pb.coordinate_order = order;
  pb.function_scale = function_scale;
  pb.eps = params.eps;
  pb.K = params.K;
  pb.r_lower = params.r_lower;
  pb.orlicz_m = params.m;
  pb.sandwich = positioned.report;
  pb.heuristic_flags = params.flags;
  pb.heuristic_flags.push_back("sandwich-sampled");
  if (function_scale != 1.0) pb.heuristic_flags.push_back("orlicz-rescaled");
  return pb;
}

// Problem factory for hyperplane subspaces of l_inf^n; the target must be
// within sampled distortion 2 of the subspace norm.
inline PerturbationProblem make_subspace_problem(const Hyperplane& h, std::optional<int> k_opt,
                                                 const NormSpec& target_raw, int samples,
                                                 std::uint64_t seed) {
  CanonicalHyperplane canon = canonicalize_hyperplane(h.a);
  const int n = static_cast<int>(h.a.size());
  if (target_raw.dim() != n) throw DomainError("perturb: dimension mismatch");
  if (n < 3) throw ParameterError("perturb: subspace variant needs ambient dimension >= 3");
  const auto& a = canon.canonical.a;

  auto valid_k = [&](int k) {
    const int P = n - k;
    if (k < 1 || P < 2) return false;
    double lead = 0.0;
    for (int i = 0; i <= P - 2; ++i) lead += a[static_cast<std::size_t>(i)];
    double tail = 0.0;
    for (int i = P; i < n; ++i) tail += a[static_cast<std::size_t>(i)];
    return tail >= lead;
  };
  int k = 0;
  if (k_opt.has_value()) {
    k = *k_opt;
    if (!valid_k(k)) {
      throw ParameterError("perturb: k does not satisfy the partition inequality");
    }
  } else {
    while (k < n - 1 && !valid_k(++k)) {
    }
    if (!valid_k(k)) throw ParameterError("perturb: no valid partition index");
  }
  const int P = n - k;
  const auto uP = static_cast<std::size_t>(P);

  std::vector<double> b_ratios(uP, 0.0);
  const double pivot = a[uP - 1];
  for (std::size_t j = 0; j + 1 < uP; ++j) {
    b_ratios[j] = pivot != 0.0 ? a[j] / pivot : 0.0;
  }

  // Sample hyperplane points (canonical coordinates, mapped to the original
  // ones) to position the target within distortion 2 of the subspace norm.
  Rng rng(seed ^ 0x53b5aceULL);
  const auto un = static_cast<std::size_t>(n);
  double a_sq = 0.0;
  for (double v : a) a_sq += v * v;
  std::vector<std::vector<double>> probes;
  probes.reserve(static_cast<std::size_t>(samples));
  for (int t = 0; t < samples; ++t) {
    std::vector<double> x = rng.gaussian_vector(un);
    double dot = 0.0;
    for (std::size_t i = 0; i < un; ++i) dot += a[i] * x[i];
    for (std::size_t i = 0; i < un; ++i) x[i] -= dot / a_sq * a[i];
    probes.push_back(canon.to_original(x));
  }
  const Hyperplane original{h.a};
  auto positioned = detail::position_target(
      target_raw, probes,
      [&](std::span<const double> x) { return subspace_norm_eval(original, x); }, 2.0, samples,
      seed);

  PerturbationProblem pb(PerturbVariant::linfty_subspace, std::move(positioned.positioned));
  pb.ambient_dim = n;
  pb.point_count = P;
  pb.box_beta = 1.0;
  pb.target_scale = positioned.scale;
  pb.canonical = std::move(canon);
  pb.b_ratios = std::move(b_ratios);
  pb.subspace_k = k;
  pb.r_lower = 2.0;
  pb.sandwich = positioned.report;
  pb.heuristic_flags = {"sandwich-sampled"};
  return pb;
}

}  // namespace eqk
