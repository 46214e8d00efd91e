#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <eqk/errors.hpp>
#include <eqk/norm.hpp>
#include <eqk/rng.hpp>

namespace eqk {

namespace detail {

inline bool normalize_in(const NormSpec& spec, std::vector<double>& v) {
  const double n = spec.eval(v);
  if (!(n > 0.0) || !std::isfinite(n)) return false;
  for (auto& x : v) x /= n;
  return true;
}

inline double smoothness_objective(const NormSpec& spec, double t,
                                   const std::vector<double>& x, const std::vector<double>& y,
                                   std::vector<double>& scratch) {
  scratch.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) scratch[i] = x[i] + t * y[i];
  const double plus = spec.eval(scratch);
  for (std::size_t i = 0; i < x.size(); ++i) scratch[i] = x[i] - t * y[i];
  const double minus = spec.eval(scratch);
  return 0.5 * (plus + minus) - 1.0;
}

}  // namespace detail

// Lower estimate of the modulus of smoothness
//   rho(t) = sup{(||x+ty|| + ||x-ty||)/2 - 1 : ||x||, ||y|| <= 1}
// over `budget` random unit pairs, each refined by coordinate-wise hill
// climbing projected back to the unit sphere. This is an estimate from below,
// not a certified supremum; it is monotone in the budget for a fixed seed.
inline double modulus_of_smoothness(const NormSpec& spec, double t, int budget,
                                    std::uint64_t seed) {
  if (!(t > 0.0)) throw ParameterError("smoothness: t must be positive");
  if (budget < 100) throw ParameterError("smoothness: budget must be at least 100");
  const auto n = static_cast<std::size_t>(spec.dim());

  std::vector<double> scratch;
  double best = 0.0;

  auto refine = [&](std::vector<double> x, std::vector<double> y) {
    if (!detail::normalize_in(spec, x) || !detail::normalize_in(spec, y)) return;
    double value = detail::smoothness_objective(spec, t, x, y, scratch);
    double step = 0.25;
    for (int round = 0; round < 50 && step > 1e-7; ++round) {
      bool improved = false;
      for (std::vector<double>* vec : {&x, &y}) {
        for (std::size_t k = 0; k < n; ++k) {
          for (double sgn : {1.0, -1.0}) {
            std::vector<double> cand = *vec;
            cand[k] += sgn * step;
            if (!detail::normalize_in(spec, cand)) continue;
            std::vector<double> save = *vec;
            *vec = cand;
            const double v = detail::smoothness_objective(spec, t, x, y, scratch);
            if (v > value + 1e-15) {
              value = v;
              improved = true;
            } else {
              *vec = save;
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::max(best, value);
  };

  if (n >= 2) {
    std::vector<double> e1(n, 0.0), e2(n, 0.0);
    e1[0] = 1.0;
    e2[1] = 1.0;
    refine(e1, e2);
  }
  for (int trial = 0; trial < budget; ++trial) {
    Rng rng(seed + static_cast<std::uint64_t>(trial) * 0x51f3a9e1ULL);
    refine(rng.gaussian_vector(n), rng.gaussian_vector(n));
  }
  return best;
}

// Largest eps0 on the grid {1, 1/2, ..., 2^-40} whose estimated
// rho(eps0)/eps0 stays below 1/(6n). Heuristic because rho is estimated from
// below; downstream consumers must flag results accordingly.
inline double find_eps0(const NormSpec& spec, int n, int budget, std::uint64_t seed) {
  if (!spec.smooth_claimed()) {
    // a non-smooth space would exhaust the grid anyway
    throw SmoothnessBudgetError("smoothness: space is not flagged smooth");
  }
  if (n < 1) throw ParameterError("smoothness: n must be positive");
  const double bound = 1.0 / (6.0 * static_cast<double>(n));
  double eps = 1.0;
  for (int j = 0; j <= 40; ++j, eps *= 0.5) {
    const double rho = modulus_of_smoothness(spec, eps, budget, seed + static_cast<std::uint64_t>(j));
    if (rho / eps <= bound) return eps;
  }
  throw SmoothnessBudgetError("smoothness: eps0 grid exhausted; space too far from smooth");
}

struct SupportingFunctional {
  double c;                        // ||(c, c, 0, ..., 0)|| = 1
  std::vector<double> functional;  // (1/(2c), 1/(2c), 0, ..., 0)
};

// For a smooth symmetric space the supporting functional at (c, c, 0, ..., 0)
// is (1/(2c), 1/(2c), 0, ..., 0); c is located by bisection.
inline SupportingFunctional supporting_functional_symmetric(const NormSpec& spec) {
  if (!(spec.smooth_claimed() && spec.symmetric())) {
    throw CapabilityError("smoothness: supporting functional requires a smooth symmetric space");
  }
  const auto n = static_cast<std::size_t>(spec.dim());
  if (n < 2) throw DomainError("smoothness: dimension must be at least 2");

  std::vector<double> v(n, 0.0);
  auto g = [&](double c) {
    v[0] = c;
    v[1] = c;
    return spec.eval(v);
  };
  double hi = 1.0;
  int guard = 0;
  while (g(hi) < 1.0) {
    hi *= 2.0;
    if (++guard > 200) throw SolverFailure("smoothness: bracket expansion failed");
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) >= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double c = 0.5 * (lo + hi);

  SupportingFunctional out;
  out.c = c;
  out.functional.assign(n, 0.0);
  out.functional[0] = 1.0 / (2.0 * c);
  out.functional[1] = 1.0 / (2.0 * c);
  return out;
}

}  // namespace eqk
