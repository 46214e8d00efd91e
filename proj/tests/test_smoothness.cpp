#include <doctest.h>

#include <cmath>
#include <vector>

#include <eqk/norm.hpp>
#include <eqk/rng.hpp>
#include <eqk/smoothness.hpp>

using namespace eqk;

TEST_CASE("modulus estimate for the euclidean norm") {
  const NormSpec spec = NormSpec::lp(2, 2.0);
  const double t = 0.1;
  // dense-grid oracle over planar unit pairs: x = (cos a, sin a), y = (cos b, sin b)
  double oracle = 0.0;
  for (int i = 0; i < 720; ++i) {
    for (int j = 0; j < 720; ++j) {
      const double a = 3.14159265358979323846 * i / 360.0;
      const double b = 3.14159265358979323846 * j / 360.0;
      const double xs[2] = {std::cos(a), std::sin(a)};
      const double ys[2] = {std::cos(b), std::sin(b)};
      const double plus = std::hypot(xs[0] + t * ys[0], xs[1] + t * ys[1]);
      const double minus = std::hypot(xs[0] - t * ys[0], xs[1] - t * ys[1]);
      oracle = std::max(oracle, 0.5 * (plus + minus) - 1.0);
    }
  }
  CHECK(oracle == doctest::Approx(std::sqrt(1.0 + t * t) - 1.0).epsilon(1e-5));
  const double est = modulus_of_smoothness(spec, t, 100, 1);
  CHECK(std::abs(est - (std::sqrt(1.01) - 1.0)) <= 1e-3);
}

TEST_CASE("modulus estimate is monotone in the budget") {
  const NormSpec spec = NormSpec::lp(3, 4.0);
  const double lo = modulus_of_smoothness(spec, 0.3, 100, 9);
  const double hi = modulus_of_smoothness(spec, 0.3, 160, 9);
  CHECK(lo <= hi);
}

TEST_CASE("modulus estimate is capped by t and vanishes with t") {
  for (const auto& spec : {NormSpec::lp(3, 2.0), NormSpec::lp(3, 1.0), NormSpec::lp(3, 4.0)}) {
    for (double t : {0.5, 0.1, 1e-3}) {
      const double est = modulus_of_smoothness(spec, t, 100, 2);
      CHECK(est >= 0.0);
      CHECK(est <= t + 1e-12);
    }
  }
  CHECK(modulus_of_smoothness(NormSpec::lp(3, 2.0), 1e-4, 100, 3) <= 1e-4);
}

TEST_CASE("l1 is maximally rough: the basis pair is found") {
  // at x = e1, y = e2: (||x+ty||_1 + ||x-ty||_1)/2 - 1 = t
  const double est = modulus_of_smoothness(NormSpec::lp(2, 1.0), 0.5, 100, 4);
  CHECK(est == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("find_eps0") {
  SUBCASE("euclidean, n = 3 accepts 1/16") {
    CHECK(find_eps0(NormSpec::lp(3, 2.0), 3, 150, 5) == doctest::Approx(1.0 / 16.0));
  }
  SUBCASE("l4 is smooth: some eps0 exists") {
    CHECK(find_eps0(NormSpec::lp(3, 4.0), 3, 120, 6) > 0.0);
  }
  SUBCASE("l1 is not smooth: the budget error fires") {
    CHECK_THROWS_AS(find_eps0(NormSpec::lp(3, 1.0), 3, 120, 7), SmoothnessBudgetError);
  }
}

TEST_CASE("supporting functional of a smooth symmetric space") {
  SUBCASE("euclidean") {
    const auto sf = supporting_functional_symmetric(NormSpec::lp(4, 2.0));
    CHECK(sf.c == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-11));
    CHECK(sf.functional[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(sf.functional[1] == doctest::Approx(sf.functional[0]));
    CHECK(sf.functional[2] == 0.0);
  }
  SUBCASE("l4: dual feasibility sampled") {
    const NormSpec spec = NormSpec::lp(3, 4.0);
    const auto sf = supporting_functional_symmetric(spec);
    CHECK(sf.c == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-11));
    std::vector<double> v{sf.c, sf.c, 0.0};
    double at_v = 0.0;
    for (std::size_t i = 0; i < 3; ++i) at_v += sf.functional[i] * v[i];
    CHECK(at_v == doctest::Approx(1.0).epsilon(1e-10));
    Rng rng(8);
    for (int t = 0; t < 1000; ++t) {
      const auto x = rng.gaussian_vector(3);
      double fx = 0.0;
      for (std::size_t i = 0; i < 3; ++i) fx += sf.functional[i] * x[i];
      CHECK(std::abs(fx) <= spec.eval(x) + 1e-9);
    }
  }
  SUBCASE("l1 lacks the smoothness flag") {
    CHECK_THROWS_AS(supporting_functional_symmetric(NormSpec::lp(3, 1.0)), CapabilityError);
  }
  SUBCASE("perm_mix with beta > 0 is not symmetric") {
    CHECK_THROWS_AS(supporting_functional_symmetric(NormSpec::perm_mix(3, 2.0, 1.0, 0.5)),
                    CapabilityError);
  }
}
