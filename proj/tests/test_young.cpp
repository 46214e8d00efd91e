#include <doctest.h>

#include <cmath>
#include <vector>

#include <eqk/rng.hpp>
#include <eqk/young.hpp>

using namespace eqk;

namespace {

// Family samples covering every constructor; used by the property sections.
std::vector<YoungFunction> sample_functions() {
  return {
      YoungFunction::power(1.0),
      YoungFunction::power(1.5),
      YoungFunction::power(2.0),
      YoungFunction::power(3.0),
      YoungFunction::indicator(1.0),
      YoungFunction::indicator(0.7),
      YoungFunction::piecewise_linear({0.0, 1.0}, {1.0, 3.0}),
      YoungFunction::piecewise_linear({0.0, 0.5}, {0.0, 2.0}, 1.5),
      YoungFunction::affine_mix(YoungFunction::power(2.0), 0.5, 0.25),
      YoungFunction::affine_mix(YoungFunction::indicator(1.0), 0.9, 0.1),
      regularize(YoungFunction::indicator(1.0), 16),
      regularize(YoungFunction::piecewise_linear({0.0, 0.5}, {0.0, 2.0}, 1.5), 1024),
  };
}

double finite_span(const YoungFunction& f) {
  const double b = f.finite_threshold();
  return b == kInf ? 3.0 : b;
}

}  // namespace

TEST_CASE("young evaluation closed forms") {
  CHECK(YoungFunction::power(2.0)(3.0) == doctest::Approx(9.0));
  CHECK(YoungFunction::power(1.0)(0.25) == doctest::Approx(0.25));

  const auto ind = YoungFunction::indicator(1.0);
  CHECK(ind(0.5) == 0.0);
  CHECK(ind(1.0) == 0.0);  // left-continuous at the threshold
  CHECK(ind(2.0) == kInf);

  const auto mix = YoungFunction::affine_mix(YoungFunction::power(2.0), 0.5, 0.25);
  CHECK(mix(2.0) == doctest::Approx(2.5));

  const auto pw = YoungFunction::piecewise_linear({0.0, 1.0}, {1.0, 3.0});
  CHECK(pw(0.5) == doctest::Approx(0.5));
  CHECK(pw(2.0) == doctest::Approx(1.0 + 3.0));

  CHECK_THROWS_AS(ind(-0.1), DomainError);
}

TEST_CASE("young thresholds") {
  CHECK(YoungFunction::power(2.0).zero_threshold() == 0.0);
  CHECK(YoungFunction::power(2.0).finite_threshold() == kInf);
  CHECK(YoungFunction::indicator(1.5).zero_threshold() == 1.5);
  CHECK(YoungFunction::indicator(1.5).finite_threshold() == 1.5);
  const auto pw = YoungFunction::piecewise_linear({0.0, 0.5}, {0.0, 2.0}, 1.5);
  CHECK(pw.zero_threshold() == 0.5);
  CHECK(pw.finite_threshold() == 1.5);
  CHECK(pw.sup_finite_value() == doctest::Approx(2.0));
  CHECK(!pw.strictly_increasing());
  CHECK(YoungFunction::power(1.0).strictly_increasing());
}

TEST_CASE("one-sided derivatives") {
  CHECK(YoungFunction::power(2.0).one_sided_derivative(1.0, Side::right) == doctest::Approx(2.0));
  CHECK(YoungFunction::power(2.0).one_sided_derivative(1.0, Side::left) == doctest::Approx(2.0));
  CHECK(YoungFunction::power(1.0).one_sided_derivative(0.0, Side::right) == doctest::Approx(1.0));
  CHECK(YoungFunction::power(2.0).one_sided_derivative(0.0, Side::right) == 0.0);

  const auto ind = YoungFunction::indicator(1.0);
  CHECK(ind.one_sided_derivative(1.0, Side::left) == 0.0);
  CHECK(ind.one_sided_derivative(1.0, Side::right) == kInf);
  CHECK_THROWS_AS(ind.one_sided_derivative(1.5, Side::right), DomainError);

  const auto pw = YoungFunction::piecewise_linear({0.0, 1.0}, {1.0, 3.0});
  CHECK(pw.one_sided_derivative(1.0, Side::left) == doctest::Approx(1.0));
  CHECK(pw.one_sided_derivative(1.0, Side::right) == doctest::Approx(3.0));

  CHECK_THROWS_AS(pw.one_sided_derivative(0.0, Side::left), DomainError);
}

TEST_CASE("inverse_solve") {
  CHECK(inverse_solve(YoungFunction::power(2.0), 0.5) ==
        doctest::Approx(0.7071067811865476).epsilon(1e-14));
  CHECK(inverse_solve(YoungFunction::power(1.0), 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(inverse_solve(YoungFunction::indicator(1.0), 0.5), NoSolutionError);
  CHECK(inverse_solve(YoungFunction::indicator(1.0), 0.0) == 0.0);

  // flat leading segment: the smallest preimage sits past the segment change
  const auto pw = YoungFunction::piecewise_linear({0.0, 0.5}, {0.0, 2.0}, 1.5);
  CHECK(inverse_solve(pw, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(inverse_solve(pw, 2.5), NoSolutionError);

  SUBCASE("round trip where continuous and strictly increasing") {
    Rng rng(7);
    for (const auto& f : sample_functions()) {
      if (!f.strictly_increasing()) continue;
      const double top = f.finite_valued() ? f(3.0) : f(f.finite_threshold());
      for (int t = 0; t < 200; ++t) {
        const double y = rng.uniform(0.0, top);
        const double x = inverse_solve(f, y);
        CHECK(std::abs(f(x) - y) <= 1e-10);
      }
    }
  }
}

TEST_CASE("regularize") {
  CHECK(regularize(YoungFunction::indicator(1.0), 2)(0.5) == doctest::Approx(0.25));
  CHECK(regularize(YoungFunction::power(2.0), 10)(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(regularize(YoungFunction::power(2.0), 1), ParameterError);

  for (const auto& f : sample_functions()) {
    for (std::int64_t k : {std::int64_t{2}, std::int64_t{64}, std::int64_t{1} << 20}) {
      const auto fk = regularize(f, k);
      CHECK(fk.strictly_increasing());
      CHECK(fk.finite_valued());
      CHECK(fk(0.0) == 0.0);
    }
  }

  SUBCASE("pointwise bound |f_k - f| <= (x + f(x))/k on the finite domain") {
    Rng rng(11);
    for (const auto& f : sample_functions()) {
      const double b = finite_span(f);
      for (std::int64_t k : {std::int64_t{2}, std::int64_t{128}, std::int64_t{4096}}) {
        const auto fk = regularize(f, k);
        for (int t = 0; t < 200; ++t) {
          const double x = rng.uniform(0.0, b);
          const double fx = f(x);
          if (fx == kInf) continue;
          CHECK(std::abs(fk(x) - fx) <= (x + fx) / static_cast<double>(k) + 1e-12);
        }
      }
    }
  }

  SUBCASE("strict increase: f_k(t2) - f_k(t1) >= (t2 - t1)/k") {
    Rng rng(13);
    for (const auto& f : sample_functions()) {
      const std::int64_t k = 32;
      const auto fk = regularize(f, k);
      for (int t = 0; t < 300; ++t) {
        double t1 = rng.uniform(0.0, 4.0);
        double t2 = rng.uniform(0.0, 4.0);
        if (t1 > t2) std::swap(t1, t2);
        CHECK(fk(t2) - fk(t1) >= (t2 - t1) / static_cast<double>(k) - 1e-12);
      }
    }
  }
}

TEST_CASE("convexity and monotonicity sampled over every family") {
  Rng rng(3);
  for (const auto& f : sample_functions()) {
    const double b = finite_span(f);
    for (int t = 0; t < 1000; ++t) {
      double t1 = rng.uniform(0.0, b);
      double t2 = rng.uniform(0.0, b);
      if (t1 > t2) std::swap(t1, t2);
      const double f1 = f(t1);
      const double f2 = f(t2);
      CHECK(f1 <= f2);
      const double mid = f(0.5 * (t1 + t2));
      CHECK(mid <= 0.5 * (f1 + f2) + 1e-12);
    }
  }
}

TEST_CASE("left derivative never exceeds right derivative") {
  Rng rng(5);
  for (const auto& f : sample_functions()) {
    const double b = finite_span(f);
    for (int t = 0; t < 300; ++t) {
      const double x = rng.uniform(1e-6, b);
      const double dl = f.one_sided_derivative(x, Side::left);
      const double dr = f.one_sided_derivative(x, Side::right);
      if (dl == kInf) {
        CHECK(dr == kInf);
      } else {
        CHECK(dl <= dr + 1e-12);
      }
    }
  }
}

TEST_CASE("argument scaling represents f(c t) exactly in-family") {
  Rng rng(17);
  for (const auto& f : sample_functions()) {
    for (double c : {1.0, 0.5, 0.85}) {
      const auto fc = scale_argument(f, c);
      for (int t = 0; t < 200; ++t) {
        const double x = rng.uniform(0.0, 4.0);
        const double expect = f(c * x);
        const double got = fc(x);
        if (expect == kInf) {
          CHECK(got == kInf);
        } else {
          CHECK(got == doctest::Approx(expect).epsilon(1e-13));
        }
      }
    }
  }
  CHECK_THROWS_AS(scale_argument(YoungFunction::power(2.0), 1.5), ParameterError);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(YoungFunction::power(0.5), ParameterError);
  CHECK_THROWS_AS(YoungFunction::indicator(0.0), ParameterError);
  CHECK_THROWS_AS(YoungFunction::piecewise_linear({0.0, 1.0}, {3.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(YoungFunction::piecewise_linear({0.5, 1.0}, {1.0, 2.0}), ParameterError);
  CHECK_THROWS_AS(YoungFunction::piecewise_linear({0.0}, {0.0}), ParameterError);
  CHECK_THROWS_AS(YoungFunction::affine_mix(YoungFunction::power(2.0), 0.0, 0.1), ParameterError);
  CHECK_THROWS_AS(YoungFunction::affine_mix(YoungFunction::power(2.0), 0.5, -0.1), ParameterError);
}
