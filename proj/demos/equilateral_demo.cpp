// Builds an equilateral set in a mixed Musielak-Orlicz space, certifies it,
// and then transfers the configuration to a slightly perturbed target norm
// through the fixed-point solver.

#include <cstdio>

#include <eqk/eqk.hpp>

int main() {
  using namespace eqk;

  const std::vector<YoungFunction> functions = {
      YoungFunction::power(2.0),
      YoungFunction::indicator(1.0),
      YoungFunction::piecewise_linear({0.0, 0.5}, {0.0, 2.0}, 1.5),
  };

  const auto built = musielak_orlicz_equilateral(functions);
  const auto cert = certify_equilateral(built.set, 1e-9);
  std::printf("construction: %zu points, claimed distance %.3f, verdict %s",
              built.set.points.size(), built.set.claimed_distance,
              cert.pass ? "pass" : "fail");
  if (built.regularized) {
    std::printf(" (regularization index %lld)", static_cast<long long>(built.regularization_k));
  }
  std::printf("\n");

  const NormSpec base = NormSpec::lp(4, 4.0);
  const NormSpec target =
      NormSpec::scaled(base, Transform::diagonal({1.0, 1.0002, 0.9998, 1.0001}));
  const auto problem = make_symmetric_problem(base, target, 120, 500, 0);
  const auto solution = solve_fixed_point(problem);
  const auto points = point_map(problem, solution.epsilon);
  const auto transferred = certify_equilateral(points, NormRef{problem.target}, 1.0, 1e-9);
  std::printf("perturbed: %d iterations, residual %.2e, verdict %s\n", solution.iterations,
              solution.residual_inf, transferred.pass ? "pass" : "fail");
  return cert.pass && transferred.pass ? 0 : 1;
}
