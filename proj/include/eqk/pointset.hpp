#pragma once

#include <span>
#include <variant>
#include <vector>

#include <eqk/errors.hpp>
#include <eqk/norm.hpp>

namespace eqk {

// Either a full norm on R^n or a hyperplane carrying the induced l_inf norm.
// Hyperplane comes first so the variant stays default-constructible.
using NormRef = std::variant<Hyperplane, NormSpec>;

inline int norm_ref_dim(const NormRef& ref) {
  if (const auto* spec = std::get_if<NormSpec>(&ref)) return spec->dim();
  return static_cast<int>(std::get<Hyperplane>(ref).a.size());
}

struct PointSet {
  std::vector<std::vector<double>> points;
  double claimed_distance = 0.0;
  NormRef norm;
};

// Structural checks: consistent dimensions, pairwise-distinct points, and
// hyperplane membership where applicable.
inline void validate_point_set(const PointSet& ps) {
  const int n = norm_ref_dim(ps.norm);
  for (const auto& p : ps.points) {
    if (static_cast<int>(p.size()) != n) {
      throw DomainError("pointset: point dimension mismatch");
    }
  }
  if (!(ps.claimed_distance > 0.0)) {
    throw ParameterError("pointset: claimed distance must be positive");
  }
  for (std::size_t i = 0; i < ps.points.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.points.size(); ++j) {
      if (ps.points[i] == ps.points[j]) {
        throw ParameterError("pointset: points must be pairwise distinct");
      }
    }
  }
  if (const auto* h = std::get_if<Hyperplane>(&ps.norm)) {
    for (const auto& p : ps.points) {
      if (!on_hyperplane(*h, p)) {
        throw MembershipError("pointset: point off the hyperplane");
      }
    }
  }
}

}  // namespace eqk
