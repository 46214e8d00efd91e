#pragma once

#include <eqk/construct.hpp>
#include <eqk/errors.hpp>
#include <eqk/norm.hpp>
#include <eqk/oracle.hpp>
#include <eqk/perturb.hpp>
#include <eqk/pointset.hpp>
#include <eqk/rng.hpp>
#include <eqk/smoothness.hpp>
#include <eqk/verify.hpp>
#include <eqk/young.hpp>

namespace eqk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace eqk
