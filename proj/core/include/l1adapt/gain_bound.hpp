#pragma once

#include <cstdint>
#include <vector>

#include "l1adapt/polyhedron.hpp"

namespace l1adapt {

enum class GainBoundMethod { vertex_sampling, random_lp_directions };

/// Lower estimate of G_u = sup over the polytope of the controller l1 norm,
/// obtained by maximizing over candidate vertices. Candidates come either
/// from exhaustive vertex enumeration (when the number of row subsets is
/// small enough) or from LP solves along random directions.
///
/// NOT a certified upper bound: the norm is nonconvex in xi, so the true
/// supremum may exceed the returned value. Callers that need a certified
/// constant should use the adaptive dead-zone schedule instead, which does
/// not consume G_u.
double l1_norm_upper_over_polytope(const Polyhedron& xi_polytope,
                                   std::size_t n, std::size_t m,
                                   GainBoundMethod method, int samples,
                                   std::uint64_t seed = 12345);

}  // namespace l1adapt
