// Size-two cubes (M = 2) collapse to a line: every point of S_2 is
// (2_x, 1_{d-x}) for x = 0..d, and the symmetrized Laplacian becomes a
// three-point stencil. Also the single-site M = 1 case.
#ifndef SANDCUBE_RADIAL_HPP_
#define SANDCUBE_RADIAL_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "sandcube/lattice.hpp"
#include "sandcube/report.hpp"

namespace sandcube {

struct RadialState {
  int d = 1;
  std::vector<std::int64_t> v;  // x = 0..d, padded with zeros outside
  std::int64_t t = 0;

  static RadialState zero(int d);
  std::int64_t at(int x) const { return x < 0 || x > d ? 0 : v[static_cast<std::size_t>(x)]; }
  bool operator==(const RadialState&) const = default;
};

// (-d - x) v(x) + (d - x) v(x+1) + x v(x-1)
std::int64_t radial_laplacian(const RadialState& state, int x);

// One parallel step for s0 = 2d + k; k defaults to d - 1.
RadialState radial_step(const RadialState& state, std::optional<std::int64_t> k = std::nullopt);

// Steps until a fixed point; element t is v_t.
std::vector<RadialState> radial_trajectory(int d, std::optional<std::int64_t> k = std::nullopt,
                                           std::int64_t max_steps = -1);

// The simplex point (2_x, 1_{d-x}).
Coords radial_point(int d, int x);

// Right edges of the firing block. a[0] = a[1] = d; values continue below
// zero once the block is gone.
struct BlockEdges {
  std::vector<std::int64_t> a;
  std::int64_t t_d = 1;

  std::int64_t operator[](std::int64_t t) const { return a[static_cast<std::size_t>(t)]; }
};

BlockEdges block_edges(int d, std::int64_t horizon);

// Checks the block rule, the ripple rule and the sandpile at the block edge
// on the computed trajectory for t <= horizon (default: stabilization time
// or 4d, whichever is smaller). Unsupported for k != d - 1.
CheckReport closed_form_check(int d, std::optional<std::int64_t> horizon = std::nullopt,
                              std::optional<std::int64_t> k = std::nullopt);

struct CriticalPair {
  std::int64_t v_inf_high = 0;  // dimension d0
  std::int64_t v_inf_low = 0;   // dimension d0 - 1
  std::int64_t s1_high = 0;     // chips after the first topple
  std::int64_t s1_low = 0;
};

// M = 1 (N = 2) with background 2d + (d0 - 1) in dimensions d0 and d0 - 1.
CriticalPair m1_critical_check(int d0);

} // namespace sandcube

#endif
