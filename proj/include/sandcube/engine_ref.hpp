// Brute-force parallel toppling on the full cube. Small N^d only; this is
// the ground truth the symmetric engine is checked against, and it accepts
// arbitrary (non-symmetric) initial sandpiles.
#ifndef SANDCUBE_ENGINE_REF_HPP_
#define SANDCUBE_ENGINE_REF_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "sandcube/lattice.hpp"

namespace sandcube {

// N^d; throws Overflow past 2^63 - 1.
std::uint64_t cube_volume(const CubeSpec& spec);

// Dense array over all cube points, first coordinate most significant.
struct CubeField {
  CubeSpec spec;
  std::vector<std::int64_t> data;

  static CubeField filled(const CubeSpec& spec, std::int64_t value);

  std::uint64_t size() const { return data.size(); }
  std::uint64_t index(std::span<const int> y) const;
  Coords coords(std::uint64_t index) const;

  // Zero outside the cube.
  std::int64_t at(std::span<const int> y) const;
  std::int64_t& operator[](std::span<const int> y) { return data[index(y)]; }

  std::int64_t total() const;

  bool operator==(const CubeField&) const = default;
};

// -2d f(x) + sum over the 2d lattice neighbours, zero-padded outside.
std::int64_t laplacian_full(const CubeField& f, std::span<const int> x);

// Default step budget 64 N^2 d.
std::int64_t default_step_budget(const CubeSpec& spec);

// v'(x) = floor((s0(x) + sum_{y~x} v(y)) / 2d). Throws BackgroundTooLarge
// unless every s0(x) <= 4d - 1.
CubeField step_full(const CubeField& v, const CubeField& s0, int threads = 1);

struct FullRunOptions {
  std::int64_t max_steps = -1;  // < 0: default_step_budget
  int threads = 1;
  std::int64_t start_time = 0;
  std::vector<std::int64_t> initial_odometer;  // empty: v_0 = 0
};

struct FullRun {
  std::vector<CubeField> odometers;  // odometers[t - start_time]
  std::int64_t start_time = 0;
  std::int64_t final_time = 0;
  bool stabilized = false;
  CubeField final_sandpile;  // s0 + Laplacian(v_final)
  std::int64_t chips_lost = 0;

  const CubeField& final_odometer() const { return odometers.back(); }
};

// Iterates step_full until v_{t+1} = v_t or the budget is spent. A budget
// exhaustion is reported through `stabilized == false`, not by throwing.
FullRun stabilize_full(const CubeField& s0, const FullRunOptions& options = {});

// One step of the chip formulation: every site with s >= 2d topples once,
// s' = s + Laplacian(1{s >= 2d}).
struct ChipStep {
  CubeField sandpile;
  CubeField toppled;
  std::int64_t chips_lost = 0;
};

ChipStep topple_chips(const CubeField& s);

} // namespace sandcube

#endif
