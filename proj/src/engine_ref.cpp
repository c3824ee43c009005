#include "sandcube/engine_ref.hpp"

#include <limits>
#include <numeric>

#include "sandcube/error.hpp"
#include "sandcube/parallel.hpp"

namespace sandcube {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

struct Strides {
  std::vector<std::uint64_t> stride;  // stride[i] for coordinate i
  std::uint64_t side = 0;

  explicit Strides(const CubeSpec& spec) : stride(spec.dim), side(static_cast<std::uint64_t>(spec.side)) {
    std::uint64_t s = 1;
    for (int i = spec.dim - 1; i >= 0; --i) {
      stride[i] = s;
      s *= side;
    }
  }

  std::uint64_t digit(std::uint64_t index, int i) const { return (index / stride[i]) % side; }
};

// Sum of f over the in-cube lattice neighbours of `index`; also reports how
// many of the 2d neighbours fall outside.
std::int64_t neighbor_sum(const CubeField& f, const Strides& st, std::uint64_t index, int* outside = nullptr) {
  std::int64_t sum = 0;
  int lost = 0;
  for (int i = 0; i < f.spec.dim; ++i) {
    std::uint64_t c = st.digit(index, i);
    if (c > 0)
      sum += f.data[index - st.stride[i]];
    else
      ++lost;
    if (c + 1 < st.side)
      sum += f.data[index + st.stride[i]];
    else
      ++lost;
  }
  if (outside)
    *outside = lost;
  return sum;
}

void check_background(const CubeField& s0) {
  const std::int64_t cap = 4 * static_cast<std::int64_t>(s0.spec.dim) - 1;
  for (std::int64_t s : s0.data)
    if (s > cap)
      throw Error(Errc::BackgroundTooLarge,
                  "initial sandpile value " + std::to_string(s) + " exceeds 2(2d) - 1 = " + std::to_string(cap));
}

} // namespace

std::uint64_t cube_volume(const CubeSpec& spec) {
  unsigned __int128 v = 1;
  for (int i = 0; i < spec.dim; ++i) {
    v *= static_cast<std::uint64_t>(spec.side);
    if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      throw Error(Errc::Overflow, "cube volume N^d exceeds 2^63 - 1 for " + to_string(spec));
  }
  return static_cast<std::uint64_t>(v);
}

CubeField CubeField::filled(const CubeSpec& spec, std::int64_t value) {
  return CubeField{spec, std::vector<std::int64_t>(cube_volume(spec), value)};
}

std::uint64_t CubeField::index(std::span<const int> y) const {
  if (!in_cube(spec, y))
    throw Error(Errc::OutOfDomain, format_coords(y) + " lies outside the cube " + to_string(spec));
  std::uint64_t idx = 0;
  for (int c : y)
    idx = idx * static_cast<std::uint64_t>(spec.side) + static_cast<std::uint64_t>(c - spec.lo());
  return idx;
}

Coords CubeField::coords(std::uint64_t index) const {
  Coords y(spec.dim);
  for (int i = spec.dim - 1; i >= 0; --i) {
    y[i] = static_cast<int>(index % static_cast<std::uint64_t>(spec.side)) + spec.lo();
    index /= static_cast<std::uint64_t>(spec.side);
  }
  return y;
}

std::int64_t CubeField::at(std::span<const int> y) const {
  return in_cube(spec, y) ? data[index(y)] : 0;
}

std::int64_t CubeField::total() const {
  return std::accumulate(data.begin(), data.end(), std::int64_t{0});
}

std::int64_t laplacian_full(const CubeField& f, std::span<const int> x) {
  Strides st(f.spec);
  std::uint64_t i = f.index(x);
  return -2 * f.spec.dim * f.data[i] + neighbor_sum(f, st, i);
}

std::int64_t default_step_budget(const CubeSpec& spec) {
  return 64 * spec.side * spec.side * spec.dim;
}

CubeField step_full(const CubeField& v, const CubeField& s0, int threads) {
  if (!(v.spec == s0.spec) || v.size() != s0.size())
    throw Error(Errc::InvalidArgument, "odometer and initial sandpile live on different cubes");
  check_background(s0);
  Strides st(v.spec);
  const std::int64_t denom = 2 * static_cast<std::int64_t>(v.spec.dim);
  CubeField next{v.spec, std::vector<std::int64_t>(v.size())};
  parallel_for(v.size(), resolve_threads(threads), 1024, 1, [&](std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i)
      next.data[i] = floor_div(s0.data[i] + neighbor_sum(v, st, i), denom);
  });
  return next;
}

FullRun stabilize_full(const CubeField& s0, const FullRunOptions& options) {
  check_background(s0);
  const std::int64_t budget = options.max_steps < 0 ? default_step_budget(s0.spec) : options.max_steps;

  FullRun run;
  run.start_time = options.start_time;
  CubeField v = CubeField::filled(s0.spec, 0);
  if (!options.initial_odometer.empty()) {
    if (options.initial_odometer.size() != v.size())
      throw Error(Errc::InvalidArgument, "initial odometer has the wrong length");
    v.data = options.initial_odometer;
  }
  run.odometers.push_back(v);

  std::int64_t t = options.start_time;
  for (;;) {
    CubeField next = step_full(run.odometers.back(), s0, options.threads);
    if (next == run.odometers.back()) {
      run.stabilized = true;
      break;
    }
    if (t >= budget)
      break;
    run.odometers.push_back(std::move(next));
    ++t;
  }
  run.final_time = t;

  const CubeField& vf = run.odometers.back();
  Strides st(s0.spec);
  run.final_sandpile = CubeField{s0.spec, std::vector<std::int64_t>(s0.size())};
  const std::int64_t two_d = 2 * static_cast<std::int64_t>(s0.spec.dim);
  for (std::uint64_t i = 0; i < s0.size(); ++i) {
    int outside = 0;
    run.final_sandpile.data[i] = s0.data[i] - two_d * vf.data[i] + neighbor_sum(vf, st, i, &outside);
    run.chips_lost += outside * vf.data[i];
  }
  return run;
}

ChipStep topple_chips(const CubeField& s) {
  Strides st(s.spec);
  const std::int64_t two_d = 2 * static_cast<std::int64_t>(s.spec.dim);
  ChipStep out{s, CubeField::filled(s.spec, 0), 0};
  for (std::uint64_t i = 0; i < s.size(); ++i)
    out.toppled.data[i] = s.data[i] >= two_d ? 1 : 0;
  for (std::uint64_t i = 0; i < s.size(); ++i) {
    int outside = 0;
    std::int64_t received = neighbor_sum(out.toppled, st, i, &outside);
    out.sandpile.data[i] += received - two_d * out.toppled.data[i];
    out.chips_lost += outside * out.toppled.data[i];
  }
  return out;
}

} // namespace sandcube
