#include "sandcube/radial.hpp"

#include <algorithm>
#include <cmath>

#include "sandcube/engine_sym.hpp"
#include "sandcube/error.hpp"

namespace sandcube {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

std::int64_t isqrt_ceil(std::int64_t n) {
  std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r < n)
    ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n)
    --r;
  return r;
}

} // namespace

RadialState RadialState::zero(int d) {
  if (d < 1)
    throw Error(Errc::InvalidArgument, "radial state needs d >= 1");
  return RadialState{d, std::vector<std::int64_t>(static_cast<std::size_t>(d) + 1, 0), 0};
}

std::int64_t radial_laplacian(const RadialState& s, int x) {
  if (x < 0 || x > s.d)
    throw Error(Errc::OutOfDomain, "radial coordinate " + std::to_string(x) + " outside 0.." + std::to_string(s.d));
  const std::int64_t d = s.d;
  return (-d - x) * s.at(x) + (d - x) * s.at(x + 1) + x * s.at(x - 1);
}

RadialState radial_step(const RadialState& s, std::optional<std::int64_t> k) {
  const std::int64_t bg = k.value_or(s.d - 1);
  check_background(s.d, bg);
  const std::int64_t two_d = 2 * static_cast<std::int64_t>(s.d);
  RadialState next = s;
  for (int x = 0; x <= s.d; ++x)
    next.v[static_cast<std::size_t>(x)] += floor_div(two_d + bg + radial_laplacian(s, x), two_d);
  ++next.t;
  return next;
}

std::vector<RadialState> radial_trajectory(int d, std::optional<std::int64_t> k, std::int64_t max_steps) {
  const std::int64_t budget = max_steps < 0 ? 64 * 16 * static_cast<std::int64_t>(d) : max_steps;
  std::vector<RadialState> traj{RadialState::zero(d)};
  for (;;) {
    RadialState next = radial_step(traj.back(), k);
    if (next.v == traj.back().v)
      return traj;
    if (traj.back().t >= budget)
      throw Error(Errc::BudgetExhausted, "radial run for d = " + std::to_string(d) + " did not settle within " +
                                             std::to_string(budget) + " steps");
    traj.push_back(std::move(next));
  }
}

Coords radial_point(int d, int x) {
  if (x < 0 || x > d)
    throw Error(Errc::OutOfDomain, "radial coordinate " + std::to_string(x) + " outside 0.." + std::to_string(d));
  Coords p(static_cast<std::size_t>(d), 1);
  std::fill(p.begin(), p.begin() + x, 2);
  return p;
}

BlockEdges block_edges(int d, std::int64_t horizon) {
  BlockEdges e;
  e.t_d = d == 1 ? 1 : isqrt_ceil(d - 1) + 1;
  e.a.assign(static_cast<std::size_t>(std::max<std::int64_t>(horizon, 1)) + 1, 0);
  e.a[0] = d;
  e.a[1] = d;
  for (std::int64_t t = 2; t <= horizon; ++t)
    e.a[static_cast<std::size_t>(t)] = t <= e.t_d ? (d - 1) / (t - 1) : e[t - 1] - 1;
  return e;
}

CheckReport closed_form_check(int d, std::optional<std::int64_t> horizon, std::optional<std::int64_t> k) {
  const std::int64_t bg = k.value_or(d - 1);
  if (bg != d - 1)
    throw Error(Errc::Unsupported, "the closed form covers only the background 2d + (d - 1)");

  const auto traj = radial_trajectory(d, bg);
  const std::int64_t T = static_cast<std::int64_t>(traj.size()) - 1;
  const std::int64_t H = horizon.value_or(std::min<std::int64_t>(T, 4 * static_cast<std::int64_t>(d)));
  const BlockEdges a = block_edges(d, H);
  auto V = [&](std::int64_t t, int x) { return traj[static_cast<std::size_t>(std::min(t, T))].at(x); };

  CheckReport r;
  r.name = "radial-closed-form";
  r.d = d;
  r.N = 4;
  r.k = bg;
  r.horizon = H;
  std::int64_t misses = 0;
  auto expect = [&](std::int64_t t, int x, std::int64_t lhs, std::int64_t rhs, const char* rule) {
    if (lhs == rhs)
      return;
    if (!r.counterexample)
      r.note = rule;
    r.reject(t, radial_point(d, x), lhs, rhs);
    ++misses;
  };

  const std::int64_t two_d = 2 * static_cast<std::int64_t>(d);
  for (std::int64_t t = 1; t <= H; ++t) {
    for (int x = 0; x <= d; ++x) {
      if (x <= a[t])
        expect(t, x, V(t, x), V(t - 1, x) + 1, "block");
      else if (x <= a[t - 1])
        expect(t, x, V(t, x), V(t - 1, x), "block");
    }
    // Each band (a_{t'}, a_{t'-1}] shifts right by one site per step.
    for (std::int64_t tp = 1; tp < t; ++tp) {
      const std::int64_t lo = std::max<std::int64_t>(a[tp] + 1, 1);
      const std::int64_t hi = std::min<std::int64_t>(a[tp - 1], d);
      for (std::int64_t x = lo; x <= hi; ++x)
        if (x - 1 > a[tp] || t == tp + 1)
          expect(t, static_cast<int>(x), V(t, static_cast<int>(x)), V(t - 1, static_cast<int>(x) - 1), "ripple");
    }
    // While the block is shrinking, v_t = t on it and the chip count there
    // has a closed form with an extra -(d - x) at the edge.
    if (t <= T && a[t] >= 0 && a[t] < a[t - 1]) {
      const RadialState& st = traj[static_cast<std::size_t>(t)];
      for (int x = 0; x <= a[t]; ++x) {
        const std::int64_t s = two_d + bg + radial_laplacian(st, x);
        const std::int64_t g = two_d + (d - 1) - t * x - (x == a[t] ? d - x : 0);
        expect(t, x, s, g, "edge sandpile");
      }
    }
  }
  if (misses > 0)
    r.note += " rule; " + std::to_string(misses) + " mismatches";
  else
    r.note = "stabilized at t=" + std::to_string(T) + ", t_d=" + std::to_string(a.t_d);
  return r;
}

CriticalPair m1_critical_check(int d0) {
  if (d0 < 2)
    throw Error(Errc::InvalidArgument, "critical dimension check needs d0 >= 2");
  const std::int64_t k = d0 - 1;
  auto run = [&](int d, std::int64_t& v_inf, std::int64_t& s1) {
    CubeSpec spec = CubeSpec::make(d, 2);
    SymRunOptions opts;
    opts.snapshot_stride = 0;
    opts.threads = 1;
    Trajectory traj = stabilize_sym(spec, k, opts);
    if (!traj.stabilized())
      throw Error(Errc::BudgetExhausted, "M = 1 run did not stabilize");
    v_inf = traj.final_odometer().front();
    SimplexField one{spec, k, std::vector<std::int64_t>(simplex_size(spec), 1)};
    s1 = sandpile_from_odometer(one).data.front();
  };
  CriticalPair out;
  run(d0, out.v_inf_high, out.s1_high);
  run(d0 - 1, out.v_inf_low, out.s1_low);
  return out;
}

} // namespace sandcube
