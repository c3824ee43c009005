#include "sandcube/verify.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "sandcube/error.hpp"

namespace sandcube {

namespace {

std::vector<Coords> simplex_points(const SimplexIndexer& ix) {
  std::vector<Coords> pts;
  pts.reserve(ix.size());
  Coords x(ix.spec().dim, 1);
  do
    pts.push_back(x);
  while (ix.next(x));
  return pts;
}

// Read access to a trajectory by simplex point, with folding for arbitrary
// cube points and zero padding outside the cube.
class View {
public:
  explicit View(const Trajectory& tr)
    : tr_(tr), lattice_(std::make_shared<const SymmetricLattice>(tr.spec)), pts_(simplex_points(lattice_->indexer())) {}

  const CubeSpec& spec() const { return tr_.spec; }
  const SimplexIndexer& indexer() const { return lattice_->indexer(); }
  const SymmetricLattice& lattice() const { return *lattice_; }
  const std::vector<Coords>& points() const { return pts_; }
  std::int64_t final_time() const { return tr_.final_time; }
  std::int64_t background() const { return tr_.background; }

  std::span<const std::int64_t> row(std::int64_t t) const { return tr_.at(t); }
  std::int64_t at(std::int64_t t, std::span<const int> x) const { return tr_.at(t)[indexer().rank(x)]; }
  std::int64_t padded(std::int64_t t, std::span<const int> y) const {
    if (!in_cube(spec(), y))
      return 0;
    return at(t, fold(y, spec()));
  }

  // s_t = s0 + symmetrized Laplacian of v_t.
  std::vector<std::int64_t> sandpile(std::int64_t t) const {
    auto v = row(t);
    const std::int64_t two_d = 2 * static_cast<std::int64_t>(spec().dim);
    std::vector<std::int64_t> s(v.size());
    for (std::uint64_t i = 0; i < v.size(); ++i)
      s[i] = two_d + background() - two_d * v[i] + lattice_->neighbor_sum(v, i);
    return s;
  }

private:
  const Trajectory& tr_;
  std::shared_ptr<const SymmetricLattice> lattice_;
  std::vector<Coords> pts_;
};

Coords append(const Coords& x, int c) {
  Coords y = x;
  y.push_back(c);
  return y;
}

int min_coord(const Coords& x) {
  return x.empty() ? std::numeric_limits<int>::max() : *std::min_element(x.begin(), x.end());
}

CheckReport make_report(const char* name, const CubeSpec& spec, std::int64_t k, bool proven) {
  CheckReport r;
  r.name = name;
  r.d = spec.dim;
  r.N = spec.side;
  r.k = k;
  r.verdict = proven ? Verdict::Pass : Verdict::Observed;
  return r;
}

Verdict failure_for(const CheckReport& r) {
  return r.verdict == Verdict::Pass || r.verdict == Verdict::Fail ? Verdict::Fail : Verdict::ViolatedObservation;
}

void reject(CheckReport& r, std::int64_t t, Coords x, std::int64_t lhs, std::int64_t rhs) {
  r.reject(t, std::move(x), lhs, rhs, failure_for(r));
}

void require_stride_one(const Trajectory& tr) {
  for (std::int64_t t = tr.snapshots.front().t; t <= tr.final_time; ++t)
    if (!tr.has(t))
      throw Error(Errc::InvalidArgument, "check needs a stride-1 trajectory; t=" + std::to_string(t) + " missing");
}

// Odometer and +2 sandpile identities between the terminal states of the
// d- and (d-1)-dimensional runs.
struct TerminalComparison {
  std::optional<Counterexample> layer1;
  std::optional<Counterexample> layer2;
  std::optional<Counterexample> sandpile;
};

TerminalComparison compare_terminal(const View& hi, const View& lo) {
  TerminalComparison out;
  const std::int64_t th = hi.final_time();
  const std::int64_t tl = lo.final_time();
  const auto sh = hi.sandpile(th);
  const auto sl = lo.sandpile(tl);
  for (std::uint64_t i = 0; i < lo.points().size(); ++i) {
    const Coords& x = lo.points()[i];
    Coords x1 = append(x, 1);
    if (!out.layer1 && hi.at(th, x1) != lo.row(tl)[i])
      out.layer1 = Counterexample{-1, x1, hi.at(th, x1), lo.row(tl)[i]};
    if (min_coord(x) >= 2) {
      Coords x2 = append(x, 2);
      if (!out.layer2 && hi.at(th, x2) != lo.row(tl)[i])
        out.layer2 = Counterexample{-1, x2, hi.at(th, x2), lo.row(tl)[i]};
      const std::int64_t s_hi = sh[hi.indexer().rank(x1)];
      if (!out.sandpile && s_hi != sl[i] + 2)
        out.sandpile = Counterexample{-1, x1, s_hi, sl[i] + 2};
    }
  }
  return out;
}

} // namespace

Trajectory full_trajectory(const CubeSpec& spec, std::int64_t k) {
  SymRunOptions opts;
  opts.snapshot_stride = 1;
  Trajectory tr = stabilize_sym(spec, k, opts);
  if (!tr.stabilized())
    throw Error(Errc::BudgetExhausted, "run " + to_string(spec) + " k=" + std::to_string(k) + " did not stabilize");
  return tr;
}

CheckReport check_dimensional_reduction(int d, std::int64_t N, std::int64_t k, std::int64_t horizon) {
  if (d < 2)
    throw Error(Errc::InvalidArgument, "dimensional reduction needs d >= 2");
  const Trajectory thi = full_trajectory(CubeSpec::make(d, N), k);
  const Trajectory tlo = full_trajectory(CubeSpec::make(d - 1, N), k);
  const View hi(thi), lo(tlo);
  CheckReport r = make_report("dimensional-reduction", hi.spec(), k, k == 0);
  const std::int64_t H = horizon < 0 ? std::max(hi.final_time(), lo.final_time()) : horizon;
  r.horizon = H;

  std::int64_t mismatches = 0;
  for (std::int64_t t = 1; t <= H; ++t) {
    auto vl = lo.row(t);
    for (std::uint64_t i = 0; i < lo.points().size(); ++i) {
      Coords x1 = append(lo.points()[i], 1);
      const std::int64_t a = hi.at(t, x1);
      if (a != vl[i]) {
        reject(r, t, std::move(x1), a, vl[i]);
        ++mismatches;
      }
    }
  }
  TerminalComparison term = compare_terminal(hi, lo);
  if (term.layer2) {
    r.reject(term.layer2->t, term.layer2->x, term.layer2->lhs, term.layer2->rhs, failure_for(r));
    ++mismatches;
  }
  if (k == 0 && r.verdict == Verdict::Pass && term.sandpile) {
    // The odometer identities imply the chip identity; disagreement means
    // one of the two code paths is wrong.
    r.reject(term.sandpile->t, term.sandpile->x, term.sandpile->lhs, term.sandpile->rhs, Verdict::Fail);
    r.note = "odometer identities hold but the sandpile identity does not";
    return r;
  }
  r.note = "layer-1 t=1.." + std::to_string(H) + ", layer-2 at t=inf";
  if (mismatches > 0)
    r.note += "; " + std::to_string(mismatches) + " mismatches";
  return r;
}

CheckReport check_sandpile_reduction(int d, std::int64_t N, std::int64_t k) {
  if (d < 2)
    throw Error(Errc::InvalidArgument, "sandpile reduction needs d >= 2");
  const Trajectory thi = full_trajectory(CubeSpec::make(d, N), k);
  const Trajectory tlo = full_trajectory(CubeSpec::make(d - 1, N), k);
  const View hi(thi), lo(tlo);
  CheckReport r = make_report("sandpile-reduction", hi.spec(), k, k == 0);
  TerminalComparison term = compare_terminal(hi, lo);
  if (term.sandpile)
    reject(r, -1, term.sandpile->x, term.sandpile->lhs, term.sandpile->rhs);
  std::uint64_t n = 0;
  for (const Coords& x : lo.points())
    n += min_coord(x) >= 2 ? 1 : 0;
  r.note = std::to_string(n) + " points with x >= 2";
  return r;
}

CheckReport check_self_similarity(int d, std::int64_t N, std::int64_t k) {
  const CubeSpec spec = CubeSpec::make(d, N);
  const Trajectory tbig = full_trajectory(spec, k);
  const View big(tbig);
  const int M = spec.half;
  CheckReport r = make_report("self-similarity", spec, k, k == 0);
  std::string taus;

  for (int j = 1; j < M; ++j) {
    const std::optional<std::int64_t> tau = stopping_time(d, j, k);
    const Trajectory tsmall = full_trajectory(CubeSpec::make(d, 2 * static_cast<std::int64_t>(j)), k);
    const View small(tsmall);
    const std::int64_t tmax = tau ? *tau : std::max(big.final_time(), small.final_time());
    taus += (taus.empty() ? "" : ",") + (tau ? std::to_string(*tau) : std::string("none"));
    const int shift = M - j;

    for (std::int64_t t = 0; t <= tmax; ++t) {
      const auto sb = big.sandpile(t);
      const auto ss = small.sandpile(t);
      for (std::uint64_t i = 0; i < big.points().size(); ++i) {
        const Coords& x = big.points()[i];
        const int lo = min_coord(x);
        if (lo <= shift)
          continue;
        Coords q = x;
        for (int& c : q)
          c -= shift;
        const std::uint64_t qi = small.indexer().rank(q);
        const std::int64_t a = big.row(t)[i], b = small.row(t)[qi];
        if (a != b)
          reject(r, t, x, a, b);
        if (lo > shift + 1 && sb[i] != ss[qi])
          reject(r, t, x, sb[i], ss[qi]);
      }
    }
  }
  r.note = "tau=" + (taus.empty() ? std::string("-") : taus);
  return r;
}

CheckReport check_axis_monotonicity(const Trajectory& traj) {
  const View view(traj);
  const int d = view.spec().dim;
  CheckReport r = make_report("axis-monotonicity", view.spec(), traj.background, true);
  r.horizon = traj.final_time;

  // Direction vectors e_I - e_J with I nonempty and max I < min J.
  std::vector<Coords> exhaustive;
  if (d <= 4) {
    int total = 1;
    for (int i = 0; i < d; ++i)
      total *= 3;
    for (int code = 0; code < total; ++code) {
      Coords delta(d, 0);
      int c = code, last_i = -1, first_j = d;
      for (int i = 0; i < d; ++i, c /= 3) {
        if (c % 3 == 1) {
          delta[i] = 1;
          last_i = i;
        } else if (c % 3 == 2) {
          delta[i] = -1;
          first_j = std::min(first_j, i);
        }
      }
      if (last_i >= 0 && last_i < first_j)
        exhaustive.push_back(std::move(delta));
    }
  }
  std::mt19937_64 rng(kAxisSampleSeed);
  auto sample = [&] {
    Coords delta(d, 0);
    const int pivot = static_cast<int>(rng() % static_cast<std::uint64_t>(d));
    delta[pivot] = 1;
    for (int i = 0; i < d; ++i)
      if (i != pivot && (rng() & 1))
        delta[i] = i < pivot ? 1 : -1;
    return delta;
  };

  // Violations are tallied separately for moves that lower the coordinate
  // sum (|J| > |I|); that class is where counterexamples turn up.
  std::uint64_t comparisons = 0, inward_violations = 0, other_violations = 0;
  for (const Snapshot& snap : traj.snapshots) {
    if (snap.t < 1)
      continue;
    std::vector<Coords> sampled;
    if (d > 4)
      for (int n = 0; n < 1000; ++n)
        sampled.push_back(sample());
    const auto& deltas = d <= 4 ? exhaustive : sampled;
    for (std::uint64_t i = 0; i < view.points().size(); ++i) {
      const Coords& x = view.points()[i];
      for (const Coords& delta : deltas) {
        Coords y = x;
        for (int a = 0; a < d; ++a)
          y[a] += delta[a];
        if (!is_simplex_point(view.spec(), y))
          continue;
        ++comparisons;
        const std::int64_t vy = snap.v[view.indexer().rank(y)];
        if (snap.v[i] < vy) {
          reject(r, snap.t, x, snap.v[i], vy);
          int sum = 0;
          for (int a : delta)
            sum += a;
          ++(sum < 0 ? inward_violations : other_violations);
        }
      }
    }
  }
  r.note = std::to_string(comparisons) + " comparisons, violations " + std::to_string(inward_violations) +
           " with |J| > |I| and " + std::to_string(other_violations) + " otherwise" +
           (d > 4 ? ", 1000 sampled index-set pairs per t, seed " + std::to_string(kAxisSampleSeed) : "");
  return r;
}

CheckReport check_derivative_bound(const Trajectory& traj, std::optional<std::int64_t> k_bound) {
  if (!traj.stabilized())
    throw Error(Errc::InvalidArgument, "derivative bound needs a stabilized trajectory");
  const View view(traj);
  const CubeSpec& spec = view.spec();
  const int M = spec.half, d = spec.dim;
  CheckReport r = make_report("derivative-bound", spec, traj.background, true);
  r.horizon = traj.final_time;

  Coords edge(d, 1);
  edge[0] = M;
  const std::int64_t v_edge = view.at(traj.final_time, edge);
  const std::int64_t kb = k_bound.value_or(std::max<std::int64_t>(1, (v_edge + M - 1) / M));
  if (kb < 1 || v_edge > kb * M) {
    r.verdict = Verdict::Skipped;
    r.note = "HypothesisNotMet: v_inf" + format_coords(edge) + "=" + std::to_string(v_edge) + " > " +
             std::to_string(kb) + "*" + std::to_string(M);
    return r;
  }

  for (const Snapshot& snap : traj.snapshots) {
    for (std::uint64_t i = 0; i < view.points().size(); ++i) {
      const Coords& x = view.points()[i];
      for (int j = 0; j < d; ++j) {
        Coords y = x;
        ++y[j];
        const std::int64_t lhs = snap.v[i] - view.padded(snap.t, y);
        if (lhs > kb * x[j])
          reject(r, snap.t, x, lhs, kb * x[j]);
      }
    }
  }
  r.note = "k_bound=" + std::to_string(kb) + (k_bound ? "" : " (inferred)");
  return r;
}

namespace {

// max_z (v_{t+j} - v_t)(z) and its argmax.
std::pair<std::int64_t, std::uint64_t> window_max(const Trajectory& traj, std::int64_t t, std::int64_t j) {
  auto a = traj.at(t + j);
  auto b = traj.at(t);
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  std::uint64_t arg = 0;
  for (std::uint64_t i = 0; i < a.size(); ++i)
    if (a[i] - b[i] > best) {
      best = a[i] - b[i];
      arg = i;
    }
  return {best, arg};
}

std::int64_t window_end(const Trajectory& traj, std::int64_t j) {
  // Past a fixed point every window is zero, so one extra window suffices.
  return traj.stabilized() ? traj.final_time : traj.final_time - j;
}

} // namespace

CheckReport check_topple_limit(const Trajectory& traj, std::int64_t t0, std::int64_t j) {
  require_stride_one(traj);
  if (j < 0 || t0 < traj.snapshots.front().t)
    throw Error(Errc::InvalidArgument, "topple limit needs j >= 0 and t0 inside the trajectory");
  const SimplexIndexer ix(traj.spec);
  CheckReport r = make_report("topple-limit", traj.spec, traj.background, true);
  r.horizon = traj.final_time;
  const std::int64_t base = window_max(traj, t0, j).first;
  for (std::int64_t t = t0 + 1; t <= window_end(traj, j); ++t) {
    auto [w, arg] = window_max(traj, t, j);
    if (w > base)
      r.reject(t, ix.unrank(arg), w, base);
  }
  r.note = "j=" + std::to_string(j) + " t0=" + std::to_string(t0) + " window max " + std::to_string(base);
  return r;
}

std::vector<CheckReport> check_topple_limits(const Trajectory& traj) {
  require_stride_one(traj);
  const SimplexIndexer ix(traj.spec);
  std::vector<CheckReport> out;
  for (std::int64_t j = 1; j <= 3; ++j) {
    CheckReport r = make_report("topple-limit", traj.spec, traj.background, true);
    r.horizon = traj.final_time;
    const std::int64_t t_start = traj.snapshots.front().t;
    std::int64_t prev = window_max(traj, t_start, j).first;
    const std::int64_t first = prev;
    for (std::int64_t t = t_start + 1; t <= window_end(traj, j); ++t) {
      auto [w, arg] = window_max(traj, t, j);
      if (w > prev)
        r.reject(t, ix.unrank(arg), w, prev);
      prev = w;
    }
    r.note = "j=" + std::to_string(j) + " window max " + std::to_string(first) + " -> " + std::to_string(prev);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckReport> check_regularity(int d, std::int64_t N) {
  const CubeSpec spec = CubeSpec::make(d, N);
  const int M = spec.half;
  if (M < 2)
    throw Error(Errc::InvalidArgument, "regularity clauses need M >= 2");
  const Trajectory tbig = full_trajectory(spec, 0);
  const View V(tbig);

  std::vector<std::optional<std::int64_t>> tau(static_cast<std::size_t>(M) + 1);
  for (int j = 1; j <= M; ++j)
    tau[j] = stopping_time(d, j, 0);
  auto tau_or_inf = [&](int j) { return tau[j].value_or(std::numeric_limits<std::int64_t>::max()); };

  CheckReport self = make_report("regularity-self-similarity", spec, 0, true);
  CheckReport weak = make_report("regularity-weak-facet", spec, 0, true);
  CheckReport strong = make_report("regularity-strong-facet", spec, 0, true);
  CheckReport topple = make_report("regularity-strong-topple", spec, 0, true);
  const std::int64_t H = V.final_time() + 3;
  for (CheckReport* r : {&self, &weak, &strong, &topple})
    r->horizon = H;

  for (int j = 1; j <= M; ++j) {
    const Trajectory tsmall = full_trajectory(CubeSpec::make(d, 2 * static_cast<std::int64_t>(j)), 0);
    const View small(tsmall);
    const std::int64_t tmax = tau[j] ? *tau[j] : H;
    for (std::int64_t t = 0; t <= tmax; ++t)
      for (const Coords& x : V.points()) {
        if (min_coord(x) <= M - j)
          continue;
        Coords q = x;
        for (int& c : q)
          c -= M - j;
        const std::int64_t a = V.at(t, x), b = small.at(t, q);
        if (a != b)
          reject(self, t, x, a, b);
      }
  }

  // Facet points (x_i, c, 1_j) with every x_i in 2..M sorted, i + j + 1 = d.
  for (int i = 0; i < d; ++i) {
    const int j = d - i - 1;
    std::vector<Coords> prefixes;
    if (i == 0) {
      prefixes.push_back({});
    } else {
      const CubeSpec pspec = CubeSpec::make(i, 2 * static_cast<std::int64_t>(M));
      for (Coords p : simplex_points(SimplexIndexer(pspec)))
        if (min_coord(p) >= 2)
          prefixes.push_back(std::move(p));
    }
    for (const Coords& xi : prefixes) {
      auto facet = [&](int c) {
        Coords p = xi;
        p.push_back(c);
        p.insert(p.end(), j, 1);
        return p;
      };
      const Coords p1 = facet(1), p2 = facet(2), p3 = facet(3);
      for (std::int64_t t = 1; t < H; ++t) {
        const std::int64_t v1 = V.padded(t, p1), v2 = V.padded(t, p2), v3 = V.padded(t, p3);
        const std::int64_t v1n = V.padded(t + 1, p1), v2n = V.padded(t + 1, p2);
        if (v1 == v2 + 1 && v1n != v1)
          reject(weak, t + 1, p1, v1n, v1);
        if (t < tau_or_inf(M) || i >= 1) {
          if (v1 - v3 > 2)
            reject(strong, t, p1, v1 - v3, 2);
          if (v1 == v2 + 1) {
            if (v1n != v1)
              reject(strong, t + 1, p1, v1n, v1);
            if (v2n != v2 + 1)
              reject(strong, t + 1, p2, v2n, v2 + 1);
          }
        }
      }
    }
  }

  if (tau[M - 1]) {
    for (std::int64_t t = *tau[M - 1]; t < H; ++t) {
      auto a = V.row(t + 2), b = V.row(t);
      for (std::uint64_t n = 0; n < a.size(); ++n)
        if (a[n] - b[n] > 1)
          reject(topple, t, V.points()[n], a[n] - b[n], 1);
    }
  } else {
    topple.note = "tau_{M-1} not reached; clause vacuous";
  }

  std::string taus;
  for (int j = 1; j <= M; ++j)
    taus += (j > 1 ? "," : "") + (tau[j] ? std::to_string(*tau[j]) : std::string("none"));
  for (CheckReport* r : {&self, &weak, &strong, &topple})
    if (r->note.empty())
      r->note = "tau=" + taus;
  return {self, weak, strong, topple};
}

std::vector<CheckReport> check_least_action(const Trajectory& traj) {
  require_stride_one(traj);
  const View view(traj);
  const std::int64_t two_d = 2 * static_cast<std::int64_t>(view.spec().dim);
  const std::int64_t s0 = two_d + traj.background;
  const std::int64_t cap = two_d - 1;

  CheckReport constraint = make_report("least-action-constraint", view.spec(), traj.background, true);
  const std::int64_t t_end = traj.stabilized() ? traj.final_time + 1 : traj.final_time;
  constraint.horizon = t_end;
  const std::int64_t t_begin = traj.snapshots.front().t + 1;
  for (std::int64_t t = t_begin; t <= t_end; ++t) {
    auto v = view.row(t), prev = view.row(t - 1);
    for (std::uint64_t i = 0; i < v.size(); ++i) {
      const std::int64_t lhs = -two_d * v[i] + view.lattice().neighbor_sum(prev, i) + s0;
      if (lhs > cap)
        constraint.reject(t, view.points()[i], lhs, cap);
    }
  }

  CheckReport probe = make_report("least-action-minimality", view.spec(), traj.background, false);
  probe.horizon = traj.final_time;
  if (traj.final_time - 1 < t_begin) {
    probe.note = "no non-final times; vacuous";
    return {constraint, probe};
  }
  std::mt19937_64 rng(kDecrementSeed);
  std::uniform_int_distribution<std::int64_t> pick_t(t_begin, traj.final_time - 1);
  std::uniform_int_distribution<std::uint64_t> pick_x(0, view.points().size() - 1);
  int broken = 0;
  for (int n = 0; n < 100; ++n) {
    const std::int64_t t = pick_t(rng);
    const std::uint64_t i = pick_x(rng);
    auto prev = view.row(t - 1);
    const std::int64_t u = view.row(t)[i] - 1;
    const std::int64_t lhs = -two_d * u + view.lattice().neighbor_sum(prev, i) + s0;
    const bool violated = u < 0 || u < prev[i] || lhs > cap;
    if (violated)
      ++broken;
    else
      probe.reject(t, view.points()[i], lhs, cap, Verdict::ViolatedObservation);
  }
  probe.note = std::to_string(broken) + "/100 decrements break the constraint, seed " + std::to_string(kDecrementSeed);
  return {constraint, probe};
}

CheckReport check_second_differences(std::int64_t N, std::int64_t horizon) {
  const CubeSpec spec = CubeSpec::make(2, N);
  const Trajectory traj = full_trajectory(spec, 0);
  const View view(traj);
  CheckReport r = make_report("second-differences", spec, 0, false);
  const std::int64_t H = horizon < 0 ? traj.final_time : horizon;
  r.horizon = H;
  std::int64_t lo = 0, hi = 0;
  for (std::int64_t t = 1; t <= H; ++t) {
    auto v = view.row(t);
    for (std::uint64_t n = 0; n < v.size(); ++n) {
      const Coords& x = view.points()[n];
      for (int i = 0; i < 2; ++i) {
        Coords up = x, down = x;
        ++up[i];
        --down[i];
        const std::int64_t sd = -2 * v[n] + view.padded(t, up) + view.padded(t, down);
        lo = std::min(lo, sd);
        hi = std::max(hi, sd);
        if (sd < -3)
          r.reject(t, x, sd, -3, Verdict::ViolatedObservation);
        else if (sd > 2)
          r.reject(t, x, sd, 2, Verdict::ViolatedObservation);
      }
    }
  }
  r.note = "min=" + std::to_string(lo) + " max=" + std::to_string(hi) + " over t=1.." + std::to_string(H);
  return r;
}

std::vector<CheckReport> probe_table1(const std::vector<int>& dims, const std::vector<std::int64_t>& ks,
                                      std::int64_t N) {
  std::vector<CheckReport> out;
  for (std::int64_t k : ks)
    for (int d : dims) {
      CheckReport r;
      r.name = "table1-probe";
      r.d = d;
      r.N = N;
      r.k = k;
      if (d < 2 || k < 0 || k > 2 * static_cast<std::int64_t>(d - 1) - 1) {
        r.verdict = Verdict::Skipped;
        r.note = "background 2d+k outside the stable-start range in dimension d-1";
        out.push_back(std::move(r));
        continue;
      }
      const Trajectory thi = full_trajectory(CubeSpec::make(d, N), k);
      const Trajectory tlo = full_trajectory(CubeSpec::make(d - 1, N), k);
      const View hi(thi), lo(tlo);
      TerminalComparison term = compare_terminal(hi, lo);
      r.verdict = Verdict::Observed;
      for (const auto& c : {term.layer1, term.sandpile})
        if (c)
          r.reject(c->t, c->x, c->lhs, c->rhs, Verdict::ViolatedObservation);
      r.note = d > k + 1 ? "above critical dimension k+1" : d == k + 1 ? "at critical dimension k+1"
                                                                          : "below critical dimension k+1";
      out.push_back(std::move(r));
    }
  return out;
}

} // namespace sandcube
