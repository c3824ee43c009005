// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sandcube/checkpoint.hpp"
#include "sandcube/engine_ref.hpp"
#include "sandcube/engine_sym.hpp"
#include "sandcube/error.hpp"
#include "sandcube/radial.hpp"
#include "sandcube/render.hpp"
#include "sandcube/verify.hpp"

using namespace sandcube;

namespace {

// Wall-clock limits in seconds, one per criterion.
constexpr double kLimitOracle = 60;
constexpr double kLimitDimReduction = 120;
constexpr double kLimitSandpileReduction = 60;
constexpr double kLimitSelfSimilarity = 120;
constexpr double kLimitLineClosedForm = 60;
constexpr double kLimitRadial = 30;
constexpr double kLimitCorollaries = 180;
constexpr double kLimitRegularity = 180;
constexpr double kLimitProbes = 300;
constexpr double kLimitLargeRun = 10;       // d = 6, N = 16 stabilization alone
constexpr double kMemoryFactor = 1.5;       // working bytes / simplex payload

struct Outcome {
  bool ok = true;
  std::string detail;
  double timed_seconds = -1;  // when set, compared against the limit instead of the total
};

struct Tally {
  Outcome& o;
  int checked = 0;
  int failed = 0;
  std::string first;

  void expect(bool cond, const std::string& what) {
    ++checked;
    if (cond)
      return;
    o.ok = false;
    if (failed++ == 0)
      first = what;
  }
  // Writes the failure summary; returns false when everything held.
  bool summarize() {
    if (failed > 0)
      o.detail = std::to_string(failed) + "/" + std::to_string(checked) + " failed, first: " + first;
    return failed > 0;
  }
  void report(const CheckReport& r) {
    expect(r.ok(), format_report(r) + (r.note.empty() ? "" : " # " + r.note));
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome oracle_equivalence() {
  Outcome o;
  Tally tally{o};
  for (int d = 1; d <= 3; ++d)
    for (int N = 2; N <= 10; ++N) {
      CubeSpec spec = CubeSpec::make(d, N);
      FullRun full = stabilize_full(CubeField::filled(spec, 2 * d));
      SymRunOptions opts;
      opts.snapshot_stride = 1;
      Trajectory sym = stabilize_sym(spec, 0, opts);
      const std::string where = "d=" + std::to_string(d) + " N=" + std::to_string(N);
      tally.expect(full.stabilized && sym.stabilized(), where + " stabilizes");
      tally.expect(sym.final_time == full.final_time, where + " stabilization time");
      for (std::int64_t t = 0; t <= full.final_time && t <= sym.final_time; ++t) {
        SimplexField f{spec, 0, std::vector<std::int64_t>(sym.at(t).begin(), sym.at(t).end())};
        tally.expect(unfold(f) == full.odometers[static_cast<std::size_t>(t)], where + " t=" + std::to_string(t));
      }
    }
  if (!tally.summarize())
    o.detail = std::to_string(tally.checked) + " comparisons";
  return o;
}

const std::vector<std::pair<int, int>>& reduction_grid() {
  static const std::vector<std::pair<int, int>> grid = {{2, 4}, {2, 6}, {2, 8}, {3, 4}, {3, 6},
                                                        {3, 8}, {4, 4}, {4, 6}, {4, 8}, {3, 12}};
  return grid;
}

Outcome dimensional_reduction() {
  Outcome o;
  Tally tally{o};
  for (auto [d, N] : reduction_grid())
    tally.report(check_dimensional_reduction(d, N));
  if (!tally.summarize())
    o.detail = std::to_string(tally.checked) + " instances";
  return o;
}

Outcome sandpile_reduction() {
  Outcome o;
  Tally tally{o};
  for (auto [d, N] : reduction_grid())
    tally.report(check_sandpile_reduction(d, N));
  if (!tally.summarize())
    o.detail = std::to_string(tally.checked) + " instances";
  return o;
}

Outcome self_similarity() {
  Outcome o;
  Tally tally{o};
  std::string taus;
  for (int d = 1; d <= 3; ++d)
    for (int N : {6, 8, 12}) {
      CheckReport r = check_self_similarity(d, N);
      tally.report(r);
      if (N == 12)
        taus += " d=" + std::to_string(d) + ":" + r.note;
    }
  if (!tally.summarize())
    o.detail = std::to_string(tally.checked) + " instances;" + taus;
  return o;
}

Outcome line_closed_form() {
  Outcome o;
  Tally tally{o};
  for (std::int64_t M = 1; M <= 50; ++M) {
    Trajectory tr = stabilize_sym(CubeSpec::make(1, 2 * M), 0, SymRunOptions{});
    tally.expect(tr.stabilized(), "M=" + std::to_string(M) + " stabilizes");
    const auto v = tr.final_odometer();
    for (std::int64_t x = 1; x <= M; ++x) {
      const std::int64_t expected = (M * (M + 1) - x * (x - 1)) / 2;
      const std::int64_t got = v[static_cast<std::size_t>(x - 1)];
      tally.expect(got == expected, "M=" + std::to_string(M) + " x=" + std::to_string(x) + " v=" +
                                        std::to_string(got) + " expected " + std::to_string(expected));
    }
  }
  if (!tally.summarize())
    o.detail = "M=1..50, " + std::to_string(tally.checked) + " values";
  return o;
}

Outcome radial_solutions() {
  Outcome o;
  Tally tally{o};
  for (int d : {1, 2, 5, 10, 100, 1000})
    tally.report(closed_form_check(d));
  for (int d = 1; d <= 8; ++d) {
    CubeSpec spec = CubeSpec::make(d, 4);
    SymRunOptions opts;
    opts.snapshot_stride = 1;
    Trajectory sym = stabilize_sym(spec, d - 1, opts);
    auto radial = radial_trajectory(d);
    const std::string where = "radial d=" + std::to_string(d);
    tally.expect(sym.stabilized() && static_cast<std::int64_t>(radial.size()) - 1 == sym.final_time,
                 where + " stabilization time");
    const SimplexIndexer ix(spec);
    for (std::int64_t t = 0; t <= sym.final_time && t < static_cast<std::int64_t>(radial.size()); ++t)
      for (int x = 0; x <= d; ++x)
        tally.expect(radial[static_cast<std::size_t>(t)].at(x) == sym.at(t)[ix.rank(radial_point(d, x))],
                     where + " t=" + std::to_string(t) + " x=" + std::to_string(x));
  }
  for (int d0 = 2; d0 <= 8; ++d0) {
    CriticalPair p = m1_critical_check(d0);
    tally.expect(p.v_inf_high == 1 && p.v_inf_low == 2,
                 "m1 d0=" + std::to_string(d0) + " gave (" + std::to_string(p.v_inf_high) + ", " +
                     std::to_string(p.v_inf_low) + ")");
  }
  if (!tally.summarize())
    o.detail = std::to_string(tally.checked) + " checks";
  return o;
}

Outcome corollaries() {
  Outcome o;
  Tally tally{o};
  for (int d = 1; d <= 3; ++d)
    for (int N = 2; N <= 12; ++N) {
      Trajectory tr = full_trajectory(CubeSpec::make(d, N), 0);
      tally.report(check_axis_monotonicity(tr));
      tally.report(check_derivative_bound(tr));
      for (const CheckReport& r : check_topple_limits(tr))
        tally.report(r);
      tally.report(check_least_action(tr).front());
    }
  if (!tally.summarize())
    o.detail = std::to_string(tally.checked) + " reports";
  return o;
}

Outcome regularity() {
  Outcome o;
  Tally tally{o};
  for (int d = 1; d <= 3; ++d)
    for (int N : {4, 6, 8})
      for (const CheckReport& r : check_regularity(d, N))
        tally.report(r);
  if (!tally.summarize())
    o.detail = std::to_string(tally.checked) + " reports";
  return o;
}

// Report-mode: probes print their verdicts and only a crash fails the line.
Outcome probes() {
  Outcome o;
  std::ostringstream notes;
  auto note = [&](const CheckReport& r, Verdict expected) {
    notes << "\n    " << format_report(r) << (r.verdict == expected ? "" : "  (unexpected)");
  };
  for (std::int64_t N : {16, 64})
    note(check_second_differences(N), Verdict::Observed);
  for (std::int64_t k : {1, 2}) {
    std::vector<int> above;
    for (int d = static_cast<int>(k) + 2; d <= static_cast<int>(k) + 3; ++d)
      above.push_back(d);
    for (const CheckReport& r : probe_table1(above, {k}, 8))
      note(r, Verdict::Observed);
    for (const CheckReport& r : probe_table1({static_cast<int>(k) + 1}, {k}, 2))
      note(r, Verdict::ViolatedObservation);
  }
  o.detail = "report-mode" + notes.str();
  return o;
}

Outcome large_run() {
  Outcome o;
  Tally tally{o};
  const CubeSpec spec = CubeSpec::make(6, 16);
  auto lattice = std::make_shared<const SymmetricLattice>(spec);

  auto t0 = std::chrono::steady_clock::now();
  SymRunOptions plain;
  plain.snapshot_stride = 0;
  Trajectory base = stabilize_sym(lattice, 0, plain);
  o.timed_seconds = seconds_since(t0);
  tally.expect(base.stabilized(), "d=6 N=16 stabilizes");
  const double payload = 8.0 * static_cast<double>(lattice->size());
  const double ratio = static_cast<double>(base.peak_working_bytes) / payload;
  tally.expect(ratio <= kMemoryFactor, "working memory ratio " + std::to_string(ratio));

  // Stride-1 trajectories under different SANDCUBE_THREADS settings.
  std::vector<Snapshot> reference;
  for (const char* threads : {"1", "2", "8"}) {
    setenv("SANDCUBE_THREADS", threads, 1);
    SymRunOptions opts;
    opts.snapshot_stride = 1;
    opts.threads = 0;
    opts.min_sites_per_thread = 1;
    Trajectory tr = stabilize_sym(lattice, 0, opts);
    if (reference.empty()) {
      reference = tr.snapshots;
      tally.expect(tr.final_odometer() == base.final_odometer(), "stride-1 run matches the plain run");
      continue;
    }
    bool same = tr.snapshots.size() == reference.size();
    for (std::size_t i = 0; same && i < reference.size(); ++i)
      same = tr.snapshots[i].t == reference[i].t && tr.snapshots[i].v == reference[i].v;
    tally.expect(same, std::string("SANDCUBE_THREADS=") + threads + " trajectory differs");
  }
  unsetenv("SANDCUBE_THREADS");

  // Stop halfway, round-trip through the checkpoint format and finish.
  SymRunOptions half;
  half.max_steps = base.final_time / 2;
  half.snapshot_stride = 0;
  Trajectory first = stabilize_sym(lattice, 0, half);
  const Checkpoint cp = decode_checkpoint(encode_checkpoint({spec, 0, first.final_time, first.final_odometer()}));
  SymRunOptions rest_opts;
  rest_opts.snapshot_stride = 1;
  Trajectory rest = resume_sym(lattice, cp.background, cp.t, cp.odometer, rest_opts);
  tally.expect(rest.final_time == base.final_time, "resumed stabilization time");
  bool same = true;
  for (const Snapshot& s : rest.snapshots)
    same = same && s.v == reference[static_cast<std::size_t>(s.t)].v;
  tally.expect(same, "resumed trajectory differs from the uninterrupted one");

  std::ostringstream d;
  d << std::fixed << std::setprecision(3) << "t_inf=" << base.final_time << " sites=" << lattice->size()
    << " memory=" << ratio << "x payload, threads {1,2,8} identical, resume from t=" << cp.t << " exact";
  if (!tally.summarize())
    o.detail = d.str();
  return o;
}

} // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "oracle-equivalence", kLimitOracle, oracle_equivalence},
      {2, "dimensional-reduction", kLimitDimReduction, dimensional_reduction},
      {3, "sandpile-reduction", kLimitSandpileReduction, sandpile_reduction},
      {4, "self-similarity", kLimitSelfSimilarity, self_similarity},
      {5, "line-closed-form", kLimitLineClosedForm, line_closed_form},
      {6, "radial-solutions", kLimitRadial, radial_solutions},
      {7, "corollaries", kLimitCorollaries, corollaries},
      {8, "regularity", kLimitRegularity, regularity},
      {9, "conjecture-probes", kLimitProbes, probes},
      {10, "performance-determinism", kLimitLargeRun, large_run},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double total = seconds_since(t0);
    const double timed = o.timed_seconds >= 0 ? o.timed_seconds : total;
    if (o.ok && timed > c.limit) {
      o.ok = false;
      o.detail = "over time limit; " + o.detail;
    }
    failures += o.ok ? 0 : 1;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << " " << std::fixed
              << std::setprecision(2) << timed << "s (limit " << std::setprecision(0) << c.limit << "s) "
              << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
