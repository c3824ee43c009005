// Finite-instance checks of the identities and regularity properties of
// the s0 = 2d + k odometer, run against engine_sym trajectories.
//
// Proven statements report pass/fail; probes of open questions report
// observed/violated-observation and never fail a run.
#ifndef SANDCUBE_VERIFY_HPP_
#define SANDCUBE_VERIFY_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "sandcube/engine_sym.hpp"
#include "sandcube/report.hpp"

namespace sandcube {

// Stride-1 run to stabilization; BudgetExhausted if it does not settle.
Trajectory full_trajectory(const CubeSpec& spec, std::int64_t k);

// Layer-1 identity v^(d)(x, 1) = v^(d-1)(x) for every t >= 1 up to
// `horizon` (default: both runs stabilized), and at t = inf the layer-2
// identity v^(d)(x, 2) = v^(d-1)(x) for x >= 2. Report-mode for k >= 1.
CheckReport check_dimensional_reduction(int d, std::int64_t N, std::int64_t k = 0, std::int64_t horizon = -1);

// s_inf^(d)(x, 1) = s_inf^(d-1)(x) + 2 for x >= 2.
CheckReport check_sandpile_reduction(int d, std::int64_t N, std::int64_t k = 0);

// Corner windows of the size-N run against the size-2j runs, j < M, up to
// tau_j; the sandpile identity one site further in.
CheckReport check_self_similarity(int d, std::int64_t N, std::int64_t k = 0);

// v_t(x) >= v_t(x + e_I - e_J) over index sets with max I < min J.
// Exhaustive for d <= 4, otherwise 1000 sampled pairs per t.
CheckReport check_axis_monotonicity(const Trajectory& traj);
inline constexpr std::uint64_t kAxisSampleSeed = 0x5A4DC0BEULL;

// v_t(x) - v_t(x + e_j) <= k x_j given v_inf(M, 1, ..., 1) <= k M.
// k_bound defaults to max(1, ceil(v_inf(M, 1, ..., 1) / M)). A supplied
// bound whose hypothesis fails gives a skipped report.
CheckReport check_derivative_bound(const Trajectory& traj, std::optional<std::int64_t> k_bound = std::nullopt);

// max_z (v_{t+j} - v_t)(z) <= max_z (v_{t0+j} - v_{t0})(z) for all t >= t0.
CheckReport check_topple_limit(const Trajectory& traj, std::int64_t t0, std::int64_t j);
// Windowed maximum nonincreasing in t, for j = 1, 2, 3.
std::vector<CheckReport> check_topple_limits(const Trajectory& traj);

// Self-similarity, weak facet, strong facet and strong topple control
// clauses, one report each.
std::vector<CheckReport> check_regularity(int d, std::int64_t N);

// Parabolic constraint at every (t >= 1, x), plus a report-mode probe that
// 100 single-cell decrements of v all break the constraint or monotonicity.
std::vector<CheckReport> check_least_action(const Trajectory& traj);
inline constexpr std::uint64_t kDecrementSeed = 0xD0C0FFEEULL;

// d = 2, s0 = 4: range of -2v(x) + v(x + e_i) + v(x - e_i) over t >= 1,
// folded at the reflection axes and zero outside the cube. Observed when
// inside [-3, 2].
CheckReport check_second_differences(std::int64_t N, std::int64_t horizon = -1);

// Terminal layer-1 odometer identity and the +2 sandpile identity on x >= 2
// for each (d, k). Observed when both hold.
std::vector<CheckReport> probe_table1(const std::vector<int>& dims, const std::vector<std::int64_t>& ks,
                                      std::int64_t N);

} // namespace sandcube

#endif
