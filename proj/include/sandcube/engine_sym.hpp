// Parallel toppling on the fundamental domain S_M^(d) for constant
// backgrounds s0 = 2d + k. The neighbour sum of each simplex point is the
// folded full-cube neighbour sum, so the odometer here equals the full-cube
// odometer on S_M at every step.
#ifndef SANDCUBE_ENGINE_SYM_HPP_
#define SANDCUBE_ENGINE_SYM_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sandcube/lattice.hpp"

namespace sandcube {

// Odometer (or chip counts) over simplex ranks.
struct SimplexField {
  CubeSpec spec;
  std::int64_t background = 0;  // k, with s0 = 2d + k
  std::vector<std::int64_t> data;

  std::int64_t initial_chips() const { return 2 * static_cast<std::int64_t>(spec.dim) + background; }
  bool operator==(const SimplexField&) const = default;
};

// Throws BackgroundTooLarge unless 0 <= k <= 2d - 1.
void check_background(int dim, std::int64_t k);

// Flat adjacency of the fundamental domain. Self entries point at the site's
// own rank; dissipated moves are dropped.
class SymmetricLattice {
public:
  struct Entry {
    std::uint64_t index;
    std::int32_t multiplicity;
  };

  explicit SymmetricLattice(const CubeSpec& spec);

  const CubeSpec& spec() const { return indexer_.spec(); }
  const SimplexIndexer& indexer() const { return indexer_; }
  std::uint64_t size() const { return indexer_.size(); }

  std::span<const Entry> neighbors(std::uint64_t i) const {
    return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
  }

  std::int64_t neighbor_sum(std::span<const std::int64_t> v, std::uint64_t i) const {
    std::int64_t sum = 0;
    for (const Entry& e : neighbors(i))
      sum += e.multiplicity * v[e.index];
    return sum;
  }

  std::uint64_t table_bytes() const {
    return entries_.capacity() * sizeof(Entry) + offsets_.capacity() * sizeof(std::uint64_t);
  }

private:
  SimplexIndexer indexer_;
  std::vector<std::uint64_t> offsets_;
  std::vector<Entry> entries_;
};

SimplexField step_sym(const SymmetricLattice& lattice, const SimplexField& v);
SimplexField step_sym(const SimplexField& v);

// s(x) = 2d + k - 2d v(x) + folded neighbour sum.
SimplexField sandpile_from_odometer(const SymmetricLattice& lattice, const SimplexField& v);
SimplexField sandpile_from_odometer(const SimplexField& v);

// In-place stepping engine. Each step records one increment bit per site
// from the current odometer and then commits them, so the mutable state is
// the odometer plus a bitset.
class SymEngine {
public:
  SymEngine(std::shared_ptr<const SymmetricLattice> lattice, std::int64_t background, int threads = 0);
  // Resume from a stored state at time t.
  SymEngine(std::shared_ptr<const SymmetricLattice> lattice, std::int64_t background, std::int64_t t,
            std::vector<std::int64_t> odometer, int threads = 0);

  // Advances to t + 1. Returns false, leaving the state unchanged, when the
  // odometer is already a fixed point.
  bool step();
  // Evaluates the next step without committing it.
  bool at_fixed_point();

  std::int64_t time() const { return time_; }
  std::int64_t background() const { return background_; }
  std::span<const std::int64_t> odometer() const { return odometer_; }
  SimplexField field() const { return {lattice_->spec(), background_, odometer_}; }
  const SymmetricLattice& lattice() const { return *lattice_; }

  // Bytes held for the evolving state (odometer + increment bits).
  std::uint64_t working_bytes() const;
  // Sites per worker below which a step stays on one thread.
  void set_min_sites_per_thread(std::uint64_t n) { min_chunk_ = n; }

private:
  bool compute_increments();

  std::shared_ptr<const SymmetricLattice> lattice_;
  std::int64_t background_;
  std::int64_t time_ = 0;
  int threads_;
  std::uint64_t min_chunk_ = 4096;
  std::vector<std::int64_t> odometer_;
  std::vector<std::uint64_t> bits_;
};

using CheckpointSink = std::function<void(const SimplexField& odometer, std::int64_t t)>;

struct SymRunOptions {
  std::int64_t max_steps = -1;      // absolute time budget; < 0: 64 N^2 d
  std::int64_t snapshot_stride = 1; // 0 keeps only t = start, 1 and the final step
  std::int64_t checkpoint_every = 0;
  CheckpointSink sink;
  int threads = 0;                  // <= 0: SANDCUBE_THREADS / hardware
  std::uint64_t min_sites_per_thread = 4096;
};

struct Snapshot {
  std::int64_t t;
  std::vector<std::int64_t> v;
};

struct Trajectory {
  CubeSpec spec;
  std::int64_t background = 0;
  std::vector<Snapshot> snapshots;  // increasing t
  std::int64_t final_time = 0;
  std::optional<std::int64_t> stabilized_at;
  std::uint64_t peak_working_bytes = 0;

  bool stabilized() const { return stabilized_at.has_value(); }
  const std::vector<std::int64_t>& final_odometer() const { return snapshots.back().v; }
  // Odometer at time t; past a fixed point the final odometer is returned.
  // OutOfDomain when t was not retained.
  std::span<const std::int64_t> at(std::int64_t t) const;
  bool has(std::int64_t t) const;
};

// Runs s0 = 2d + k from v = 0 to a fixed point or the budget.
Trajectory stabilize_sym(const CubeSpec& spec, std::int64_t background, const SymRunOptions& options = {});
Trajectory stabilize_sym(std::shared_ptr<const SymmetricLattice> lattice, std::int64_t background,
                         const SymRunOptions& options = {});
// Continues a stored state (t0, v0).
Trajectory resume_sym(std::shared_ptr<const SymmetricLattice> lattice, std::int64_t background, std::int64_t t0,
                      std::vector<std::int64_t> v0, const SymRunOptions& options = {});

// First t >= 1 at which a site of the inner boundary of C_{2j} (simplex
// points with x_1 = j) has toppled at least j times. nullopt if the size-2j
// run stabilizes first; BudgetExhausted if the budget runs out.
std::optional<std::int64_t> stopping_time(int dim, int j, std::int64_t background, std::int64_t max_steps = -1);

// tau_1 .. tau_M (index j - 1).
std::vector<std::optional<std::int64_t>> stopping_times(int dim, int half, std::int64_t background);

} // namespace sandcube

#endif
