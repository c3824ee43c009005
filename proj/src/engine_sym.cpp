#include "sandcube/engine_sym.hpp"

#include <algorithm>
#include <atomic>

#include "sandcube/engine_ref.hpp"
#include "sandcube/error.hpp"
#include "sandcube/parallel.hpp"

namespace sandcube {

void check_background(int dim, std::int64_t k) {
  if (k < 0)
    throw Error(Errc::InvalidArgument, "background k must be >= 0, got " + std::to_string(k));
  if (k > 2 * static_cast<std::int64_t>(dim) - 1)
    throw Error(Errc::BackgroundTooLarge, "background 2d + k with k = " + std::to_string(k) +
                                              " exceeds 2(2d) - 1 for d = " + std::to_string(dim));
}

SymmetricLattice::SymmetricLattice(const CubeSpec& spec) : indexer_(spec) {
  const std::uint64_t n = indexer_.size();
  offsets_.reserve(n + 1);
  entries_.reserve(n * static_cast<std::uint64_t>(spec.dim));
  offsets_.push_back(0);

  Coords x(spec.dim, 1);
  std::uint64_t rank = 0;
  do {
    for (const SymNeighbor& nb : sym_neighbors(x, spec)) {
      switch (nb.kind) {
        case NeighborKind::Dissipated:
          break;
        case NeighborKind::Self:
          entries_.push_back({rank, nb.multiplicity});
          break;
        case NeighborKind::Point:
          entries_.push_back({indexer_.rank(nb.point), nb.multiplicity});
          break;
      }
    }
    offsets_.push_back(entries_.size());
    ++rank;
  } while (indexer_.next(x));
  entries_.shrink_to_fit();
}

SimplexField step_sym(const SymmetricLattice& lattice, const SimplexField& v) {
  check_background(v.spec.dim, v.background);
  if (!(v.spec == lattice.spec()) || v.data.size() != lattice.size())
    throw Error(Errc::InvalidArgument, "field does not match the lattice " + to_string(lattice.spec()));
  const std::int64_t two_d = 2 * static_cast<std::int64_t>(v.spec.dim);
  const std::int64_t s0 = v.initial_chips();
  SimplexField next{v.spec, v.background, std::vector<std::int64_t>(v.data.size())};
  for (std::uint64_t i = 0; i < lattice.size(); ++i)
    next.data[i] = (s0 + lattice.neighbor_sum(v.data, i)) / two_d;
  return next;
}

SimplexField step_sym(const SimplexField& v) {
  return step_sym(SymmetricLattice(v.spec), v);
}

SimplexField sandpile_from_odometer(const SymmetricLattice& lattice, const SimplexField& v) {
  if (!(v.spec == lattice.spec()) || v.data.size() != lattice.size())
    throw Error(Errc::InvalidArgument, "field does not match the lattice " + to_string(lattice.spec()));
  const std::int64_t two_d = 2 * static_cast<std::int64_t>(v.spec.dim);
  SimplexField s{v.spec, v.background, std::vector<std::int64_t>(v.data.size())};
  for (std::uint64_t i = 0; i < lattice.size(); ++i)
    s.data[i] = v.initial_chips() - two_d * v.data[i] + lattice.neighbor_sum(v.data, i);
  return s;
}

SimplexField sandpile_from_odometer(const SimplexField& v) {
  return sandpile_from_odometer(SymmetricLattice(v.spec), v);
}

// ---------------------------------------------------------------------------
// SymEngine

SymEngine::SymEngine(std::shared_ptr<const SymmetricLattice> lattice, std::int64_t background, int threads)
  : SymEngine(lattice, background, 0, std::vector<std::int64_t>(lattice->size(), 0), threads) {}

SymEngine::SymEngine(std::shared_ptr<const SymmetricLattice> lattice, std::int64_t background, std::int64_t t,
                     std::vector<std::int64_t> odometer, int threads)
  : lattice_(std::move(lattice)), background_(background), time_(t), threads_(resolve_threads(threads)),
    odometer_(std::move(odometer)) {
  check_background(lattice_->spec().dim, background_);
  if (odometer_.size() != lattice_->size())
    throw Error(Errc::InvalidArgument, "odometer length " + std::to_string(odometer_.size()) +
                                           " does not match simplex size " + std::to_string(lattice_->size()));
  if (t < 0)
    throw Error(Errc::InvalidArgument, "negative start time");
  bits_.assign((odometer_.size() + 63) / 64, 0);
}

std::uint64_t SymEngine::working_bytes() const {
  return odometer_.capacity() * sizeof(std::int64_t) + bits_.capacity() * sizeof(std::uint64_t);
}

bool SymEngine::compute_increments() {
  const std::uint64_t n = odometer_.size();
  const std::int64_t two_d = 2 * static_cast<std::int64_t>(lattice_->spec().dim);
  const std::int64_t s0 = two_d + background_;
  std::atomic<bool> changed{false};
  std::atomic<bool> malformed{false};

  parallel_for(n, threads_, min_chunk_, 64, [&](std::uint64_t b, std::uint64_t e) {
    bool local = false;
    for (std::uint64_t w = b / 64; w < (e + 63) / 64; ++w)
      bits_[w] = 0;
    for (std::uint64_t i = b; i < e; ++i) {
      std::int64_t delta = (s0 + lattice_->neighbor_sum(odometer_, i)) / two_d - odometer_[i];
      if (delta == 1) {
        bits_[i / 64] |= std::uint64_t{1} << (i % 64);
        local = true;
      } else if (delta != 0) {
        malformed = true;
      }
    }
    if (local)
      changed = true;
  });
  if (malformed)
    throw Error(Errc::InvalidArgument, "odometer is not a parallel-toppling state (increment outside {0,1})");
  return changed;
}

bool SymEngine::at_fixed_point() {
  return !compute_increments();
}

bool SymEngine::step() {
  if (!compute_increments())
    return false;
  const std::uint64_t n = odometer_.size();
  parallel_for(n, threads_, min_chunk_, 64, [&](std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i)
      odometer_[i] += static_cast<std::int64_t>((bits_[i / 64] >> (i % 64)) & 1);
  });
  ++time_;
  return true;
}

// ---------------------------------------------------------------------------
// Trajectories

bool Trajectory::has(std::int64_t t) const {
  if (stabilized_at && t >= final_time)
    return true;
  auto it = std::lower_bound(snapshots.begin(), snapshots.end(), t,
                             [](const Snapshot& s, std::int64_t value) { return s.t < value; });
  return it != snapshots.end() && it->t == t;
}

std::span<const std::int64_t> Trajectory::at(std::int64_t t) const {
  if (stabilized_at && t >= final_time)
    return snapshots.back().v;
  auto it = std::lower_bound(snapshots.begin(), snapshots.end(), t,
                             [](const Snapshot& s, std::int64_t value) { return s.t < value; });
  if (it == snapshots.end() || it->t != t)
    throw Error(Errc::OutOfDomain, "time " + std::to_string(t) + " was not retained in the trajectory");
  return it->v;
}

namespace {

Trajectory run_engine(SymEngine& engine, const SymRunOptions& options) {
  const CubeSpec& spec = engine.lattice().spec();
  const std::int64_t budget = options.max_steps < 0 ? default_step_budget(spec) : options.max_steps;
  engine.set_min_sites_per_thread(options.min_sites_per_thread);

  Trajectory traj;
  traj.spec = spec;
  traj.background = engine.background();
  auto record = [&] {
    std::vector<std::int64_t> v(engine.odometer().begin(), engine.odometer().end());
    traj.snapshots.push_back({engine.time(), std::move(v)});
  };
  record();

  for (;;) {
    if (engine.time() >= budget) {
      if (engine.at_fixed_point())
        traj.stabilized_at = engine.time();
      break;
    }
    if (!engine.step()) {
      traj.stabilized_at = engine.time();
      break;
    }
    const std::int64_t t = engine.time();
    if (t == 1 || (options.snapshot_stride > 0 && t % options.snapshot_stride == 0))
      record();
    if (options.checkpoint_every > 0 && options.sink && t % options.checkpoint_every == 0)
      options.sink(engine.field(), t);
  }
  if (traj.snapshots.back().t != engine.time())
    record();
  traj.final_time = engine.time();
  traj.peak_working_bytes = engine.working_bytes();
  return traj;
}

} // namespace

Trajectory stabilize_sym(std::shared_ptr<const SymmetricLattice> lattice, std::int64_t background,
                         const SymRunOptions& options) {
  SymEngine engine(std::move(lattice), background, options.threads);
  return run_engine(engine, options);
}

Trajectory stabilize_sym(const CubeSpec& spec, std::int64_t background, const SymRunOptions& options) {
  check_background(spec.dim, background);
  return stabilize_sym(std::make_shared<const SymmetricLattice>(spec), background, options);
}

Trajectory resume_sym(std::shared_ptr<const SymmetricLattice> lattice, std::int64_t background, std::int64_t t0,
                      std::vector<std::int64_t> v0, const SymRunOptions& options) {
  SymEngine engine(std::move(lattice), background, t0, std::move(v0), options.threads);
  return run_engine(engine, options);
}

std::optional<std::int64_t> stopping_time(int dim, int j, std::int64_t background, std::int64_t max_steps) {
  if (j < 1)
    throw Error(Errc::InvalidArgument, "stopping time needs j >= 1");
  CubeSpec spec = CubeSpec::make(dim, 2 * static_cast<std::int64_t>(j));
  auto lattice = std::make_shared<const SymmetricLattice>(spec);
  SymEngine engine(lattice, background, 1);
  const std::int64_t budget = max_steps < 0 ? default_step_budget(spec) : max_steps;

  // Ranks are lexicographic, so the points with x_1 = j form the tail.
  Coords edge(dim, 1);
  edge[0] = j;
  const std::uint64_t first_boundary = lattice->indexer().rank(edge);

  while (engine.time() < budget) {
    if (!engine.step())
      return std::nullopt;
    auto v = engine.odometer();
    if (std::any_of(v.begin() + static_cast<std::ptrdiff_t>(first_boundary), v.end(),
                    [&](std::int64_t value) { return value >= j; }))
      return engine.time();
  }
  throw Error(Errc::BudgetExhausted, "stopping time tau_" + std::to_string(j) + " not reached within " +
                                         std::to_string(budget) + " steps");
}

std::vector<std::optional<std::int64_t>> stopping_times(int dim, int half, std::int64_t background) {
  std::vector<std::optional<std::int64_t>> taus;
  for (int j = 1; j <= half; ++j)
    taus.push_back(stopping_time(dim, j, background));
  return taus;
}

} // namespace sandcube
