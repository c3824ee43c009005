#include "sandcube/lattice.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "sandcube/error.hpp"

namespace sandcube {

namespace {

constexpr std::uint64_t kMaxCount = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n)
    return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kMaxCount)
      throw Error(Errc::Overflow, "binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                                      ") exceeds 2^63 - 1");
  }
  return static_cast<std::uint64_t>(r);
}

int sort_key(NeighborKind kind) {
  switch (kind) {
    case NeighborKind::Dissipated: return 0;
    case NeighborKind::Self: return 1;
    case NeighborKind::Point: return 2;
  }
  return 3;
}

} // namespace

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::Overflow: return "Overflow";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::Unsupported: return "Unsupported";
    case Errc::BackgroundTooLarge: return "BackgroundTooLarge";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::HypothesisNotMet: return "HypothesisNotMet";
    case Errc::IoError: return "IoError";
    case Errc::PaletteOverflow: return "PaletteOverflow";
    case Errc::CorruptCheckpoint: return "CorruptCheckpoint";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

CubeSpec CubeSpec::make(int dim, std::int64_t side) {
  if (dim < 1)
    throw Error(Errc::InvalidArgument, "dimension must be >= 1, got " + std::to_string(dim));
  if (side < 1)
    throw Error(Errc::InvalidArgument, "side must be >= 1, got " + std::to_string(side));
  if (side > 2 * static_cast<std::int64_t>(std::numeric_limits<int>::max() / 2))
    throw Error(Errc::Overflow, "side " + std::to_string(side) + " too large");
  CubeSpec spec;
  spec.dim = dim;
  spec.side = side;
  spec.half = static_cast<int>((side + 1) / 2);
  spec.parity = side % 2 == 0 ? Parity::Even : Parity::Odd;
  return spec;
}

std::string to_string(const CubeSpec& spec) {
  return "d=" + std::to_string(spec.dim) + " N=" + std::to_string(spec.side);
}

std::string format_coords(std::span<const int> x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i)
    os << (i ? "," : "") << x[i];
  os << ')';
  return os.str();
}

std::uint64_t simplex_size(const CubeSpec& spec) {
  return checked_binomial(static_cast<std::uint64_t>(spec.half) + spec.dim - 1,
                          static_cast<std::uint64_t>(spec.dim));
}

bool is_simplex_point(const CubeSpec& spec, std::span<const int> x) {
  if (x.size() != static_cast<std::size_t>(spec.dim))
    return false;
  int prev = spec.half;
  for (int c : x) {
    if (c > prev || c < 1)
      return false;
    prev = c;
  }
  return true;
}

bool in_cube(const CubeSpec& spec, std::span<const int> y) {
  if (y.size() != static_cast<std::size_t>(spec.dim))
    return false;
  return std::all_of(y.begin(), y.end(), [&](int c) { return c >= spec.lo() && c <= spec.hi(); });
}

// ---------------------------------------------------------------------------
// SimplexIndexer

SimplexIndexer::SimplexIndexer(const CubeSpec& spec) : spec_(spec) {
  size_ = simplex_size(spec);
  rows_ = spec.half + spec.dim + 1;
  cols_ = spec.dim + 2;
  table_.assign(static_cast<std::size_t>(rows_) * cols_, 0);
  for (int n = 0; n < rows_; ++n) {
    table_[static_cast<std::size_t>(n) * cols_] = 1;
    for (int k = 1; k < cols_ && k <= n; ++k) {
      std::uint64_t a = table_[static_cast<std::size_t>(n - 1) * cols_ + k - 1];
      std::uint64_t b = table_[static_cast<std::size_t>(n - 1) * cols_ + k];
      std::uint64_t s = (a == kSaturated || b == kSaturated || a > kMaxCount - b) ? kSaturated : a + b;
      table_[static_cast<std::size_t>(n) * cols_ + k] = s;
    }
  }
}

std::uint64_t SimplexIndexer::binom(int n, int k) const {
  if (n < 0 || k < 0 || k > n)
    return 0;
  return table_[static_cast<std::size_t>(n) * cols_ + k];
}

// Points with prefix x_0..x_{i-1} and a smaller coordinate c < x_i at
// position i: sum over c of multichoose(c, r) = C(x_i + r - 1, r + 1),
// where r = d - 1 - i is the number of trailing coordinates.
std::uint64_t SimplexIndexer::rank(std::span<const int> x) const {
  if (!is_simplex_point(spec_, x))
    throw Error(Errc::OutOfDomain, format_coords(x) + " is not in the fundamental domain of " + to_string(spec_));
  std::uint64_t r = 0;
  const int d = spec_.dim;
  for (int i = 0; i < d; ++i) {
    int trailing = d - 1 - i;
    r += binom(x[i] + trailing - 1, trailing + 1);
  }
  return r;
}

Coords SimplexIndexer::unrank(std::uint64_t index) const {
  if (index >= size_)
    throw Error(Errc::OutOfDomain, "rank " + std::to_string(index) + " >= simplex size " + std::to_string(size_));
  const int d = spec_.dim;
  Coords x(d);
  int upper = spec_.half;
  for (int i = 0; i < d; ++i) {
    int trailing = d - 1 - i;
    int c = upper;
    while (c > 1 && binom(c + trailing - 1, trailing + 1) > index)
      --c;
    index -= binom(c + trailing - 1, trailing + 1);
    x[i] = c;
    upper = c;
  }
  return x;
}

bool SimplexIndexer::next(Coords& x) const {
  const int d = spec_.dim;
  for (int i = d - 1; i >= 0; --i) {
    int cap = i == 0 ? spec_.half : x[i - 1];
    if (x[i] < cap) {
      ++x[i];
      std::fill(x.begin() + i + 1, x.end(), 1);
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Neighbour structure

NeighborRuns neighbor_runs(std::span<const int> x, const CubeSpec& spec) {
  if (spec.half < 2)
    throw Error(Errc::Unsupported, "neighbor runs need M >= 2");
  if (!is_simplex_point(spec, x))
    throw Error(Errc::OutOfDomain, format_coords(x) + " is not in the fundamental domain of " + to_string(spec));
  const int d = spec.dim;
  auto padded = [&](int i) { return i == 0 ? spec.half : i == d + 1 ? 1 : x[i - 1]; };

  NeighborRuns runs;
  int l = 0;
  for (;;) {
    int r = l;
    while (r < d + 1 && padded(r + 1) == padded(l))
      ++r;
    runs.emplace_back(l, r);
    if (r == d + 1)
      break;
    l = r + 1;
  }
  return runs;
}

SymNeighborList sym_neighbors(std::span<const int> x, const CubeSpec& spec) {
  if (!is_simplex_point(spec, x))
    throw Error(Errc::OutOfDomain, format_coords(x) + " is not in the fundamental domain of " + to_string(spec));
  const int d = spec.dim;

  std::map<std::pair<int, Coords>, int> merged;
  auto add = [&](NeighborKind kind, Coords p, int mult) {
    if (mult > 0)
      merged[{sort_key(kind), std::move(p)}] += mult;
  };
  auto shifted = [&](int index, int delta) {  // index is 1-based
    Coords y(x.begin(), x.end());
    y[index - 1] += delta;
    return y;
  };

  if (spec.half == 1) {
    // Single site: outward moves leave the cube; inward moves reflect back
    // onto the site itself for N = 2 and leave the cube for N = 1.
    if (spec.even()) {
      add(NeighborKind::Self, {}, d);
      add(NeighborKind::Dissipated, {}, d);
    } else {
      add(NeighborKind::Dissipated, {}, 2 * d);
    }
  } else {
    const NeighborRuns runs = neighbor_runs(x, spec);
    const std::size_t n = runs.size() - 1;
    for (std::size_t k = 0; k <= n; ++k) {
      auto [l, r] = runs[k];
      if (k == 0) {
        add(NeighborKind::Point, r > 0 ? shifted(r, -1) : Coords{}, r - l);
        add(NeighborKind::Dissipated, {}, r - l);
      } else if (k == n) {
        int mult = r - l;
        if (mult == 0)
          continue;
        add(NeighborKind::Point, shifted(l, +1), mult);
        if (spec.even())
          add(NeighborKind::Self, {}, mult);
        else
          add(NeighborKind::Point, shifted(l, +1), mult);
      } else {
        add(NeighborKind::Point, shifted(r, -1), 1 + r - l);
        add(NeighborKind::Point, shifted(l, +1), 1 + r - l);
      }
    }
  }

  SymNeighborList out;
  out.reserve(merged.size());
  for (auto& [key, mult] : merged) {
    SymNeighbor nb;
    nb.kind = key.first == 0 ? NeighborKind::Dissipated : key.first == 1 ? NeighborKind::Self : NeighborKind::Point;
    nb.point = key.second;
    nb.multiplicity = mult;
    out.push_back(std::move(nb));
  }
  return out;
}

Coords fold(std::span<const int> y, const CubeSpec& spec) {
  if (!in_cube(spec, y))
    throw Error(Errc::OutOfDomain, format_coords(y) + " lies outside the cube " + to_string(spec));
  const int mirror = spec.even() ? 1 : 2;
  Coords x(y.begin(), y.end());
  for (int& c : x)
    if (c < 1)
      c = mirror - c;
  std::sort(x.begin(), x.end(), std::greater<>());
  return x;
}

std::uint64_t orbit_size(std::span<const int> x, const CubeSpec& spec) {
  if (!is_simplex_point(spec, x))
    throw Error(Errc::OutOfDomain, format_coords(x) + " is not in the fundamental domain of " + to_string(spec));
  // multinomial d! / prod(m_c!) built incrementally as a product of binomials
  unsigned __int128 count = 1;
  std::size_t placed = 0;
  for (std::size_t i = 0; i < x.size();) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i])
      ++j;
    count *= checked_binomial(placed + (j - i), j - i);
    if (count > kMaxCount)
      throw Error(Errc::Overflow, "orbit size of " + format_coords(x) + " exceeds 2^63 - 1");
    placed += j - i;
    i = j;
  }
  for (int c : x) {
    if (spec.even() || c != 1)
      count *= 2;
    if (count > kMaxCount)
      throw Error(Errc::Overflow, "orbit size of " + format_coords(x) + " exceeds 2^63 - 1");
  }
  return static_cast<std::uint64_t>(count);
}

} // namespace sandcube
