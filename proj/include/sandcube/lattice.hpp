// Coordinate conventions for the hypercube C_N^(d), the sorted fundamental
// domain S_M^(d) and its symmetrized neighbour structure.
//
// Both parities are embedded so that the fundamental domain has coordinates
// 1..M:
//   even N = 2M:     y_i in [1-M, M], reflection axis between 0 and 1
//   odd  N = 2M - 1: y_i in [2-M, M], centre slice at coordinate 1
#ifndef SANDCUBE_LATTICE_HPP_
#define SANDCUBE_LATTICE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sandcube {

using Coords = std::vector<int>;

enum class Parity { Even, Odd };

struct CubeSpec {
  int dim = 1;
  std::int64_t side = 2;
  int half = 1;  // M = ceil(N/2)
  Parity parity = Parity::Even;

  // Throws InvalidArgument for d < 1 or N < 1.
  static CubeSpec make(int dim, std::int64_t side);

  bool even() const { return parity == Parity::Even; }
  // Smallest embedded coordinate; the largest is always `half`.
  int lo() const { return even() ? 1 - half : 2 - half; }
  int hi() const { return half; }

  bool operator==(const CubeSpec&) const = default;
};

std::string to_string(const CubeSpec& spec);
std::string format_coords(std::span<const int> x);

// binomial(M + d - 1, d); throws Overflow when it does not fit in int64.
std::uint64_t simplex_size(const CubeSpec& spec);

bool is_simplex_point(const CubeSpec& spec, std::span<const int> x);
bool in_cube(const CubeSpec& spec, std::span<const int> y);

// Lexicographic ranking of descending-sorted points (largest coordinate
// first). Binomial tables are built once per spec and only read afterwards.
class SimplexIndexer {
public:
  explicit SimplexIndexer(const CubeSpec& spec);

  const CubeSpec& spec() const { return spec_; }
  std::uint64_t size() const { return size_; }

  std::uint64_t rank(std::span<const int> x) const;
  Coords unrank(std::uint64_t index) const;

  // Advances x to the point of the next rank; returns false past the end.
  bool next(Coords& x) const;

private:
  // C(n, k) with n <= M + d, k <= d + 1
  std::uint64_t binom(int n, int k) const;

  CubeSpec spec_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint64_t> table_;
  std::uint64_t size_ = 0;
};

// Runs (l_k, r_k) over padded indices 0..d+1 with x_0 = M, x_{d+1} = 1.
using NeighborRuns = std::vector<std::pair<int, int>>;

// Greedy scan of maximal equal blocks. Unsupported for M = 1.
NeighborRuns neighbor_runs(std::span<const int> x, const CubeSpec& spec);

enum class NeighborKind { Point, Self, Dissipated };

struct SymNeighbor {
  NeighborKind kind = NeighborKind::Point;
  Coords point;  // empty unless kind == Point
  int multiplicity = 0;

  bool operator==(const SymNeighbor&) const = default;
};

using SymNeighborList = std::vector<SymNeighbor>;

// Weighted symmetrized neighbours of a simplex point; total multiplicity is
// always 2d. Entries with identical targets are merged and the list is
// sorted (Dissipated, Self, then points by coordinates).
SymNeighborList sym_neighbors(std::span<const int> x, const CubeSpec& spec);

// Maps a cube point to its orbit representative in S_M; OutOfDomain when y
// is outside the cube.
Coords fold(std::span<const int> y, const CubeSpec& spec);

// Number of cube points in the hyperoctahedral orbit of a simplex point.
std::uint64_t orbit_size(std::span<const int> x, const CubeSpec& spec);

} // namespace sandcube

#endif
