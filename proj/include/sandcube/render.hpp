// Unfolding simplex fields back onto the cube, 2D cross-sections and P6
// pixmap output with a fixed 16-colour palette (docs/palette.md).
#ifndef SANDCUBE_RENDER_HPP_
#define SANDCUBE_RENDER_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sandcube/engine_ref.hpp"
#include "sandcube/engine_sym.hpp"

namespace sandcube {

// value(y) = field(fold(y)) for every cube point y.
CubeField unfold(const SimplexField& field);

struct SliceImage {
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::vector<std::int64_t> values;  // row-major, row = first coordinate
  std::int64_t palette_base = 0;

  std::int64_t at(std::int64_t row, std::int64_t col) const { return values[static_cast<std::size_t>(row * width + col)]; }
};

// Cross-section through the first two axes with coordinates 3..d fixed to
// the given embedded values. OutOfDomain for a value outside the cube;
// InvalidArgument unless exactly d - 2 values are given.
SliceImage slice(const CubeField& cube, std::span<const int> fixed);

// Offsets measured from the centre slice (coordinate 1) toward increasing
// coordinates: offset o is embedded coordinate 1 + o.
Coords offsets_to_coords(std::span<const int> offsets);

// Colour index = value - offset. Comparing dimension d against d_ref uses
// offset 2(d - d_ref).
struct Normalization {
  std::int64_t offset = 0;
  static Normalization to_dimension(int d, int d_ref) { return {2 * static_cast<std::int64_t>(d - d_ref)}; }
};

using Rgb = std::array<std::uint8_t, 3>;
extern const std::array<Rgb, 16> kPalette;

// "P6\n<W> <H>\n255\n" followed by RGB triples. PaletteOverflow when a
// normalized value falls outside 0..15.
std::string encode_ppm(const SliceImage& img, Normalization norm = {});
void write_raster(const SliceImage& img, const std::string& path, Normalization norm = {});

} // namespace sandcube

#endif
