#include "sandcube/render.hpp"

#include <fstream>

#include "sandcube/error.hpp"

namespace sandcube {

const std::array<Rgb, 16> kPalette = {{
    {0x10, 0x10, 0x18},
    {0x2b, 0x4c, 0x7e},
    {0xf2, 0xc1, 0x4e},
    {0xd1, 0x49, 0x5b},
    {0x66, 0xa1, 0x82},
    {0x8e, 0x6c, 0x8a},
    {0xed, 0xae, 0x49},
    {0x00, 0x79, 0x8c},
    {0x30, 0x63, 0x8e},
    {0xe0, 0x7a, 0x5f},
    {0x81, 0xb2, 0x9a},
    {0xf4, 0xf1, 0xde},
    {0x3d, 0x40, 0x5b},
    {0xc9, 0xad, 0xa7},
    {0x9a, 0x03, 0x1e},
    {0xff, 0xff, 0xff},
}};

CubeField unfold(const SimplexField& field) {
  const SimplexIndexer ix(field.spec);
  if (field.data.size() != ix.size())
    throw Error(Errc::InvalidArgument, "field length does not match " + to_string(field.spec));
  CubeField cube = CubeField::filled(field.spec, 0);
  for (std::uint64_t i = 0; i < cube.size(); ++i)
    cube.data[i] = field.data[ix.rank(fold(cube.coords(i), field.spec))];
  return cube;
}

Coords offsets_to_coords(std::span<const int> offsets) {
  Coords c(offsets.begin(), offsets.end());
  for (int& v : c)
    v += 1;
  return c;
}

SliceImage slice(const CubeField& cube, std::span<const int> fixed) {
  const CubeSpec& spec = cube.spec;
  if (spec.dim < 2)
    throw Error(Errc::InvalidArgument, "slices need d >= 2");
  if (static_cast<int>(fixed.size()) != spec.dim - 2)
    throw Error(Errc::InvalidArgument, "a slice of " + to_string(spec) + " fixes " + std::to_string(spec.dim - 2) +
                                           " coordinates, got " + std::to_string(fixed.size()));
  for (int c : fixed)
    if (c < spec.lo() || c > spec.hi())
      throw Error(Errc::OutOfDomain, "slice coordinate " + std::to_string(c) + " outside [" +
                                         std::to_string(spec.lo()) + ", " + std::to_string(spec.hi()) + "]");
  SliceImage img;
  img.width = img.height = spec.side;
  img.values.reserve(static_cast<std::size_t>(spec.side * spec.side));
  Coords y(spec.dim);
  std::copy(fixed.begin(), fixed.end(), y.begin() + 2);
  for (int a = spec.lo(); a <= spec.hi(); ++a)
    for (int b = spec.lo(); b <= spec.hi(); ++b) {
      y[0] = a;
      y[1] = b;
      img.values.push_back(cube.data[cube.index(y)]);
    }
  return img;
}

std::string encode_ppm(const SliceImage& img, Normalization norm) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.values.size() * 3);
  for (std::size_t i = 0; i < img.values.size(); ++i) {
    const std::int64_t c = img.values[i] - img.palette_base - norm.offset;
    if (c < 0 || c > 15)
      throw Error(Errc::PaletteOverflow, "value " + std::to_string(img.values[i]) + " normalizes to " +
                                             std::to_string(c) + ", outside palette 0..15");
    const Rgb& rgb = kPalette[static_cast<std::size_t>(c)];
    out.append(reinterpret_cast<const char*>(rgb.data()), 3);
  }
  return out;
}

void write_raster(const SliceImage& img, const std::string& path, Normalization norm) {
  const std::string bytes = encode_ppm(img, norm);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw Error(Errc::IoError, "cannot open " + path + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f)
    throw Error(Errc::IoError, "write to " + path + " failed");
}

} // namespace sandcube
