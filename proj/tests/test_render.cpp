#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sandcube/engine_sym.hpp"
#include "sandcube/error.hpp"
#include "sandcube/render.hpp"

using namespace sandcube;

namespace {

SimplexField terminal_sandpile(int d, std::int64_t N) {
  Trajectory tr = stabilize_sym(CubeSpec::make(d, N), 0);
  REQUIRE(tr.stabilized());
  return sandpile_from_odometer(SimplexField{tr.spec, 0, tr.final_odometer()});
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("unfold") {
  CubeSpec spec = CubeSpec::make(3, 6);
  SimplexField c{spec, 0, std::vector<std::int64_t>(simplex_size(spec), 7)};
  CHECK(unfold(c) == CubeField::filled(spec, 7));

  // Each simplex value appears orbit_size times in the cube.
  for (int d = 1; d <= 3; ++d)
    for (int N = 1; N <= 8; ++N) {
      CubeSpec s = CubeSpec::make(d, N);
      SimplexIndexer ix(s);
      SimplexField f{s, 0, std::vector<std::int64_t>(ix.size())};
      for (std::uint64_t i = 0; i < ix.size(); ++i)
        f.data[i] = static_cast<std::int64_t>(i) * 3 + 1;
      CubeField cube = unfold(f);
      std::int64_t expected = 0;
      for (std::uint64_t i = 0; i < ix.size(); ++i)
        expected += f.data[i] * static_cast<std::int64_t>(orbit_size(ix.unrank(i), s));
      CHECK(cube.total() == expected);
    }
  CHECK_THROWS_AS(unfold(SimplexField{spec, 0, {1, 2}}), Error);
}

TEST_CASE("slices") {
  CubeSpec sq = CubeSpec::make(2, 6);
  CubeField f = CubeField::filled(sq, 0);
  for (std::uint64_t i = 0; i < f.size(); ++i)
    f.data[i] = static_cast<std::int64_t>(i);
  SliceImage img = slice(f, {});
  CHECK(img.width == 6);
  CHECK(img.height == 6);
  CHECK(img.values == f.data);
  CHECK(img.at(0, 1) == f.at(Coords{sq.lo(), sq.lo() + 1}));

  CubeSpec cube = CubeSpec::make(3, 6);
  CubeField g = CubeField::filled(cube, 0);
  for (std::uint64_t i = 0; i < g.size(); ++i)
    g.data[i] = static_cast<std::int64_t>(i);
  const Coords fixed = offsets_to_coords(std::vector<int>{0});
  CHECK(fixed == Coords{1});
  SliceImage mid = slice(g, fixed);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      CHECK(mid.at(a, b) == g.at(Coords{cube.lo() + a, cube.lo() + b, 1}));

  CubeSpec four = CubeSpec::make(4, 4);
  CubeField h = CubeField::filled(four, 0);
  for (std::uint64_t i = 0; i < h.size(); ++i)
    h.data[i] = static_cast<std::int64_t>(i);
  SliceImage s4 = slice(h, std::vector<int>{1, 1});
  CHECK(s4.at(3, 0) == h.at(Coords{2, -1, 1, 1}));

  CHECK_THROWS_AS(slice(h, std::vector<int>{1}), Error);
  CHECK_THROWS_AS(slice(h, std::vector<int>{1, 9}), Error);
  CHECK_THROWS_AS(slice(CubeField::filled(CubeSpec::make(1, 4), 0), {}), Error);
}

TEST_CASE("ppm encoding") {
  CubeSpec spec = CubeSpec::make(2, 5);
  SliceImage img = slice(CubeField::filled(spec, 0), {});
  std::string bytes = encode_ppm(img);
  const std::string header = "P6\n5 5\n255\n";
  REQUIRE(bytes.size() == header.size() + 75);
  CHECK(bytes.substr(0, header.size()) == header);
  for (std::size_t i = header.size(); i < bytes.size(); i += 3) {
    CHECK(static_cast<std::uint8_t>(bytes[i]) == kPalette[0][0]);
    CHECK(static_cast<std::uint8_t>(bytes[i + 2]) == kPalette[0][2]);
  }

  SliceImage hot = slice(CubeField::filled(spec, 16), {});
  CHECK_THROWS_AS(encode_ppm(hot), Error);
  try {
    encode_ppm(hot);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PaletteOverflow);
  }
  CHECK_NOTHROW(encode_ppm(hot, Normalization{1}));
  CHECK(Normalization::to_dimension(3, 2).offset == 2);
  CHECK_THROWS_AS(encode_ppm(img, Normalization{1}), Error);
}

TEST_CASE("normalized d=3 slice matches d=2 away from the reflection axes") {
  const std::int64_t N = 16;
  SliceImage s2 = slice(unfold(terminal_sandpile(2, N)), {});
  SliceImage s3 = slice(unfold(terminal_sandpile(3, N)), offsets_to_coords(std::vector<int>{0}));
  const CubeSpec spec = CubeSpec::make(2, N);
  const std::int64_t off = Normalization::to_dimension(3, 2).offset;
  int compared = 0;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      Coords x = fold(Coords{spec.lo() + a, spec.lo() + b}, spec);
      if (x[1] < 2)
        continue;
      ++compared;
      CHECK(s3.at(a, b) - off == s2.at(a, b));
    }
  CHECK(compared > 0);
}

TEST_CASE("golden raster") {
  SliceImage img = slice(unfold(terminal_sandpile(2, 64)), {});
  const std::string bytes = encode_ppm(img);
  CHECK(bytes == encode_ppm(slice(unfold(terminal_sandpile(2, 64)), {})));
  const std::string golden = read_file(SANDCUBE_TEST_DATA_DIR "/golden_d2_n64_inf.ppm");
  REQUIRE_FALSE(golden.empty());
  CHECK(bytes == golden);
}

TEST_CASE("write errors") {
  SliceImage img = slice(CubeField::filled(CubeSpec::make(2, 2), 0), {});
  CHECK_THROWS_AS(write_raster(img, "/nonexistent-dir/x.ppm"), Error);
  const auto path = std::filesystem::temp_directory_path() / "sandcube_render_test.ppm";
  write_raster(img, path.string());
  CHECK(read_file(path.string()) == encode_ppm(img));
  std::filesystem::remove(path);
}
