#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sandcube/checkpoint.hpp"
#include "sandcube/cli.hpp"

using namespace sandcube;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "sandcube_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

} // namespace

TEST_CASE("stabilize") {
  Result sym = run({"stabilize", "--dim", "1", "--side", "6"});
  CHECK(sym.code == kExitOk);
  CHECK(sym.out == "STABILIZED t=9 topples=14\n");
  Result full = run({"stabilize", "--dim", "1", "--side", "6", "--engine", "full"});
  CHECK(full.out == sym.out);

  Result budget = run({"stabilize", "--dim", "2", "--side", "8", "--steps", "0"});
  CHECK(budget.code == kExitBudget);
  CHECK(budget.out == "BUDGET t=0\n");

  CHECK(run({"stabilize", "--dim", "2"}).code == kExitUsage);
  CHECK(run({"stabilize", "--dim", "2", "--side", "4", "--background", "4"}).code == kExitUsage);
  CHECK(run({"stabilize", "--dim", "2", "--side", "4", "--checkpoint-every", "2"}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
}

TEST_CASE("checkpoint and resume") {
  const std::string mid = scratch("mid.bin").string();
  const std::string fin = scratch("final.bin").string();
  Result part = run({"stabilize", "--dim", "3", "--side", "10", "--steps", "6", "--checkpoint-every", "3", "--out", mid});
  CHECK(part.code == kExitBudget);
  CHECK(load_checkpoint(mid).t == 6);

  Result straight = run({"stabilize", "--dim", "3", "--side", "10", "--out", fin});
  REQUIRE(straight.code == kExitOk);
  const std::string resumed = scratch("resumed.bin").string();
  Result rest = run({"stabilize", "--dim", "3", "--side", "10", "--resume", mid, "--out", resumed});
  CHECK(rest.code == kExitOk);
  CHECK(rest.out == straight.out);
  CHECK(load_checkpoint(resumed) == load_checkpoint(fin));

  CHECK(run({"stabilize", "--dim", "3", "--side", "12", "--resume", mid}).code == kExitUsage);
  CHECK(run({"stabilize", "--dim", "3", "--side", "10", "--resume", scratch("missing.bin").string()}).code == kExitIo);

  const std::string junk = scratch("junk.bin").string();
  std::ofstream(junk) << "not a checkpoint at all, definitely not";
  CHECK(run({"stabilize", "--dim", "3", "--side", "10", "--resume", junk}).code == kExitIo);
}

TEST_CASE("verify") {
  Result dr = run({"verify", "--check", "dimensional-reduction", "--dim", "2", "--side", "8"});
  CHECK(dr.code == kExitOk);
  CHECK(dr.out.rfind("CHECK dimensional-reduction d=2 N=8 k=0 VERDICT=pass", 0) == 0);

  Result probe = run({"verify", "--check", "table1-probe", "--dim", "2", "--side", "2", "--background", "1"});
  CHECK(probe.code == kExitOk);
  CHECK(probe.out.find("VERDICT=violated-observation counterexample t=inf") != std::string::npos);

  Result radial = run({"verify", "--check", "radial-closed-form", "--dim", "10"});
  CHECK(radial.code == kExitOk);
  CHECK(radial.out.find("VERDICT=pass") != std::string::npos);

  Result all = run({"verify", "--check", "all", "--dim", "2", "--side", "6"});
  CHECK(all.code == kExitOk);
  CHECK(all.out.find("VERDICT=fail") == std::string::npos);

  CHECK(run({"verify", "--check", "nope"}).code == kExitUsage);
}

TEST_CASE("render") {
  const std::string base = scratch("pile.ppm").string();
  Result r = run({"render", "--dim", "2", "--side", "8", "--time", "0", "--time", "inf", "--out", base});
  CHECK(r.code == kExitOk);
  CHECK(std::filesystem::exists(scratch("pile_t0.ppm")));
  CHECK(std::filesystem::exists(scratch("pile_tinf.ppm")));
  CHECK(r.out.find("WROTE " + scratch("pile_t0.ppm").string() + " t=0\n") != std::string::npos);

  Result cube = run({"render", "--time", "inf", "--dim", "3", "--side", "16", "--slice", "0", "--out", base});
  CHECK(cube.code == kExitOk);
  CHECK(std::filesystem::exists(scratch("pile_tinf_s0.ppm")));

  CHECK(run({"render", "--dim", "3", "--side", "16", "--slice", "999", "--out", base}).code == kExitUsage);
  CHECK(run({"render", "--dim", "3", "--side", "16", "--slice", "0", "--slice", "1", "--out", base}).code ==
        kExitUsage);
  CHECK(run({"render", "--dim", "2", "--side", "8", "--time", "soon", "--out", base}).code == kExitUsage);
  CHECK(run({"render", "--dim", "2", "--side", "8", "--out", "/nonexistent-dir/x.ppm"}).code == kExitIo);
  // The initial pile 2d = 8 shifted down by 2(d - d_ref) = 4 is colour 4.
  Result norm = run({"render", "--dim", "4", "--side", "4", "--time", "0", "--normalize-to-dim", "2", "--out", base});
  CHECK(norm.code == kExitOk);
  std::filesystem::remove_all(std::filesystem::temp_directory_path() / "sandcube_cli_test");
}
