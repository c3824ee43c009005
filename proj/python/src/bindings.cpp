#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <sstream>

#include "sandcube/checkpoint.hpp"
#include "sandcube/cli.hpp"
#include "sandcube/engine_ref.hpp"
#include "sandcube/engine_sym.hpp"
#include "sandcube/error.hpp"
#include "sandcube/radial.hpp"
#include "sandcube/render.hpp"
#include "sandcube/verify.hpp"

namespace py = pybind11;
using namespace sandcube;

namespace {

py::dict trajectory_dict(const Trajectory& tr) {
  py::dict snaps;
  for (const Snapshot& s : tr.snapshots)
    snaps[py::int_(s.t)] = s.v;
  py::dict out;
  out["final_time"] = tr.final_time;
  out["stabilized"] = tr.stabilized();
  out["odometer"] = tr.final_odometer();
  out["snapshots"] = snaps;
  out["peak_working_bytes"] = tr.peak_working_bytes;
  return out;
}

SimplexField final_sandpile(const Trajectory& tr) {
  return sandpile_from_odometer(SimplexField{tr.spec, tr.background, tr.final_odometer()});
}

} // namespace

PYBIND11_MODULE(_sandcube, m) {
  m.doc() = "Parallel-toppling sandpiles on hypercubes, reduced to the sorted fundamental domain";

  // Messages start with the error code name, e.g. "BackgroundTooLarge: ...".
  py::register_exception<Error>(m, "SandcubeError", PyExc_ValueError);

  py::class_<CubeSpec>(m, "CubeSpec")
      .def(py::init(&CubeSpec::make), py::arg("dim"), py::arg("side"))
      .def_readonly("dim", &CubeSpec::dim)
      .def_readonly("side", &CubeSpec::side)
      .def_readonly("half", &CubeSpec::half)
      .def_property_readonly("lo", &CubeSpec::lo)
      .def_property_readonly("hi", &CubeSpec::hi)
      .def("__repr__", [](const CubeSpec& s) { return "CubeSpec(" + to_string(s) + ")"; });

  m.def("simplex_size", [](int d, std::int64_t N) { return simplex_size(CubeSpec::make(d, N)); },
        py::arg("dim"), py::arg("side"));
  m.def("simplex_points", [](int d, std::int64_t N) {
    SimplexIndexer ix(CubeSpec::make(d, N));
    std::vector<Coords> pts;
    pts.reserve(ix.size());
    for (std::uint64_t i = 0; i < ix.size(); ++i)
      pts.push_back(ix.unrank(i));
    return pts;
  }, py::arg("dim"), py::arg("side"));
  m.def("fold", [](const Coords& y, std::int64_t N) { return fold(y, CubeSpec::make(static_cast<int>(y.size()), N)); },
        py::arg("point"), py::arg("side"));

  m.def("stabilize", [](int d, std::int64_t N, std::int64_t k, std::int64_t max_steps, std::int64_t stride, int threads) {
    SymRunOptions opts;
    opts.max_steps = max_steps;
    opts.snapshot_stride = stride;
    opts.threads = threads;
    Trajectory tr;
    {
      py::gil_scoped_release release;
      tr = stabilize_sym(CubeSpec::make(d, N), k, opts);
    }
    py::dict out = trajectory_dict(tr);
    if (tr.stabilized())
      out["sandpile"] = final_sandpile(tr).data;
    return out;
  }, py::arg("dim"), py::arg("side"), py::arg("background") = 0, py::arg("max_steps") = -1,
     py::arg("snapshot_stride") = 0, py::arg("threads") = 0,
     "Run the symmetric engine; odometers are listed in simplex rank order.");

  m.def("stabilize_full", [](int d, std::int64_t N, std::int64_t k) {
    FullRun run = stabilize_full(CubeField::filled(CubeSpec::make(d, N), 2 * d + k));
    py::dict out;
    out["final_time"] = run.final_time;
    out["stabilized"] = run.stabilized;
    out["odometer"] = run.final_odometer().data;
    out["sandpile"] = run.final_sandpile.data;
    out["chips_lost"] = run.chips_lost;
    return out;
  }, py::arg("dim"), py::arg("side"), py::arg("background") = 0,
     "Reference engine on the whole cube; arrays are row-major over coordinates lo..hi.");

  m.def("stopping_times", [](int d, std::int64_t half, std::int64_t k) {
    return stopping_times(d, half, k);
  }, py::arg("dim"), py::arg("half"), py::arg("background") = 0);

  m.def("verify", [](const std::string& check, int d, std::int64_t N, std::int64_t k, std::int64_t horizon) {
    std::vector<std::string> args{"verify", "--check", check, "--dim", std::to_string(d), "--side",
                                  std::to_string(N), "--background", std::to_string(k)};
    if (horizon >= 0) {
      args.push_back("--horizon");
      args.push_back(std::to_string(horizon));
    }
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    if (code == kExitUsage || code == kExitIo || code == kExitBudget)
      throw Error(Errc::InvalidArgument, err.str());
    std::vector<std::string> lines;
    std::istringstream in(out.str());
    for (std::string line; std::getline(in, line);)
      lines.push_back(line);
    return lines;
  }, py::arg("check"), py::arg("dim") = 2, py::arg("side") = 8, py::arg("background") = 0,
     py::arg("horizon") = -1, "Run a named check (or 'all') and return its report lines.");

  m.def("radial_closed_form", [](int d) {
    CheckReport r = closed_form_check(d);
    return py::make_tuple(format_report(r), r.note);
  }, py::arg("dim"));
  m.def("m1_critical", [](int d0) {
    CriticalPair p = m1_critical_check(d0);
    return py::make_tuple(p.v_inf_high, p.v_inf_low);
  }, py::arg("d0"));

  m.def("render_ppm", [](int d, std::int64_t N, std::int64_t k, std::vector<int> offsets, int normalize_to) {
    Trajectory tr = stabilize_sym(CubeSpec::make(d, N), k, SymRunOptions{});
    if (!tr.stabilized())
      throw Error(Errc::BudgetExhausted, "run did not stabilize");
    if (offsets.empty() && d > 2)
      offsets.assign(static_cast<std::size_t>(d - 2), 0);
    const SliceImage img = slice(unfold(final_sandpile(tr)), offsets_to_coords(offsets));
    Normalization norm = normalize_to > 0 ? Normalization::to_dimension(d, normalize_to) : Normalization{};
    return py::bytes(encode_ppm(img, norm));
  }, py::arg("dim"), py::arg("side"), py::arg("background") = 0, py::arg("slice") = std::vector<int>{},
     py::arg("normalize_to_dim") = 0, "P6 image of the stable sandpile on a centre slice.");

  m.def("palette", [] {
    std::vector<std::string> hex;
    for (const Rgb& c : kPalette) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
      hex.emplace_back(buf);
    }
    return hex;
  });

  m.def("save_checkpoint", [](const std::string& path, int d, std::int64_t N, std::int64_t k, std::int64_t t,
                              const std::vector<std::int64_t>& odometer) {
    save_checkpoint(Checkpoint{CubeSpec::make(d, N), k, t, odometer}, path);
  }, py::arg("path"), py::arg("dim"), py::arg("side"), py::arg("background"), py::arg("time"), py::arg("odometer"));
  m.def("load_checkpoint", [](const std::string& path) {
    Checkpoint cp = load_checkpoint(path);
    py::dict out;
    out["dim"] = cp.spec.dim;
    out["side"] = cp.spec.side;
    out["background"] = cp.background;
    out["time"] = cp.t;
    out["odometer"] = cp.odometer;
    return out;
  }, py::arg("path"));

  m.def("main", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    py::print(out.str(), py::arg("end") = "");
    if (!err.str().empty())
      py::print(err.str(), py::arg("end") = "", py::arg("file") = py::module_::import("sys").attr("stderr"));
    return code;
  }, py::arg("args"), "Run the command-line tool in-process; returns its exit code.");
}
