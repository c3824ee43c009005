#include "sandcube/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>

#include "sandcube/checkpoint.hpp"
#include "sandcube/engine_ref.hpp"
#include "sandcube/engine_sym.hpp"
#include "sandcube/error.hpp"
#include "sandcube/radial.hpp"
#include "sandcube/render.hpp"
#include "sandcube/verify.hpp"

namespace sandcube {

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::IoError:
    case Errc::CorruptCheckpoint:
      return kExitIo;
    case Errc::BudgetExhausted:
      return kExitBudget;
    default:
      return kExitUsage;
  }
}

struct StabilizeArgs {
  int dim = 0;
  std::int64_t side = 0;
  std::int64_t background = 0;
  std::string engine = "sym";
  std::int64_t steps = -1;
  std::int64_t checkpoint_every = 0;
  std::string resume;
  std::string out;
};

int stabilize(const StabilizeArgs& a, std::ostream& out) {
  const CubeSpec spec = CubeSpec::make(a.dim, a.side);
  check_background(a.dim, a.background);
  if (a.checkpoint_every > 0 && a.out.empty())
    throw Usage("--checkpoint-every needs --out");

  std::vector<std::int64_t> odometer;
  std::int64_t t = 0;
  bool stabilized = false;

  if (a.engine == "full") {
    if (!a.resume.empty() || a.checkpoint_every > 0)
      throw Usage("--resume and --checkpoint-every need --engine sym");
    CubeField s0 = CubeField::filled(spec, 2 * static_cast<std::int64_t>(a.dim) + a.background);
    FullRunOptions opts;
    opts.max_steps = a.steps;
    FullRun run = stabilize_full(s0, opts);
    const SimplexIndexer ix(spec);
    Coords x(spec.dim, 1);
    do
      odometer.push_back(run.final_odometer().at(x));
    while (ix.next(x));
    t = run.final_time;
    stabilized = run.stabilized;
  } else {
    auto lattice = std::make_shared<const SymmetricLattice>(spec);
    SymRunOptions opts;
    opts.max_steps = a.steps;
    opts.snapshot_stride = 0;
    opts.checkpoint_every = a.checkpoint_every;
    if (a.checkpoint_every > 0)
      opts.sink = [&](const SimplexField& f, std::int64_t now) {
        save_checkpoint(Checkpoint{f.spec, f.background, now, f.data}, a.out);
      };
    Trajectory tr;
    if (!a.resume.empty()) {
      Checkpoint cp = load_checkpoint(a.resume);
      if (!(cp.spec == spec) || cp.background != a.background)
        throw Usage("checkpoint " + a.resume + " holds " + to_string(cp.spec) + " k=" +
                    std::to_string(cp.background) + ", not " + to_string(spec) + " k=" + std::to_string(a.background));
      tr = resume_sym(lattice, a.background, cp.t, std::move(cp.odometer), opts);
    } else {
      tr = stabilize_sym(lattice, a.background, opts);
    }
    odometer = tr.final_odometer();
    t = tr.final_time;
    stabilized = tr.stabilized();
  }

  if (!a.out.empty())
    save_checkpoint(Checkpoint{spec, a.background, t, odometer}, a.out);
  if (!stabilized) {
    out << "BUDGET t=" << t << "\n";
    return kExitBudget;
  }
  out << "STABILIZED t=" << t << " topples=" << std::accumulate(odometer.begin(), odometer.end(), std::int64_t{0})
      << "\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string check = "all";
  int dim = 2;
  std::int64_t side = 8;
  std::int64_t background = 0;
  std::int64_t horizon = -1;
  bool verbose = false;
};

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "dimensional-reduction", "sandpile-reduction", "self-similarity",    "axis-monotonicity",
      "derivative-bound",      "topple-limit",       "regularity",         "least-action",
      "second-differences",    "table1-probe",       "radial-closed-form", "m1-critical",
  };
  return names;
}

std::vector<CheckReport> run_check(const std::string& name, const VerifyArgs& a) {
  const CubeSpec spec = CubeSpec::make(a.dim, a.side);
  auto trajectory = [&] { return full_trajectory(spec, a.background); };
  if (name == "dimensional-reduction")
    return {check_dimensional_reduction(a.dim, a.side, a.background, a.horizon)};
  if (name == "sandpile-reduction")
    return {check_sandpile_reduction(a.dim, a.side, a.background)};
  if (name == "self-similarity")
    return {check_self_similarity(a.dim, a.side, a.background)};
  if (name == "axis-monotonicity")
    return {check_axis_monotonicity(trajectory())};
  if (name == "derivative-bound")
    return {check_derivative_bound(trajectory())};
  if (name == "topple-limit")
    return check_topple_limits(trajectory());
  if (name == "regularity") {
    if (a.background != 0)
      throw Usage("regularity clauses are stated for k = 0");
    return check_regularity(a.dim, a.side);
  }
  if (name == "least-action")
    return check_least_action(trajectory());
  if (name == "second-differences")
    return {check_second_differences(a.side, a.horizon)};
  if (name == "table1-probe")
    return probe_table1({a.dim}, {a.background}, a.side);
  if (name == "radial-closed-form")
    return {closed_form_check(a.dim, a.horizon < 0 ? std::nullopt : std::optional<std::int64_t>(a.horizon))};
  if (name == "m1-critical") {
    const CriticalPair p = m1_critical_check(a.dim);
    CheckReport r;
    r.name = name;
    r.d = a.dim;
    r.N = 2;
    r.k = a.dim - 1;
    if (p.v_inf_high != 1)
      r.reject(-1, Coords(a.dim, 1), p.v_inf_high, 1);
    if (p.v_inf_low != 2)
      r.reject(-1, Coords(a.dim - 1, 1), p.v_inf_low, 2);
    r.note = "v_inf=(" + std::to_string(p.v_inf_high) + "," + std::to_string(p.v_inf_low) + ") s_1=(" +
             std::to_string(p.s1_high) + "," + std::to_string(p.s1_low) + ")";
    return {r};
  }
  throw Usage("unknown check '" + name + "'");
}

// Checks that apply to the given parameters when --check all is used.
std::vector<std::string> applicable_checks(const VerifyArgs& a) {
  const int M = static_cast<int>((a.side + 1) / 2);
  std::vector<std::string> names;
  if (a.dim >= 2)
    names.insert(names.end(), {"dimensional-reduction", "sandpile-reduction"});
  names.insert(names.end(), {"self-similarity", "axis-monotonicity", "derivative-bound", "topple-limit"});
  if (a.background == 0 && M >= 2)
    names.push_back("regularity");
  names.push_back("least-action");
  if (a.dim == 2 && a.background == 0)
    names.push_back("second-differences");
  if (a.dim >= 2)
    names.push_back("table1-probe");
  if (a.background == a.dim - 1)
    names.push_back("radial-closed-form");
  if (a.dim >= 2)
    names.push_back("m1-critical");
  return names;
}

int verify(const VerifyArgs& a, std::ostream& out) {
  std::vector<std::string> names;
  if (a.check == "all")
    names = applicable_checks(a);
  else if (std::find(check_names().begin(), check_names().end(), a.check) != check_names().end())
    names = {a.check};
  else
    throw Usage("unknown check '" + a.check + "'");

  bool failed = false;
  for (const std::string& name : names)
    for (const CheckReport& r : run_check(name, a)) {
      out << format_report(r) << "\n";
      if (a.verbose && !r.note.empty())
        out << "# " << r.note << "\n";
      failed = failed || r.failed();
    }
  return failed ? kExitCheckFailed : kExitOk;
}

struct RenderArgs {
  int dim = 0;
  std::int64_t side = 0;
  std::int64_t background = 0;
  std::vector<std::string> times = {"inf"};
  std::vector<int> offsets;
  std::optional<int> normalize_to;
  std::string out;
};

std::string output_path(const std::string& base, const std::string& time, const std::vector<int>& offsets) {
  std::string stem = base;
  if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".ppm") == 0)
    stem.resize(stem.size() - 4);
  stem += "_t" + time;
  if (!offsets.empty()) {
    stem += "_s";
    for (std::size_t i = 0; i < offsets.size(); ++i)
      stem += (i ? "-" : "") + std::to_string(offsets[i]);
  }
  return stem + ".ppm";
}

int render(const RenderArgs& a, std::ostream& out) {
  const CubeSpec spec = CubeSpec::make(a.dim, a.side);
  check_background(a.dim, a.background);
  if (a.dim < 2)
    throw Usage("render needs --dim >= 2");
  std::vector<int> offsets = a.offsets;
  if (offsets.empty())
    offsets.assign(static_cast<std::size_t>(a.dim - 2), 0);
  if (static_cast<int>(offsets.size()) != a.dim - 2)
    throw Usage("--slice needs " + std::to_string(a.dim - 2) + " offsets");
  const Coords fixed = offsets_to_coords(offsets);
  for (int c : fixed)
    if (c < spec.lo() || c > spec.hi())
      throw Usage("slice offset " + std::to_string(c - 1) + " outside the cube " + to_string(spec));

  // Requested times in increasing order; "inf" runs to the fixed point.
  std::vector<std::pair<std::int64_t, std::string>> wanted;
  for (const std::string& s : a.times) {
    if (s == "inf") {
      wanted.emplace_back(std::numeric_limits<std::int64_t>::max(), s);
      continue;
    }
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
    }
    if (v < 0 || used != s.size())
      throw Usage("--time takes nonnegative integers or 'inf', got '" + s + "'");
    wanted.emplace_back(v, s);
  }
  std::sort(wanted.begin(), wanted.end());

  auto lattice = std::make_shared<const SymmetricLattice>(spec);
  SymEngine engine(lattice, a.background);
  const std::int64_t budget = default_step_budget(spec);
  const Normalization norm = a.normalize_to ? Normalization::to_dimension(a.dim, *a.normalize_to) : Normalization{};
  for (const auto& [t, label] : wanted) {
    while (engine.time() < t && engine.step()) {
      if (engine.time() >= budget && t == std::numeric_limits<std::int64_t>::max())
        throw Error(Errc::BudgetExhausted, "run did not stabilize within " + std::to_string(budget) + " steps");
    }
    const SimplexField chips = sandpile_from_odometer(*lattice, engine.field());
    const SliceImage img = slice(unfold(chips), fixed);
    const std::string path = output_path(a.out, label, offsets);
    write_raster(img, path, norm);
    out << "WROTE " << path << " t=" << engine.time() << "\n";
  }
  return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel-toppling sandpiles on hypercubes", "sandcube"};
  app.require_subcommand(1);

  StabilizeArgs st;
  auto* cmd_st = app.add_subcommand("stabilize", "Run s0 = 2d + k to a fixed point or the step budget");
  cmd_st->add_option("--dim", st.dim, "Dimension d")->required()->check(CLI::PositiveNumber);
  cmd_st->add_option("--side", st.side, "Side length N")->required()->check(CLI::PositiveNumber);
  cmd_st->add_option("--background", st.background, "Background k in s0 = 2d + k");
  cmd_st->add_option("--engine", st.engine, "sym or full")->check(CLI::IsMember({"sym", "full"}));
  cmd_st->add_option("--steps", st.steps, "Absolute step budget (default 64 N^2 d)")->check(CLI::NonNegativeNumber);
  cmd_st->add_option("--checkpoint-every", st.checkpoint_every, "Write --out every n steps")
      ->check(CLI::NonNegativeNumber);
  cmd_st->add_option("--resume", st.resume, "Continue from a checkpoint");
  cmd_st->add_option("--out", st.out, "Final checkpoint path");

  VerifyArgs vf;
  auto* cmd_vf = app.add_subcommand("verify", "Run checks and print one report line each");
  cmd_vf->add_option("--check", vf.check, "Check name or 'all'");
  cmd_vf->add_option("--dim", vf.dim, "Dimension d")->check(CLI::PositiveNumber);
  cmd_vf->add_option("--side", vf.side, "Side length N")->check(CLI::PositiveNumber);
  cmd_vf->add_option("--background", vf.background, "Background k");
  cmd_vf->add_option("--horizon", vf.horizon, "Last time step checked where applicable");
  cmd_vf->add_flag("--verbose", vf.verbose, "Print report notes");

  RenderArgs rd;
  auto* cmd_rd = app.add_subcommand("render", "Write P6 slices of the chip configuration");
  cmd_rd->add_option("--dim", rd.dim, "Dimension d")->required()->check(CLI::PositiveNumber);
  cmd_rd->add_option("--side", rd.side, "Side length N")->required()->check(CLI::PositiveNumber);
  cmd_rd->add_option("--background", rd.background, "Background k");
  cmd_rd->add_option("--time", rd.times, "Time steps (integers or inf)");
  cmd_rd->add_option("--slice", rd.offsets, "Offsets of coordinates 3..d from the centre");
  cmd_rd->add_option("--normalize-to-dim", rd.normalize_to, "Shift colours by 2(d - d_ref)");
  cmd_rd->add_option("--out", rd.out, "Output path; time and offsets are appended")->required();

  std::vector<std::string> argv_store{"sandcube"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_store)
    argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (cmd_st->parsed())
      return stabilize(st, out);
    if (cmd_vf->parsed())
      return verify(vf, out);
    return render(rd, out);
  } catch (const Usage& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

} // namespace sandcube
