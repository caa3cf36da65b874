#include "gphase/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gphase/catalog.hpp"
#include "gphase/cli/loop_spec.hpp"
#include "gphase/cli/serialize.hpp"

namespace gphase::cli {

using nlohmann::json;

namespace {

struct Options {
  std::string loop;
  std::string loop_file;
  std::string format = "json";
  std::string out;
  std::string psi;
  int steps = kDefaultSteps;
  int stride = 1;
  int grid = 64;
  int jobs = 1;
  double tol_zero = LoopTolerances{}.zero;
  double tol_kink = LoopTolerances{}.kink;
  double tol_speed = LoopTolerances{}.speed;
  std::uint64_t seed = 1;
  std::int64_t shots = 1000000;

  LoopTolerances tol() const { return {tol_zero, tol_kink, tol_speed}; }
};

Loop load_loop(const Options& o) {
  if (o.loop.empty() == o.loop_file.empty()) {
    throw InputError("give exactly one of --loop NAME[(args)] or --loop-file PATH");
  }
  if (!o.loop.empty()) return parse_loop_arg(o.loop);
  std::ifstream in(o.loop_file);
  if (!in) throw InputError("cannot read loop file '" + o.loop_file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_loop_spec(ss.str());
}

// A state over gamma(0): from --psi if given, otherwise a chord with a
// transverse axis perpendicular to the starting direction.
SpinState initial_state(const Options& o, const Loop& loop) {
  if (!o.psi.empty()) {
    json j;
    try {
      j = json::parse(o.psi.front() == '[' ? o.psi : "[" + o.psi + "]");
    } catch (const json::parse_error&) {
      throw InputError("--psi: expected 6 comma-separated numbers");
    }
    return state_from_json(j, "--psi");
  }
  const Vec3 g0 = loop.pos(0.0);
  Chord c;
  c.r = std::min(g0.norm(), 1.0);
  c.v = c.r > kChordDegenerateTol ? Vec3(g0.normalized())
                                  : segment_loop(loop, o.tol()).front().beta(0.0);
  c.u = any_perpendicular(c.v);
  return state_from_chord(c);
}

void require_json(const Options& o, const char* cmd) {
  if (o.format != "json") throw InputError(std::string(cmd) + " only writes json");
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError("cannot write '" + o.out + "'");
  f << text;
}

std::string cmd_liftable(const Options& o, int& code, std::string& diag) {
  require_json(o, "liftable");
  const Loop loop = load_loop(o);
  const LiftabilityReport r = check_liftable(loop, o.tol());
  json j = to_json(r);
  j["loop"] = loop.name();
  code = r.liftable ? kExitOk : kExitNotLiftable;
  diag = r.summary();
  return dump(j);
}

std::string cmd_zeros(const Options& o) {
  require_json(o, "zeros");
  const Loop loop = load_loop(o);
  const ZeroSet z = find_zeros(loop, o.tol());
  return dump({{"loop", loop.name()},
               {"zeros", z.times},
               {"interior", z.interior()},
               {"start_at_center", z.start_at_center},
               {"end_at_center", z.end_at_center}});
}

std::string cmd_phase(const Options& o) {
  require_json(o, "phase");
  const Loop loop = load_loop(o);
  json j = to_json(geometric_phase(loop, o.steps, std::nullopt, o.tol()));
  j["loop"] = loop.name();
  j["steps_per_segment"] = o.steps;
  return dump(j);
}

std::string cmd_solid_angle(const Options& o) {
  require_json(o, "solid-angle");
  const Loop loop = load_loop(o);
  const HolonomyResult h = geometric_phase(loop, o.steps, std::nullopt, o.tol());
  return dump({{"loop", loop.name()},
               {"generalized_solid_angle", generalized_solid_angle(h)},
               {"Omega1", h.omega1},
               {"k", to_json(h.k)},
               {"alpha0", to_json(h.alpha0)},
               {"alpha1", to_json(h.alpha1)}});
}

std::string cmd_lift(const Options& o) {
  const Loop loop = load_loop(o);
  const LiftPath path = horizontal_lift(loop, initial_state(o, loop), o.steps, o.tol());
  if (o.format == "csv") {
    std::ostringstream os;
    write_lift_csv(os, path, o.stride);
    return os.str();
  }
  json t = json::array(), states = json::array();
  for (std::size_t k = 0; k < path.t.size(); ++k) {
    if (o.stride > 1 && k % o.stride != 0 && k + 1 != path.t.size()) continue;
    t.push_back(path.t[k]);
    states.push_back(to_json(path.states[k]));
  }
  return dump({{"loop", loop.name()}, {"t", t}, {"states", states}, {"fs_length", fs_path_length(path)}});
}

std::string cmd_rp2_check(const Options& o) {
  require_json(o, "rp2-check");
  const Loop loop = load_loop(o);
  const HolonomyResult h = geometric_phase(loop, o.steps, std::nullopt, o.tol());
  const RP2Path alpha = project_to_rp2(loop, o.tol());
  const Rotation v = vertical_displacement_rp2(alpha, o.steps);
  return dump({{"loop", loop.name()},
               {"phase", to_json(h.R)},
               {"vertical_displacement", to_json(v)},
               {"frobenius_distance", frobenius_distance(v, h.R)},
               {"alpha_closed", alpha.closed()}});
}

std::string cmd_oracle(const Options& o) {
  require_json(o, "oracle");
  const Loop loop = load_loop(o);
  const SpinState psi0 = initial_state(o, loop);
  const LiftPath ode = horizontal_lift(loop, psi0, o.steps, o.tol());
  const LiftPath greedy = greedy_lift_oracle(loop, psi0, o.steps, o.grid);
  return dump({{"loop", loop.name()},
               {"steps", o.steps},
               {"fiber_grid", o.grid},
               {"endpoint_fs_distance", fubini_study_distance(ode.states.back(), greedy.states.back())},
               {"ode_fs_length", fs_path_length(ode)},
               {"greedy_fs_length", fs_path_length(greedy)},
               {"ode_endpoint", to_json(ode.states.back())},
               {"greedy_endpoint", to_json(greedy.states.back())}});
}

std::string cmd_tomography(const Options& o) {
  const Loop loop = load_loop(o);
  const SpinState before = initial_state(o, loop);
  const HolonomyResult h = geometric_phase(loop, o.steps, std::nullopt, o.tol());
  const SpinState after = horizontal_lift(loop, before, o.steps, o.tol()).states.back();
  const auto bases = default_basis_set();
  std::vector<MeasurementRecord> rb, ra;
  const MomentEstimate eb = run_tomography(before, bases, o.shots, o.seed, 0, &rb);
  const MomentEstimate ea = run_tomography(after, bases, o.shots, o.seed, bases.size(), &ra);
  const Mat3 predicted = h.R.matrix() * eb.T * h.R.matrix().transpose();
  const double residual = (predicted - ea.T).cwiseAbs().maxCoeff();
  if (o.format == "csv") {
    std::ostringstream os;
    os << "experiment,s_x,s_y,s_z,T_xx,T_xy,T_xz,T_yx,T_yy,T_yz,T_zx,T_zy,T_zz\n";
    char buf[32];
    for (const auto& [name, e] : {std::pair{"before", eb}, std::pair{"after", ea}}) {
      os << name;
      for (int i = 0; i < 3; ++i) {
        std::snprintf(buf, sizeof buf, ",%.17g", e.s(i));
        os << buf;
      }
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          std::snprintf(buf, sizeof buf, ",%.17g", e.T(i, j));
          os << buf;
        }
      os << "\n";
    }
    return os.str();
  }
  json recb = json::array(), reca = json::array();
  for (const auto& r : rb) recb.push_back(to_json(r));
  for (const auto& r : ra) reca.push_back(to_json(r));
  return dump({{"loop", loop.name()},
               {"shots", o.shots},
               {"seed", o.seed},
               {"phase", to_json(h.R)},
               {"before", {{"state", to_json(before)}, {"estimate", to_json(eb)}, {"records", recb},
                           {"disk_axis", to_json(disk_axis(eb.T))}}},
               {"after", {{"state", to_json(after)}, {"estimate", to_json(ea)}, {"records", reca},
                          {"disk_axis", to_json(disk_axis(ea.T))}}},
               {"conjugation_residual", residual},
               {"tolerance", 5.0 / std::sqrt(static_cast<double>(o.shots))}});
}

std::string cmd_catalog(const Options& o) {
  require_json(o, "catalog");
  const std::vector<Loop> loops = catalog();
  std::vector<json> rows(loops.size());
  auto work = [&](std::size_t i) {
    const Loop& loop = loops[i];
    json row = {{"loop", loop.name()}};
    try {
      const LiftabilityReport rep = check_liftable(loop, o.tol());
      row["liftable"] = rep.liftable;
      row["zeros"] = rep.zeros.times;
      if (rep.liftable) {
        const HolonomyResult h = geometric_phase(loop, o.steps, std::nullopt, o.tol());
        row["axis"] = to_json(h.axis_angle.axis);
        row["angle"] = h.axis_angle.angle;
        row["Omega1"] = h.omega1;
        row["Omega2"] = h.omega2;
        row["rotation"] = to_json(h.R);
      } else {
        row["offending_times"] = rep.offending_times();
      }
    } catch (const Error& e) {
      row["error"] = e.what();
    }
    rows[i] = row;
  };
  const int jobs = std::max(1, o.jobs);
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < loops.size(); i += jobs) work(i);
    });
  }
  for (auto& th : pool) th.join();
  json names = json::array();
  for (const auto& b : builtin_info()) {
    names.push_back({{"name", b.name}, {"params", b.params}, {"defaults", b.defaults},
                     {"description", b.description}});
  }
  return dump({{"builtins", names}, {"loops", rows}});
}

void add_common(CLI::App* sub, Options& o, bool needs_loop = true) {
  if (needs_loop) {
    sub->add_option("--loop", o.loop, "builtin loop, e.g. gamma_a or circle(0.3,0.4)");
    sub->add_option("--loop-file", o.loop_file, "loop-spec JSON file");
  }
  sub->add_option("--steps", o.steps, "RK4 steps per segment")->check(CLI::Range(16, 100000000));
  sub->add_option("--tol-zero", o.tol_zero, "center-visit tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--tol-kink", o.tol_kink, "tangent mismatch tolerance (rad)")->check(CLI::PositiveNumber);
  sub->add_option("--tol-speed", o.tol_speed, "minimum speed at center visits")->check(CLI::PositiveNumber);
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", o.out, "write data to PATH instead of stdout");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-Abelian geometric phase of spin-1 loops in the Bloch ball", "gphase"};
  app.require_subcommand(1);
  Options o;
  auto* liftable = app.add_subcommand("liftable", "check whether a loop has a horizontal lift");
  auto* zeros = app.add_subcommand("zeros", "list the times the loop visits the center");
  auto* phase = app.add_subcommand("phase", "geometric phase and its decomposition");
  auto* solid = app.add_subcommand("solid-angle", "generalized solid angle");
  auto* lift = app.add_subcommand("lift", "horizontal lift as a sampled state path");
  auto* rp2 = app.add_subcommand("rp2-check", "compare the phase with the vertical displacement of alpha");
  auto* oracle = app.add_subcommand("oracle", "compare the lift with the brute-force greedy lift");
  auto* tomo = app.add_subcommand("tomography", "simulate tomography before and after the loop");
  auto* cat = app.add_subcommand("catalog", "list builtin loops with their phases");
  for (auto* s : {liftable, zeros, phase, solid, lift, rp2, oracle, tomo}) add_common(s, o);
  add_common(cat, o, false);
  for (auto* s : {lift, oracle, tomo}) s->add_option("--psi", o.psi, "initial state: 6 numbers, re/im of z_-1, z_0, z_+1");
  lift->add_option("--stride", o.stride, "write every N-th sample")->check(CLI::PositiveNumber);
  oracle->add_option("--grid", o.grid, "fiber grid size")->check(CLI::Range(4, 100000));
  tomo->add_option("--seed", o.seed, "generator seed");
  tomo->add_option("--shots", o.shots, "shots per basis")->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  cat->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1, 256));

  std::vector<const char*> argv{"gphase"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    int code = kExitOk;
    std::string text, diag;
    if (liftable->parsed()) text = cmd_liftable(o, code, diag);
    else if (zeros->parsed()) text = cmd_zeros(o);
    else if (phase->parsed()) text = cmd_phase(o);
    else if (solid->parsed()) text = cmd_solid_angle(o);
    else if (lift->parsed()) text = cmd_lift(o);
    else if (rp2->parsed()) text = cmd_rp2_check(o);
    else if (oracle->parsed()) text = cmd_oracle(o);
    else if (tomo->parsed()) text = cmd_tomography(o);
    else text = cmd_catalog(o);
    emit(o, out, text);
    if (code == kExitNotLiftable) err << "error: " << diag << "\n";
    return code;
  } catch (const NotLiftableError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotLiftable;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace gphase::cli
