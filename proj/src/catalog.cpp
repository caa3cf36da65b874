#include "gphase/catalog.hpp"

#include <cmath>
#include <cstdio>

#include "gphase/rotations.hpp"

namespace gphase {

namespace {

// gamma = A(t) n(t) from the derivatives of both factors.
LoopPoint product(double a, double da, double dda, const Vec3& n, const Vec3& dn, const Vec3& ddn) {
  return {a * n, da * n + a * dn, dda * n + 2.0 * da * dn + a * ddn};
}

// A lobe leaving and re-entering the center: amplitude amp*sin(pi s) along the
// great-circle direction from n1 towards n2, for s in [0, 1].
struct Lobe {
  Vec3 n1, w;
  double omega;
  double amp;

  Lobe(const Vec3& a, const Vec3& b, double amplitude) : amp(amplitude) {
    n1 = a.normalized();
    const Vec3 bn = b.normalized();
    omega = std::atan2(n1.cross(bn).norm(), n1.dot(bn));
    w = (bn - n1.dot(bn) * n1).normalized();
  }

  // Derivatives with respect to s.
  LoopPoint at(double s) const {
    const double c = std::cos(omega * s), sn = std::sin(omega * s);
    const Vec3 n = c * n1 + sn * w;
    const Vec3 dn = omega * (-sn * n1 + c * w);
    const Vec3 ddn = -omega * omega * n;
    const double a = amp * std::sin(kPi * s);
    const double da = amp * kPi * std::cos(kPi * s);
    const double dda = -amp * kPi * kPi * std::sin(kPi * s);
    return product(a, da, dda, n, dn, ddn);
  }
};

// Piece of a loop that runs a lobe over s = s0 + rate*(t - t0).
Loop::Piece lobe_piece(const Lobe& lobe, double t0, double t1, double s_at_t0, double rate) {
  return {t0, t1, [lobe, t0, s_at_t0, rate](double t) {
            LoopPoint p = lobe.at(s_at_t0 + rate * (t - t0));
            p.vel *= rate;
            p.acc *= rate * rate;
            return p;
          }};
}

LoopPoint gamma_a_point(double t, double winding) {
  const double tau = 2.0 * kPi;
  const double phi = tau * winding * t, dphi = tau * winding;
  const double a = std::sin(tau * t), da = tau * std::cos(tau * t), dda = -tau * tau * a;
  const Vec3 n(0.5 * std::cos(phi), 0.5 * std::sin(phi), std::sqrt(3.0) / 2.0);
  const Vec3 dn(-0.5 * dphi * std::sin(phi), 0.5 * dphi * std::cos(phi), 0.0);
  const Vec3 ddn(-0.5 * dphi * dphi * std::cos(phi), -0.5 * dphi * dphi * std::sin(phi), 0.0);
  return product(a, da, dda, n, dn, ddn);
}

double winding_param(const std::map<std::string, double>& p) {
  const double w = p.at("winding");
  if (w == 0.0 || w != std::round(w)) throw InputError("winding must be a nonzero integer");
  return w;
}

Loop make_gamma_a(const std::map<std::string, double>& p, const std::string& name) {
  const double w = winding_param(p);
  return Loop(LoopKind::Analytic, {{0.0, 1.0, [w](double t) { return gamma_a_point(t, w); }}}, name);
}

Loop make_gamma_b(const std::map<std::string, double>& p, const std::string& name) {
  const double w = winding_param(p);
  const Mat3 q = rotation_z(kPi / 2).matrix();
  return Loop(LoopKind::Analytic,
              {{0.0, 1.0, [w, q](double t) {
                  const LoopPoint a = gamma_a_point(t, w);
                  return LoopPoint{q * a.pos, q * a.vel, q * a.acc};
                }}},
              name);
}

Loop make_gamma_c(const std::string& name) {
  const Vec3 o = Vec3::Zero();
  return make_piecewise_loop({{LinePiece{o, 0.5 * Vec3::UnitZ()}, 1.0},
                              {ArcPiece{o, Vec3::UnitX(), 0.5 * Vec3::UnitZ(), -kPi / 2}, 1.0},
                              {ArcPiece{o, Vec3::UnitZ(), 0.5 * Vec3::UnitY(), -kPi / 2}, 1.0},
                              {LinePiece{0.5 * Vec3::UnitX(), o}, 1.0}},
                             name);
}

// Out along -x, quarter arc -x -> y in the equator, quarter arc y -> z, back in from z.
Loop make_gamma_d(const std::string& name) {
  const Vec3 o = Vec3::Zero();
  return make_piecewise_loop({{LinePiece{o, -0.5 * Vec3::UnitX()}, 1.0},
                              {ArcPiece{o, Vec3::UnitZ(), -0.5 * Vec3::UnitX(), -kPi / 2}, 1.0},
                              {ArcPiece{o, Vec3::UnitX(), 0.5 * Vec3::UnitY(), kPi / 2}, 1.0},
                              {LinePiece{0.5 * Vec3::UnitZ(), o}, 1.0}},
                             name);
}

Loop make_circle(double rho, double h, const std::string& name) {
  if (!(rho >= 0.0) || !(rho * rho + h * h <= 1.0 + 1e-12)) {
    throw InputError("circle needs rho >= 0 and rho^2 + h^2 <= 1");
  }
  const double tau = 2.0 * kPi;
  return Loop(LoopKind::Analytic,
              {{0.0, 1.0, [rho, h, tau](double t) {
                  const double c = std::cos(tau * t), s = std::sin(tau * t);
                  return LoopPoint{Vec3(rho * c, rho * s, h), Vec3(-rho * tau * s, rho * tau * c, 0.0),
                                   Vec3(-rho * tau * tau * c, -rho * tau * tau * s, 0.0)};
                }}},
              name);
}

Loop make_fig3b(const std::string& name) {
  // r = 0.8 sin(pi t) along a direction turning from x towards m; the
  // tangents at t = 0 and t = 1 are not parallel, so alpha is open.
  const Vec3 m(0.0, std::cos(kPi / 6), std::sin(kPi / 6));
  const Lobe lobe(Vec3::UnitX(), m, 0.8);
  return Loop(LoopKind::Analytic, {lobe_piece(lobe, 0.0, 1.0, 0.0, 1.0)}, name);
}

Loop make_fig3c(const std::string& name) {
  // Two lobes through the center, the second leaving along a different line
  // than the first arrives on. Parameter starts mid-way through lobe A.
  const Lobe a(Vec3::UnitX(), Vec3::UnitY(), 0.6);
  const Lobe b(Vec3::UnitZ(), Vec3(0.0, 1.0, 1.0), 0.6);
  return Loop(LoopKind::Analytic,
              {lobe_piece(a, 0.0, 0.25, 0.5, 2.0), lobe_piece(b, 0.25, 0.75, 0.0, 2.0),
               lobe_piece(a, 0.75, 1.0, 0.0, 2.0)},
              name);
}

std::string label(const std::string& name, const std::vector<double>& args) {
  std::string s = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", args[i]);
    s += (i ? "," : "") + std::string(buf);
  }
  return s + ")";
}

}  // namespace

const std::vector<BuiltinInfo>& builtin_info() {
  static const std::vector<BuiltinInfo> info = {
      {"gamma_a", {"winding"}, {1.0}, "sin(2 pi t)(cos(2 pi w t)/2, sin(2 pi w t)/2, sqrt(3)/2)"},
      {"gamma_b", {"winding"}, {1.0}, "gamma_a rotated by pi/2 about z"},
      {"gamma_c", {}, {}, "center -> z/2 -> y/2 -> x/2 -> center, quarter durations"},
      {"gamma_d", {}, {}, "center -> -x/2 -> y/2 -> z/2 -> center, quarter durations"},
      {"circle", {"rho", "h"}, {0.5, 0.5}, "(rho cos 2 pi t, rho sin 2 pi t, h)"},
      {"cap", {"theta0", "radius"}, {kPi / 3, 0.5}, "latitude circle at polar angle theta0 on a sphere of given radius"},
      {"fig3b", {}, {}, "single lobe through the center with non-parallel end tangents"},
      {"fig3c", {}, {}, "two lobes meeting at the center with a corner (not liftable)"},
      {"point", {"x", "y", "z"}, {0.0, 0.0, 0.5}, "constant loop"},
  };
  return info;
}

Loop make_builtin(const std::string& name, const std::map<std::string, double>& params) {
  const BuiltinInfo* info = nullptr;
  for (const auto& b : builtin_info()) {
    if (b.name == name) info = &b;
  }
  if (!info) {
    std::string known;
    for (const auto& b : builtin_info()) known += (known.empty() ? "" : ", ") + b.name;
    throw InputError("unknown builtin loop '" + name + "'; available: " + known);
  }
  std::map<std::string, double> p;
  for (std::size_t i = 0; i < info->params.size(); ++i) p[info->params[i]] = info->defaults[i];
  for (const auto& [k, v] : params) {
    if (!p.count(k)) throw InputError("builtin '" + name + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw InputError("builtin parameter '" + k + "' must be finite");
    p[k] = v;
  }
  std::vector<double> args;
  for (const auto& k : info->params) args.push_back(p[k]);
  const std::string lbl = args.empty() ? name : label(name, args);

  if (name == "gamma_a") return make_gamma_a(p, lbl);
  if (name == "gamma_b") return make_gamma_b(p, lbl);
  if (name == "gamma_c") return make_gamma_c(lbl);
  if (name == "gamma_d") return make_gamma_d(lbl);
  if (name == "circle") return make_circle(p["rho"], p["h"], lbl);
  if (name == "cap") {
    const double th = p["theta0"], rad = p["radius"];
    if (!(rad > 0.0 && rad <= 1.0)) throw InputError("cap radius must lie in (0, 1]");
    return make_circle(rad * std::sin(th), rad * std::cos(th), lbl);
  }
  if (name == "fig3b") return make_fig3b(lbl);
  if (name == "fig3c") return make_fig3c(lbl);
  const Vec3 x(p["x"], p["y"], p["z"]);
  return Loop(LoopKind::Analytic, {{0.0, 1.0, [x](double) { return LoopPoint{x, Vec3::Zero(), Vec3::Zero()}; }}},
              lbl);
}

std::vector<Loop> catalog() {
  std::vector<Loop> out;
  for (const char* n : {"gamma_a", "gamma_b", "gamma_c", "gamma_d", "circle", "cap", "fig3b", "fig3c"}) {
    out.push_back(make_builtin(n));
  }
  return out;
}

}  // namespace gphase
