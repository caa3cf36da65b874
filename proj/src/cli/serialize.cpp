#include "gphase/cli/serialize.hpp"

#include <cstdio>

namespace gphase::cli {

using nlohmann::json;

json to_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

json to_json(const Mat3& m) {
  json a = json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a.push_back(m(i, j));
  return a;
}

json to_json(const Rotation& r) { return to_json(r.matrix()); }

json to_json(const SpinState& s) {
  json a = json::array();
  for (int m = 0; m < 3; ++m) {
    a.push_back(s[m].real());
    a.push_back(s[m].imag());
  }
  return a;
}

json to_json(const TangentLine& l) {
  return json::array({l.v(0), l.v(1), l.v(2), l.u(0), l.u(1), l.u(2)});
}

json to_json(const HolonomyResult& h) {
  json factors = json::array();
  for (const auto& f : h.segment_factors) factors.push_back(to_json(f));
  return {{"rotation", to_json(h.R)},
          {"axis", to_json(h.axis_angle.axis)},
          {"angle", h.axis_angle.angle},
          {"segment_factors", factors},
          {"zero_times", h.zero_times},
          {"alpha0", to_json(h.alpha0)},
          {"alpha1", to_json(h.alpha1)},
          {"k", to_json(h.k)},
          {"Omega1", h.omega1},
          {"Omega2", h.omega2},
          {"Omega2_signed", h.omega2_signed},
          {"transfer_angle", h.transfer_angle}};
}

json to_json(const LiftabilityReport& r) {
  return {{"liftable", r.liftable},
          {"zeros", r.zeros.times},
          {"start_at_center", r.zeros.start_at_center},
          {"end_at_center", r.zeros.end_at_center},
          {"kink_times", r.kink_times},
          {"stall_times", r.stall_times}};
}

json to_json(const MeasurementRecord& r) {
  return {{"basis", to_json(r.basis)},
          {"axis", to_json(r.basis * Vec3::UnitZ())},
          {"shots", r.shots},
          {"counts", {r.counts[0], r.counts[1], r.counts[2]}},
          {"seed", r.seed},
          {"stream", r.stream}};
}

json to_json(const MomentEstimate& m) {
  return {{"s", to_json(m.s)}, {"T", to_json(m.T)}, {"clipped", m.clipped}, {"raw_norm", m.raw_norm}};
}

SpinState state_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 6) {
    throw InputError(what + ": expected 6 numbers (re/im of z_-1, z_0, z_+1)");
  }
  CVec3 a;
  for (int m = 0; m < 3; ++m) {
    if (!j[2 * m].is_number() || !j[2 * m + 1].is_number()) {
      throw InputError(what + ": entry " + std::to_string(2 * m) + " is not a number");
    }
    a(m) = cplx(j[2 * m].get<double>(), j[2 * m + 1].get<double>());
  }
  return SpinState(a);
}

void write_lift_csv(std::ostream& os, const LiftPath& path, int stride) {
  os << "t,re_zm,im_zm,re_z0,im_z0,re_zp,im_zp,s_x,s_y,s_z,r,v_x,v_y,v_z,u_x,u_y,u_z\n";
  char buf[64];
  auto put = [&](double x, bool last = false) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf << (last ? '\n' : ',');
  };
  const std::size_t n = path.states.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (stride > 1 && k % stride != 0 && k + 1 != n) continue;
    const SpinState& st = path.states[k];
    const CVec3 z = st.normalized();
    const Vec3 s = bloch_vector(st);
    const Chord& c = path.chords[k];
    put(path.t[k]);
    for (int m = 0; m < 3; ++m) {
      put(z(m).real());
      put(z(m).imag());
    }
    for (int i = 0; i < 3; ++i) put(s(i));
    put(c.r);
    for (int i = 0; i < 3; ++i) put(c.v(i));
    for (int i = 0; i < 3; ++i) put(c.u(i), i == 2);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace gphase::cli
