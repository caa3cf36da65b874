#ifndef GPHASE_CLI_SERIALIZE_HPP
#define GPHASE_CLI_SERIALIZE_HPP

#include <ostream>
#include <string>

#include <json.hpp>

#include "gphase/holonomy.hpp"
#include "gphase/lens.hpp"
#include "gphase/tomography.hpp"

namespace gphase::cli {

nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const Rotation& r);  // 9 floats, row-major
nlohmann::json to_json(const Mat3& m);      // 9 floats, row-major
nlohmann::json to_json(const SpinState& s); // 6 floats: re/im of z_-1, z_0, z_+1
nlohmann::json to_json(const TangentLine& l);  // 6 floats: v then u
nlohmann::json to_json(const HolonomyResult& h);
nlohmann::json to_json(const LiftabilityReport& r);
nlohmann::json to_json(const MeasurementRecord& r);
nlohmann::json to_json(const MomentEstimate& m);

/// Throws InputError naming `what` on a malformed array.
SpinState state_from_json(const nlohmann::json& j, const std::string& what = "state");

/// Header: t, re/im of the three amplitudes, s_x, s_y, s_z, chord r, v, u.
void write_lift_csv(std::ostream& os, const LiftPath& path, int stride = 1);

/// Fixed layout with full double precision, so equal inputs give equal bytes.
std::string dump(const nlohmann::json& j);

}  // namespace gphase::cli

#endif  // GPHASE_CLI_SERIALIZE_HPP
