#ifndef GPHASE_CATALOG_HPP
#define GPHASE_CATALOG_HPP

#include <map>
#include <string>
#include <vector>

#include "gphase/loopgeom.hpp"

namespace gphase {

struct BuiltinInfo {
  std::string name;
  std::vector<std::string> params;  // positional order
  std::vector<double> defaults;
  std::string description;
};

/// Every builtin loop family with its parameters.
const std::vector<BuiltinInfo>& builtin_info();

/// Build a builtin loop. Missing parameters take their defaults; unknown names
/// or parameters raise InputError listing what is available.
Loop make_builtin(const std::string& name, const std::map<std::string, double>& params = {});

/// The default catalog instances, in a fixed order.
std::vector<Loop> catalog();

}  // namespace gphase

#endif  // GPHASE_CATALOG_HPP
