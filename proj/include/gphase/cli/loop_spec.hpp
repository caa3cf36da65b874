#ifndef GPHASE_CLI_LOOP_SPEC_HPP
#define GPHASE_CLI_LOOP_SPEC_HPP

#include <string>

#include <json.hpp>

#include "gphase/loopgeom.hpp"

namespace gphase::cli {

inline constexpr int kLoopSpecVersion = 1;

/// Parse a loop-spec document. Errors name the offending JSON path.
Loop parse_loop_spec(const std::string& text);
Loop parse_loop_json(const nlohmann::json& doc);

/// `NAME` or `NAME(a,b,...)` or `NAME(key=a,...)` for builtin loops.
Loop parse_loop_arg(const std::string& arg);

/// Samples `loop` at n + 1 uniform times as a closed "samples" document.
nlohmann::json sampled_spec(const Loop& loop, int n);

}  // namespace gphase::cli

#endif  // GPHASE_CLI_LOOP_SPEC_HPP
