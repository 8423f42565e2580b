#pragma once

#include <iosfwd>
#include <string>

#include "stathyp/coarse.hpp"

namespace stathyp {

/// Plain-text projection profiles, one record per line:
///
///   top <d_S>
///   nonannular <label> <d_V>
///   annular <label> <l_x> <l_y> <d_C>
///   annular-log <label> <log 1/l_x> <log 1/l_y> <log d_C>
///
/// Blank lines and lines starting with '#' are ignored. Throws ParameterError
/// with the offending line number on malformed input.
ProjectionProfile read_profile(std::istream& in);
ProjectionProfile read_profile_file(const std::string& path);

/// Writes the log-scale form for annular entries so values round-trip exactly.
void write_profile(std::ostream& out, const ProjectionProfile& profile);

}  // namespace stathyp
