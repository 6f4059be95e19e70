#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "varcomp/model.hpp"

namespace varcomp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Parses "ar1:RHO", "expdecay:A" or "dense:PATH". ExpDecay coordinates are
/// read from `coords_path`; an empty path leaves them unset.
KernelSpec parse_kernel(const std::string& text, const std::string& coords_path);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Results go to `out` unless an output file is given;
/// the configuration echo and diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace varcomp::cli
