#pragma once

namespace csg {

inline constexpr const char* kVersion = "1.0.0";

/// Revision tag for the formula set (transition amplitudes, zeta closed
/// forms, classification rules). Bumped whenever a formula changes, so
/// published runs can be matched to the exact rules that produced them.
inline constexpr const char* kFormulaRevision = "r1";

/// Named, versioned generator backing the classical sampler.
inline constexpr const char* kSamplerRng = "philox4x32-10";

} // namespace csg
