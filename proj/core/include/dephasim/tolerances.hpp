#pragma once

// Centralized numerical tolerances. All equality/validity checks in the
// library go through these constants so the whole build can be tightened or
// relaxed in one place.
namespace dephasim::tol {

inline constexpr double equality = 1e-10;     // entrywise agreement between representations
inline constexpr double hermiticity = 1e-12;  // max |A - A†| entry
inline constexpr double trace = 1e-12;        // |tr(rho) - 1| for normalized states
inline constexpr double norm = 1e-12;         // | ||psi|| - 1 | for normalized vectors
inline constexpr double psd = -1e-10;         // smallest admissible eigenvalue

}  // namespace dephasim::tol
