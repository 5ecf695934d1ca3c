#pragma once

#include <complex>

#include <nlohmann/json_fwd.hpp>

#include "csg/couplings.hpp"
#include "csg/measure.hpp"

namespace csg {

/// Running state of the originary-event product
///   prod_{i >= 1} (1 - qhat_i),
/// qhat_i the gregarious amplitude at stage i. `formal` marks values
/// computed for dynamics whose measure does not (or is not known to)
/// extend: the number is well-defined but is not the measure of a
/// covariant event there.
struct ProductState {
  int n_terms = 0;
  std::complex<double> value{1.0, 0.0};
  bool converged = false;
  double last_delta = 0.0;
  bool formal = false;
};

/// qhat_n = t_0 / lambda(n, 0): the amplitude that the new element at
/// stage n is unrelated to everything before it.
std::complex<double> gregarious_amplitude(const Couplings& c, int n);

/// Partial product for the originary ("single initial element") event.
/// Convergence is declared after 8 consecutive increments below tol,
/// or when the gregarious amplitudes decay geometrically.
ProductState originary_measure(const Couplings& c, int n_max = 512,
                               double tol = 1e-12);

/// Measure of the complementary stem event, 1 - originary value.
std::complex<double> stem_event_measure(const Couplings& c, int n_max = 512,
                                        double tol = 1e-12);

/// Finite-level oracle: the summed measure of the level-n nodes that
/// are originary so far. Exceeds the originary measure (gregarious
/// births after stage n can still spoil originarity) and decreases
/// towards it. Exposed for cross-checks, not as an event measure.
std::complex<double> originary_truncation(MeasureEngine& engine, int n);

/// Preclusion: a converged measure below tol means the covariant event
/// does not happen.
bool precluded(const ProductState& state, double tol);

/// {"value_re":..,"value_im":..,"n_terms":..,"converged":..,
///  "formal":..,"precluded":..}
nlohmann::json orig_json(const ProductState& state, double tol);

} // namespace csg
