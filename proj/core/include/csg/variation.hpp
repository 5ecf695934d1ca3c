#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "csg/couplings.hpp"

namespace csg {

/// Numeric precision for convergence sweeps. Auto picks Extended for
/// infinite-support families (their level quantities grow like c^n and
/// overrun double's exponent range) and Double otherwise.
struct PrecisionOpts {
  enum class Mode { Auto, Double, Extended };
  Mode mode = Mode::Auto;
  int mantissa_bits = 256;
};

/// Closed-form antichain defect
///   zeta_a(n) = sum_k C(n,k)|t_k| / |lambda(n,0)| - 1.
double zeta_a(const Couplings& c, int n);

/// Closed-form chain defect
///   zeta_c(n) = (sum_{w=1..n} |lambda(w,1)| + |t_0|) / |lambda(n,0)| - 1.
double zeta_c(const Couplings& c, int n);

/// Percolation chain defect in terms of q alone:
///   |1-q| sum_{w=1..n} |q|^(n-w) + |q|^n - 1.
double cp_zeta_c(std::complex<double> q, int n);

/// zeta_a(n), zeta_c(n) for n = 1..n_max plus running sums U_a, U_c
/// and log values for tail fitting (NaN where zeta is zero or not
/// finite). Index i holds level n = i + 1.
struct ZetaSweep {
  std::vector<double> zeta_a, zeta_c;
  std::vector<double> u_a, u_c;
  std::vector<double> log_zeta_a, log_zeta_c;
  /// Defects at or below this are round-off at the working precision.
  double noise_floor = 0.0;
};

ZetaSweep sweep_zeta(const Couplings& c, int n_max, PrecisionOpts precision = {});

/// Running partial sums (U_a, U_c); DegenerateDynamics aborts with the
/// failing stage.
std::pair<std::vector<double>, std::vector<double>>
partial_sums(const Couplings& c, int n_max, PrecisionOpts precision = {});

/// Least-squares fit of zeta_n ~ coeff * n^(-exponent) in log-log
/// space over levels [n_lo, n_hi] of a sweep. points counts the usable
/// (finite, positive) samples; fewer than 8 leaves the fit NaN.
struct TailFit {
  double exponent;
  double log_coeff;
  int points = 0;
};
TailFit fit_power_law(const std::vector<double>& log_zeta, int n_lo, int n_hi);

enum class ExtensionStatus { Extends, DoesNotExtend, Inconclusive };
enum class VerdictBasis {
  AnalyticRealPositive, // all couplings on the positive real axis
  AnalyticClaim3,       // finitely many non-zero couplings
  AnalyticClaim4,       // countable colinear tail
  AnalyticCP,           // percolation family
  NumericDiagnostic,    // power-law tail fit with margin
};

const char* to_string(ExtensionStatus s);
const char* to_string(VerdictBasis b);

struct VerdictEvidence {
  int window_lo = 0, window_hi = 0;
  double fitted_x_a, fitted_x_c; // NaN when unavailable
  double u_a_tail, u_c_tail;     // partial sums over the window
  std::string note;
};

/// Extension classification of the complex measure: whether it is of
/// bounded variation and therefore extends to the full sigma-algebra.
struct Verdict {
  ExtensionStatus status = ExtensionStatus::Inconclusive;
  VerdictBasis basis = VerdictBasis::NumericDiagnostic;
  VerdictEvidence evidence;
  bool rescaled_t0 = false;
};

struct ClassifyOpts {
  int window_lo = 64;
  int window_hi = 4096;
  double margin = 0.1;        // on the fitted tail exponent
  bool force_numeric = false; // skip analytic rules (diagnostic runs)
  bool with_evidence = true;  // attach a numeric sweep to analytic verdicts
  PrecisionOpts precision{};
};

Verdict classify(const Couplings& c, const ClassifyOpts& opts = {});

nlohmann::json verdict_json(const Verdict& v);

} // namespace csg
