#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace csg {

enum class CouplingFamily {
  ExplicitList,
  SingleK,
  FiniteSet,
  Percolation,
  TailColinear,
};

enum class TailRule { Geometric, PowerOfFour };

/// One non-zero coupling t_k = s * exp(i*phi), k >= 1, s > 0.
struct FiniteTerm {
  int k = 1;
  double s = 1.0;
  double phi = 0.0;
};

/// Phases within this relative tolerance of the positive real axis are
/// treated as real for colinearity tests (guards against sin(2*pi)
/// style representation noise; genuinely complex couplings sit far
/// above it).
inline constexpr double kColinearEps = 1e-12;

/// A sequence of complex coupling constants t_0, t_1, ... defining a
/// complex sequential growth dynamics.
///
/// Any non-zero t_0 is accepted and canonically rescaled to t_0 = 1 at
/// construction (amplitudes are invariant under a global rescale, so
/// nothing is lost); the original t_0 is kept for reporting.
class Couplings {
public:
  /// Finite list with an implicit zero tail.
  static Couplings explicit_list(std::vector<std::complex<double>> t);
  /// t_0 = 1 and a single non-zero t_k = s * exp(i*phi).
  static Couplings single_k(int k, double s, double phi);
  /// t_0 = 1 plus non-zero terms at strictly increasing k >= 1.
  static Couplings finite_set(std::vector<FiniteTerm> terms);
  /// Transitive percolation t_k = t^k with t = (1-q)/q, q != 0.
  static Couplings percolation(std::complex<double> q);
  /// Explicit head t_0..t_k0 followed by the colinear tail
  /// t_k = s_k * exp(i*phi0) with s_k = s^k (geometric) or 2^(2k).
  static Couplings tail_colinear(std::vector<std::complex<double>> head,
                                 TailRule rule, double s, double phi0);

  CouplingFamily family() const noexcept { return family_; }

  /// Normalized coupling value; t(0) == 1, zero beyond finite support.
  std::complex<double> t(int k) const;

  bool has_finite_support() const noexcept {
    return family_ != CouplingFamily::Percolation &&
           family_ != CouplingFamily::TailColinear;
  }
  /// Largest k with t(k) != 0 for finite families.
  int support_back() const;
  /// Sorted k >= 1 with t(k) != 0 for finite families.
  std::vector<int> support() const;

  /// Colinearity on the positive real axis after normalization; the
  /// case in which every zeta vanishes identically.
  bool all_real_positive() const;

  std::complex<double> raw_t0() const noexcept { return raw_t0_; }
  bool rescaled() const noexcept { return raw_t0_ != std::complex<double>(1.0, 0.0); }

  // Family-specific parameters (ContractError when queried on the
  // wrong family).
  std::complex<double> percolation_q() const;
  std::complex<double> percolation_t() const;
  TailRule tail_rule() const;
  double tail_s() const;
  double tail_phi0() const;
  int tail_head_end() const; // k0: last explicit head index
  const std::vector<FiniteTerm>& terms() const;

  std::string describe() const;

  static Couplings from_json(const nlohmann::json& spec);
  nlohmann::json to_json() const;

private:
  Couplings() = default;

  CouplingFamily family_ = CouplingFamily::ExplicitList;
  std::complex<double> raw_t0_{1.0, 0.0};
  std::complex<double> scale_{1.0, 0.0}; // multiplies raw values: 1/raw_t0

  std::vector<std::complex<double>> list_;   // ExplicitList (raw values)
  std::vector<FiniteTerm> terms_;            // SingleK / FiniteSet
  std::complex<double> q_{0.0, 0.0};         // Percolation
  std::complex<double> t_{0.0, 0.0};         //   (1-q)/q
  std::vector<std::complex<double>> head_;   // TailColinear (raw values)
  TailRule rule_ = TailRule::Geometric;
  double s_ = 0.0;
  double phi0_ = 0.0;
};

/// lambda(a, b) = sum_{k=b}^{a} C(a-b, k-b) t_k, the building block of
/// every transition amplitude. Requires 0 <= b <= a.
std::complex<double> lambda(const Couplings& c, int a, int b);

/// Transition amplitude lambda(varpi, m)/lambda(n, 0) for a stage-n
/// transition whose precursor set has varpi elements, m of them
/// maximal. Throws DegenerateDynamics when lambda(n, 0) = 0.
std::complex<double> amplitude(const Couplings& c, int n, int varpi, int m);

/// Precomputed lambda(a, b) for 0 <= b <= a <= n; lets level sweeps sum
/// amplitudes with table lookups.
class LambdaTable {
public:
  static LambdaTable build(const Couplings& c, int n);

  int max_level() const noexcept { return n_; }
  std::complex<double> value(int a, int b) const {
    return values_[index(a, b)];
  }
  double abs(int a, int b) const { return abs_[index(a, b)]; }

  /// lambda(n, 0) checked non-zero; throws DegenerateDynamics.
  std::complex<double> stage_denominator(int n) const;
  std::complex<double> amplitude(int n, int varpi, int m) const;

private:
  std::size_t index(int a, int b) const;
  int n_ = 0;
  std::vector<std::complex<double>> values_;
  std::vector<double> abs_;
};

/// Binomial inversion t_n = sum_k (-1)^(n-k) C(n,k) / q_k.
std::vector<std::complex<double>>
t_from_q(std::span<const std::complex<double>> q);

/// q_n = 1 / lambda(n, 0); throws DegenerateDynamics when undefined.
std::complex<double> q_from_t(const Couplings& c, int n);

/// Classical transition probability
///   P = sum_{k=0}^{m} (-1)^k C(m,k) q_n / q_(varpi-k)
/// for a real positive coupling sequence q (q_j != 0 required).
double classical_prob(std::span<const double> q, int n, int varpi, int m);

} // namespace csg
