#include "csg/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <nlohmann/json.hpp>

#include "csg/accumulate.hpp"
#include "csg/bigfloat.hpp"
#include "csg/complex_literal.hpp"
#include "csg/errors.hpp"

namespace csg {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kZetaErrorFloor = -1e-9;

// --------------------------------------------------------------------
// Scalar adapters: the sweep below is generic over double and BigFloat.
// Extended precision buys the exponent range (level quantities scale
// like c^n) and headroom against cancellation; inputs are doubles, so
// up-conversion is lossless.

struct DoubleOps {
  using Real = double;
  double make(double v) const { return v; }
  // Ratio sums carry O(n * eps) round-off; defects below this are
  // numerically indistinguishable from colinearity.
  double noise_floor() const { return 1e-12; }
  static double to_double(double v) { return v; }
  static double abs_v(double v) { return std::abs(v); }
  static double sqrt_v(double v) { return std::sqrt(v); }
  static double log_v(double v) { return std::log(v); }
  static bool is_zero(double v) { return v == 0.0; }
};

struct BigOps {
  using Real = BigFloat;
  int bits = 256;
  BigFloat make(double v) const { return BigFloat(v, bits); }
  double noise_floor() const {
    return std::min(1e-12, std::ldexp(1.0, -(bits - 16)));
  }
  static double to_double(const BigFloat& v) { return v.to_double(); }
  static BigFloat abs_v(const BigFloat& v) { return abs(v); }
  static BigFloat sqrt_v(const BigFloat& v) { return sqrt(v); }
  static BigFloat log_v(const BigFloat& v) { return log(v); }
  static bool is_zero(const BigFloat& v) { return v.is_zero(); }
};

template <class R> struct Cx {
  R re, im;
};

template <class R> Cx<R> cx_axpy(const R& s, const Cx<R>& x, const Cx<R>& y) {
  return {s * x.re + y.re, s * x.im + y.im};
}

template <class Ops>
typename Ops::Real cx_abs(const Cx<typename Ops::Real>& z) {
  return Ops::sqrt_v(z.re * z.re + z.im * z.im);
}

template <class Ops>
Cx<typename Ops::Real> cx_make(const Ops& ops, std::complex<double> z) {
  return {ops.make(z.real()), ops.make(z.imag())};
}

// Incremental binomial row: C(n, k) for a fixed list of k, advanced
// one level at a time via C(n,k) = C(n-1,k) * n / (n-k).
template <class Ops> class BinomRow {
public:
  using R = typename Ops::Real;

  BinomRow(const Ops& ops, std::vector<int> ks) : ks_(std::move(ks)) {
    for (int k : ks_) vals_.push_back(ops.make(k == 0 ? 1.0 : 0.0));
  }

  void advance(const Ops& ops) {
    ++n_;
    for (std::size_t i = 0; i < ks_.size(); ++i) {
      const int k = ks_[i];
      if (k > n_) continue; // still zero
      if (k == n_) {
        vals_[i] = ops.make(1.0);
        continue;
      }
      vals_[i] = vals_[i] * ops.make(static_cast<double>(n_)) /
                 ops.make(static_cast<double>(n_ - k));
    }
  }

  const R& value(std::size_t i) const { return vals_[i]; }

private:
  std::vector<int> ks_;
  std::vector<R> vals_;
  int n_ = 0;
};

// --------------------------------------------------------------------
// One level of the closed-form sweep. Families with infinite support
// use their binomial-theorem closed forms (O(head) per level); finite
// families iterate their support.

struct SweepRow {
  double zeta_a, zeta_c;
  double log_zeta_a, log_zeta_c;
};

template <class Ops> class SweepEngine {
public:
  using R = typename Ops::Real;

  SweepEngine(const Couplings& c, Ops ops)
      : ops_(std::move(ops)), family_(c.family()), one_(ops_.make(1.0)),
        zero_(ops_.make(0.0)), running_c_(ops_.make(0.0)),
        pow_lam_abs_(ops_.make(1.0)), pow_lam_abs_prev_(ops_.make(1.0)),
        pow_row_(ops_.make(1.0)), abs_t_(ops_.make(0.0)),
        base_lam_abs_(ops_.make(0.0)), base_row_(ops_.make(0.0)),
        pow_base_(ops_.make(1.0)), pow_base_prev_(ops_.make(1.0)),
        base_(ops_.make(0.0)), sigma_(ops_.make(0.0)),
        tail_unit_{ops_.make(0.0), ops_.make(0.0)},
        abs_tail_unit_(ops_.make(0.0)) {
    switch (family_) {
    case CouplingFamily::Percolation: {
      const std::complex<double> t = c.percolation_t();
      abs_t_ = ops_.make(std::abs(t));
      base_lam_abs_ = ops_.make(std::abs(1.0 + t));
      base_row_ = one_ + abs_t_;
      break;
    }
    case CouplingFamily::TailColinear: {
      const int k0 = c.tail_head_end();
      const double sigma =
          c.tail_rule() == TailRule::Geometric ? c.tail_s() : 4.0;
      sigma_ = ops_.make(sigma);
      base_ = one_ + sigma_;
      std::vector<int> head_ks, shift_ks;
      for (int k = 0; k <= k0; ++k) {
        head_ks.push_back(k);
        head_ts_.push_back(cx_make(ops_, c.t(k)));
        head_abs_.push_back(ops_.make(std::abs(c.t(k))));
        sigma_pow_.push_back(ops_.make(std::pow(sigma, k)));
      }
      for (int j = 0; j + 1 <= k0; ++j) shift_ks.push_back(j);
      // Normalized tail value at k is tail_unit * sigma^k.
      const std::complex<double> unit =
          (1.0 / c.raw_t0()) *
          std::complex<double>(std::cos(c.tail_phi0()), std::sin(c.tail_phi0()));
      tail_unit_ = cx_make(ops_, unit);
      abs_tail_unit_ = ops_.make(std::abs(unit));
      rowA_.emplace(ops_, head_ks);
      rowB_.emplace(ops_, shift_ks);
      break;
    }
    default: { // finite support
      std::vector<int> ks{0};
      for (int k : c.support()) ks.push_back(k);
      std::vector<int> shift_ks;
      for (std::size_t i = 1; i < ks.size(); ++i)
        shift_ks.push_back(ks[i] - 1);
      for (int k : ks) {
        ts_.push_back(cx_make(ops_, c.t(k)));
        abs_ts_.push_back(ops_.make(std::abs(c.t(k))));
      }
      rowA_.emplace(ops_, ks);
      rowB_.emplace(ops_, shift_ks);
      break;
    }
    }
  }

  /// Produces levels n = 1, 2, ... in order.
  SweepRow next() {
    ++n_;
    switch (family_) {
    case CouplingFamily::Percolation: {
      pow_lam_abs_prev_ = pow_lam_abs_;
      pow_lam_abs_ = pow_lam_abs_ * base_lam_abs_;
      pow_row_ = pow_row_ * base_row_;
      running_c_ = running_c_ + abs_t_ * pow_lam_abs_prev_;
      return emit(pow_row_, pow_lam_abs_);
    }
    case CouplingFamily::TailColinear: {
      rowA_->advance(ops_);
      if (n_ >= 2) rowB_->advance(ops_);
      pow_base_prev_ = pow_base_;
      pow_base_ = pow_base_ * base_;

      Cx<R> lam0 = {zero_, zero_};
      R rowsum = zero_;
      R head_sigma = zero_;
      for (std::size_t i = 0; i < head_ts_.size(); ++i) {
        lam0 = cx_axpy(rowA_->value(i), head_ts_[i], lam0);
        rowsum = rowsum + rowA_->value(i) * head_abs_[i];
        head_sigma = head_sigma + rowA_->value(i) * sigma_pow_[i];
      }
      R tail = pow_base_ - head_sigma;
      if (tail < zero_) tail = zero_; // exact zero until n > k0
      lam0 = cx_axpy(tail, tail_unit_, lam0);
      rowsum = rowsum + abs_tail_unit_ * tail;

      Cx<R> lam1 = {zero_, zero_};
      R head_sigma_b = zero_;
      for (std::size_t j = 0; j + 1 < head_ts_.size(); ++j) {
        lam1 = cx_axpy(rowB_->value(j), head_ts_[j + 1], lam1);
        head_sigma_b = head_sigma_b + rowB_->value(j) * sigma_pow_[j];
      }
      R tail1 = pow_base_prev_ - head_sigma_b;
      if (tail1 < zero_) tail1 = zero_;
      tail1 = sigma_ * tail1;
      lam1 = cx_axpy(tail1, tail_unit_, lam1);

      running_c_ = running_c_ + cx_abs<Ops>(lam1);
      return emit(rowsum, cx_abs<Ops>(lam0));
    }
    default: {
      rowA_->advance(ops_);
      if (n_ >= 2) rowB_->advance(ops_);
      Cx<R> lam0 = {zero_, zero_};
      R rowsum = zero_;
      for (std::size_t i = 0; i < ts_.size(); ++i) {
        lam0 = cx_axpy(rowA_->value(i), ts_[i], lam0);
        rowsum = rowsum + rowA_->value(i) * abs_ts_[i];
      }
      Cx<R> lam1 = {zero_, zero_};
      for (std::size_t j = 0; j + 1 < ts_.size(); ++j)
        lam1 = cx_axpy(rowB_->value(j), ts_[j + 1], lam1);
      running_c_ = running_c_ + cx_abs<Ops>(lam1);
      return emit(rowsum, cx_abs<Ops>(lam0));
    }
    }
  }

  double noise_floor() const { return ops_.noise_floor(); }

private:
  SweepRow emit(const R& rowsum, const R& abs_lam) {
    if (Ops::is_zero(abs_lam)) throw DegenerateDynamics(n_);
    R za = rowsum / abs_lam - one_;
    R zc = (running_c_ + one_) / abs_lam - one_;
    return SweepRow{finish(za), finish(zc), log_of(za), log_of(zc)};
  }

  double finish(R& z) {
    const double v = Ops::to_double(z);
    if (v < 0.0) {
      if (v <= kZetaErrorFloor)
        throw InternalConsistencyError(
            "zeta = " + format_double(v) + " at level " + std::to_string(n_) +
            " below the error floor");
      z = zero_;
      return 0.0;
    }
    return v;
  }

  double log_of(const R& z) {
    if (Ops::is_zero(z) || !(z > zero_)) return kNaN;
    const double v = Ops::to_double(z);
    if (v <= ops_.noise_floor()) return kNaN; // round-off, not signal
    return Ops::to_double(Ops::log_v(z));
  }

  Ops ops_;
  CouplingFamily family_;
  int n_ = 0;
  R one_, zero_;
  R running_c_; // sum over stages of |lambda(w, 1)|

  // finite support
  std::vector<Cx<R>> ts_;
  std::vector<R> abs_ts_;
  std::optional<BinomRow<Ops>> rowA_; // C(n, k_i)
  std::optional<BinomRow<Ops>> rowB_; // C(n-1, k_i - 1)

  // percolation
  R pow_lam_abs_, pow_lam_abs_prev_, pow_row_, abs_t_;
  R base_lam_abs_, base_row_;

  // colinear tail
  std::vector<Cx<R>> head_ts_;
  std::vector<R> head_abs_;
  std::vector<R> sigma_pow_;
  R pow_base_, pow_base_prev_, base_, sigma_;
  Cx<R> tail_unit_;
  R abs_tail_unit_;
};

template <class Ops>
ZetaSweep run_sweep(const Couplings& c, int n_max, Ops ops) {
  SweepEngine<Ops> engine(c, std::move(ops));
  ZetaSweep out;
  out.noise_floor = engine.noise_floor();
  out.zeta_a.reserve(static_cast<std::size_t>(n_max));
  CompensatedSum ua, uc;
  for (int n = 1; n <= n_max; ++n) {
    SweepRow row = engine.next();
    out.zeta_a.push_back(row.zeta_a);
    out.zeta_c.push_back(row.zeta_c);
    out.log_zeta_a.push_back(row.log_zeta_a);
    out.log_zeta_c.push_back(row.log_zeta_c);
    ua.add(row.zeta_a);
    uc.add(row.zeta_c);
    out.u_a.push_back(ua.value());
    out.u_c.push_back(uc.value());
  }
  return out;
}

bool use_extended(const Couplings& c, PrecisionOpts p) {
  switch (p.mode) {
  case PrecisionOpts::Mode::Double:
    return false;
  case PrecisionOpts::Mode::Extended:
    return true;
  case PrecisionOpts::Mode::Auto:
    return !c.has_finite_support();
  }
  return false;
}

double clamp_zeta_point(double z) {
  if (z >= 0.0) return z;
  if (z <= kZetaErrorFloor)
    throw InternalConsistencyError("zeta = " + format_double(z) +
                                   " below the error floor");
  return 0.0;
}

} // namespace

ZetaSweep sweep_zeta(const Couplings& c, int n_max, PrecisionOpts precision) {
  if (n_max < 1) throw ConfigError("sweep requires n_max >= 1");
  if (precision.mantissa_bits < 24 || precision.mantissa_bits > 1 << 20)
    throw ConfigError("mantissa bits out of range");
  if (use_extended(c, precision))
    return run_sweep(c, n_max, BigOps{precision.mantissa_bits});
  return run_sweep(c, n_max, DoubleOps{});
}

std::pair<std::vector<double>, std::vector<double>>
partial_sums(const Couplings& c, int n_max, PrecisionOpts precision) {
  ZetaSweep s = sweep_zeta(c, n_max, precision);
  return {std::move(s.u_a), std::move(s.u_c)};
}

double zeta_a(const Couplings& c, int n) {
  if (n < 1) throw ConfigError("zeta_a requires n >= 1");
  return sweep_zeta(c, n).zeta_a.back();
}

double zeta_c(const Couplings& c, int n) {
  if (n < 1) throw ConfigError("zeta_c requires n >= 1");
  return sweep_zeta(c, n).zeta_c.back();
}

double cp_zeta_c(std::complex<double> q, int n) {
  if (q == std::complex<double>(0.0, 0.0))
    throw ConfigError("cp_zeta_c requires q != 0");
  if (n < 1) throw ConfigError("cp_zeta_c requires n >= 1");
  const double aq = std::abs(q);
  CompensatedSum geo; // sum_{w=1..n} |q|^(n-w) = sum_{j=0..n-1} |q|^j
  double p = 1.0;
  for (int j = 0; j < n; ++j) {
    geo.add(p);
    p *= aq;
  }
  // p is now |q|^n
  return clamp_zeta_point(std::abs(1.0 - q) * geo.value() + p - 1.0);
}

TailFit fit_power_law(const std::vector<double>& log_zeta, int n_lo,
                      int n_hi) {
  TailFit fit{kNaN, kNaN, 0};
  if (n_lo < 1 || n_hi < n_lo) throw ConfigError("bad fit window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  const int hi = std::min<int>(n_hi, static_cast<int>(log_zeta.size()));
  for (int n = n_lo; n <= hi; ++n) {
    const double y = log_zeta[static_cast<std::size_t>(n - 1)];
    if (!std::isfinite(y)) continue;
    const double x = std::log(static_cast<double>(n));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  fit.points = m;
  if (m < 8) return fit;
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) return fit;
  const double slope = (m * sxy - sx * sy) / denom;
  fit.exponent = -slope;
  fit.log_coeff = (sy - slope * sx) / m;
  return fit;
}

const char* to_string(ExtensionStatus s) {
  switch (s) {
  case ExtensionStatus::Extends:
    return "Extends";
  case ExtensionStatus::DoesNotExtend:
    return "DoesNotExtend";
  case ExtensionStatus::Inconclusive:
    return "Inconclusive";
  }
  return "?";
}

const char* to_string(VerdictBasis b) {
  switch (b) {
  case VerdictBasis::AnalyticRealPositive:
    return "AnalyticRealPositive";
  case VerdictBasis::AnalyticClaim3:
    return "AnalyticClaim3";
  case VerdictBasis::AnalyticClaim4:
    return "AnalyticClaim4";
  case VerdictBasis::AnalyticCP:
    return "AnalyticCP";
  case VerdictBasis::NumericDiagnostic:
    return "NumericDiagnostic";
  }
  return "?";
}

Verdict classify(const Couplings& c, const ClassifyOpts& opts) {
  if (opts.window_lo < 1 || opts.window_hi < opts.window_lo)
    throw ConfigError("classify window must satisfy 1 <= lo <= hi");
  if (!(opts.margin >= 0.0)) throw ConfigError("classify margin must be >= 0");

  Verdict v;
  v.rescaled_t0 = c.rescaled();
  v.evidence.window_lo = opts.window_lo;
  v.evidence.window_hi = opts.window_hi;
  v.evidence.fitted_x_a = kNaN;
  v.evidence.fitted_x_c = kNaN;
  v.evidence.u_a_tail = kNaN;
  v.evidence.u_c_tail = kNaN;

  bool analytic = false;
  if (!opts.force_numeric) {
    if (c.all_real_positive()) {
      v.status = ExtensionStatus::Extends;
      v.basis = VerdictBasis::AnalyticRealPositive;
      v.evidence.note = "all couplings colinear on the positive real axis; "
                        "zeta vanishes identically";
      analytic = true;
    } else {
      switch (c.family()) {
      case CouplingFamily::Percolation: {
        const std::complex<double> q = c.percolation_q();
        const bool unit_interval = std::abs(q.imag()) <= kColinearEps * std::abs(q) &&
                                   q.real() > 0.0 && q.real() <= 1.0;
        v.status = unit_interval ? ExtensionStatus::Extends
                                 : ExtensionStatus::DoesNotExtend;
        v.basis = VerdictBasis::AnalyticCP;
        v.evidence.note = unit_interval
                              ? "percolation with q in (0,1]"
                              : "percolation with q outside [0,1]: the chain "
                                "defect series diverges";
        analytic = true;
        break;
      }
      case CouplingFamily::TailColinear:
        v.status = ExtensionStatus::Extends;
        v.basis = VerdictBasis::AnalyticClaim4;
        v.evidence.note = c.tail_rule() == TailRule::Geometric
                              ? "colinear geometric tail dominates the head"
                              : "colinear power-of-four tail dominates the head";
        analytic = true;
        break;
      default: { // finite support
        const std::vector<int> ks = c.support();
        v.basis = VerdictBasis::AnalyticClaim3;
        analytic = true;
        if (ks.empty()) {
          // only t_0 is non-zero; colinear by construction
          v.status = ExtensionStatus::Extends;
          v.basis = VerdictBasis::AnalyticRealPositive;
          v.evidence.note = "only t_0 is non-zero";
        } else if (ks.size() == 1) {
          if (ks[0] > 1) {
            v.status = ExtensionStatus::Extends;
            v.evidence.note = "single non-real coupling at k = " +
                              std::to_string(ks[0]) + " > 1";
          } else {
            v.status = ExtensionStatus::DoesNotExtend;
            v.evidence.note = "single non-real coupling at k = 1: chain "
                              "defect falls off as 1/n";
          }
        } else {
          const int gap = ks[ks.size() - 1] - ks[ks.size() - 2];
          if (gap > 1) {
            v.status = ExtensionStatus::Extends;
            v.evidence.note = "leading coupling gap " + std::to_string(gap) +
                              " > 1";
          } else {
            v.status = ExtensionStatus::Inconclusive;
            v.evidence.note = "adjacent leading couplings (gap 1): "
                              "convergence cannot be settled analytically";
          }
        }
        break;
      }
      }
    }
  }

  const bool need_numeric = !analytic || opts.with_evidence;
  if (need_numeric) {
    try {
      const ZetaSweep sweep = sweep_zeta(c, opts.window_hi, opts.precision);
      const TailFit fa =
          fit_power_law(sweep.log_zeta_a, opts.window_lo, opts.window_hi);
      const TailFit fc =
          fit_power_law(sweep.log_zeta_c, opts.window_lo, opts.window_hi);
      v.evidence.fitted_x_a = fa.exponent;
      v.evidence.fitted_x_c = fc.exponent;
      CompensatedSum ua, uc;
      double zmax = 0.0;
      for (int n = opts.window_lo;
           n <= opts.window_hi && n <= static_cast<int>(sweep.zeta_a.size());
           ++n) {
        ua.add(sweep.zeta_a[static_cast<std::size_t>(n - 1)]);
        uc.add(sweep.zeta_c[static_cast<std::size_t>(n - 1)]);
        zmax = std::max(zmax, sweep.zeta_a[static_cast<std::size_t>(n - 1)]);
      }
      v.evidence.u_a_tail = ua.value();
      v.evidence.u_c_tail = uc.value();

      if (!analytic) {
        v.basis = VerdictBasis::NumericDiagnostic;
        if (zmax <= sweep.noise_floor) {
          v.status = ExtensionStatus::Extends;
          v.evidence.note = "zeta_a vanishes over the whole window";
        } else if (fa.points >= 8 && fa.exponent > 1.0 + opts.margin) {
          v.status = ExtensionStatus::Extends;
          v.evidence.note = "fitted zeta_a tail exponent above 1 + margin";
        } else if (fc.points >= 8 && fc.exponent < 1.0 - opts.margin) {
          v.status = ExtensionStatus::DoesNotExtend;
          v.evidence.note = "fitted zeta_c tail exponent below 1 - margin";
        } else {
          v.status = ExtensionStatus::Inconclusive;
          v.evidence.note = "fitted exponents inside the margin band";
        }
      }
    } catch (const DegenerateDynamics& e) {
      if (!analytic) throw;
      if (!v.evidence.note.empty()) v.evidence.note += "; ";
      v.evidence.note += std::string("numeric evidence unavailable: ") + e.what();
    }
  }
  return v;
}

nlohmann::json verdict_json(const Verdict& v) {
  return nlohmann::json{
      {"status", to_string(v.status)},
      {"basis", to_string(v.basis)},
      {"evidence",
       {{"n_window", {v.evidence.window_lo, v.evidence.window_hi}},
        {"fitted_x_a", v.evidence.fitted_x_a},
        {"fitted_x_c", v.evidence.fitted_x_c},
        {"U_a_tail", v.evidence.u_a_tail},
        {"U_c_tail", v.evidence.u_c_tail},
        {"note", v.evidence.note}}},
      {"rescaled_t0", v.rescaled_t0}};
}

} // namespace csg
