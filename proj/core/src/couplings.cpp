#include "csg/couplings.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "csg/binomial.hpp"
#include "csg/complex_literal.hpp"
#include "csg/errors.hpp"

namespace csg {
namespace {

using cplx = std::complex<double>;

constexpr double kDegenerateFloor = 1e-300;

cplx polar_term(double s, double phi) { return {s * std::cos(phi), s * std::sin(phi)}; }

// Exact small-integer power; keeps 0^0 = 1 and avoids the
// exp(k log z) route, whose 0-base behaviour is toolchain lore.
cplx ipow(cplx base, int exponent) {
  cplx result{1.0, 0.0};
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

bool is_real_positive(cplx z) {
  double mag = std::abs(z);
  if (mag == 0.0) return true; // zero couplings do not break colinearity
  return std::abs(z.imag()) <= kColinearEps * mag && z.real() > 0.0;
}

void check_t0(cplx t0) {
  if (t0 == cplx(0.0, 0.0))
    throw ConfigError("t_0 must be non-zero (it sets the overall scale)");
}

} // namespace

Couplings Couplings::explicit_list(std::vector<cplx> t) {
  if (t.empty()) throw ConfigError("explicit coupling list must not be empty");
  check_t0(t.front());
  Couplings c;
  c.family_ = CouplingFamily::ExplicitList;
  c.raw_t0_ = t.front();
  c.scale_ = 1.0 / t.front();
  c.list_ = std::move(t);
  return c;
}

Couplings Couplings::single_k(int k, double s, double phi) {
  return finite_set({FiniteTerm{k, s, phi}});
}

Couplings Couplings::finite_set(std::vector<FiniteTerm> terms) {
  if (terms.empty())
    throw ConfigError("finite_set needs at least one (k, s, phi) term");
  int prev = 0;
  for (const FiniteTerm& t : terms) {
    if (t.k < 1)
      throw ConfigError("finite_set term k must be >= 1 (t_0 is implicit)");
    if (t.k <= prev)
      throw ConfigError("finite_set term indices must be strictly increasing");
    if (!(t.s > 0.0))
      throw ConfigError("finite_set term magnitude s must be positive");
    prev = t.k;
  }
  Couplings c;
  c.family_ = terms.size() == 1 ? CouplingFamily::SingleK
                                : CouplingFamily::FiniteSet;
  c.terms_ = std::move(terms);
  return c;
}

Couplings Couplings::percolation(cplx q) {
  if (q == cplx(0.0, 0.0))
    throw ConfigError("percolation requires q != 0");
  Couplings c;
  c.family_ = CouplingFamily::Percolation;
  c.q_ = q;
  c.t_ = (1.0 - q) / q;
  return c;
}

Couplings Couplings::tail_colinear(std::vector<cplx> head, TailRule rule,
                                   double s, double phi0) {
  if (head.empty())
    throw ConfigError("tail_colinear head must contain at least t_0");
  check_t0(head.front());
  if (rule == TailRule::Geometric && !(s > 0.0))
    throw ConfigError("tail_colinear geometric rule requires s > 0");
  Couplings c;
  c.family_ = CouplingFamily::TailColinear;
  c.raw_t0_ = head.front();
  c.scale_ = 1.0 / head.front();
  c.head_ = std::move(head);
  c.rule_ = rule;
  c.s_ = s;
  c.phi0_ = phi0;
  return c;
}

cplx Couplings::t(int k) const {
  if (k < 0) throw ContractError("coupling index must be non-negative");
  switch (family_) {
  case CouplingFamily::ExplicitList:
    if (k >= static_cast<int>(list_.size())) return {0.0, 0.0};
    return scale_ * list_[static_cast<std::size_t>(k)];
  case CouplingFamily::SingleK:
  case CouplingFamily::FiniteSet: {
    if (k == 0) return {1.0, 0.0};
    for (const FiniteTerm& t : terms_)
      if (t.k == k) return polar_term(t.s, t.phi);
    return {0.0, 0.0};
  }
  case CouplingFamily::Percolation:
    return ipow(t_, k);
  case CouplingFamily::TailColinear: {
    if (k < static_cast<int>(head_.size()))
      return scale_ * head_[static_cast<std::size_t>(k)];
    double s_k = rule_ == TailRule::Geometric ? std::pow(s_, k)
                                              : std::exp2(2.0 * k);
    return scale_ * polar_term(s_k, phi0_);
  }
  }
  throw ContractError("unreachable coupling family");
}

int Couplings::support_back() const {
  switch (family_) {
  case CouplingFamily::ExplicitList: {
    int last = 0;
    for (int k = 0; k < static_cast<int>(list_.size()); ++k)
      if (list_[static_cast<std::size_t>(k)] != cplx(0.0, 0.0)) last = k;
    return last;
  }
  case CouplingFamily::SingleK:
  case CouplingFamily::FiniteSet:
    return terms_.back().k;
  default:
    throw ContractError("support_back: family has infinite support");
  }
}

std::vector<int> Couplings::support() const {
  std::vector<int> ks;
  switch (family_) {
  case CouplingFamily::ExplicitList:
    for (int k = 1; k < static_cast<int>(list_.size()); ++k)
      if (list_[static_cast<std::size_t>(k)] != cplx(0.0, 0.0)) ks.push_back(k);
    return ks;
  case CouplingFamily::SingleK:
  case CouplingFamily::FiniteSet:
    for (const FiniteTerm& t : terms_) ks.push_back(t.k);
    return ks;
  default:
    throw ContractError("support: family has infinite support");
  }
}

bool Couplings::all_real_positive() const {
  switch (family_) {
  case CouplingFamily::ExplicitList: {
    for (const cplx& raw : list_)
      if (!is_real_positive(scale_ * raw)) return false;
    return true;
  }
  case CouplingFamily::SingleK:
  case CouplingFamily::FiniteSet: {
    for (const FiniteTerm& t : terms_)
      if (!is_real_positive(polar_term(t.s, t.phi))) return false;
    return true;
  }
  case CouplingFamily::Percolation:
    return is_real_positive(t_);
  case CouplingFamily::TailColinear: {
    for (const cplx& raw : head_)
      if (!is_real_positive(scale_ * raw)) return false;
    return is_real_positive(scale_ * polar_term(1.0, phi0_));
  }
  }
  throw ContractError("unreachable coupling family");
}

std::complex<double> Couplings::percolation_q() const {
  if (family_ != CouplingFamily::Percolation)
    throw ContractError("percolation_q: not a percolation family");
  return q_;
}

std::complex<double> Couplings::percolation_t() const {
  if (family_ != CouplingFamily::Percolation)
    throw ContractError("percolation_t: not a percolation family");
  return t_;
}

TailRule Couplings::tail_rule() const {
  if (family_ != CouplingFamily::TailColinear)
    throw ContractError("tail_rule: not a tail_colinear family");
  return rule_;
}

double Couplings::tail_s() const {
  if (family_ != CouplingFamily::TailColinear)
    throw ContractError("tail_s: not a tail_colinear family");
  return s_;
}

double Couplings::tail_phi0() const {
  if (family_ != CouplingFamily::TailColinear)
    throw ContractError("tail_phi0: not a tail_colinear family");
  return phi0_;
}

int Couplings::tail_head_end() const {
  if (family_ != CouplingFamily::TailColinear)
    throw ContractError("tail_head_end: not a tail_colinear family");
  return static_cast<int>(head_.size()) - 1;
}

const std::vector<FiniteTerm>& Couplings::terms() const {
  if (family_ != CouplingFamily::SingleK &&
      family_ != CouplingFamily::FiniteSet)
    throw ContractError("terms: not a single_k/finite_set family");
  return terms_;
}

std::string Couplings::describe() const {
  switch (family_) {
  case CouplingFamily::ExplicitList: {
    std::string s = "explicit[";
    for (std::size_t i = 0; i < list_.size(); ++i) {
      if (i) s += ",";
      s += format_complex(list_[i]);
    }
    return s + "]";
  }
  case CouplingFamily::SingleK:
    return "single_k(k=" + std::to_string(terms_[0].k) +
           ",s=" + format_double(terms_[0].s) +
           ",phi=" + format_double(terms_[0].phi) + ")";
  case CouplingFamily::FiniteSet: {
    std::string s = "finite_set{";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) s += ",";
      s += "k=" + std::to_string(terms_[i].k);
    }
    return s + "}";
  }
  case CouplingFamily::Percolation:
    return "percolation(q=" + format_complex(q_) + ")";
  case CouplingFamily::TailColinear:
    return std::string("tail_colinear(") +
           (rule_ == TailRule::Geometric ? "geometric" : "power_of_four") +
           ",s=" + format_double(s_) + ",phi0=" + format_double(phi0_) + ")";
  }
  return "?";
}

std::complex<double> lambda(const Couplings& c, int a, int b) {
  if (b < 0 || a < b)
    throw ContractError("lambda requires 0 <= b <= a");
  int hi = a;
  if (c.has_finite_support()) hi = std::min(hi, c.support_back());
  cplx sum{0.0, 0.0};
  for (int k = b; k <= hi; ++k)
    sum += binomial_double(a - b, k - b) * c.t(k);
  return sum;
}

std::complex<double> amplitude(const Couplings& c, int n, int varpi, int m) {
  if (m < 0 || varpi < m || n < varpi)
    throw ContractError("amplitude requires 0 <= m <= varpi <= n");
  cplx denom = lambda(c, n, 0);
  if (std::abs(denom) < kDegenerateFloor) throw DegenerateDynamics(n);
  cplx amp = lambda(c, varpi, m) / denom;
  if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag()))
    throw InternalConsistencyError("amplitude is not finite");
  return amp;
}

std::size_t LambdaTable::index(int a, int b) const {
  if (b < 0 || a < b || a > n_)
    throw ContractError("lambda table lookup out of range");
  return static_cast<std::size_t>(a) * (static_cast<std::size_t>(a) + 1) / 2 +
         static_cast<std::size_t>(b);
}

LambdaTable LambdaTable::build(const Couplings& c, int n) {
  if (n < 0) throw ContractError("lambda table level must be >= 0");
  LambdaTable t;
  t.n_ = n;
  t.values_.reserve(static_cast<std::size_t>(n + 1) *
                    static_cast<std::size_t>(n + 2) / 2);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= a; ++b) t.values_.push_back(lambda(c, a, b));
  t.abs_.reserve(t.values_.size());
  for (const cplx& v : t.values_) t.abs_.push_back(std::abs(v));
  return t;
}

std::complex<double> LambdaTable::stage_denominator(int n) const {
  cplx denom = value(n, 0);
  if (std::abs(denom) < kDegenerateFloor) throw DegenerateDynamics(n);
  return denom;
}

std::complex<double> LambdaTable::amplitude(int n, int varpi, int m) const {
  return value(varpi, m) / stage_denominator(n);
}

std::vector<std::complex<double>>
t_from_q(std::span<const std::complex<double>> q) {
  std::vector<cplx> t;
  t.reserve(q.size());
  for (int n = 0; n < static_cast<int>(q.size()); ++n) {
    cplx sum{0.0, 0.0};
    for (int k = 0; k <= n; ++k) {
      const cplx qk = q[static_cast<std::size_t>(k)];
      if (std::abs(qk) < kDegenerateFloor) throw DegenerateDynamics(k);
      double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
      sum += sign * binomial_double(n, k) / qk;
    }
    t.push_back(sum);
  }
  return t;
}

std::complex<double> q_from_t(const Couplings& c, int n) {
  if (n < 0) throw ContractError("q_from_t: n must be non-negative");
  cplx lam = lambda(c, n, 0);
  if (std::abs(lam) < kDegenerateFloor) throw DegenerateDynamics(n);
  return 1.0 / lam;
}

double classical_prob(std::span<const double> q, int n, int varpi, int m) {
  if (m < 0 || varpi < m || n < varpi)
    throw ContractError("classical_prob requires 0 <= m <= varpi <= n");
  if (n >= static_cast<int>(q.size()))
    throw ContractError("classical_prob: q sequence too short");
  for (int j = 0; j <= n; ++j)
    if (std::abs(q[static_cast<std::size_t>(j)]) < kDegenerateFloor)
      throw DegenerateDynamics(j);
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * static_cast<double>(binomial_u64(m, k)) *
           q[static_cast<std::size_t>(n)] /
           q[static_cast<std::size_t>(varpi - k)];
  }
  return sum;
}

namespace {

std::vector<cplx> parse_complex_array(const nlohmann::json& arr,
                                      const char* what) {
  if (!arr.is_array() || arr.empty())
    throw ConfigError(std::string(what) +
                      " must be a non-empty array of complex literals");
  std::vector<cplx> out;
  for (const auto& v : arr) {
    if (!v.is_string())
      throw ConfigError(std::string(what) +
                        " entries must be complex literal strings");
    out.push_back(parse_complex(v.get<std::string>()));
  }
  return out;
}

void reject_unknown_fields(const nlohmann::json& spec,
                           std::initializer_list<const char*> allowed) {
  for (auto it = spec.begin(); it != spec.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known)
      throw ConfigError("unknown coupling field '" + it.key() + "'");
  }
}

} // namespace

Couplings Couplings::from_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("family"))
    throw ConfigError("coupling spec must be an object with a 'family' field");
  const std::string family = spec.at("family").get<std::string>();

  if (family == "percolation") {
    reject_unknown_fields(spec, {"family", "q"});
    if (!spec.contains("q"))
      throw ConfigError("percolation spec needs field q (complex literal)");
    return percolation(parse_complex(spec.at("q").get<std::string>()));
  }
  if (family == "explicit") {
    reject_unknown_fields(spec, {"family", "t"});
    if (!spec.contains("t"))
      throw ConfigError("explicit spec needs field t (array of literals)");
    return explicit_list(parse_complex_array(spec.at("t"), "t"));
  }
  if (family == "single_k") {
    reject_unknown_fields(spec, {"family", "k", "s", "phi"});
    if (!spec.contains("k") || !spec.contains("s") || !spec.contains("phi"))
      throw ConfigError("single_k spec needs fields k, s, phi");
    return single_k(spec.at("k").get<int>(), spec.at("s").get<double>(),
                    spec.at("phi").get<double>());
  }
  if (family == "finite_set") {
    reject_unknown_fields(spec, {"family", "terms"});
    if (!spec.contains("terms") || !spec.at("terms").is_array() ||
        spec.at("terms").empty())
      throw ConfigError("finite_set spec needs a non-empty 'terms' array");
    std::vector<FiniteTerm> terms;
    for (const auto& t : spec.at("terms")) {
      reject_unknown_fields(t, {"k", "s", "phi"});
      if (!t.contains("k") || !t.contains("s") || !t.contains("phi"))
        throw ConfigError("finite_set terms need fields k, s, phi");
      terms.push_back(FiniteTerm{t.at("k").get<int>(), t.at("s").get<double>(),
                                 t.at("phi").get<double>()});
    }
    return finite_set(std::move(terms));
  }
  if (family == "tail_colinear") {
    reject_unknown_fields(spec, {"family", "head", "rule", "s", "phi0"});
    if (!spec.contains("head") || !spec.contains("rule") ||
        !spec.contains("s") || !spec.contains("phi0"))
      throw ConfigError("tail_colinear spec needs fields head, rule, s, phi0");
    const std::string rule = spec.at("rule").get<std::string>();
    TailRule r;
    if (rule == "geometric")
      r = TailRule::Geometric;
    else if (rule == "power_of_four")
      r = TailRule::PowerOfFour;
    else
      throw ConfigError("tail_colinear rule must be 'geometric' or "
                        "'power_of_four'");
    return tail_colinear(parse_complex_array(spec.at("head"), "head"), r,
                         spec.at("s").get<double>(),
                         spec.at("phi0").get<double>());
  }
  throw ConfigError("unknown coupling family '" + family +
                    "' (expected percolation, explicit, single_k, "
                    "finite_set or tail_colinear)");
}

nlohmann::json Couplings::to_json() const {
  nlohmann::json j;
  switch (family_) {
  case CouplingFamily::ExplicitList: {
    j["family"] = "explicit";
    auto arr = nlohmann::json::array();
    for (const cplx& v : list_) arr.push_back(format_complex(v));
    j["t"] = std::move(arr);
    break;
  }
  case CouplingFamily::SingleK:
    j["family"] = "single_k";
    j["k"] = terms_[0].k;
    j["s"] = terms_[0].s;
    j["phi"] = terms_[0].phi;
    break;
  case CouplingFamily::FiniteSet: {
    j["family"] = "finite_set";
    auto arr = nlohmann::json::array();
    for (const FiniteTerm& t : terms_)
      arr.push_back({{"k", t.k}, {"s", t.s}, {"phi", t.phi}});
    j["terms"] = std::move(arr);
    break;
  }
  case CouplingFamily::Percolation:
    j["family"] = "percolation";
    j["q"] = format_complex(q_);
    break;
  case CouplingFamily::TailColinear: {
    j["family"] = "tail_colinear";
    auto arr = nlohmann::json::array();
    for (const cplx& v : head_) arr.push_back(format_complex(v));
    j["head"] = std::move(arr);
    j["rule"] = rule_ == TailRule::Geometric ? "geometric" : "power_of_four";
    j["s"] = s_;
    j["phi0"] = phi0_;
    break;
  }
  }
  return j;
}

} // namespace csg
