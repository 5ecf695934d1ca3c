#include "csg/bigfloat.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace csg {
namespace {

mpfr_prec_t joint_prec(const mpfr_t a, const mpfr_t b) {
  return std::max(mpfr_get_prec(a), mpfr_get_prec(b));
}

} // namespace

std::string BigFloat::str(int digits) const {
  char fmt[32];
  std::snprintf(fmt, sizeof fmt, "%%.%dRg", digits);
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, fmt, v_);
  return buf;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  BigFloat r(static_cast<int>(joint_prec(a.v_, b.v_)));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigFloat operator-(const BigFloat& a, const BigFloat& b) {
  BigFloat r(static_cast<int>(joint_prec(a.v_, b.v_)));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat r(static_cast<int>(joint_prec(a.v_, b.v_)));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  BigFloat r(static_cast<int>(joint_prec(a.v_, b.v_)));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigFloat operator-(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat sqrt(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat abs(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_abs(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat log(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_log(r.v_, a.v_, MPFR_RNDN);
  return r;
}

} // namespace csg
