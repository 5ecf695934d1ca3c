#pragma once

#include <cstdint>

#include <gmpxx.h>

namespace csg {

/// True iff C(n, k) is representable in an unsigned 64-bit integer.
bool binomial_fits_u64(int n, int k);

/// Exact C(n, k). Throws ContractError for negative arguments and
/// Error on overflow past 2^64-1 (use binomial_exact beyond that).
std::uint64_t binomial_u64(int n, int k);

/// Exact C(n, k) as an arbitrary-precision integer.
mpz_class binomial_exact(int n, int k);

/// C(n, k) correctly rounded to double. Exact integers are used up to
/// the u64 range, with promotion to big integers beyond it, so the
/// result is always the double nearest the true value.
double binomial_double(int n, int k);

} // namespace csg
