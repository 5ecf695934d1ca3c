#include "csg/binomial.hpp"

#include <array>
#include <limits>
#include <mutex>
#include <vector>

#include "csg/errors.hpp"

namespace csg {
namespace {

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

void check_args(int n, int k) {
  if (n < 0 || k < 0)
    throw ContractError("binomial: negative argument");
}

// Pascal rows with saturation at u64 max. Row n is built once; n stays
// small in practice (enumeration caps, coupling supports), so a mutex
// around the cache is cheap.
class PascalCache {
public:
  std::uint64_t at(int n, int k) {
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<int>(rows_.size()) <= n) {
      const auto& prev = rows_.back();
      std::vector<std::uint64_t> row(prev.size() + 1, 1);
      for (std::size_t j = 1; j + 1 < row.size(); ++j) {
        std::uint64_t a = prev[j - 1], b = prev[j];
        row[j] = (a > kU64Max - b) ? kU64Max : a + b;
        if (a == kU64Max || b == kU64Max) row[j] = kU64Max;
      }
      rows_.push_back(std::move(row));
    }
    return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  }

private:
  std::mutex mu_;
  std::vector<std::vector<std::uint64_t>> rows_{{1}};
};

PascalCache& cache() {
  static PascalCache c;
  return c;
}

} // namespace

bool binomial_fits_u64(int n, int k) {
  check_args(n, k);
  if (k > n) return true; // value is 0
  return cache().at(n, k) != kU64Max;
}

std::uint64_t binomial_u64(int n, int k) {
  check_args(n, k);
  if (k > n) return 0;
  std::uint64_t v = cache().at(n, k);
  if (v == kU64Max)
    throw Error("binomial_u64: C(" + std::to_string(n) + "," +
                std::to_string(k) + ") exceeds 64-bit range");
  return v;
}

mpz_class binomial_exact(int n, int k) {
  check_args(n, k);
  if (k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

double binomial_double(int n, int k) {
  check_args(n, k);
  if (k > n) return 0.0;
  if (binomial_fits_u64(n, k))
    return static_cast<double>(cache().at(n, k));
  return binomial_exact(n, k).get_d();
}

} // namespace csg
