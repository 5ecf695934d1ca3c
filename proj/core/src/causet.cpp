#include "csg/causet.hpp"

#include <bit>
#include <string>

#include "csg/errors.hpp"

namespace csg {
namespace {

std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

void check_size(int n) {
  if (n < 1)
    throw ConfigError("causet size must be at least 1 (growth starts at a "
                      "single element)");
  if (n > kMaxElements)
    throw ConfigError("causet size " + std::to_string(n) + " exceeds " +
                      std::to_string(kMaxElements) + " elements");
}

} // namespace

LabelledCauset LabelledCauset::singleton() { return LabelledCauset({0}); }

LabelledCauset LabelledCauset::chain(int n) {
  check_size(n);
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = low_mask(i);
  return LabelledCauset(std::move(rows));
}

LabelledCauset LabelledCauset::antichain(int n) {
  check_size(n);
  return LabelledCauset(std::vector<std::uint64_t>(static_cast<std::size_t>(n), 0));
}

LabelledCauset LabelledCauset::from_past_rows(std::vector<std::uint64_t> rows) {
  check_size(static_cast<int>(rows.size()));
  const int n = static_cast<int>(rows.size());
  for (int i = 0; i < n; ++i) {
    std::uint64_t p = rows[static_cast<std::size_t>(i)];
    if (p & ~low_mask(i))
      throw ConfigError("past of element " + std::to_string(i) +
                        " references labels >= " + std::to_string(i) +
                        " (labelling is not natural)");
    std::uint64_t closure = 0;
    for (std::uint64_t rest = p; rest;) {
      int j = std::countr_zero(rest);
      rest &= rest - 1;
      closure |= rows[static_cast<std::size_t>(j)];
    }
    if (closure & ~p)
      throw ConfigError("past of element " + std::to_string(i) +
                        " is not transitively closed");
  }
  return LabelledCauset(std::move(rows));
}

LabelledCauset LabelledCauset::prefix(int m) const {
  if (m < 1 || m > size())
    throw ContractError("prefix length out of range");
  return LabelledCauset(
      std::vector<std::uint64_t>(past_.begin(), past_.begin() + m));
}

Ideal ideal_stats(const LabelledCauset& c, std::uint64_t members) {
  if (members & ~low_mask(c.size()))
    throw ContractError("ideal members outside the causet");
  std::uint64_t below_any = 0;
  for (std::uint64_t rest = members; rest;) {
    int i = std::countr_zero(rest);
    rest &= rest - 1;
    if (c.past(i) & ~members)
      throw ContractError("precursor set is not downward closed");
    below_any |= c.past(i);
  }
  Ideal p;
  p.members = members;
  p.varpi = std::popcount(members);
  p.maximal_count = std::popcount(members & ~below_any);
  return p;
}

std::vector<Ideal> order_ideals(const LabelledCauset& c) {
  const int n = c.size();
  std::vector<Ideal> out;
  // Subset filter; fine at desk scale (n <= a machine word's worth of
  // growth levels, in practice n <= 12).
  for (std::uint64_t s = 0;; ++s) {
    bool closed = true;
    std::uint64_t below_any = 0;
    for (std::uint64_t rest = s; rest;) {
      int i = std::countr_zero(rest);
      rest &= rest - 1;
      if (c.past(i) & ~s) {
        closed = false;
        break;
      }
      below_any |= c.past(i);
    }
    if (closed)
      out.push_back(Ideal{s, std::popcount(s), std::popcount(s & ~below_any)});
    if (s == low_mask(n)) break;
  }
  return out;
}

LabelledCauset extend(const LabelledCauset& c, std::uint64_t members) {
  // Validates closure; the new element's past is exactly the ideal
  // (already transitively closed).
  ideal_stats(c, members);
  std::vector<std::uint64_t> rows(c.rows().begin(), c.rows().end());
  if (c.size() + 1 > kMaxElements)
    throw ConfigError("extend: causet would exceed " +
                      std::to_string(kMaxElements) + " elements");
  rows.push_back(members);
  return LabelledCauset(std::move(rows));
}

LabelledCauset extend(const LabelledCauset& c, const Ideal& p) {
  return extend(c, p.members);
}

std::vector<LabelledCauset> children(const LabelledCauset& c) {
  std::vector<LabelledCauset> out;
  for (const Ideal& p : order_ideals(c)) out.push_back(extend(c, p.members));
  return out;
}

std::vector<Ideal> partial_stems(const LabelledCauset& c, int m) {
  if (m < 0 || m > c.size())
    throw ContractError("partial_stems: size out of range");
  std::vector<Ideal> out;
  for (const Ideal& p : order_ideals(c))
    if (p.varpi == m) out.push_back(p);
  return out;
}

bool is_originary(const LabelledCauset& c) {
  for (int i = 1; i < c.size(); ++i)
    if (!c.precedes(0, i)) return false;
  return true;
}

LabelledCauset restrict_to(const LabelledCauset& c, std::uint64_t subset) {
  if (subset & ~low_mask(c.size()))
    throw ContractError("restrict_to: subset outside the causet");
  if (!subset) throw ContractError("restrict_to: empty subset");
  std::vector<int> new_label(static_cast<std::size_t>(c.size()), -1);
  int next = 0;
  for (std::uint64_t rest = subset; rest;) {
    int i = std::countr_zero(rest);
    rest &= rest - 1;
    new_label[static_cast<std::size_t>(i)] = next++;
  }
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(next), 0);
  for (std::uint64_t rest = subset; rest;) {
    int i = std::countr_zero(rest);
    rest &= rest - 1;
    std::uint64_t row = 0;
    for (std::uint64_t below = c.past(i) & subset; below;) {
      int j = std::countr_zero(below);
      below &= below - 1;
      row |= std::uint64_t{1} << new_label[static_cast<std::size_t>(j)];
    }
    rows[static_cast<std::size_t>(new_label[static_cast<std::size_t>(i)])] = row;
  }
  return LabelledCauset::from_past_rows(std::move(rows));
}

LabelledCauset relabel(const LabelledCauset& c, std::span<const int> order) {
  const int n = c.size();
  if (static_cast<int>(order.size()) != n)
    throw ContractError("relabel: order length mismatch");
  std::vector<int> new_label(static_cast<std::size_t>(n), -1);
  for (int p = 0; p < n; ++p) {
    int e = order[static_cast<std::size_t>(p)];
    if (e < 0 || e >= n || new_label[static_cast<std::size_t>(e)] != -1)
      throw ContractError("relabel: order is not a permutation");
    new_label[static_cast<std::size_t>(e)] = p;
  }
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(n), 0);
  for (int e = 0; e < n; ++e) {
    int p = new_label[static_cast<std::size_t>(e)];
    std::uint64_t row = 0;
    for (std::uint64_t below = c.past(e); below;) {
      int j = std::countr_zero(below);
      below &= below - 1;
      int q = new_label[static_cast<std::size_t>(j)];
      if (q > p)
        throw ContractError("relabel: order is not a linear extension");
      row |= std::uint64_t{1} << q;
    }
    rows[static_cast<std::size_t>(p)] = row;
  }
  return LabelledCauset::from_past_rows(std::move(rows));
}

std::uint64_t links_below(const LabelledCauset& c, int i) {
  std::uint64_t below_any = 0;
  for (std::uint64_t rest = c.past(i); rest;) {
    int j = std::countr_zero(rest);
    rest &= rest - 1;
    below_any |= c.past(j);
  }
  return c.past(i) & ~below_any;
}

} // namespace csg
