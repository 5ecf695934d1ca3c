#include "csg/canonical.hpp"

#include <algorithm>
#include <bit>
#include <utility>

namespace csg {
namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

// Backtracking search for the lexicographically minimal relabelled
// encoding over all linear extensions. At each position only
// candidates realizing the minimal next row can start an optimal
// continuation, so everything else is cut. Tied candidates that relate
// identically to the rest of the causet (equal past and future masks)
// are exchangeable by an automorphism; one representative suffices.
class MinimalLabelling {
public:
  explicit MinimalLabelling(const LabelledCauset& c)
      : c_(c), n_(c.size()), up_(static_cast<std::size_t>(n_), 0),
        new_label_(static_cast<std::size_t>(n_), -1),
        current_(static_cast<std::size_t>(n_), 0),
        cand_(static_cast<std::size_t>(n_)) {
    for (int j = 0; j < n_; ++j)
      for (std::uint64_t below = c.past(j); below;) {
        int i = std::countr_zero(below);
        below &= below - 1;
        up_[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
      }
  }

  std::vector<std::uint64_t> run() {
    descend(0, 0, true);
    return best_;
  }

private:
  // tied_with_best: current_[0..pos) equals best_[0..pos). Branches
  // that fall behind a tied best are pruned; branches ahead of it can
  // only improve and are settled by the comparison at the leaf.
  void descend(int pos, std::uint64_t chosen, bool tied_with_best) {
    if (pos == n_) {
      if (!have_best_ || current_ < best_) {
        best_ = current_;
        ++generation_;
      }
      have_best_ = true;
      return;
    }

    std::uint64_t min_row = ~std::uint64_t{0};
    auto& cands = cand_[static_cast<std::size_t>(pos)];
    cands.clear();
    for (int e = 0; e < n_; ++e) {
      std::uint64_t bit = std::uint64_t{1} << e;
      if ((chosen & bit) || (c_.past(e) & ~chosen)) continue;
      std::uint64_t row = 0;
      for (std::uint64_t below = c_.past(e); below;) {
        int i = std::countr_zero(below);
        below &= below - 1;
        row |= std::uint64_t{1} << new_label_[static_cast<std::size_t>(i)];
      }
      if (row < min_row) {
        min_row = row;
        cands.clear();
      }
      if (row == min_row) cands.push_back(e);
    }

    bool tied = false;
    if (have_best_ && tied_with_best) {
      if (min_row > best_[static_cast<std::size_t>(pos)]) return;
      tied = min_row == best_[static_cast<std::size_t>(pos)];
    }
    current_[static_cast<std::size_t>(pos)] = min_row;

    std::uint64_t exchangeable = 0;
    for (std::size_t idx = 0; idx < cands.size(); ++idx) {
      const int e = cands[idx];
      if ((exchangeable >> e) & 1u) continue;
      for (std::size_t j = idx + 1; j < cands.size(); ++j) {
        const int f = cands[j];
        if (c_.past(e) == c_.past(f) &&
            up_[static_cast<std::size_t>(e)] == up_[static_cast<std::size_t>(f)])
          exchangeable |= std::uint64_t{1} << f;
      }
      new_label_[static_cast<std::size_t>(e)] = pos;
      const std::uint64_t gen_before = generation_;
      descend(pos + 1, chosen | (std::uint64_t{1} << e), tied);
      new_label_[static_cast<std::size_t>(e)] = -1;
      // A best found below this node shares our whole prefix.
      if (generation_ != gen_before) tied = true;
    }
  }

  const LabelledCauset& c_;
  int n_;
  std::vector<std::uint64_t> up_;
  std::vector<int> new_label_;
  std::vector<std::uint64_t> current_;
  std::vector<std::uint64_t> best_;
  bool have_best_ = false;
  std::uint64_t generation_ = 0;
  std::vector<std::vector<int>> cand_;
};

} // namespace

std::string CanonicalKey::hex() const {
  std::string out;
  out.reserve(rows_.size() * 16);
  for (std::uint64_t row : rows_)
    for (int shift = 60; shift >= 0; shift -= 4)
      out.push_back(kHexDigits[(row >> shift) & 0xF]);
  return out;
}

std::size_t hash_value(const CanonicalKey& k) noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (std::uint64_t row : k.rows()) {
    h ^= static_cast<std::size_t>(row);
    h *= 0x100000001b3ull;
  }
  return h;
}

CanonicalKey canonical_form(const LabelledCauset& c) {
  MinimalLabelling search(c);
  return CanonicalKey(search.run());
}

} // namespace csg
