#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace csg {

/// Largest supported causet size: past sets are single machine words.
inline constexpr int kMaxElements = 64;

/// A naturally labelled finite causal set.
///
/// Element i stores its strict past as a bit mask over [0, i). Natural
/// labelling (j in past(i) implies j < i), transitivity and
/// irreflexivity are invariants; from_past_rows validates them, every
/// other constructor maintains them.
class LabelledCauset {
public:
  /// The one-element root of the growth tree.
  static LabelledCauset singleton();
  /// Total order 0 < 1 < ... < n-1.
  static LabelledCauset chain(int n);
  /// n mutually unrelated elements.
  static LabelledCauset antichain(int n);
  /// Validates natural labelling, transitivity and irreflexivity.
  static LabelledCauset from_past_rows(std::vector<std::uint64_t> rows);

  int size() const noexcept { return static_cast<int>(past_.size()); }
  std::uint64_t past(int i) const { return past_[static_cast<std::size_t>(i)]; }
  bool precedes(int i, int j) const {
    return (past_[static_cast<std::size_t>(j)] >> i) & 1u;
  }
  std::span<const std::uint64_t> rows() const noexcept { return past_; }

  /// Restriction to the first m elements (the level-m ancestor node).
  LabelledCauset prefix(int m) const;

  bool operator==(const LabelledCauset&) const = default;
  /// Lexicographic order on the past-row encoding; this is the
  /// deterministic node order used everywhere.
  std::strong_ordering operator<=>(const LabelledCauset& o) const {
    return std::lexicographical_compare_three_way(
        past_.begin(), past_.end(), o.past_.begin(), o.past_.end());
  }

private:
  friend LabelledCauset extend(const LabelledCauset&, std::uint64_t);
  explicit LabelledCauset(std::vector<std::uint64_t> rows)
      : past_(std::move(rows)) {}
  std::vector<std::uint64_t> past_;
};

/// An order ideal (downward-closed subset): the precursor set of a
/// transition, with its cardinality and number of maximal elements.
struct Ideal {
  std::uint64_t members = 0;
  int varpi = 0;         // |members|
  int maximal_count = 0; // elements of members maximal within members

  bool operator==(const Ideal&) const = default;
};

/// Computes (varpi, m) for a member mask, validating downward closure.
Ideal ideal_stats(const LabelledCauset& c, std::uint64_t members);

/// All order ideals of c, sorted ascending by member mask. The empty
/// ideal (gregarious) is first, the full set (timid) last.
std::vector<Ideal> order_ideals(const LabelledCauset& c);

/// Adds one maximal element whose past is exactly the given ideal.
/// The existing elements are untouched (internal temporality).
LabelledCauset extend(const LabelledCauset& c, const Ideal& p);
LabelledCauset extend(const LabelledCauset& c, std::uint64_t members);

/// One child per order ideal, in ideal order.
std::vector<LabelledCauset> children(const LabelledCauset& c);

/// All m-element order ideals (the m-element partial stems).
std::vector<Ideal> partial_stems(const LabelledCauset& c, int m);

/// True iff element 0 lies below every other element. For a naturally
/// labelled causet this is the only way to have a unique minimum.
bool is_originary(const LabelledCauset& c);

/// Induced sub-causet on the given element subset, relabelled by
/// ascending original index (which preserves natural labelling).
LabelledCauset restrict_to(const LabelledCauset& c, std::uint64_t subset);

/// Relabels c by a listing order: order[p] is the original element that
/// receives label p. Throws ContractError unless the order is a linear
/// extension (so the result is again naturally labelled).
LabelledCauset relabel(const LabelledCauset& c, std::span<const int> order);

/// The past links of element i: maximal elements of past(i), i.e. the
/// covering relations below i.
std::uint64_t links_below(const LabelledCauset& c, int i);

} // namespace csg
