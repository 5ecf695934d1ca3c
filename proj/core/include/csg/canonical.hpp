#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "csg/causet.hpp"

namespace csg {

/// Canonical encoding of the unlabelled poset underlying a labelled
/// causet: keys compare equal iff the causets are order-isomorphic.
class CanonicalKey {
public:
  CanonicalKey() = default;
  explicit CanonicalKey(std::vector<std::uint64_t> rows)
      : rows_(std::move(rows)) {}

  const std::vector<std::uint64_t>& rows() const noexcept { return rows_; }
  int size() const noexcept { return static_cast<int>(rows_.size()); }

  /// Fixed-width hex serialization (16 digits per element row).
  std::string hex() const;

  bool operator==(const CanonicalKey&) const = default;
  auto operator<=>(const CanonicalKey&) const = default;

private:
  std::vector<std::uint64_t> rows_;
};

std::size_t hash_value(const CanonicalKey& k) noexcept;

/// Lexicographically minimal past-row encoding of c over all natural
/// relabellings (linear extensions). Exact: equal keys iff isomorphic.
CanonicalKey canonical_form(const LabelledCauset& c);

} // namespace csg

template <> struct std::hash<csg::CanonicalKey> {
  std::size_t operator()(const csg::CanonicalKey& k) const noexcept {
    return csg::hash_value(k);
  }
};
