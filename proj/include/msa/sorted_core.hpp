#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "msa/element.hpp"

namespace msa {

using SortIndex = std::size_t;
using ElemIndex = std::uint32_t;
using SortSet = std::set<SortIndex>;

inline constexpr ElemIndex kUnmapped = std::numeric_limits<ElemIndex>::max();

// Per-sort element tables, indexed [sort][element].
using SortedTable = std::vector<std::vector<ElemIndex>>;

// Mixed-radix numbering of tuples; the first digit is the most significant,
// so increasing codes enumerate tuples lexicographically.
class MixedRadix {
 public:
  MixedRadix() = default;
  explicit MixedRadix(std::vector<std::size_t> radices);

  std::size_t digits() const noexcept { return radices_.size(); }
  std::size_t radix(std::size_t k) const { return radices_[k]; }
  std::size_t total() const noexcept { return total_; }

  std::size_t encode(std::span<const ElemIndex> digits) const;
  void decode(std::size_t code, std::span<ElemIndex> out) const;
  std::vector<ElemIndex> decode(std::size_t code) const;

 private:
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

// An S-sorted family of finite sets. Each carrier is kept sorted and
// duplicate free; elements are addressed by their position.
class SortedSet {
 public:
  SortedSet() = default;
  // Carriers are sorted; duplicates raise invalid_argument.
  SortedSet(std::vector<std::string> sorts,
            std::vector<std::vector<Element>> carriers);

  static SortedSet empty(std::vector<std::string> sorts);
  // The final sorted set: {⋆} at every sort.
  static SortedSet final(std::vector<std::string> sorts);

  const std::vector<std::string>& sorts() const noexcept { return sorts_; }
  std::size_t sort_count() const noexcept { return sorts_.size(); }
  std::optional<SortIndex> sort_index(std::string_view name) const;

  const std::vector<Element>& carrier(SortIndex s) const {
    return carriers_[s];
  }
  std::size_t size(SortIndex s) const { return carriers_[s].size(); }
  std::size_t total_size() const;
  std::optional<ElemIndex> find(SortIndex s, const Element& e) const;

  friend bool operator==(const SortedSet&, const SortedSet&) = default;

 private:
  std::vector<std::string> sorts_;
  std::vector<std::vector<Element>> carriers_;
};

// A sort-preserving map between sorted sets.
class SortedMapping {
 public:
  SortedMapping() = default;
  // Every element must be mapped inside the target carrier of its sort.
  SortedMapping(SortedSet source, SortedSet target, SortedTable tables);

  static SortedMapping identity(const SortedSet& a);

  const SortedSet& source() const noexcept { return source_; }
  const SortedSet& target() const noexcept { return target_; }
  const SortedTable& tables() const noexcept { return tables_; }
  const std::vector<ElemIndex>& table(SortIndex s) const { return tables_[s]; }
  ElemIndex operator()(SortIndex s, ElemIndex x) const {
    return tables_[s][x];
  }

  bool is_injective() const;
  bool is_surjective() const;

  friend bool operator==(const SortedMapping&, const SortedMapping&) = default;

 private:
  SortedSet source_;
  SortedSet target_;
  SortedTable tables_;
};

// g ∘ f; raises source_mismatch unless f.target() == g.source().
SortedMapping compose(const SortedMapping& g, const SortedMapping& f);

// A sortwise equivalence relation, stored as normalized block labels: blocks
// are numbered in order of their least element.
class SortedEquivalence {
 public:
  SortedEquivalence() = default;
  SortedEquivalence(SortedSet base, SortedTable labels);

  static SortedEquivalence from_blocks(
      SortedSet base, const std::vector<std::vector<std::vector<Element>>>& blocks);
  static SortedEquivalence discrete(SortedSet base);
  static SortedEquivalence total(SortedSet base);

  const SortedSet& base() const noexcept { return base_; }
  ElemIndex block_of(SortIndex s, ElemIndex x) const { return labels_[s][x]; }
  std::size_t block_count(SortIndex s) const { return counts_[s]; }
  bool related(SortIndex s, ElemIndex x, ElemIndex y) const {
    return labels_[s][x] == labels_[s][y];
  }
  std::vector<std::vector<ElemIndex>> blocks(SortIndex s) const;
  const SortedTable& labels() const noexcept { return labels_; }

  // this ⊆ other, as relations.
  bool refines(const SortedEquivalence& other) const;

  friend bool operator==(const SortedEquivalence& a,
                         const SortedEquivalence& b) {
    return a.base_ == b.base_ && a.labels_ == b.labels_;
  }

 private:
  SortedSet base_;
  SortedTable labels_;
  std::vector<std::size_t> counts_;
};

struct IndexedFamily {
  std::vector<std::string> sorts;
  std::vector<std::string> index;
  std::vector<SortedSet> members;
};

struct ProductSet {
  SortedSet set;
  std::vector<SortedMapping> projections;
  // Digits are the member positions, in index order.
  std::vector<MixedRadix> layout;
};

struct CoproductSet {
  SortedSet set;
  std::vector<SortedMapping> injections;
  // For each sort and coproduct element: (member, element in member).
  std::vector<std::vector<std::pair<std::size_t, ElemIndex>>> origin;
};

struct EqualizerSet {
  SortedSet set;
  SortedMapping embedding;
};

struct QuotientSet {
  SortedSet set;
  SortedMapping projection;
};

SortSet support(const SortedSet& a);

ProductSet product(const IndexedFamily& family);
CoproductSet coproduct(const IndexedFamily& family);
EqualizerSet equalizer(const SortedMapping& f, const SortedMapping& g);
SortedEquivalence kernel(const SortedMapping& f);
// Representatives are the least elements of each block.
QuotientSet quotient(const SortedSet& a, const SortedEquivalence& phi);
// The unique g with g ∘ pr = f; raises not_refining if Φ ⊄ Ker f.
SortedMapping factor_through(const SortedMapping& f,
                             const SortedEquivalence& phi);

// A sorted mapping A → B exists iff supp(A) ⊆ supp(B).
bool hom_exists(const SortedSet& a, const SortedSet& b);
bool constant_support(const IndexedFamily& family);

// Sorts whose carriers are nonempty in every member.
SortSet common_support(const IndexedFamily& family);

}  // namespace msa
