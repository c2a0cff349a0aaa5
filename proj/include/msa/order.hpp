#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace msa {

// A subset of a ground {0, …, n-1} with n ≤ 64.
class IndexSet {
 public:
  constexpr IndexSet() = default;
  constexpr explicit IndexSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr IndexSet single(std::size_t i) { return IndexSet(std::uint64_t{1} << i); }
  static constexpr IndexSet full(std::size_t n) {
    return IndexSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool contains(std::size_t i) const noexcept { return (bits_ >> i) & 1U; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool subset_of(IndexSet o) const noexcept { return (bits_ & ~o.bits_) == 0; }
  constexpr IndexSet with(std::size_t i) const noexcept { return IndexSet(bits_ | (std::uint64_t{1} << i)); }
  constexpr IndexSet complement(std::size_t n) const noexcept { return IndexSet(~bits_ & full(n).bits_); }
  std::vector<std::size_t> elements() const;

  friend constexpr IndexSet operator&(IndexSet a, IndexSet b) { return IndexSet(a.bits_ & b.bits_); }
  friend constexpr IndexSet operator|(IndexSet a, IndexSet b) { return IndexSet(a.bits_ | b.bits_); }
  friend constexpr auto operator<=>(IndexSet, IndexSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

// A finite directed preorder. Elements are kept in canonical (code point)
// order; construction validates and never repairs.
class Preorder {
 public:
  Preorder() = default;
  // `le` must already be reflexive and transitive; raises invalid_preorder.
  Preorder(std::vector<std::string> elems,
           const std::vector<std::pair<std::string, std::string>>& le);

  // Reflexive-transitive closure of the generators, then validation.
  static Preorder closure_of(std::vector<std::string> elems,
                             const std::vector<std::pair<std::string, std::string>>& generators);
  // elems need not be sorted; le[i][j] means elems[i] ≤ elems[j].
  static Preorder from_matrix(std::vector<std::string> elems, std::vector<std::vector<char>> le);

  std::size_t size() const noexcept { return elems_.size(); }
  const std::string& name(std::size_t i) const { return elems_[i]; }
  const std::vector<std::string>& names() const noexcept { return elems_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool le(std::size_t i, std::size_t j) const { return le_[i][j] != 0; }
  bool lt(std::size_t i, std::size_t j) const { return le(i, j) && !le(j, i); }

  // ↑i = {j | i ≤ j}; needs size() ≤ 64.
  IndexSet up(std::size_t i) const;
  std::vector<std::size_t> upper_bounds(std::span<const std::size_t> xs) const;
  // Elements above everything.
  std::vector<std::size_t> tops() const;
  // Chosen upper bound: least, in canonical order, among the minimal upper
  // bounds of xs.
  std::size_t canonical_upper_bound(std::span<const std::size_t> xs) const;

  // Induced preorder on a subset; raises invalid_preorder if not directed.
  Preorder restrict(const std::vector<std::size_t>& subset) const;
  // All pairs (i, j) with i ≤ j.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

  friend bool operator==(const Preorder&, const Preorder&) = default;

 private:
  void validate() const;

  std::vector<std::string> elems_;
  std::vector<std::vector<char>> le_;
};

// An isotone map between preorders.
class IsotoneMap {
 public:
  IsotoneMap() = default;
  // Raises invalid_argument unless the table is total and isotone.
  IsotoneMap(Preorder source, Preorder target, std::vector<std::size_t> table);

  static IsotoneMap identity(const Preorder& p);
  // Inclusion of an induced sub-preorder, matching elements by name.
  static IsotoneMap inclusion(const Preorder& sub, const Preorder& super);

  const Preorder& source() const noexcept { return source_; }
  const Preorder& target() const noexcept { return target_; }
  std::size_t operator()(std::size_t i) const { return table_[i]; }
  const std::vector<std::size_t>& table() const noexcept { return table_; }

  bool is_injective() const;
  // Every target element lies below some image point.
  bool is_cofinal() const;
  IndexSet image(IndexSet j) const;

 private:
  Preorder source_;
  Preorder target_;
  std::vector<std::size_t> table_;
};

// ψ ∘ φ; raises source_mismatch unless φ's target is ψ's source.
IsotoneMap compose(const IsotoneMap& psi, const IsotoneMap& phi);

}  // namespace msa
