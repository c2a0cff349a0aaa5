#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msa/order.hpp"

namespace msa {

inline constexpr std::size_t kMaxFilterGround = 16;

// A proper filter on the ground {0, …, n-1}, n ≤ 16, stored extensionally.
class Filter {
 public:
  Filter() = default;
  // Raises not_a_filter (with the failing axiom) or ground_mismatch.
  Filter(std::size_t ground, std::vector<IndexSet> members);

  // Reason the family fails the filter axioms, if it does.
  static std::optional<std::string> defect(std::size_t ground, const std::vector<IndexSet>& members);

  std::size_t ground_size() const noexcept { return ground_; }
  bool contains(IndexSet j) const { return j.subset_of(IndexSet::full(ground_)) && member_[j.bits()]; }
  // Sorted by bit pattern.
  const std::vector<IndexSet>& members() const noexcept { return members_; }
  // ⋂F; every filter on a finite ground is principal at its core.
  IndexSet core() const;
  bool subset_of(const Filter& other) const;

  friend bool operator==(const Filter& a, const Filter& b) {
    return a.ground_ == b.ground_ && a.members_ == b.members_;
  }

 private:
  std::size_t ground_ = 0;
  std::vector<IndexSet> members_;
  std::vector<bool> member_;
};

class Ultrafilter {
 public:
  Ultrafilter() = default;
  // Raises not_a_filter if `f` is not maximal.
  explicit Ultrafilter(Filter f);
  static Ultrafilter principal(std::size_t ground, std::size_t point);

  const Filter& filter() const noexcept { return filter_; }
  std::size_t ground_size() const noexcept { return filter_.ground_size(); }
  bool contains(IndexSet j) const { return filter_.contains(j); }
  std::size_t point() const noexcept { return point_; }

  friend bool operator==(const Ultrafilter& a, const Ultrafilter& b) { return a.filter_ == b.filter_; }

 private:
  Filter filter_;
  std::size_t point_ = 0;
};

// {J | J ⊇ core}; core must be nonempty.
Filter principal_filter(std::size_t ground, IndexSet core);
// The basis {↑i | i ∈ I}, sorted and deduplicated.
std::vector<IndexSet> final_sections_basis(const Preorder& p);
// Upward closure of a filter basis; raises not_a_basis.
Filter filter_from_basis(std::size_t ground, const std::vector<IndexSet>& basis);
Filter final_sections_filter(const Preorder& p);

bool is_ultrafilter(const Filter& f);
// Every ultrafilter containing F; on a finite ground these are the principal
// ultrafilters at the points of ⋂F.
std::vector<Ultrafilter> ultrafilters_containing(const Filter& f);

// φ(F) = {Q ⊆ target | ∃J ∈ F, φ[J] ⊆ Q} for a map given as a table.
Filter image_filter(std::size_t target_ground, const std::vector<std::size_t>& phi, const Filter& f);
Ultrafilter co_optimal_lift(std::size_t target_ground, const std::vector<std::size_t>& phi,
                            const Ultrafilter& u);
Ultrafilter co_optimal_lift(const IsotoneMap& phi, const Ultrafilter& u);

// An index set together with an ultrafilter containing its final sections.
struct UffsObject {
  Preorder index;
  Ultrafilter ultra;
};

bool is_uffs_object(const UffsObject& x);
// φ is injective, isotone, cofinal and lifts the source ultrafilter onto the
// target one.
bool uffs_morphism_check(const UffsObject& source, const UffsObject& target, const IsotoneMap& phi);

// Rendering of a subset of a preorder's elements, e.g. "[a.b]".
std::string subset_name(const Preorder& p, IndexSet j);

}  // namespace msa
