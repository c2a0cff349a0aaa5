#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msa/algebra.hpp"
#include "msa/filters.hpp"
#include "msa/isomorphism.hpp"
#include "msa/systems.hpp"

namespace msa {

// An indexed family of Σ-algebras; position k carries index name index[k].
struct AlgebraFamily {
  SignaturePtr sig;
  std::vector<std::string> index;
  std::vector<Algebra> members;

  IndexedFamily carriers() const;
  std::size_t size() const noexcept { return members.size(); }
};

template <Variance V>
AlgebraFamily family_of(const System<V>& sys) {
  return {sys.signature_ptr(), sys.index().names(), sys.algebras()};
}

// ∏_{j∈J} A^j with coordinates in index order.
ProductAlgebra subproduct(const AlgebraFamily& family, IndexSet j);

// A(F): the inductive system over (F, ⊇) with A(J) = ∏_{j∈J} A^j and
// restriction maps.
struct ReducedProductSystem {
  Preorder order;
  std::vector<IndexSet> members;  // aligned with order
  std::vector<ProductAlgebra> products;
  InductiveSystem system;

  // Raises j_not_in_filter.
  std::size_t position(IndexSet j) const;
};

// Raises ground_mismatch if the family is not indexed by F's ground.
ReducedProductSystem reduced_product_system(const AlgebraFamily& family, const Filter& f);
// The restriction ⟨pr^{J,k}⟩_{k∈K} : A(J) → A(K) for K ⊆ J.
Homomorphism restriction(const ProductAlgebra& from, IndexSet j, const ProductAlgebra& to, IndexSet k);
// ∏^F A^i, the colimit of A(F).
InductiveLimit reduced_product(const ReducedProductSystem& r);

// Eq(a, b) = {i | a_i = b_i} for product elements a, b of sort s.
IndexSet equalizer_set(const ProductAlgebra& p, SortIndex s, ElemIndex a, ElemIndex b);
// ≡^F on ∏ A^i = A(ground), decided by Eq(a,b) ∈ F.
Congruence filter_congruence(const ProductAlgebra& full, const Filter& f);

struct IsoCheck {
  Algebra left;
  Algebra right;
  std::optional<Homomorphism> iso;
  bool cap_exceeded = false;

  bool found() const noexcept { return iso.has_value(); }
};

IsoCheck compare_algebras(const Algebra& left, const Algebra& right, std::size_t node_cap);

// C/≡ from the statement of the eventual-consistency proposition.
struct EventuallyConsistent {
  ProductAlgebra product;
  Subalgebra consistent;  // C
  Congruence agreement;   // ≡ on C
  QuotientAlgebra quotient;
};

EventuallyConsistent eventually_consistent_quotient(const InductiveSystem& d);

struct Prop25Verdict {
  bool constant_support = false;
  IsoCheck iso;  // C/≡ versus the inductive limit
  bool consistent = false;  // constant support ⟺ iso found
};

struct PrincipalVerdict {
  IndexSet j;
  bool constant_support = false;
  IsoCheck iso;  // ∏ A^i/≡^F versus ∏_{j∈J} A^j
  bool consistent = false;  // constant support ⇒ iso found
};

struct ReducedVerdict {
  bool ultra = false;
  bool constant_support = false;
  // For every sort s, {i | s ∈ supp A^i} ∈ F.
  bool remark_condition = false;
  IsoCheck iso;  // ∏^F A^i versus ∏ A^i/≡^F
  // constant support ⇒ iso, and iso ∧ remark condition ⇒ constant support.
  bool consistent = false;
};

Prop25Verdict prop25_check(const InductiveSystem& d, std::size_t node_cap = kDefaultIsoNodeCap);
PrincipalVerdict prop28_check(const AlgebraFamily& family, IndexSet j,
                              std::size_t node_cap = kDefaultIsoNodeCap);
ReducedVerdict prop29_check(const AlgebraFamily& family, const Filter& f,
                            std::size_t node_cap = kDefaultIsoNodeCap);
ReducedVerdict ultraproduct_check(const AlgebraFamily& family, const Ultrafilter& u,
                                  std::size_t node_cap = kDefaultIsoNodeCap);

}  // namespace msa
