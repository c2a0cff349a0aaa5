#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msa/error.hpp"
#include "msa/filters.hpp"
#include "msa/reduced.hpp"
#include "msa/systems.hpp"
#include "msa/verdict.hpp"

namespace msa {

// Raised when h^{J,i} cannot be defined at some x: either the supports of
// A(J) and A^i differ, or no (or more than one) vote set lies in F.
class VoteFailure : public Error {
 public:
  struct Tally {
    std::string candidate;
    IndexSet votes;
    bool in_filter = false;
  };

  // `p` is the index J and i live in; only used to render detail().
  VoteFailure(std::string reason, const Preorder& p, IndexSet j, std::size_t i, std::string sort, std::string x,
              std::vector<Tally> tally);

  IndexSet j() const noexcept { return j_; }
  std::size_t i() const noexcept { return i_; }
  const std::string& sort() const noexcept { return sort_; }
  const std::string& x() const noexcept { return x_; }
  const std::vector<Tally>& tally() const noexcept { return tally_; }
  // Reason, location and tally with index names.
  const std::string& detail() const noexcept { return detail_; }

 private:
  IndexSet j_;
  std::size_t i_;
  std::string sort_;
  std::string x_;
  std::vector<Tally> tally_;
  std::string detail_;
};

// A projective system of finite algebras with an ultrafilter on its index
// containing the final sections. The limit, A(F) and its colimit are built
// once and shared by copies.
class RetractionInstance {
 public:
  RetractionInstance() = default;

  // Raises hypothesis_violation unless the family has constant support and
  // the ultrafilter contains every ↑i; invalid_system for malformed systems.
  static RetractionInstance make(ProjectiveSystem system, Ultrafilter ultra);
  // Skips the constant-support hypothesis, so the diagnostics downstream can
  // be exercised on violating systems.
  static RetractionInstance unchecked(ProjectiveSystem system, Ultrafilter ultra);

  const ProjectiveSystem& system() const { return data_->system; }
  const Preorder& index() const { return data_->system.index(); }
  const Ultrafilter& ultra() const { return data_->ultra; }
  const AlgebraFamily& family() const { return data_->family; }
  const ProjectiveLimit& limit() const { return data_->limit; }
  const ReducedProductSystem& reduced() const { return data_->reduced; }
  const InductiveLimit& colimit() const { return data_->colimit; }
  bool constant_support() const { return data_->constant_support; }

 private:
  struct Data {
    ProjectiveSystem system;
    Ultrafilter ultra;
    AlgebraFamily family;
    ProjectiveLimit limit;
    ReducedProductSystem reduced;
    InductiveLimit colimit;
    bool constant_support = false;
  };
  static RetractionInstance build(ProjectiveSystem system, Ultrafilter ultra, bool require_support);

  std::shared_ptr<const Data> data_;
};

// V^{J,i,s}(x, y) = {j ∈ J∩↑i | f^{j,i}_s(x_j) = y}; x is an element of A(J)_s.
// Raises sort_not_supported, j_not_in_filter.
IndexSet vote_set(const RetractionInstance& inst, IndexSet j, std::size_t i, SortIndex s, ElemIndex x,
                  ElemIndex y);

// h^{J,i} : A(J) → A^i. Raises VoteFailure.
Homomorphism h_Ji(const RetractionInstance& inst, IndexSet j, std::size_t i);
// h^{J,i} ∘ p^{K,J} = h^{K,i} for K ⊇ J.
bool h_Ji_compatibility_check(const RetractionInstance& inst, IndexSet j, IndexSet k, std::size_t i);
// h^i : colim A(F) → A^i, mediating the h^{J,i}.
Homomorphism h_i(const RetractionInstance& inst, std::size_t i);
// f^{k,i} ∘ h^k = h^i for i ≤ k.
bool transition_coherence_check(const RetractionInstance& inst, std::size_t i, std::size_t k);
// h^{(I,F),A} : colim A(F) → lim A.
Homomorphism retraction_hom(const RetractionInstance& inst);

// The canonical iso ∏ A^i/≡^F → colim A(F), obtained by factoring p^I and
// checked to be bijective.
Homomorphism quotient_to_colimit(const RetractionInstance& inst, const Congruence& eq);
// The embedding in : lim A → ∏ A^i = A(I).
Homomorphism limit_embedding(const RetractionInstance& inst);

// h ∘ pr^{≡F} ∘ in = id on every thread, with the intermediate identities
// h^{I,i} ∘ in = pr^{I,i} ∘ in = f^i and V^{I,i,s}(in(x), x_i) = ↑i.
Verdict retraction_check(const RetractionInstance& inst);
// Vote partition, uniqueness of the voted value, compatibility and
// coherence, over every J ∈ F, i ∈ I, s and x.
Verdict vote_structure_check(const RetractionInstance& inst);
// h^{I,i} = f^{p,i} ∘ pr^{I,p} where p is the ultrafilter's point.
Verdict degenerate_shape_check(const RetractionInstance& inst);

}  // namespace msa
