#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "msa/algebra.hpp"
#include "msa/order.hpp"

namespace msa {

enum class Variance { projective, inductive };

// A system of Σ-algebras over a directed preorder. transition(i, j) is
// defined for i ≤ j and is f^{j,i} : A^j → A^i for projective systems,
// f^{i,j} : A^i → A^j for inductive ones.
template <Variance V>
class System {
 public:
  using Transitions = std::map<std::pair<std::size_t, std::size_t>, Homomorphism>;

  System() = default;
  // No validation; see validate_system.
  System(Preorder index, SignaturePtr sig, std::vector<Algebra> algebras, Transitions transitions)
      : index_(std::move(index)),
        sig_(std::move(sig)),
        algebras_(std::move(algebras)),
        transitions_(std::move(transitions)) {}

  const Preorder& index() const noexcept { return index_; }
  const SignaturePtr& signature_ptr() const noexcept { return sig_; }
  const std::vector<Algebra>& algebras() const noexcept { return algebras_; }
  const Algebra& algebra(std::size_t i) const { return algebras_[i]; }
  const Transitions& transitions() const noexcept { return transitions_; }
  bool has_transition(std::size_t i, std::size_t j) const { return transitions_.count({i, j}) > 0; }
  const Homomorphism& transition(std::size_t i, std::size_t j) const { return transitions_.at({i, j}); }

  IndexedFamily carriers() const {
    IndexedFamily f{sig_->sorts(), index_.names(), {}};
    for (const auto& a : algebras_) f.members.push_back(a.carrier());
    return f;
  }

  friend bool operator==(const System& a, const System& b) {
    return a.index_ == b.index_ && same_signature(a.sig_, b.sig_) && a.algebras_ == b.algebras_ &&
           a.transitions_ == b.transitions_;
  }

 private:
  Preorder index_;
  SignaturePtr sig_;
  std::vector<Algebra> algebras_;
  Transitions transitions_;
};

using ProjectiveSystem = System<Variance::projective>;
using InductiveSystem = System<Variance::inductive>;

struct SystemDefect {
  enum class Kind { shape, algebra, missing, hom, identity, composition };
  Kind kind;
  std::vector<std::size_t> at;  // the indices involved
  std::string message;
};

std::vector<SystemDefect> validate_system(const ProjectiveSystem& p);
std::vector<SystemDefect> validate_system(const InductiveSystem& d);
// Raises invalid_system with the first defect.
void require_valid(const ProjectiveSystem& p);
void require_valid(const InductiveSystem& d);

struct ProjectiveLimit {
  Algebra apex;
  std::vector<Homomorphism> legs;
  // threads[s][x]: coordinates (one per index) of apex element x.
  std::vector<std::vector<std::vector<ElemIndex>>> threads;
};

struct InductiveLimit {
  Algebra apex;
  std::vector<Homomorphism> legs;
  CoproductSet coproduct;
  // members[s][c]: coproduct positions in the class of apex element c; the
  // first is the representative.
  std::vector<std::vector<std::vector<ElemIndex>>> members;
};

ProjectiveLimit projective_limit(const ProjectiveSystem& p);
// The unique h with f^i ∘ h = g^i; raises not_a_cone.
Homomorphism mediating_into_limit(const ProjectiveSystem& p, const ProjectiveLimit& lim,
                                  const Algebra& apex, const std::vector<Homomorphism>& legs);

// Picks the index k at which an operation is evaluated, given every upper
// bound of the argument tags (in canonical order).
using UpperBoundChooser = std::function<std::size_t(std::span<const std::size_t> upper_bounds)>;

// Without a chooser, k is Preorder::canonical_upper_bound of the argument tags.
InductiveLimit inductive_limit(const InductiveSystem& d, const UpperBoundChooser& choose = {});
// The unique h with h ∘ f^i = g^i; raises not_a_cocone.
Homomorphism mediating_from_colimit(const InductiveSystem& d, const InductiveLimit& lim,
                                    const Algebra& apex, const std::vector<Homomorphism>& legs);

// Coproduct positions (s, x, y) related by Φ, decided by the definition
// (∃k ≥ i, j with f^{i,k}(a) = f^{j,k}(b)).
bool eventually_agree(const InductiveSystem& d, const CoproductSet& c, SortIndex s, ElemIndex x,
                      ElemIndex y);

struct PrunedSystem {
  InductiveSystem system;
  // Positions kept, in the original index.
  std::vector<std::size_t> kept;
  // Set when every member is initial and nothing was removed.
  bool all_initial = false;
};

// Drops members whose carriers are all empty.
PrunedSystem prune_initial(const InductiveSystem& d);

// Restriction of a system to a directed subset of its index.
ProjectiveSystem restrict_system(const ProjectiveSystem& p, const std::vector<std::size_t>& subset);
InductiveSystem restrict_system(const InductiveSystem& d, const std::vector<std::size_t>& subset);

}  // namespace msa
