#pragma once

#include <memory>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "msa/signature.hpp"
#include "msa/sorted_core.hpp"

namespace msa {

// A finite Σ-algebra given by extensional operation tables. Table k is
// indexed by the MixedRadix code of the argument tuple over the carriers of
// the argument word; constants have a single entry. Copies share storage.
class Algebra {
 public:
  Algebra() = default;
  // No validation happens here; see validate_algebra / checked_algebra.
  Algebra(SignaturePtr sig, SortedSet carrier, std::vector<std::vector<ElemIndex>> tables);

  const Signature& signature() const { return *data_->sig; }
  const SignaturePtr& signature_ptr() const { return data_->sig; }
  const SortedSet& carrier() const { return data_->carrier; }
  std::size_t size(SortIndex s) const { return data_->carrier.size(s); }
  const Element& element(SortIndex s, ElemIndex x) const {
    return data_->carrier.carrier(s)[x];
  }
  const std::vector<ElemIndex>& table(std::size_t op) const { return data_->tables[op]; }
  const std::vector<std::vector<ElemIndex>>& tables() const { return data_->tables; }
  const MixedRadix& arg_layout(std::size_t op) const { return data_->layouts[op]; }

  ElemIndex apply(std::size_t op, std::span<const ElemIndex> args) const {
    return data_->tables[op][data_->layouts[op].encode(args)];
  }

  bool valid_handle() const noexcept { return data_ != nullptr; }

  friend bool operator==(const Algebra& a, const Algebra& b);

 private:
  struct Data {
    SignaturePtr sig;
    SortedSet carrier;
    std::vector<std::vector<ElemIndex>> tables;
    std::vector<MixedRadix> layouts;
  };
  std::shared_ptr<const Data> data_;
};

struct AlgebraDefect {
  enum class Kind { shape, totality, codomain };
  Kind kind;
  std::string op;
  std::string tuple;
  std::string message;
};

std::vector<AlgebraDefect> validate_algebra(const Algebra& a);
// Raises invalid_algebra listing the first defect.
Algebra checked_algebra(SignaturePtr sig, SortedSet carrier,
                        std::vector<std::vector<ElemIndex>> tables);

// The final algebra 1: {⋆} at every sort.
Algebra final_algebra(SignaturePtr sig);

// Raises carrier_mismatch if f does not go between the two carriers.
bool is_homomorphism(const SortedMapping& f, const Algebra& a, const Algebra& b);

class Homomorphism {
 public:
  struct Unchecked {};

  Homomorphism() = default;
  // Raises not_a_homomorphism if the tables do not commute with the operations.
  Homomorphism(Algebra source, Algebra target, SortedTable map);
  // For maps that are homomorphisms by construction.
  Homomorphism(Unchecked, Algebra source, Algebra target, SortedTable map);

  static Homomorphism identity(const Algebra& a);

  const Algebra& source() const noexcept { return source_; }
  const Algebra& target() const noexcept { return target_; }
  const SortedTable& tables() const noexcept { return map_; }
  const std::vector<ElemIndex>& table(SortIndex s) const { return map_[s]; }
  ElemIndex operator()(SortIndex s, ElemIndex x) const { return map_[s][x]; }
  SortedMapping mapping() const;

  bool is_injective() const;
  bool is_surjective() const;

  friend bool operator==(const Homomorphism& f, const Homomorphism& g) {
    return f.map_ == g.map_ && f.source_ == g.source_ && f.target_ == g.target_;
  }

 private:
  Algebra source_;
  Algebra target_;
  SortedTable map_;
};

// g ∘ f; raises source_mismatch unless f.target() == g.source().
Homomorphism compose(const Homomorphism& g, const Homomorphism& f);

struct ProductAlgebra {
  Algebra algebra;
  std::vector<Homomorphism> projections;
  std::vector<MixedRadix> layout;
};

// ∏ members with coordinatewise operations; the empty product is final.
ProductAlgebra product_algebra(SignaturePtr sig, const std::vector<std::string>& index,
                               const std::vector<Algebra>& members);
// ⟨legs⟩ : source → ∏; raises not_a_cone on mismatched legs.
Homomorphism tupling(const ProductAlgebra& p, const Algebra& source,
                     const std::vector<Homomorphism>& legs);

struct Subalgebra {
  Algebra algebra;
  Homomorphism embedding;
};

// Raises not_subset unless X ⊆ carrier(A) sortwise.
bool is_subalgebra(const SortedSet& x, const Algebra& a);
// Raises not_subset / not_closed.
Subalgebra induced_subalgebra(const SortedSet& x, const Algebra& a);
// Same, with members given as positions in the carrier of A.
Subalgebra induced_subalgebra(const Algebra& a, const SortedTable& members);

// Raises source_mismatch if Φ lives on a different carrier.
bool is_congruence(const SortedEquivalence& phi, const Algebra& a);

class Congruence {
 public:
  Congruence() = default;
  // Raises not_congruence.
  Congruence(Algebra a, SortedEquivalence phi);

  const Algebra& algebra() const noexcept { return algebra_; }
  const SortedEquivalence& relation() const noexcept { return relation_; }

 private:
  Algebra algebra_;
  SortedEquivalence relation_;
};

struct QuotientAlgebra {
  Algebra algebra;
  Homomorphism projection;
};

QuotientAlgebra quotient_algebra(const Congruence& phi);
Congruence kernel_congruence(const Homomorphism& f);
// The unique g with g ∘ pr = f; raises not_refining if Φ ⊄ Ker f.
Homomorphism factor_hom(const Homomorphism& f, const Congruence& phi);

struct EqualizerAlgebra {
  Algebra algebra;
  Homomorphism embedding;
};

// Raises not_parallel.
EqualizerAlgebra equalizer_algebra(const Homomorphism& f, const Homomorphism& g);

// Least congruence containing the given (sort, x, y) pairs.
Congruence congruence_generated_by(
    const Algebra& a, const std::vector<std::tuple<SortIndex, ElemIndex, ElemIndex>>& pairs);

// d*(B): the Σ-algebra with carrier B_{α(s)} and σ interpreted as d(σ).
Algebra reduct(const SignatureMorphism& d, const Algebra& b);
Homomorphism reduct(const SignatureMorphism& d, const Homomorphism& f);

// Human-readable argument tuple, e.g. "(a,b)".
std::string render_args(const Algebra& a, std::size_t op, std::size_t code);

}  // namespace msa
