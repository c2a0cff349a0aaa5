#pragma once

#include <string>
#include <vector>

#include "msa/retraction.hpp"

namespace msa {

// u = (u^i) : A → B between projective systems over the same index.
struct SystemMorphism {
  ProjectiveSystem source;
  ProjectiveSystem target;
  std::vector<Homomorphism> components;
};

// Empty iff every u^i goes A^i → B^i and g^{j,i} ∘ u^j = u^i ∘ f^{j,i}.
std::vector<std::string> system_morphism_defects(const SystemMorphism& u);
// Raises not_a_system_morphism with the first defect.
void require_system_morphism(const SystemMorphism& u);

SystemMorphism identity_morphism(const ProjectiveSystem& a);
// A → A×A, x ↦ (x, x) at every index.
SystemMorphism diagonal_morphism(const ProjectiveSystem& a);
// A → A/∇, onto the quotient by the total congruence at every index.
SystemMorphism collapse_morphism(const ProjectiveSystem& a);

// lim u : lim A → lim B.
Homomorphism limit_map(const SystemMorphism& u, const ProjectiveLimit& la, const ProjectiveLimit& lb);
// u(J) = ∏_{j∈J} u^j : A(J) → B(J).
Homomorphism product_map(const SystemMorphism& u, IndexSet j, const ProductAlgebra& aj, const ProductAlgebra& bj);
// colim (u(J))_J : colim A(F) → colim B(F); both instances share index and ultrafilter.
Homomorphism colimit_map(const SystemMorphism& u, const RetractionInstance& a, const RetractionInstance& b);

struct NaturalitySuiteInput {
  RetractionInstance a;
  RetractionInstance b;
  SystemMorphism u;
};

// lim u ∘ h_A = h_B ∘ colim u(J), and h_A ∘ p^I ∘ in = id. Raises
// not_a_system_morphism.
Verdict naturality_check(const NaturalitySuiteInput& input);

// A^φ = ((A^{φ(i)}), (f^{φ(j),φ(i)})) over φ's source.
ProjectiveSystem reindex_system(const IsotoneMap& phi, const ProjectiveSystem& a);

// A Uffs morphism φ : (I, F_I) → (P, F_P) applied to an instance over P.
struct Reindexed {
  IsotoneMap phi;
  RetractionInstance over_target;  // A with F_P
  RetractionInstance over_source;  // A^φ with F_I
};

// Raises invalid_argument unless φ is a Uffs morphism onto a's ultrafilter.
Reindexed reindex(const IsotoneMap& phi, const Ultrafilter& source_ultra, const RetractionInstance& a);

// 𝔭^φ_A : lim_P A → lim_I A^φ.
Homomorphism p_phi(const Reindexed& r);
// The coordinate re-tagging ∏_{j∈J} A^{φ(j)} → A(φ[J]).
Homomorphism retag(const Reindexed& r, IndexSet j);
// 𝔮^φ_A : colim A^φ(F_I) → colim A(F_P).
Homomorphism q_phi(const Reindexed& r);

// h^{(I,F_I)} at A^φ equals 𝔭^φ ∘ h^{(P,F_P)} ∘ 𝔮^φ, plus the defining
// equations of 𝔭^φ and 𝔮^φ.
Verdict cylinder_check(const Reindexed& r);

// For φ : (I,F_I) → (P,F_P), ψ : (P,F_P) → (W,F_W) and A over W: reindexing
// is functorial, 𝔭^{ψ∘φ} = 𝔭^φ_{A^ψ} ∘ 𝔭^ψ_A, 𝔮^{ψ∘φ} = 𝔮^ψ_A ∘ 𝔮^φ_{A^ψ},
// and the composed cylinder equation holds through each rewriting step.
Verdict composition_check(const IsotoneMap& phi, const IsotoneMap& psi, const Ultrafilter& source_ultra,
                          const RetractionInstance& a);

// Every Uffs morphism into (P, F) given by the inclusion of a subset of P that
// contains F's point; names are kept. The identity comes first.
std::vector<IsotoneMap> subset_inclusions(const Preorder& p, std::size_t point);

}  // namespace msa
