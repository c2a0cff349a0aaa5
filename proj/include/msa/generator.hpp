#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "msa/dsl.hpp"
#include "msa/filters.hpp"
#include "msa/reduced.hpp"
#include "msa/systems.hpp"

namespace msa {

struct GeneratorConfig {
  std::uint64_t seed = 0;
  std::size_t max_sorts = 3;
  std::size_t max_carrier = 3;
  std::size_t max_ops = 3;
  std::size_t max_index = 4;
  std::size_t max_arity = 2;
  bool force_constant_support = false;
  bool force_surjective = false;
  bool inject_support_violation = false;
};

// Raises invalid_argument for caps the generator cannot honor.
void check_config(const GeneratorConfig& cfg);

// Instances are drawn from a seeded mt19937_64; all choices go through
// `below`, so a seed fixes the output on every platform.
class Generator {
 public:
  explicit Generator(const GeneratorConfig& cfg);

  const GeneratorConfig& config() const noexcept { return cfg_; }
  std::size_t below(std::size_t n);
  bool coin() { return below(2) == 1; }

  // At least min_sorts sorts; a constant appears with low probability.
  SignaturePtr signature(std::size_t min_sorts = 1);
  // A random directed preorder with a top (sometimes a two-element top
  // cluster) and shuffled names. With need_lower, something lies strictly
  // below the top cluster.
  Preorder index(bool need_lower = false);
  // Algebra with nonempty carriers exactly at `support`, which must be closed
  // under the signature; carrier sizes are bounded by the cap minus `reserve`.
  Algebra algebra(const SignaturePtr& sig, const SortSet& support, std::size_t reserve = 0);
  // A random closed proper or improper support.
  SortSet support(const Signature& sig);

  // Transitions are quotient maps of a top algebra, with extra elements on a
  // downward-closed part of the index. Honors the three semantic flags.
  ProjectiveSystem projective_system(const SignaturePtr& sig, const Preorder& index);
  // The dual construction; extra elements sit on an upward-closed part.
  InductiveSystem inductive_system(const SignaturePtr& sig, const Preorder& index);
  // A family over `names` with constant support, or (with the violation flag)
  // one member at a position outside `protect` missing a sort the protected
  // members support. Raises invalid_argument if no such member exists.
  AlgebraFamily family(const SignaturePtr& sig, const std::vector<std::string>& names, IndexSet protect);

  // Whether a support violation exists for the signature at all.
  bool violation_possible(const Signature& sig) const;

 private:
  GeneratorConfig cfg_;
  std::mt19937_64 rng_;
};

// A cofinal injective map into p whose image contains `point`, with fresh
// names on the source (prefixed by `prefix`). The source ultrafilter is
// principal at the preimage of `point`.
struct UffsChoice {
  IsotoneMap phi;
  Ultrafilter source_ultra;
};
UffsChoice random_tail_inclusion(Generator& g, const Preorder& p, std::size_t point, const std::string& prefix);

// A whole instance file: one signature and index, a projective system, an
// inductive system, a family, a final-section filter, a principal filter and
// an ultrafilter at a top. The semantic flags apply to all three diagrams.
InstanceFile generate_instance(const GeneratorConfig& cfg);

}  // namespace msa
