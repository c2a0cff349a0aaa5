#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "msa/sorted_core.hpp"

namespace msa {

// Argument word w ∈ S* and result sort; an empty word is a constant.
struct Arity {
  std::vector<SortIndex> word;
  SortIndex result = 0;

  friend bool operator==(const Arity&, const Arity&) = default;
};

struct OpSymbol {
  std::string name;
  Arity arity;

  friend bool operator==(const OpSymbol&, const OpSymbol&) = default;
};

class Signature {
 public:
  Signature() = default;
  // Sort and operation names must be distinct; arities must use known sorts.
  Signature(std::vector<std::string> sorts, std::vector<OpSymbol> ops);

  const std::vector<std::string>& sorts() const noexcept { return sorts_; }
  const std::vector<OpSymbol>& ops() const noexcept { return ops_; }
  const OpSymbol& op(std::size_t k) const { return ops_[k]; }
  std::size_t op_count() const noexcept { return ops_.size(); }
  std::optional<std::size_t> op_index(std::string_view name) const;
  std::optional<SortIndex> sort_index(std::string_view name) const;

  // Least set of sorts containing `seed` and closed under the operations
  // (a result sort is added once every argument sort is present).
  SortSet close(SortSet seed) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<std::string> sorts_;
  std::vector<OpSymbol> ops_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

bool same_signature(const SignaturePtr& a, const SignaturePtr& b);

// (α, d): Σ → Λ with d(σ) : α(w) → α(s) for every σ : w → s.
class SignatureMorphism {
 public:
  SignatureMorphism(SignaturePtr source, SignaturePtr target,
                    std::vector<SortIndex> sort_map, std::vector<std::size_t> op_map);

  const SignaturePtr& source() const noexcept { return source_; }
  const SignaturePtr& target() const noexcept { return target_; }
  SortIndex sort(SortIndex s) const { return sort_map_[s]; }
  std::size_t op(std::size_t k) const { return op_map_[k]; }

 private:
  SignaturePtr source_;
  SignaturePtr target_;
  std::vector<SortIndex> sort_map_;
  std::vector<std::size_t> op_map_;
};

}  // namespace msa
