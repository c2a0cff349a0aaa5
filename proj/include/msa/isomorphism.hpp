#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "msa/algebra.hpp"

namespace msa {

inline constexpr std::size_t kDefaultIsoNodeCap = 1'000'000;
inline constexpr std::size_t kDefaultHomEnumerationCap = 1'000'000;

// The lexicographically least isomorphism A → B (sorts in order, elements in
// canonical order), if any. Raises cap_exceeded after `node_cap` search nodes.
std::optional<Homomorphism> find_isomorphism(const Algebra& a, const Algebra& b,
                                             std::size_t node_cap = kDefaultIsoNodeCap);

// All homomorphisms A → B in lexicographic order. Raises cap_exceeded when
// ∏ |B_s|^|A_s| exceeds `cap`.
std::vector<Homomorphism> enumerate_homomorphisms(const Algebra& a, const Algebra& b,
                                                  std::size_t cap = kDefaultHomEnumerationCap);

}  // namespace msa
