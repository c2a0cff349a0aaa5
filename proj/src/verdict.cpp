#include "msa/verdict.hpp"

namespace msa {

void Verdict::absorb(const Verdict& other) {
  if (other.passed) return;
  passed = false;
  for (const auto& w : other.witness) witness.push_back(other.name + ": " + w);
}

std::optional<std::string> first_difference(const Homomorphism& f, const Homomorphism& g) {
  const auto& sorts = f.source().carrier().sorts();
  if (f.tables().size() != g.tables().size()) return "the maps have different sort sets";
  for (std::size_t s = 0; s < f.tables().size(); ++s) {
    if (f.table(s).size() != g.table(s).size()) return "domains differ at sort " + sorts[s];
    for (std::size_t x = 0; x < f.table(s).size(); ++x) {
      auto a = f(s, static_cast<ElemIndex>(x));
      auto b = g(s, static_cast<ElemIndex>(x));
      if (a == b) continue;
      const auto& e = f.source().element(s, static_cast<ElemIndex>(x));
      return "sort " + sorts[s] + " at " + e.str() + ": " + f.target().element(s, a).str() +
             " vs " + g.target().element(s, b).str();
    }
  }
  return std::nullopt;
}

}  // namespace msa
