#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msa/algebra.hpp"

namespace msa {

// Outcome of one instance check. Failures always carry witness lines.
struct Verdict {
  std::string name;
  bool passed = true;
  std::vector<std::string> witness;

  void fail(std::string w) {
    passed = false;
    witness.push_back(std::move(w));
  }
  // Folds another verdict in, prefixing its witness lines with its name.
  void absorb(const Verdict& other);
};

// First (sort, element) where two parallel homomorphisms differ, rendered
// with element names; nullopt when they agree everywhere.
std::optional<std::string> first_difference(const Homomorphism& f, const Homomorphism& g);

}  // namespace msa
