#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace msa {

// An element of some carrier. Atoms come from input files; tuples and
// tagged pairs are produced by products and coproducts. Elements are
// totally ordered (kind, then structure), which fixes the canonical order of
// every carrier.
class Element {
 public:
  enum class Kind : std::uint8_t { atom, tuple, tagged };

  Element() = default;

  static Element atom(std::string name);
  static Element tuple(std::vector<Element> parts);
  static Element tagged(Element inner, std::string tag);
  // Sole element of the empty product.
  static Element star();

  Kind kind() const noexcept { return kind_; }
  // Atom name, or the tag of a tagged element.
  const std::string& label() const noexcept { return label_; }
  // Tuple components, or the single inner element of a tagged element.
  const std::vector<Element>& parts() const noexcept { return parts_; }
  const Element& inner() const { return parts_.front(); }

  // Rendering used in reports and emitted files: atoms verbatim, tuples as
  // <a.b.c>, tagged elements as a@i.
  std::string str() const;

  friend std::strong_ordering operator<=>(const Element& x, const Element& y);
  friend bool operator==(const Element& x, const Element& y);

 private:
  Kind kind_ = Kind::atom;
  std::string label_;
  std::vector<Element> parts_;
};

inline constexpr const char* kStarName = "⋆";

}  // namespace msa
