#include "msa/element.hpp"

#include <algorithm>

#include "msa/error.hpp"

namespace msa {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::source_mismatch: return "SourceMismatch";
    case ErrorKind::partition_mismatch: return "PartitionMismatch";
    case ErrorKind::not_refining: return "NotRefining";
    case ErrorKind::bad_tuple: return "BadTuple";
    case ErrorKind::carrier_mismatch: return "CarrierMismatch";
    case ErrorKind::signature_mismatch: return "SignatureMismatch";
    case ErrorKind::not_subset: return "NotSubset";
    case ErrorKind::not_closed: return "NotClosed";
    case ErrorKind::not_congruence: return "NotCongruence";
    case ErrorKind::not_parallel: return "NotParallel";
    case ErrorKind::arity_mismatch: return "ArityMismatch";
    case ErrorKind::cap_exceeded: return "CapExceeded";
    case ErrorKind::not_a_basis: return "NotABasis";
    case ErrorKind::ground_mismatch: return "GroundMismatch";
    case ErrorKind::not_a_filter: return "NotAFilter";
    case ErrorKind::not_a_cone: return "NotACone";
    case ErrorKind::not_a_cocone: return "NotACocone";
    case ErrorKind::sort_not_supported: return "SortNotSupported";
    case ErrorKind::j_not_in_filter: return "JNotInFilter";
    case ErrorKind::vote_failure: return "VoteFailure";
    case ErrorKind::not_a_system_morphism: return "NotASystemMorphism";
    case ErrorKind::invalid_preorder: return "InvalidPreorder";
    case ErrorKind::invalid_algebra: return "InvalidAlgebra";
    case ErrorKind::invalid_system: return "InvalidSystem";
    case ErrorKind::not_a_homomorphism: return "NotAHomomorphism";
    case ErrorKind::hypothesis_violation: return "HypothesisViolation";
    case ErrorKind::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

Element Element::atom(std::string name) {
  Element e;
  e.kind_ = Kind::atom;
  e.label_ = std::move(name);
  return e;
}

Element Element::tuple(std::vector<Element> parts) {
  Element e;
  e.kind_ = Kind::tuple;
  e.parts_ = std::move(parts);
  return e;
}

Element Element::tagged(Element inner, std::string tag) {
  Element e;
  e.kind_ = Kind::tagged;
  e.label_ = std::move(tag);
  e.parts_.push_back(std::move(inner));
  return e;
}

Element Element::star() { return atom(kStarName); }

std::string Element::str() const {
  switch (kind_) {
    case Kind::atom: return label_;
    case Kind::tagged: return parts_.front().str() + "@" + label_;
    case Kind::tuple: {
      std::string out = "<";
      for (std::size_t k = 0; k < parts_.size(); ++k) {
        if (k > 0) out += '.';
        out += parts_[k].str();
      }
      return out + ">";
    }
  }
  return label_;
}

std::strong_ordering operator<=>(const Element& x, const Element& y) {
  if (x.kind_ != y.kind_) return x.kind_ <=> y.kind_;
  switch (x.kind_) {
    case Element::Kind::atom: return x.label_.compare(y.label_) <=> 0;
    case Element::Kind::tuple:
      return std::lexicographical_compare_three_way(
          x.parts_.begin(), x.parts_.end(), y.parts_.begin(), y.parts_.end());
    case Element::Kind::tagged: {
      if (auto c = x.parts_.front() <=> y.parts_.front(); c != 0) return c;
      return x.label_.compare(y.label_) <=> 0;
    }
  }
  return std::strong_ordering::equal;
}

bool operator==(const Element& x, const Element& y) {
  return x.kind_ == y.kind_ && x.label_ == y.label_ && x.parts_ == y.parts_;
}

}  // namespace msa
