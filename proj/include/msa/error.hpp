#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace msa {

enum class ErrorKind {
  source_mismatch,
  partition_mismatch,
  not_refining,
  bad_tuple,
  carrier_mismatch,
  signature_mismatch,
  not_subset,
  not_closed,
  not_congruence,
  not_parallel,
  arity_mismatch,
  cap_exceeded,
  not_a_basis,
  ground_mismatch,
  not_a_filter,
  not_a_cone,
  not_a_cocone,
  sort_not_supported,
  j_not_in_filter,
  vote_failure,
  not_a_system_morphism,
  invalid_preorder,
  invalid_algebra,
  invalid_system,
  not_a_homomorphism,
  hypothesis_violation,
  invalid_argument,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace msa
