#pragma once

#include <stdexcept>
#include <string>

namespace mmkit {

enum class errc {
  parse_error,
  // space validation
  asymmetric_matrix,
  triangle_violation,
  nonpositive_weight,
  weight_sum_not_one,
  zero_distance_distinct_points,
  // operation preconditions
  nonpositive_scale,
  alpha_out_of_range,
  invalid_kappa,
  out_of_domain,
  dimension_mismatch,
  domain_mismatch,
  invalid_coupling,
  not_in_x_delta,
  not_same_orbit,
  kappa_sum_too_large,
  not_in_pi_kappa,
  invalid_atom_sequence,
  equal_sequences,
  m_too_small,
  eps_out_of_range,
  r_too_small,
};

const char* errc_name(errc code);

// Base of all library exceptions; what() carries the errc name plus detail.
class mmkit_error : public std::runtime_error {
 public:
  mmkit_error(errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

// A document or space failed structural validation.  CLI exit code 1.
class validation_error : public mmkit_error {
 public:
  using mmkit_error::mmkit_error;
};

// Structurally valid input outside an operation's precondition.  CLI exit 2.
class precondition_error : public mmkit_error {
 public:
  using mmkit_error::mmkit_error;
};

}  // namespace mmkit
