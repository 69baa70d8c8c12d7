#include "mmkit/errors.hpp"

namespace mmkit {

const char* errc_name(errc code) {
  switch (code) {
    case errc::parse_error: return "ParseError";
    case errc::asymmetric_matrix: return "AsymmetricMatrix";
    case errc::triangle_violation: return "TriangleViolation";
    case errc::nonpositive_weight: return "NonpositiveWeight";
    case errc::weight_sum_not_one: return "WeightSumNotOne";
    case errc::zero_distance_distinct_points:
      return "ZeroDistanceDistinctPoints";
    case errc::nonpositive_scale: return "NonpositiveScale";
    case errc::alpha_out_of_range: return "AlphaOutOfRange";
    case errc::invalid_kappa: return "InvalidKappa";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::domain_mismatch: return "DomainMismatch";
    case errc::invalid_coupling: return "InvalidCoupling";
    case errc::not_in_x_delta: return "NotInXDelta";
    case errc::not_same_orbit: return "NotSameOrbit";
    case errc::kappa_sum_too_large: return "KappaSumTooLarge";
    case errc::not_in_pi_kappa: return "NotInPiKappa";
    case errc::invalid_atom_sequence: return "InvalidAtomSequence";
    case errc::equal_sequences: return "EqualSequences";
    case errc::m_too_small: return "MTooSmall";
    case errc::eps_out_of_range: return "EpsOutOfRange";
    case errc::r_too_small: return "RTooSmall";
  }
  return "UnknownError";
}

}  // namespace mmkit
