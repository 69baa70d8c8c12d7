#pragma once

#include "mmkit/invariants.hpp"
#include "mmkit/pyramids.hpp"
#include "mmkit/space.hpp"

namespace mmkit {

// Atom bound 0 < delta < 1 for the slice X_delta = {X : every atom < delta}.
class Delta {
 public:
  explicit Delta(Rat value);
  const Rat& value() const { return value_; }

 private:
  Rat value_;
};

bool in_x_delta(const FiniteMmSpace& x, const Delta& delta);

// Scale radius: integral of the partial-diameter profile over
// [0, (delta+1)/2].  Strictly positive on X_delta, and 1-homogeneous:
// r_delta(tX) = t * r_delta(X).  Requires x in X_delta (errc::not_in_x_delta).
Rat r_delta(const FiniteMmSpace& x, const Delta& delta);

// Image of x under the trivialization over its orbit: the section
// representative has r_delta exactly 1, the radius recovers x.
struct TrivializedPoint {
  FiniteMmSpace section_rep;
  Rat radius;
};

TrivializedPoint trivialize(const FiniteMmSpace& x, const Delta& delta);
FiniteMmSpace untrivialize(const TrivializedPoint& p, const ScaleFactor& t);

// The unique t with scale(x, t) isomorphic to x2, certified by an explicit
// isomorphism check (errc::not_same_orbit when none exists).
Rat recover_scale(const FiniteMmSpace& x, const FiniteMmSpace& x2,
                  const Delta& delta);

// Membership in Pi_kappa: sep at kappa is finite and stays positive after
// some positive uniform shift of the demands.  Requires sum kappa_i < 1
// (errc::kappa_sum_too_large).  Always false for atom pyramids.
bool in_pi_kappa(const PyramidRep& p, const KappaTuple& kappa);

// Integral of the sep profile over shifts [0, 1]; positive and
// 1-homogeneous on Pi_kappa (errc::not_in_pi_kappa outside).
Rat r_kappa(const PyramidRep& p, const KappaTuple& kappa);

}  // namespace mmkit
