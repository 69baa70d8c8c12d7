#pragma once

#include <vector>

#include "mmkit/space.hpp"
#include "mmkit/step_function.hpp"

namespace mmkit {

// Demand tuple (kappa_0, ..., kappa_N): at least two entries, every entry
// strictly positive.  No upper bound on the sum; operations that need one
// check it themselves.
class KappaTuple {
 public:
  explicit KappaTuple(std::vector<Rat> entries);

  std::size_t groups() const { return entries_.size(); }
  const Rat& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Rat>& entries() const { return entries_; }
  Rat sum() const;
  // Entrywise kappa_i + s; requires min entry + s > 0.
  KappaTuple shifted(const Rat& s) const;

 private:
  std::vector<Rat> entries_;
};

// Smallest diameter of a point set of measure >= alpha; 0 for alpha == 0.
// Requires 0 <= alpha <= 1 (errc::alpha_out_of_range).
Rat partial_diam(const FiniteMmSpace& x, const Rat& alpha);

// s -> partial_diam(x, s) on [0, upper], 0 < upper <= 1.  Nondecreasing;
// breakpoints are the maximal subset weights realizable at each distance
// threshold.
StepFunction partial_diam_profile(const FiniteMmSpace& x, const Rat& upper);

// Largest s such that point sets A_0..A_N with weight(A_i) >= kappa_i exist
// at pairwise distance >= s; 0 when no family exists (in particular when
// some kappa_i > 1 or the total demand exceeds 1).  The supremum in the
// definition is attained at a pairwise distance of x.
Rat sep(const FiniteMmSpace& x, const KappaTuple& kappa);

// s -> sep(x, kappa + s*1) on [0, shift_upper], shift_upper > 0.
// Nonincreasing and left-continuous on (0, shift_upper]; the value at 0 is
// the limit from the right, so a demand tuple met only with zero slack does
// not contribute a zero-length first segment.
StepFunction sep_profile(const FiniteMmSpace& x, const KappaTuple& kappa,
                         const Rat& shift_upper);

}  // namespace mmkit
