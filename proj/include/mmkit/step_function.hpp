#pragma once

#include <vector>

#include "mmkit/errors.hpp"
#include "mmkit/rational.hpp"

namespace mmkit {

// Piecewise constant function on a closed interval [a, b].  Segment j takes
// values[j] on (breaks[j-1], breaks[j]], except the first segment which is
// [a, breaks[0]]; so the function is left-continuous and the value at a
// breakpoint belongs to the segment ending there.  Breakpoints are strictly
// increasing and strictly interior to the domain; adjacent segments with
// equal values are merged on construction.
class StepFunction {
 public:
  StepFunction(Rat domain_lo, Rat domain_hi, std::vector<Rat> breaks,
               std::vector<Rat> values);

  const Rat& domain_lo() const { return lo_; }
  const Rat& domain_hi() const { return hi_; }
  const std::vector<Rat>& breaks() const { return breaks_; }
  const std::vector<Rat>& values() const { return values_; }

  // Throws precondition_error(errc::out_of_domain) outside [a, b].
  const Rat& value_at(const Rat& x) const;

  bool is_nondecreasing() const;
  bool is_nonincreasing() const;

 private:
  Rat lo_, hi_;
  std::vector<Rat> breaks_;
  std::vector<Rat> values_;
};

// Exact integral of f over [from, to]; requires [from, to] within the
// domain (errc::out_of_domain) and from <= to.
Rat step_integral(const StepFunction& f, const Rat& from, const Rat& to);

}  // namespace mmkit
