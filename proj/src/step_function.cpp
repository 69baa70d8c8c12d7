#include "mmkit/step_function.hpp"

#include <stdexcept>

namespace mmkit {

StepFunction::StepFunction(Rat domain_lo, Rat domain_hi,
                           std::vector<Rat> breaks, std::vector<Rat> values)
    : lo_(std::move(domain_lo)), hi_(std::move(domain_hi)) {
  if (lo_ > hi_) {
    throw precondition_error(errc::out_of_domain, "empty step domain");
  }
  if (values.size() != breaks.size() + 1) {
    throw precondition_error(errc::dimension_mismatch,
                             "need exactly one value per segment");
  }
  Rat prev = lo_;
  for (const Rat& b : breaks) {
    if (b <= prev || b >= hi_) {
      throw precondition_error(errc::out_of_domain,
                               "breakpoints must increase strictly inside "
                               "the domain");
    }
    prev = b;
  }
  // Canonical form: no two adjacent segments share a value.
  breaks_.reserve(breaks.size());
  values_.push_back(std::move(values[0]));
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (values[i + 1] == values_.back()) continue;
    breaks_.push_back(std::move(breaks[i]));
    values_.push_back(std::move(values[i + 1]));
  }
}

const Rat& StepFunction::value_at(const Rat& x) const {
  if (x < lo_ || x > hi_) {
    throw precondition_error(errc::out_of_domain,
                             rat_to_string(x) + " outside [" +
                                 rat_to_string(lo_) + ", " +
                                 rat_to_string(hi_) + "]");
  }
  std::size_t seg = 0;
  while (seg < breaks_.size() && x > breaks_[seg]) ++seg;
  return values_[seg];
}

bool StepFunction::is_nondecreasing() const {
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (values_[i] < values_[i - 1]) return false;
  return true;
}

bool StepFunction::is_nonincreasing() const {
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (values_[i] > values_[i - 1]) return false;
  return true;
}

Rat step_integral(const StepFunction& f, const Rat& from, const Rat& to) {
  if (from < f.domain_lo() || to > f.domain_hi() || from > to) {
    throw precondition_error(errc::out_of_domain,
                             "integration range outside the step domain");
  }
  Rat total = 0;
  Rat seg_lo = f.domain_lo();
  for (std::size_t seg = 0; seg < f.values().size(); ++seg) {
    Rat seg_hi =
        seg < f.breaks().size() ? f.breaks()[seg] : f.domain_hi();
    Rat a = rat_max(seg_lo, from);
    Rat b = rat_min(seg_hi, to);
    if (a < b) total += f.values()[seg] * (b - a);
    seg_lo = seg_hi;
  }
  return total;
}

}  // namespace mmkit
