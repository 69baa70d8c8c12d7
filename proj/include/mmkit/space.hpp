#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mmkit/errors.hpp"
#include "mmkit/rational.hpp"

namespace mmkit {

// A finite metric measure space: distinct labelled points, an exact rational
// distance matrix, and strictly positive rational weights summing to one
// (full support).  Instances are only created through validate(), so a held
// FiniteMmSpace always satisfies the metric and measure axioms.
class FiniteMmSpace {
 public:
  struct Data {
    std::vector<std::string> labels;
    std::vector<std::vector<Rat>> dist;
    std::vector<Rat> weights;
  };

  // Checks, in order: matching dimensions, zero diagonal, symmetry,
  // positivity of off-diagonal entries, the triangle inequality, positive
  // weights, and weight sum exactly one.  Throws validation_error with the
  // first violation found.
  static FiniteMmSpace validate(Data data);

  std::size_t size() const { return data_.labels.size(); }
  const std::vector<std::string>& labels() const { return data_.labels; }
  const Rat& dist(std::size_t i, std::size_t j) const {
    return data_.dist[i][j];
  }
  const std::vector<std::vector<Rat>>& dist_matrix() const {
    return data_.dist;
  }
  const Rat& weight(std::size_t i) const { return data_.weights[i]; }
  const std::vector<Rat>& weights() const { return data_.weights; }

  Rat diameter() const;
  Rat max_weight() const;
  Rat min_weight() const;
  // Smallest off-diagonal distance; zero for a one-point space.
  Rat min_positive_dist() const;

 private:
  explicit FiniteMmSpace(Data data) : data_(std::move(data)) {}
  Data data_;
};

// Multiplicative scale factor acting on distances; t > 0 enforced on
// construction (errc::nonpositive_scale).
class ScaleFactor {
 public:
  explicit ScaleFactor(Rat value);
  const Rat& value() const { return value_; }

 private:
  Rat value_;
};

// tX: same points and weights, every distance multiplied by t.
FiniteMmSpace scale(const FiniteMmSpace& x, const ScaleFactor& t);

// True iff some bijection matches weights exactly and preserves every
// pairwise distance exactly.  Labels are ignored.
bool is_mm_isomorphic(const FiniteMmSpace& x, const FiniteMmSpace& y);

}  // namespace mmkit
