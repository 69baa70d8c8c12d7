#pragma once

#include <optional>
#include <vector>

#include "mmkit/invariants.hpp"
#include "mmkit/space.hpp"

namespace mmkit {

// Nonincreasing positive rationals with sum <= 1.  Zero entries are dropped
// on validation, so the empty sequence is the sequence of no constraints.
class AtomSequence {
 public:
  static AtomSequence validate(std::vector<Rat> entries);

  std::size_t size() const { return entries_.size(); }
  const Rat& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Rat>& entries() const { return entries_; }
  const Rat& sum() const { return sum_; }
  // 1 - sum: mass not pinned to any prescribed atom.
  Rat free_mass() const { return Rat(1) - sum_; }

 private:
  AtomSequence(std::vector<Rat> entries, Rat sum)
      : entries_(std::move(entries)), sum_(std::move(sum)) {}
  std::vector<Rat> entries_;
  Rat sum_;
};

// A pyramid given either by a generating space (the downward closure of X
// under the Lipschitz order) or by an atom sequence.
class PyramidRep {
 public:
  enum class Kind { associated, atom };

  static PyramidRep associated(FiniteMmSpace x);
  static PyramidRep atom_pyramid(AtomSequence a);

  Kind kind() const { return kind_; }
  const FiniteMmSpace& space() const { return *space_; }
  const AtomSequence& atoms() const { return *atoms_; }

 private:
  PyramidRep(Kind kind, std::optional<FiniteMmSpace> space,
             std::optional<AtomSequence> atoms)
      : kind_(kind), space_(std::move(space)), atoms_(std::move(atoms)) {}
  Kind kind_;
  std::optional<FiniteMmSpace> space_;
  std::optional<AtomSequence> atoms_;
};

// Separation of a pyramid: either a finite nonnegative rational or +infinity.
class SepValue {
 public:
  static SepValue finite(Rat v);
  static SepValue infinite();

  bool is_infinite() const { return !value_.has_value(); }
  const Rat& finite_value() const;

  friend bool operator==(const SepValue& a, const SepValue& b) {
    return a.value_ == b.value_;
  }

 private:
  explicit SepValue(std::optional<Rat> v) : value_(std::move(v)) {}
  std::optional<Rat> value_;
};

// Lipschitz order: true iff some map from x's points onto y's points is
// 1-Lipschitz and pushes the weights of x forward to exactly the weights of
// y.  Decided by backtracking over fibre assignments after cheap necessary
// checks (partial diameters and sep can only shrink under domination).
bool dominates(const FiniteMmSpace& x, const FiniteMmSpace& y);

// Membership of x in the pyramid of an atom sequence: the prescribed atoms
// embed into x's point weights, several atoms may share a point (their
// masses add within its weight).
bool in_p_a(const FiniteMmSpace& x, const AtomSequence& a);

// Separation of the atom pyramid at demands kappa.  Infinite iff the
// demands can be covered by the indivisible atoms plus arbitrarily
// divisible free mass; otherwise zero.  Never a positive finite value.
SepValue sep_atom_pyramid(const AtomSequence& a, const KappaTuple& kappa);

// A space lying in exactly one of the two atom pyramids (member_of_first
// says which): prescribed atoms at the points 2^-i plus m uniform atoms
// spread over [3/5, 1].  Requires the uniform atom u = free_mass/m to be
// smaller than (a'_k - a_k)/k at the first index where the sequences
// differ (errc::m_too_small), and a != a2 (errc::equal_sequences).
struct SeparatingWitness {
  FiniteMmSpace space;
  bool member_of_first;
};

SeparatingWitness separating_witness(const AtomSequence& a,
                                     const AtomSequence& a2, unsigned m);

}  // namespace mmkit
