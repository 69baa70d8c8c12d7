#include "mmkit/pyramids.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "mmkit/errors.hpp"

namespace mmkit {

AtomSequence AtomSequence::validate(std::vector<Rat> entries) {
  Rat sum(0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i] < 0) {
      throw validation_error(errc::invalid_atom_sequence,
                             "atom sequence entries must be nonnegative");
    }
    if (i > 0 && entries[i] > entries[i - 1]) {
      throw validation_error(errc::invalid_atom_sequence,
                             "atom sequence must be nonincreasing");
    }
    sum += entries[i];
  }
  if (sum > 1) {
    throw validation_error(errc::invalid_atom_sequence,
                           "atom sequence mass exceeds 1");
  }
  // Zero entries are necessarily a trailing run; drop them.
  while (!entries.empty() && entries.back() == 0) entries.pop_back();
  return AtomSequence(std::move(entries), std::move(sum));
}

PyramidRep PyramidRep::associated(FiniteMmSpace x) {
  return PyramidRep(Kind::associated, std::move(x), std::nullopt);
}

PyramidRep PyramidRep::atom_pyramid(AtomSequence a) {
  return PyramidRep(Kind::atom, std::nullopt, std::move(a));
}

SepValue SepValue::finite(Rat v) {
  if (v < 0) {
    throw precondition_error(errc::out_of_domain,
                             "finite separation values are nonnegative");
  }
  return SepValue(std::move(v));
}

SepValue SepValue::infinite() { return SepValue(std::nullopt); }

const Rat& SepValue::finite_value() const {
  if (!value_.has_value()) {
    throw precondition_error(errc::out_of_domain,
                             "separation value is infinite");
  }
  return *value_;
}

namespace {

// Backtracking state for the Lipschitz order: x-points in descending weight
// order get mapped one by one onto y-points, tracking the remaining capacity
// of each fibre.  At a full assignment every y-capacity is exactly consumed
// (the totals agree), so the pushforward condition holds automatically.
class DominationSearch {
 public:
  DominationSearch(const FiniteMmSpace& x, const FiniteMmSpace& y)
      : x_(x), y_(y), remaining_(y.weights()), image_(x.size()) {
    order_.resize(x.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) {
                       return x.weight(a) > x.weight(b);
                     });
  }

  bool run() { return place(0); }

 private:
  bool place(std::size_t k) {
    if (k == order_.size()) return true;
    const std::size_t p = order_[k];
    std::vector<std::size_t> tried;
    for (std::size_t q = 0; q < y_.size(); ++q) {
      if (remaining_[q] < x_.weight(p)) continue;
      if (!lipschitz_ok(k, p, q)) continue;
      bool mirrored = false;
      for (std::size_t t : tried) {
        if (interchangeable(k, t, q)) {
          mirrored = true;
          break;
        }
      }
      if (mirrored) continue;
      tried.push_back(q);
      remaining_[q] -= x_.weight(p);
      image_[p] = q;
      if (place(k + 1)) return true;
      remaining_[q] += x_.weight(p);
    }
    return false;
  }

  bool lipschitz_ok(std::size_t k, std::size_t p, std::size_t q) const {
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t p2 = order_[j];
      if (y_.dist(q, image_[p2]) > x_.dist(p, p2)) return false;
    }
    return true;
  }

  // Branches through q and q2 mirror each other when swapping the two
  // fibres is a self-isometry of y, both are still untouched (so earlier
  // images stay fixed under the swap), and their capacities agree.
  bool interchangeable(std::size_t k, std::size_t q, std::size_t q2) const {
    if (y_.weight(q) != y_.weight(q2)) return false;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t e = image_[order_[j]];
      if (e == q || e == q2) return false;
    }
    for (std::size_t r = 0; r < y_.size(); ++r) {
      if (r == q || r == q2) continue;
      if (y_.dist(q, r) != y_.dist(q2, r)) return false;
    }
    return true;
  }

  const FiniteMmSpace& x_;
  const FiniteMmSpace& y_;
  std::vector<Rat> remaining_;
  std::vector<std::size_t> image_;
  std::vector<std::size_t> order_;
};

}  // namespace

bool dominates(const FiniteMmSpace& x, const FiniteMmSpace& y) {
  if (y.size() > x.size()) return false;
  if (y.diameter() > x.diameter()) return false;
  // Partial diameters and sep only shrink along the order; screen on small
  // grids before searching for a witness map.
  for (int j = 1; j <= 16; ++j) {
    const Rat alpha(j, 16);
    if (partial_diam(y, alpha) > partial_diam(x, alpha)) return false;
  }
  {
    const KappaTuple quarter({Rat(1, 4), Rat(1, 4)});
    const KappaTuple half({Rat(1, 2), Rat(1, 2)});
    if (sep(y, quarter) > sep(x, quarter)) return false;
    if (sep(y, half) > sep(x, half)) return false;
  }
  return DominationSearch(x, y).run();
}

namespace {

// Bin packing of the prescribed atoms into the point weights.  Branches on
// the distinct remaining capacities only: bins of equal remaining capacity
// lead to subproblems that differ by a bin permutation.
bool pack(const AtomSequence& a, std::size_t i, std::vector<Rat>& remaining) {
  if (i == a.size()) return true;
  std::set<Rat> tried;
  for (Rat& cap : remaining) {
    if (cap < a[i]) continue;
    if (!tried.insert(cap).second) continue;
    cap -= a[i];
    if (pack(a, i + 1, remaining)) return true;
    cap += a[i];
  }
  return false;
}

}  // namespace

bool in_p_a(const FiniteMmSpace& x, const AtomSequence& a) {
  std::vector<Rat> remaining = x.weights();
  return pack(a, 0, remaining);
}

namespace {

// Coverage search for the atom pyramid: each atom either feeds one demand
// group or is left unused, and whatever demand is still uncovered at the end
// must fit inside the freely divisible mass.  The group state is the
// multiset of outstanding deficits, so branching is restricted to distinct
// deficit values.
class CoverSearch {
 public:
  CoverSearch(const AtomSequence& a, const KappaTuple& kappa)
      : a_(a), deficits_(kappa.entries()), free_(a.free_mass()) {
    suffix_.assign(a_.size() + 1, Rat(0));
    for (std::size_t i = a_.size(); i-- > 0;) {
      suffix_[i] = suffix_[i + 1] + a_[i];
    }
  }

  bool coverable() { return cover(0); }

 private:
  bool cover(std::size_t i) {
    Rat outstanding(0);
    for (const Rat& d : deficits_) outstanding += d;
    if (outstanding <= free_) return true;
    if (i == a_.size()) return false;
    if (outstanding > free_ + suffix_[i]) return false;
    std::set<Rat> tried;
    for (Rat& d : deficits_) {
      if (d == 0) continue;
      if (!tried.insert(d).second) continue;
      const Rat saved = d;
      d = rat_max(Rat(0), d - a_[i]);
      if (cover(i + 1)) return true;
      d = saved;
    }
    return cover(i + 1);  // leave atom i unused
  }

  const AtomSequence& a_;
  std::vector<Rat> deficits_;
  Rat free_;
  std::vector<Rat> suffix_;
};

}  // namespace

SepValue sep_atom_pyramid(const AtomSequence& a, const KappaTuple& kappa) {
  // Coverable demands survive every uniform demand reduction, so the
  // separation is unbounded; otherwise it is zero.  No positive finite value
  // occurs: the spaces of the pyramid have atoms of the prescribed sizes at
  // arbitrarily small diameter.
  if (CoverSearch(a, kappa).coverable()) return SepValue::infinite();
  return SepValue::finite(Rat(0));
}

SeparatingWitness separating_witness(const AtomSequence& a,
                                     const AtomSequence& a2, unsigned m) {
  if (a.entries() == a2.entries()) {
    throw precondition_error(errc::equal_sequences,
                             "the two atom sequences coincide");
  }
  if (m == 0) {
    throw precondition_error(errc::m_too_small,
                             "at least one diffuse point is required");
  }
  // First index (0-based r) where the zero-padded sequences differ.  The
  // witness is built on the smaller side; packing the larger sequence would
  // need r+1 points carrying more mass than any r+1 points of the witness
  // hold, as long as the diffuse atom is small against the gap.
  std::size_t r = 0;
  const Rat zero(0);
  auto at = [&zero](const AtomSequence& s, std::size_t i) -> const Rat& {
    return i < s.size() ? s[i] : zero;
  };
  while (at(a, r) == at(a2, r)) ++r;
  const bool first_is_smaller = at(a, r) < at(a2, r);
  const AtomSequence& base = first_is_smaller ? a : a2;
  const AtomSequence& big = first_is_smaller ? a2 : a;
  const Rat gap = at(big, r) - at(base, r);

  const Rat u = base.free_mass() / m;
  if (Rat(r + 1) * u >= gap) {
    throw precondition_error(
        errc::m_too_small,
        "diffuse atom too large for the gap between the sequences");
  }

  std::vector<Rat> positions;
  std::vector<Rat> weights;
  Rat pos(1);
  for (std::size_t i = 0; i < base.size(); ++i) {
    pos /= 2;
    positions.push_back(pos);
    weights.push_back(base[i]);
  }
  if (u > 0) {
    // m points spread evenly over [3/5, 1]; a single point sits at 3/5.
    const Rat lo(3, 5);
    const Rat step = m > 1 ? Rat(2, 5) / (m - 1) : Rat(0);
    for (unsigned j = 0; j < m; ++j) {
      positions.push_back(lo + step * j);
      weights.push_back(u);
    }
  }

  FiniteMmSpace::Data data;
  const std::size_t n = positions.size();
  data.labels.reserve(n);
  for (const Rat& p : positions) data.labels.push_back(rat_to_string(p));
  data.dist.assign(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      data.dist[i][j] = rat_abs(positions[i] - positions[j]);
    }
  }
  data.weights = std::move(weights);
  return SeparatingWitness{FiniteMmSpace::validate(std::move(data)),
                           first_is_smaller};
}

}  // namespace mmkit
