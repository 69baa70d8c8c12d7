#include "mmkit/invariants.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace mmkit {

KappaTuple::KappaTuple(std::vector<Rat> entries)
    : entries_(std::move(entries)) {
  if (entries_.size() < 2) {
    throw precondition_error(errc::invalid_kappa,
                             "need at least two demand entries");
  }
  for (const Rat& k : entries_) {
    if (k <= 0) {
      throw precondition_error(errc::invalid_kappa,
                               "demand " + rat_to_string(k) +
                                   " is not strictly positive");
    }
  }
}

Rat KappaTuple::sum() const {
  Rat s = 0;
  for (const Rat& k : entries_) s += k;
  return s;
}

KappaTuple KappaTuple::shifted(const Rat& s) const {
  std::vector<Rat> out = entries_;
  for (Rat& k : out) k += s;
  return KappaTuple(std::move(out));
}

namespace {

constexpr std::size_t kMaxPoints = 64;

void check_point_count(const FiniteMmSpace& x) {
  if (x.size() > kMaxPoints) {
    throw precondition_error(errc::dimension_mismatch,
                             "invariants support at most 64 points");
  }
}

using Mask = std::uint64_t;

// Adjacency masks of the graph with an edge where dist(i, j) <= threshold.
std::vector<Mask> threshold_adjacency(const FiniteMmSpace& x,
                                      const Rat& threshold) {
  std::vector<Mask> adj(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x.dist(i, j) <= threshold) {
        adj[i] |= Mask(1) << j;
        adj[j] |= Mask(1) << i;
      }
  return adj;
}

struct CliqueSearch {
  const std::vector<Rat>& weights;
  const std::vector<Mask>& adj;
  Rat best = 0;

  // Branch and bound; candidates is the set still extendable.
  void run(Mask candidates, Rat current) {
    if (current > best) best = current;
    if (candidates == 0) return;
    Rat potential = current;
    for (Mask m = candidates; m;) {
      std::size_t v = static_cast<std::size_t>(__builtin_ctzll(m));
      m &= m - 1;
      potential += weights[v];
    }
    if (potential <= best) return;
    std::size_t v = static_cast<std::size_t>(__builtin_ctzll(candidates));
    Mask rest = candidates & ~(Mask(1) << v);
    run(candidates & adj[v] & ~(Mask(1) << v), current + weights[v]);
    run(rest, current);
  }
};

// Largest total weight of a set of points with pairwise distance <= d.
Rat max_clique_weight(const FiniteMmSpace& x, const Rat& d) {
  auto adj = threshold_adjacency(x, d);
  CliqueSearch search{x.weights(), adj};
  Mask all = x.size() == kMaxPoints ? ~Mask(0)
                                    : (Mask(1) << x.size()) - 1;
  search.run(all, 0);
  return search.best;
}

std::vector<Rat> distinct_distances_ascending(const FiniteMmSpace& x) {
  std::set<Rat> vals;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      vals.insert(x.dist(i, j));
  return std::vector<Rat>(vals.begin(), vals.end());
}

// One group's outstanding demand.  Satisfied when remaining < 0, or
// remaining == 0 in weak mode; strict mode requires a positive overshoot.
struct Demand {
  Rat remaining;
  bool strict;

  bool satisfied() const { return remaining < 0 || (remaining == 0 && !strict); }
};

using DemandKey = std::vector<std::pair<Rat, bool>>;

// Feasibility of filling all groups from the components of the conflict
// graph at one separation threshold.  Points of one component may land in
// different groups only if no conflict edge joins them; unused points do
// not constrain anything.  States repeat across components, so results are
// memoized on (component index, clamped demands).
class SepFeasibility {
 public:
  SepFeasibility(const FiniteMmSpace& x, const Rat& threshold,
                 std::size_t groups)
      : x_(x), groups_(groups) {
    const std::size_t n = x.size();
    conflict_.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && x.dist(i, j) < threshold) conflict_[i][j] = 1;
    std::vector<char> seen(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[i]) continue;
      std::vector<std::size_t> comp;
      std::vector<std::size_t> stack{i};
      seen[i] = 1;
      while (!stack.empty()) {
        std::size_t p = stack.back();
        stack.pop_back();
        comp.push_back(p);
        for (std::size_t q = 0; q < n; ++q)
          if (conflict_[p][q] && !seen[q]) {
            seen[q] = 1;
            stack.push_back(q);
          }
      }
      std::sort(comp.begin(), comp.end());
      comps_.push_back(std::move(comp));
    }
    memo_.resize(comps_.size());
    suffix_weight_.assign(comps_.size() + 1, Rat(0));
    for (std::size_t k = comps_.size(); k-- > 0;) {
      Rat w = suffix_weight_[k + 1];
      for (std::size_t p : comps_[k]) w += x.weight(p);
      suffix_weight_[k] = w;
    }
  }

  bool feasible(const std::vector<Rat>& demands, bool strict) {
    std::vector<Demand> d;
    d.reserve(demands.size());
    for (const Rat& r : demands) d.push_back(Demand{r, strict});
    clamp(d);
    return solve(0, d);
  }

 private:
  static void clamp(std::vector<Demand>& d) {
    for (Demand& g : d)
      if (g.remaining < 0 || (g.remaining == 0 && !g.strict))
        g = Demand{Rat(0), false};
  }

  bool solve(std::size_t k, const std::vector<Demand>& demands) {
    Rat outstanding = 0;
    bool any_strict = false;
    bool done = true;
    for (const Demand& g : demands) {
      if (g.satisfied()) continue;
      done = false;
      outstanding += g.remaining;
      any_strict = any_strict || g.strict;
    }
    if (done) return true;
    if (k == comps_.size()) return false;
    if (suffix_weight_[k] < outstanding) return false;
    if (suffix_weight_[k] == outstanding && any_strict) return false;
    DemandKey key;
    key.reserve(demands.size());
    for (const Demand& g : demands) key.emplace_back(g.remaining, g.strict);
    auto it = memo_[k].find(key);
    if (it != memo_[k].end()) return it->second;
    std::vector<int> labels(comps_[k].size(), -1);
    std::vector<Rat> added(groups_, Rat(0));
    bool result = assign(k, 0, labels, added, demands);
    memo_[k].emplace(std::move(key), result);
    return result;
  }

  bool assign(std::size_t k, std::size_t idx, std::vector<int>& labels,
              std::vector<Rat>& added, const std::vector<Demand>& demands) {
    const auto& comp = comps_[k];
    if (idx == comp.size()) {
      std::vector<Demand> next = demands;
      for (std::size_t g = 0; g < groups_; ++g) next[g].remaining -= added[g];
      clamp(next);
      return solve(k + 1, next);
    }
    std::size_t p = comp[idx];
    for (int g = 0; g < static_cast<int>(groups_); ++g) {
      bool ok = true;
      for (std::size_t prev = 0; prev < idx && ok; ++prev)
        if (labels[prev] >= 0 && labels[prev] != g &&
            conflict_[comp[prev]][p])
          ok = false;
      if (!ok) continue;
      labels[idx] = g;
      added[g] += x_.weight(p);
      if (assign(k, idx + 1, labels, added, demands)) return true;
      added[g] -= x_.weight(p);
      labels[idx] = -1;
    }
    labels[idx] = -1;
    return assign(k, idx + 1, labels, added, demands);
  }

  const FiniteMmSpace& x_;
  std::size_t groups_;
  std::vector<std::vector<char>> conflict_;
  std::vector<std::vector<std::size_t>> comps_;
  std::vector<Rat> suffix_weight_;
  std::vector<std::map<DemandKey, bool>> memo_;
};

// Shift values at which group-sum comparisons can flip: subset weights
// minus demands, restricted to [0, cap].
std::vector<Rat> shift_candidates(const FiniteMmSpace& x,
                                  const KappaTuple& kappa, const Rat& cap) {
  const std::size_t n = x.size();
  if (n > 20) {
    throw precondition_error(errc::dimension_mismatch,
                             "sep_profile supports at most 20 points");
  }
  std::set<Rat> sums;
  std::vector<Rat> acc(std::size_t(1) << n, Rat(0));
  for (std::size_t mask = 1; mask < acc.size(); ++mask) {
    std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
    acc[mask] = acc[mask & (mask - 1)] + x.weight(low);
    sums.insert(acc[mask]);
  }
  std::set<Rat> cands;
  cands.insert(Rat(0));
  cands.insert(cap);
  for (const Rat& w : sums)
    for (const Rat& k : kappa.entries()) {
      Rat c = w - k;
      if (c > 0 && c < cap) cands.insert(c);
    }
  return std::vector<Rat>(cands.begin(), cands.end());
}

}  // namespace

Rat partial_diam(const FiniteMmSpace& x, const Rat& alpha) {
  check_point_count(x);
  if (alpha < 0 || alpha > 1) {
    throw precondition_error(errc::alpha_out_of_range,
                             "alpha = " + rat_to_string(alpha));
  }
  if (alpha == 0) return Rat(0);
  if (max_clique_weight(x, Rat(0)) >= alpha) return Rat(0);
  for (const Rat& d : distinct_distances_ascending(x))
    if (max_clique_weight(x, d) >= alpha) return d;
  return x.diameter();  // unreachable: the full set has mass 1 >= alpha
}

StepFunction partial_diam_profile(const FiniteMmSpace& x, const Rat& upper) {
  check_point_count(x);
  if (upper <= 0 || upper > 1) {
    throw precondition_error(errc::alpha_out_of_range,
                             "profile upper bound = " + rat_to_string(upper));
  }
  std::vector<Rat> thresholds{Rat(0)};
  for (Rat& d : distinct_distances_ascending(x))
    thresholds.push_back(std::move(d));
  std::vector<Rat> breaks, values;
  Rat cursor = 0;
  for (const Rat& d : thresholds) {
    Rat reach = max_clique_weight(x, d);
    if (reach <= cursor) continue;
    values.push_back(d);
    if (reach >= upper) break;
    breaks.push_back(reach);
    cursor = reach;
  }
  return StepFunction(Rat(0), upper, std::move(breaks), std::move(values));
}

Rat sep(const FiniteMmSpace& x, const KappaTuple& kappa) {
  check_point_count(x);
  if (kappa.sum() > 1) return Rat(0);
  std::vector<Rat> thresholds = distinct_distances_ascending(x);
  for (std::size_t i = thresholds.size(); i-- > 0;) {
    SepFeasibility search(x, thresholds[i], kappa.groups());
    if (search.feasible(kappa.entries(), /*strict=*/false))
      return thresholds[i];
  }
  return Rat(0);
}

StepFunction sep_profile(const FiniteMmSpace& x, const KappaTuple& kappa,
                         const Rat& shift_upper) {
  check_point_count(x);
  if (shift_upper <= 0) {
    throw precondition_error(errc::out_of_domain,
                             "shift upper bound must be positive");
  }
  std::vector<Rat> cands = shift_candidates(x, kappa, shift_upper);
  std::vector<Rat> thresholds = distinct_distances_ascending(x);
  std::vector<Rat> breaks, values;
  Rat cursor = 0;  // profile covered on [0, cursor]
  for (std::size_t i = thresholds.size(); i-- > 0 && cursor < shift_upper;) {
    SepFeasibility search(x, thresholds[i], kappa.groups());
    auto feasible_at = [&](const Rat& s) {
      if (kappa.sum() + s * Rat(kappa.groups()) > 1) return false;
      return search.feasible(kappa.shifted(s).entries(), /*strict=*/false);
    };
    // Largest feasible candidate at or beyond the cursor; feasibility is
    // monotone nonincreasing in the shift, and the cursor (0 or a previous
    // flip value) is itself a candidate.
    if (!feasible_at(cursor)) continue;
    std::size_t lo = static_cast<std::size_t>(
        std::lower_bound(cands.begin(), cands.end(), cursor) - cands.begin());
    std::size_t hi = cands.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi + 1) / 2;
      if (feasible_at(cands[mid]))
        lo = mid;
      else
        hi = mid - 1;
    }
    Rat tau = cands[lo];
    // A segment needs positive length; a value held only at a single shift
    // (zero slack) contributes nothing, including at shift 0.
    if (tau <= cursor) continue;
    values.push_back(thresholds[i]);
    if (tau >= shift_upper) {
      cursor = shift_upper;
      break;
    }
    breaks.push_back(tau);
    cursor = tau;
  }
  if (cursor < shift_upper) values.push_back(Rat(0));
  return StepFunction(Rat(0), shift_upper, std::move(breaks),
                      std::move(values));
}

}  // namespace mmkit
