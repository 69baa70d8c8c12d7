#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mmkit/invariants.hpp"
#include "mmkit/space.hpp"

namespace mmkit {

// Probability vector on a space's points; zero entries are allowed here,
// unlike space weights.  Throws domain_mismatch when entries are negative
// or do not sum to one, dimension_mismatch on a size conflict.
void check_measure(const std::vector<Rat>& mu, std::size_t n);

// Total variation distance (1/2) * sum |mu_i - nu_i|.
Rat tv(const std::vector<Rat>& mu, const std::vector<Rat>& nu);

// Prokhorov distance between mu and nu on the points of x: the exact
// infimum of eps such that mu(U_eps(A)) >= nu(A) - eps for every subset A,
// with U_eps the open eps-neighbourhood.  The infimum need not be attained
// (it can sit at a distance value approached from above); the scan over
// distance intervals returns it exactly either way.
Rat prokhorov(const FiniteMmSpace& x, const std::vector<Rat>& mu,
              const std::vector<Rat>& nu);

// Largest mass transportable from nu to mu along pairs at distance <=
// threshold (Strassen-style feasibility flow, exact arithmetic).
Rat max_flow_within(const FiniteMmSpace& x, const std::vector<Rat>& mu,
                    const std::vector<Rat>& nu, const Rat& threshold);

// Ky Fan distance between maps f, g from a finite probability space
// (masses) into x: the minimal eps >= 0 with m{d(f,g) > eps} <= eps.
Rat ky_fan(const std::vector<Rat>& masses, const std::vector<std::size_t>& f,
           const std::vector<std::size_t>& g, const FiniteMmSpace& x);

// Transport plan between two weight vectors: nonnegative matrix with row
// sums mu and column sums nu, all exact (errc::invalid_coupling).
class Coupling {
 public:
  static Coupling validate(std::vector<std::vector<Rat>> matrix,
                           const std::vector<Rat>& mu,
                           const std::vector<Rat>& nu);

  std::size_t rows() const { return matrix_.size(); }
  std::size_t cols() const { return matrix_.empty() ? 0 : matrix_[0].size(); }
  const Rat& at(std::size_t i, std::size_t j) const { return matrix_[i][j]; }
  const std::vector<std::vector<Rat>>& matrix() const { return matrix_; }

 private:
  explicit Coupling(std::vector<std::vector<Rat>> m) : matrix_(std::move(m)) {}
  std::vector<std::vector<Rat>> matrix_;
};

// Minimal eps such that a sub-collection of pi's support pairs carries mass
// >= 1 - eps and has pairwise distortion |d_X - d_Y| <= eps.  Any coupling
// yields a valid upper bound for the box distance this way.
Rat box_from_coupling(const FiniteMmSpace& x, const FiniteMmSpace& y,
                      const Coupling& pi);

// All vertices of the transportation polytope between mu and nu, reached by
// pivoting from the northwest-corner basis.  Returns nullopt when the count
// exceeds max_vertices.
std::optional<std::vector<Coupling>> vertex_couplings(
    const std::vector<Rat>& mu, const std::vector<Rat>& nu,
    std::size_t max_vertices);

struct BoxWitness {
  Coupling coupling;
  std::vector<std::pair<std::size_t, std::size_t>> kept_pairs;
  Rat eps;
};

// lower <= box distance <= upper always; exact means the two ends meet.
struct BoxBounds {
  Rat lower;
  Rat upper;
  bool exact;
  std::optional<BoxWitness> witness;
};

// Upper bound: minimum of box_from_coupling over the vertex couplings when
// the polytope has at most 10^4 of them, otherwise over a deterministic
// seed set improved by pivot local search (budget 1000 moves).  Lower
// bound: the largest eps on a fixed candidate grid falsifying one of the
// comparison inequalities that box distance < eps forces between the two
// partial-diameter profiles, or between the two sep values on a small
// demand grid.  For spaces with at most two points each the distance is
// computed exactly and the bounds coincide.
BoxBounds box_bounds(const FiniteMmSpace& x, const FiniteMmSpace& y,
                     unsigned jobs = 1);

// Observable-concentration upper bound; equals box_bounds(x, y).upper.
Rat dconc_upper(const FiniteMmSpace& x, const FiniteMmSpace& y,
                unsigned jobs = 1);

}  // namespace mmkit
