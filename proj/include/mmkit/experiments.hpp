#pragma once

#include <string>
#include <vector>

#include "mmkit/distances.hpp"
#include "mmkit/invariants.hpp"
#include "mmkit/space.hpp"

namespace mmkit {

// Two-point space ({0,1}, |.|, (1-eps, eps)); requires 0 < eps < 1.
FiniteMmSpace gen_y_eps(const Rat& eps);

// x with one extra point "z" at constant distance r from every original
// point, weights (1-eps) * mu plus eps at z.  Requires 0 < eps < 1 and
// r >= diam x (errc::r_too_small).
FiniteMmSpace gen_z_eps(const FiniteMmSpace& x, const Rat& eps, const Rat& r);

struct ReportAssertion {
  std::string label;
  Rat lhs;
  std::string op;  // "le" or "eq"
  Rat rhs;
  bool pass;
};

// Self-checking experiment table: every assertion stores both sides of its
// comparison so a saved report can be re-verified on load.  Serialization
// is deterministic; identical inputs give byte-identical reports.
struct ExperimentReport {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<ReportAssertion> assertions;

  bool passed() const;
};

// Table over (eps, r) of upper box bounds comparing the two-point limits:
// scale(Z_eps, 1/r) against Y_eps, and Z_eps against x itself.  Asserts
// the first column <= diam(x)/r and the second <= eps, the finite-scale
// form of both collapse limits.  Requires x to have at least two points.
ExperimentReport run_non_urysohn(const FiniteMmSpace& x,
                                 const std::vector<Rat>& eps_list,
                                 const std::vector<Rat>& r_list,
                                 unsigned jobs = 1);

// Table of sep(X_n, kappa - delta) for X_n = gen_z_eps(x, eps_n, diam x)
// over the eps schedule and delta grid; asserts every entry of the final
// row (smallest eps, each delta) equals sep(x, kappa).  Deltas must be
// positive and below the smallest demand.
ExperimentReport run_limit_formula(const FiniteMmSpace& x,
                                   const KappaTuple& kappa,
                                   const std::vector<Rat>& eps_schedule,
                                   const std::vector<Rat>& delta_grid);

// Recovers t from noisy copies: X_n = gen_z_eps(x, eps_n, diam x), with
// delta = (1 + max_atom(X_n))/2; asserts r_delta(scale(X_n,t))/r_delta(X_n)
// == t exactly, and the same for the sep ratio at a fixed small demand
// pair.  Requires x to have at least two points and t > 0.
ExperimentReport run_scale_recovery(const FiniteMmSpace& x, const Rat& t,
                                    const std::vector<Rat>& noise_schedule);

}  // namespace mmkit
