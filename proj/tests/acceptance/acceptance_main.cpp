// Acceptance gate: one line per criterion, exit 0 only if every line passes.
// All checks are exact rational comparisons; the stated time limits are part
// of the pass condition.

#include <chrono>
#include <cstddef>
#include <exception>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "mmkit/bundle.hpp"
#include "mmkit/distances.hpp"
#include "mmkit/errors.hpp"
#include "mmkit/experiments.hpp"
#include "mmkit/invariants.hpp"
#include "mmkit/pyramids.hpp"
#include "mmkit/rational.hpp"
#include "mmkit/space.hpp"

#include "support/corpus.hpp"
#include "support/oracles.hpp"

using mmkit::AtomSequence;
using mmkit::FiniteMmSpace;
using mmkit::KappaTuple;
using mmkit::Rat;
using mmkit::ScaleFactor;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
};

void fail(Outcome& out, const std::string& note) {
  out.pass = false;
  if (out.note.empty()) out.note = note;
}

// Shared corpus for the exhaustive criteria: the fixed fixtures plus random
// spaces of every size from 2 to 8.
std::vector<FiniteMmSpace> small_corpus() {
  std::vector<FiniteMmSpace> spaces;
  spaces.push_back(testkit::one_point());
  spaces.push_back(testkit::y03());
  spaces.push_back(testkit::x3());
  std::mt19937_64 rng(2026);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 3; ++rep) {
      spaces.push_back(testkit::random_space(rng, n));
    }
  }
  return spaces;
}

const std::vector<Rat>& scale_factors() {
  static const std::vector<Rat> t = {Rat(1, 3), Rat(1, 2), Rat(2), Rat(7),
                                     Rat(10)};
  return t;
}

Outcome criterion_homogeneity() {
  Outcome out;
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const FiniteMmSpace x = testkit::random_space(rng, n);
    const mmkit::Delta delta((Rat(1) + x.max_weight()) / 2);
    const KappaTuple kappa(
        {Rat(1 + rng() % 4, 8), Rat(1 + rng() % 4, 8)});
    const Rat alpha(rng() % 101, 100);
    const Rat rd = mmkit::r_delta(x, delta);
    const Rat sp = mmkit::sep(x, kappa);
    const Rat pd = mmkit::partial_diam(x, alpha);
    for (const Rat& t : scale_factors()) {
      const FiniteMmSpace tx = scale(x, ScaleFactor(t));
      if (mmkit::r_delta(tx, delta) != t * rd) {
        fail(out, "r_delta not homogeneous, trial " + std::to_string(trial));
      }
      if (mmkit::sep(tx, kappa) != t * sp) {
        fail(out, "sep not homogeneous, trial " + std::to_string(trial));
      }
      if (mmkit::partial_diam(tx, alpha) != t * pd) {
        fail(out,
             "partial_diam not homogeneous, trial " + std::to_string(trial));
      }
    }
  }
  return out;
}

Outcome criterion_invariant_oracles() {
  Outcome out;
  for (const FiniteMmSpace& x : small_corpus()) {
    for (int j = 0; j <= 20; ++j) {
      const Rat alpha(j, 20);
      if (mmkit::partial_diam(x, alpha) !=
          testkit::oracle_partial_diam(x, alpha)) {
        fail(out, "partial_diam disagrees at alpha " + std::to_string(j) +
                      "/20");
      }
    }
    std::vector<KappaTuple> demands;
    for (int a = 1; a <= 4; ++a) {
      for (int b = 1; b <= 4; ++b) {
        demands.emplace_back(std::vector<Rat>{Rat(a, 8), Rat(b, 8)});
      }
    }
    for (int a = 1; a <= 2; ++a) {
      for (int b = 1; b <= 2; ++b) {
        for (int c = 1; c <= 2; ++c) {
          demands.emplace_back(
              std::vector<Rat>{Rat(a, 8), Rat(b, 8), Rat(c, 8)});
        }
      }
    }
    for (const KappaTuple& kappa : demands) {
      if (mmkit::sep(x, kappa) != testkit::oracle_sep(x, kappa)) {
        fail(out, "sep disagrees with the oracle");
      }
    }
  }
  return out;
}

Outcome criterion_prokhorov_oracle() {
  Outcome out;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    const FiniteMmSpace x = testkit::random_space(rng, n);
    const auto mu = testkit::random_measure(rng, n);
    const auto nu = testkit::random_measure(rng, n);
    if (mmkit::prokhorov(x, mu, nu) != testkit::oracle_prokhorov(x, mu, nu)) {
      fail(out, "flow value disagrees, trial " + std::to_string(trial));
    }
  }
  return out;
}

FiniteMmSpace with_weights(const FiniteMmSpace& x,
                           const std::vector<Rat>& weights) {
  FiniteMmSpace::Data data;
  data.labels = x.labels();
  data.dist = x.dist_matrix();
  data.weights = weights;
  return FiniteMmSpace::validate(std::move(data));
}

Outcome criterion_distance_chain() {
  Outcome out;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    const FiniteMmSpace x = testkit::random_space(rng, n);
    const auto mu = testkit::random_measure(rng, n, true);
    const auto nu = testkit::random_measure(rng, n, true);
    const Rat p = mmkit::prokhorov(x, mu, nu);
    const Rat t = mmkit::tv(mu, nu);
    const auto b = mmkit::box_bounds(with_weights(x, mu), with_weights(x, nu));
    if (!(b.upper <= 2 * p)) {
      fail(out, "box upper exceeds twice prokhorov, trial " +
                    std::to_string(trial));
    }
    if (!(2 * p <= 2 * t)) {
      fail(out, "prokhorov exceeds total variation, trial " +
                    std::to_string(trial));
    }
  }
  return out;
}

Outcome criterion_bundle_round_trip() {
  Outcome out;
  int exercised = 0;
  for (const FiniteMmSpace& x : small_corpus()) {
    if (!(x.max_weight() < Rat(9, 10))) continue;
    ++exercised;
    const mmkit::Delta delta((Rat(1) + x.max_weight()) / 2);
    const auto p = mmkit::trivialize(x, delta);
    const FiniteMmSpace back =
        mmkit::untrivialize(p, ScaleFactor(mmkit::r_delta(x, delta)));
    if (!mmkit::is_mm_isomorphic(back, x)) {
      fail(out, "round trip lost the space");
    }
  }
  if (exercised == 0) fail(out, "corpus had no space below the atom bound");
  return out;
}

Outcome criterion_non_urysohn() {
  Outcome out;
  const auto report = mmkit::run_non_urysohn(
      testkit::x3(), {Rat(1, 10), Rat(1, 100)},
      {Rat(10), Rat(100), Rat(1000)});
  if (!report.passed()) fail(out, "a report assertion failed");
  if (report.rows.size() != 6 || report.assertions.size() != 12) {
    fail(out, "unexpected report shape");
  }
  return out;
}

Outcome criterion_limit_formula() {
  Outcome out;
  std::vector<Rat> schedule;
  for (int n = 2; n <= 64; ++n) schedule.emplace_back(1, n);
  const auto report = mmkit::run_limit_formula(
      testkit::x3(), KappaTuple({Rat(1, 4), Rat(1, 4)}), schedule,
      {Rat(1, 8), Rat(1, 16), Rat(1, 32)});
  if (!report.passed()) fail(out, "a report assertion failed");
  if (report.rows.empty()) {
    fail(out, "empty report");
    return out;
  }
  const auto& final_row = report.rows.back();
  for (std::size_t j = 1; j < final_row.size(); ++j) {
    if (final_row[j] != "3") fail(out, "final row entry is not 3");
  }
  return out;
}

Outcome criterion_dichotomy() {
  Outcome out;
  std::mt19937_64 rng(8);
  int membership_checks = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const long long den = 4 * (1 + static_cast<long long>(rng() % 3));
    const AtomSequence a =
        AtomSequence::validate(testkit::random_atoms(rng, 1 + rng() % 4, den));
    std::vector<Rat> demands;
    const std::size_t groups = 2 + rng() % 2;
    for (std::size_t g = 0; g < groups; ++g) {
      demands.emplace_back(1 + static_cast<long long>(rng() % den), den);
    }
    const KappaTuple kappa(demands);
    const auto v = mmkit::sep_atom_pyramid(a, kappa);
    if (!v.is_infinite() && v.finite_value() != 0) {
      fail(out, "positive finite value, trial " + std::to_string(trial));
    }
    if (v.is_infinite() != testkit::oracle_atom_cover(a, kappa)) {
      fail(out, "dichotomy disagrees with the cover oracle");
    }
    if (kappa.sum() < 1) {
      ++membership_checks;
      if (mmkit::in_pi_kappa(mmkit::PyramidRep::atom_pyramid(a), kappa)) {
        fail(out, "atom pyramid claimed membership in the fibre");
      }
    }
  }
  if (membership_checks == 0) fail(out, "no membership check ran");
  return out;
}

Outcome criterion_witnesses() {
  Outcome out;
  std::mt19937_64 rng(9);
  int done = 0;
  for (int trial = 0; trial < 500 && done < 50; ++trial) {
    const AtomSequence a =
        AtomSequence::validate(testkit::random_atoms(rng, 1 + rng() % 3, 8));
    const AtomSequence a2 =
        AtomSequence::validate(testkit::random_atoms(rng, 1 + rng() % 3, 8));
    if (a.entries() == a2.entries()) continue;
    bool built = false;
    mmkit::SeparatingWitness w{testkit::one_point(), false};
    for (unsigned m = 8; m <= (1u << 16) && !built; m *= 2) {
      try {
        w = mmkit::separating_witness(a, a2, m);
        built = true;
      } catch (const mmkit::precondition_error&) {
      }
    }
    if (!built) {
      fail(out, "no witness found, trial " + std::to_string(trial));
      continue;
    }
    ++done;
    const AtomSequence& inside = w.member_of_first ? a : a2;
    const AtomSequence& outside = w.member_of_first ? a2 : a;
    if (!mmkit::in_p_a(w.space, inside)) {
      fail(out, "witness missed its own pyramid");
    }
    if (mmkit::in_p_a(w.space, outside)) {
      fail(out, "witness failed to separate");
    }
  }
  if (done < 50) fail(out, "fewer than 50 distinct pairs drawn");
  return out;
}

Outcome criterion_scale_recovery() {
  Outcome out;
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    const FiniteMmSpace x = testkit::random_space(rng, n);
    const Rat t(1 + static_cast<long long>(rng() % 9),
                1 + static_cast<long long>(rng() % 5));
    const auto report =
        mmkit::run_scale_recovery(x, t, {Rat(1, 10), Rat(1, 100)});
    if (!report.passed()) {
      fail(out, "recovery failed, trial " + std::to_string(trial));
    }
  }
  return out;
}

struct Criterion {
  const char* text;
  double limit_seconds;  // 0 means no stated limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"homogeneity of r_delta, sep and partial_diam", 60.0,
       criterion_homogeneity},
      {"sep and partial_diam match brute-force oracles", 300.0,
       criterion_invariant_oracles},
      {"prokhorov flow value matches subset enumeration", 300.0,
       criterion_prokhorov_oracle},
      {"box upper <= 2*prokhorov <= 2*tv on shared metrics", 0.0,
       criterion_distance_chain},
      {"bundle trivialization round trip is isomorphic", 0.0,
       criterion_bundle_round_trip},
      {"non-urysohn collapse bounds hold at every cell", 60.0,
       criterion_non_urysohn},
      {"limit formula final row equals sep exactly", 0.0,
       criterion_limit_formula},
      {"atom pyramid sep is zero or infinite, never in a fibre", 0.0,
       criterion_dichotomy},
      {"separating witnesses land in exactly one pyramid", 0.0,
       criterion_witnesses},
      {"scale recovery returns t exactly", 0.0, criterion_scale_recovery},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.note = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      out.pass = false;
      if (out.note.empty()) out.note = "time limit exceeded";
    }
    if (!out.pass) ++failures;
    std::cout << "criterion " << (i + 1) << " (" << c.text
              << "): " << (out.pass ? "PASS" : "FAIL");
    std::cout << " [" << seconds << "s]";
    if (!out.note.empty()) std::cout << " " << out.note;
    std::cout << "\n";
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size()
            << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
