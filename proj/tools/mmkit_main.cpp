#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mmkit/bundle.hpp"
#include "mmkit/distances.hpp"
#include "mmkit/errors.hpp"
#include "mmkit/experiments.hpp"
#include "mmkit/invariants.hpp"
#include "mmkit/io.hpp"
#include "mmkit/pyramids.hpp"
#include "mmkit/space.hpp"

namespace {

using mmkit::Json;
using mmkit::Rat;

struct GlobalOpts {
  std::string in;
  std::string in2;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

mmkit::FiniteMmSpace load_space(const std::string& path, const char* flag) {
  if (path.empty()) {
    throw mmkit::validation_error(mmkit::errc::parse_error,
                                  std::string(flag) +
                                      " FILE.json is required here");
  }
  return mmkit::space_from_json(mmkit::load_json_file(path));
}

// tv and prokhorov compare two measures on one metric space, given as two
// space documents that must agree on labels and distances.
void require_same_metric(const mmkit::FiniteMmSpace& x,
                         const mmkit::FiniteMmSpace& y) {
  if (x.labels() != y.labels() || x.dist_matrix() != y.dist_matrix()) {
    throw mmkit::validation_error(
        mmkit::errc::domain_mismatch,
        "the two documents must share labels and distances");
  }
}

mmkit::KappaTuple make_kappa(const std::string& text) {
  if (text.empty()) {
    throw mmkit::validation_error(mmkit::errc::parse_error,
                                  "--kappa k0,k1,... is required here");
  }
  return mmkit::KappaTuple(mmkit::parse_rational_list(text));
}

mmkit::AtomSequence make_atoms(const std::string& text, const char* flag) {
  if (text.empty()) {
    throw mmkit::validation_error(mmkit::errc::parse_error,
                                  std::string(flag) +
                                      " a1,a2,... is required here");
  }
  return mmkit::AtomSequence::validate(mmkit::parse_rational_list(text));
}

void emit_text(const GlobalOpts& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    mmkit::write_text_file(g.out, text);
  }
}

void emit_json(const GlobalOpts& g, const Json& doc) {
  emit_text(g, doc.dump(2) + "\n");
}

void require_json_format(const GlobalOpts& g) {
  if (g.format != "json") {
    throw mmkit::validation_error(
        mmkit::errc::parse_error,
        "csv output is only available for profiles and experiment reports");
  }
}

void emit_profile(const GlobalOpts& g, const mmkit::StepFunction& f) {
  if (g.format == "csv") {
    emit_text(g, mmkit::step_function_to_csv(f));
  } else {
    emit_json(g, mmkit::step_function_to_json(f));
  }
}

// Emits the report in the requested format; a failed internal assertion is
// the one condition with a dedicated exit code (3).
void emit_report(const GlobalOpts& g, const mmkit::ExperimentReport& report,
                 int& exit_code) {
  if (g.format == "csv") {
    emit_text(g, mmkit::report_to_csv(report));
  } else {
    emit_json(g, mmkit::report_to_json(report));
  }
  if (!report.passed()) exit_code = 3;
}

std::vector<std::size_t> index_vector(const Json& arr, const char* where) {
  if (!arr.is_array()) {
    throw mmkit::validation_error(mmkit::errc::parse_error,
                                  std::string(where) + " must be an array");
  }
  std::vector<std::size_t> out;
  for (const Json& v : arr) {
    if (!v.is_number_unsigned()) {
      throw mmkit::validation_error(
          mmkit::errc::parse_error,
          std::string(where) + " must hold nonnegative point indices");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts g;
  int exit_code = 0;

  CLI::App app{"exact invariants, distances and bundle maps for finite "
               "metric measure spaces"};
  app.require_subcommand(1);
  app.add_option("--in", g.in, "input space document");
  app.add_option("--in2", g.in2, "second input space document");
  app.add_option("--out", g.out, "write output here instead of stdout");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed,
                 "reserved for randomized corpora; all commands here are "
                 "deterministic");
  app.add_option("--jobs", g.jobs, "worker threads for bound searches")
      ->check(CLI::Range(1u, 256u));

  // validate
  auto* validate = app.add_subcommand(
      "validate", "check a space document and echo its canonical form");
  validate->fallthrough();
  validate->callback([&] {
    require_json_format(g);
    emit_json(g, mmkit::space_to_json(load_space(g.in, "--in")));
  });

  // invariant
  auto* invariant =
      app.add_subcommand("invariant", "partial diameter, sep and profiles");
  invariant->fallthrough();
  invariant->require_subcommand(1);

  static std::string alpha_text;
  auto* inv_diam = invariant->add_subcommand(
      "diam", "smallest diameter of a subset of measure >= alpha");
  inv_diam->fallthrough();
  inv_diam->add_option("--alpha", alpha_text, "mass threshold p/q")
      ->required();
  inv_diam->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    const Rat alpha = mmkit::parse_rational(alpha_text);
    Json doc = Json::object();
    doc["alpha"] = mmkit::rat_to_string(alpha);
    doc["value"] = mmkit::rat_to_string(mmkit::partial_diam(x, alpha));
    emit_json(g, doc);
  });

  static std::string kappa_text;
  auto* inv_sep = invariant->add_subcommand(
      "sep", "largest mutual distance of disjoint mass-demand groups");
  inv_sep->fallthrough();
  inv_sep->add_option("--kappa", kappa_text, "demands k0,k1,...")->required();
  inv_sep->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    const auto kappa = make_kappa(kappa_text);
    Json doc = Json::object();
    Json ks = Json::array();
    for (const Rat& k : kappa.entries()) ks.push_back(mmkit::rat_to_string(k));
    doc["kappa"] = std::move(ks);
    doc["value"] = mmkit::rat_to_string(mmkit::sep(x, kappa));
    emit_json(g, doc);
  });

  static std::string prof_kind;
  static std::string prof_upper = "1";
  static std::string prof_kappa;
  auto* inv_prof = invariant->add_subcommand(
      "profile", "step function of diam or sep against its parameter");
  inv_prof->fallthrough();
  inv_prof->add_option("--kind", prof_kind, "diam or sep")
      ->required()
      ->check(CLI::IsMember({"diam", "sep"}));
  inv_prof->add_option("--upper", prof_upper, "domain upper end (default 1)");
  inv_prof->add_option("--kappa", prof_kappa, "demands, for --kind sep");
  inv_prof->callback([&] {
    const auto x = load_space(g.in, "--in");
    const Rat upper = mmkit::parse_rational(prof_upper);
    if (prof_kind == "diam") {
      emit_profile(g, mmkit::partial_diam_profile(x, upper));
    } else {
      emit_profile(g,
                   mmkit::sep_profile(x, make_kappa(prof_kappa), upper));
    }
  });

  // dist
  auto* dist = app.add_subcommand("dist", "distances between spaces");
  dist->fallthrough();
  dist->require_subcommand(1);

  auto* dist_tv = dist->add_subcommand(
      "tv", "total variation of the two weight vectors (same metric)");
  dist_tv->fallthrough();
  dist_tv->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    const auto y = load_space(g.in2, "--in2");
    require_same_metric(x, y);
    Json doc = Json::object();
    doc["value"] = mmkit::rat_to_string(mmkit::tv(x.weights(), y.weights()));
    emit_json(g, doc);
  });

  auto* dist_pro = dist->add_subcommand(
      "prokhorov", "Prokhorov distance of the two weight vectors");
  dist_pro->fallthrough();
  dist_pro->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    const auto y = load_space(g.in2, "--in2");
    require_same_metric(x, y);
    Json doc = Json::object();
    doc["value"] = mmkit::rat_to_string(
        mmkit::prokhorov(x, x.weights(), y.weights()));
    emit_json(g, doc);
  });

  static std::string map_path;
  auto* dist_kyfan = dist->add_subcommand(
      "kyfan", "Ky Fan distance of two maps into the space");
  dist_kyfan->fallthrough();
  dist_kyfan
      ->add_option("--map", map_path,
                   "JSON with \"masses\", \"f\", \"g\" (point indices)")
      ->required();
  dist_kyfan->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    const Json m = mmkit::load_json_file(map_path);
    if (!m.is_object() || !m.contains("masses") || !m.contains("f") ||
        !m.contains("g")) {
      throw mmkit::validation_error(
          mmkit::errc::parse_error,
          "map document needs \"masses\", \"f\" and \"g\"");
    }
    if (!m.at("masses").is_array()) {
      throw mmkit::validation_error(mmkit::errc::parse_error,
                                    "masses must be an array");
    }
    std::vector<Rat> masses;
    for (const Json& v : m.at("masses")) {
      if (v.is_string()) {
        masses.push_back(mmkit::parse_rational(v.get<std::string>()));
      } else if (v.is_number_integer()) {
        masses.push_back(Rat(static_cast<long long>(v.get<std::int64_t>())));
      } else {
        throw mmkit::validation_error(
            mmkit::errc::parse_error,
            "masses must be rational strings or integers");
      }
    }
    Json doc = Json::object();
    doc["value"] = mmkit::rat_to_string(
        mmkit::ky_fan(masses, index_vector(m.at("f"), "f"),
                      index_vector(m.at("g"), "g"), x));
    emit_json(g, doc);
  });

  static std::string coupling_path;
  auto* dist_box = dist->add_subcommand(
      "box", "box distance bounds, or one coupling's bound with --coupling");
  dist_box->fallthrough();
  dist_box->add_option("--coupling", coupling_path,
                       "evaluate this transport plan instead of searching");
  dist_box->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    const auto y = load_space(g.in2, "--in2");
    if (!coupling_path.empty()) {
      const auto pi = mmkit::coupling_from_json(
          mmkit::load_json_file(coupling_path), x.weights(), y.weights());
      Json doc = Json::object();
      doc["eps"] = mmkit::rat_to_string(mmkit::box_from_coupling(x, y, pi));
      emit_json(g, doc);
    } else {
      emit_json(g, mmkit::box_bounds_to_json(mmkit::box_bounds(x, y, g.jobs)));
    }
  });

  auto* dist_dconc = dist->add_subcommand(
      "dconc", "observable-concentration upper bound");
  dist_dconc->fallthrough();
  dist_dconc->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    const auto y = load_space(g.in2, "--in2");
    Json doc = Json::object();
    doc["value"] = mmkit::rat_to_string(mmkit::dconc_upper(x, y, g.jobs));
    emit_json(g, doc);
  });

  // bundle
  auto* bundle = app.add_subcommand(
      "bundle", "the trivialized bundle over scale orbits");
  bundle->fallthrough();
  bundle->require_subcommand(1);

  static std::string delta_text;
  static std::string bundle_kappa;

  auto* b_member = bundle->add_subcommand(
      "member", "membership in X_delta (--delta) or Pi_kappa (--kappa)");
  b_member->fallthrough();
  b_member->add_option("--delta", delta_text, "atom bound p/q");
  b_member->add_option("--kappa", bundle_kappa, "demands k0,k1,...");
  b_member->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    Json doc = Json::object();
    if (!delta_text.empty()) {
      const mmkit::Delta delta(mmkit::parse_rational(delta_text));
      doc["member"] = mmkit::in_x_delta(x, delta);
    } else if (!bundle_kappa.empty()) {
      doc["member"] = mmkit::in_pi_kappa(
          mmkit::PyramidRep::associated(x), make_kappa(bundle_kappa));
    } else {
      throw mmkit::validation_error(mmkit::errc::parse_error,
                                    "pass --delta or --kappa");
    }
    emit_json(g, doc);
  });

  auto* b_r = bundle->add_subcommand(
      "r", "scale radius r_delta (--delta) or r_kappa (--kappa)");
  b_r->fallthrough();
  b_r->add_option("--delta", delta_text, "atom bound p/q");
  b_r->add_option("--kappa", bundle_kappa, "demands k0,k1,...");
  b_r->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    Json doc = Json::object();
    if (!delta_text.empty()) {
      const mmkit::Delta delta(mmkit::parse_rational(delta_text));
      doc["member"] = true;
      doc["r_delta"] = mmkit::rat_to_string(mmkit::r_delta(x, delta));
    } else if (!bundle_kappa.empty()) {
      const auto kappa = make_kappa(bundle_kappa);
      const auto p = mmkit::PyramidRep::associated(x);
      doc["member"] = true;
      doc["r_kappa"] = mmkit::rat_to_string(mmkit::r_kappa(p, kappa));
    } else {
      throw mmkit::validation_error(mmkit::errc::parse_error,
                                    "pass --delta or --kappa");
    }
    emit_json(g, doc);
  });

  auto* b_triv = bundle->add_subcommand(
      "trivialize", "section representative and radius of the orbit");
  b_triv->fallthrough();
  b_triv->add_option("--delta", delta_text, "atom bound p/q")->required();
  b_triv->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    const mmkit::Delta delta(mmkit::parse_rational(delta_text));
    const auto p = mmkit::trivialize(x, delta);
    Json doc = Json::object();
    doc["section_rep"] = mmkit::space_to_json(p.section_rep);
    doc["radius"] = mmkit::rat_to_string(p.radius);
    emit_json(g, doc);
  });

  auto* b_recover = bundle->add_subcommand(
      "recover", "the scale t with scale(in, t) isomorphic to in2");
  b_recover->fallthrough();
  b_recover->add_option("--delta", delta_text, "atom bound p/q")->required();
  b_recover->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    const auto x2 = load_space(g.in2, "--in2");
    const mmkit::Delta delta(mmkit::parse_rational(delta_text));
    Json doc = Json::object();
    doc["t"] = mmkit::rat_to_string(mmkit::recover_scale(x, x2, delta));
    emit_json(g, doc);
  });

  // pyramid
  auto* pyramid = app.add_subcommand(
      "pyramid", "Lipschitz order and atom pyramids");
  pyramid->fallthrough();
  pyramid->require_subcommand(1);

  static std::string atoms_text;
  static std::string atoms2_text;
  static unsigned witness_m = 8;

  auto* p_member = pyramid->add_subcommand(
      "member", "does the space lie in the pyramid of the atom sequence");
  p_member->fallthrough();
  p_member->add_option("--atoms", atoms_text, "atom sequence a1,a2,...")
      ->required();
  p_member->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    Json doc = Json::object();
    doc["member"] = mmkit::in_p_a(x, make_atoms(atoms_text, "--atoms"));
    emit_json(g, doc);
  });

  auto* p_sep = pyramid->add_subcommand(
      "sep", "separation of an atom pyramid at the given demands");
  p_sep->fallthrough();
  p_sep->add_option("--atoms", atoms_text, "atom sequence a1,a2,...")
      ->required();
  p_sep->add_option("--kappa", kappa_text, "demands k0,k1,...")->required();
  p_sep->callback([&] {
    require_json_format(g);
    const auto v = mmkit::sep_atom_pyramid(make_atoms(atoms_text, "--atoms"),
                                           make_kappa(kappa_text));
    emit_json(g, mmkit::sep_value_to_json(v));
  });

  auto* p_witness = pyramid->add_subcommand(
      "witness", "a space separating two distinct atom pyramids");
  p_witness->fallthrough();
  p_witness->add_option("--atoms", atoms_text, "first atom sequence")
      ->required();
  p_witness->add_option("--atoms2", atoms2_text, "second atom sequence")
      ->required();
  p_witness->add_option("-m,--diffuse", witness_m,
                        "number of diffuse points (default 8)");
  p_witness->callback([&] {
    require_json_format(g);
    const auto w = mmkit::separating_witness(
        make_atoms(atoms_text, "--atoms"),
        make_atoms(atoms2_text, "--atoms2"), witness_m);
    Json doc = Json::object();
    doc["space"] = mmkit::space_to_json(w.space);
    doc["member_of_first"] = w.member_of_first;
    emit_json(g, doc);
  });

  auto* p_dom = pyramid->add_subcommand(
      "dominates", "does in dominate in2 in the Lipschitz order");
  p_dom->fallthrough();
  p_dom->callback([&] {
    require_json_format(g);
    const auto x = load_space(g.in, "--in");
    const auto y = load_space(g.in2, "--in2");
    Json doc = Json::object();
    doc["dominates"] = mmkit::dominates(x, y);
    emit_json(g, doc);
  });

  // experiment
  auto* experiment = app.add_subcommand(
      "experiment", "reproducible self-checking reports");
  experiment->fallthrough();
  experiment->require_subcommand(1);

  static std::string eps_text = "1/10,1/100";
  static std::string r_text = "10,100,1000";
  auto* e_nu = experiment->add_subcommand(
      "non-urysohn", "box bounds against the two-point collapse limits");
  e_nu->fallthrough();
  e_nu->add_option("--eps", eps_text, "eps list (default 1/10,1/100)");
  e_nu->add_option("--r", r_text, "radius list (default 10,100,1000)");
  e_nu->callback([&] {
    const auto x = load_space(g.in, "--in");
    emit_report(g,
                mmkit::run_non_urysohn(x, mmkit::parse_rational_list(eps_text),
                                       mmkit::parse_rational_list(r_text),
                                       g.jobs),
                exit_code);
  });

  static std::string lf_kappa = "1/4,1/4";
  static unsigned lf_eps_count = 64;
  static std::string lf_deltas = "1/8,1/16,1/32";
  auto* e_lf = experiment->add_subcommand(
      "limit-formula", "sep of shrinking perturbations against the limit");
  e_lf->fallthrough();
  e_lf->add_option("--kappa", lf_kappa, "demands (default 1/4,1/4)");
  e_lf->add_option("--eps-count", lf_eps_count,
                   "use eps_n = 1/n for n = 2..N (default 64)")
      ->check(CLI::Range(2u, 4096u));
  e_lf->add_option("--deltas", lf_deltas,
                   "demand reductions (default 1/8,1/16,1/32)");
  e_lf->callback([&] {
    const auto x = load_space(g.in, "--in");
    std::vector<Rat> eps;
    for (unsigned n = 2; n <= lf_eps_count; ++n) eps.push_back(Rat(1, n));
    emit_report(g,
                mmkit::run_limit_formula(x, make_kappa(lf_kappa), eps,
                                         mmkit::parse_rational_list(lf_deltas)),
                exit_code);
  });

  static std::string sr_t;
  static std::string sr_noise = "1/10,1/100,1/1000";
  auto* e_sr = experiment->add_subcommand(
      "scale-recovery", "recover a scale factor from noisy copies");
  e_sr->fallthrough();
  e_sr->add_option("-t,--t", sr_t, "scale factor p/q")->required();
  e_sr->add_option("--noise", sr_noise,
                   "noise schedule (default 1/10,1/100,1/1000)");
  e_sr->callback([&] {
    const auto x = load_space(g.in, "--in");
    emit_report(g,
                mmkit::run_scale_recovery(x, mmkit::parse_rational(sr_t),
                                          mmkit::parse_rational_list(sr_noise)),
                exit_code);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const mmkit::validation_error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const mmkit::precondition_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
