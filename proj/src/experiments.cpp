#include "mmkit/experiments.hpp"

#include <utility>

#include "mmkit/bundle.hpp"
#include "mmkit/errors.hpp"

namespace mmkit {

FiniteMmSpace gen_y_eps(const Rat& eps) {
  if (eps <= 0 || eps >= 1) {
    throw precondition_error(errc::eps_out_of_range,
                             "eps must lie strictly between 0 and 1");
  }
  FiniteMmSpace::Data data;
  data.labels = {"0", "1"};
  data.dist = {{Rat(0), Rat(1)}, {Rat(1), Rat(0)}};
  data.weights = {1 - eps, eps};
  return FiniteMmSpace::validate(std::move(data));
}

FiniteMmSpace gen_z_eps(const FiniteMmSpace& x, const Rat& eps, const Rat& r) {
  if (eps <= 0 || eps >= 1) {
    throw precondition_error(errc::eps_out_of_range,
                             "eps must lie strictly between 0 and 1");
  }
  if (r <= 0 || r < x.diameter()) {
    throw precondition_error(errc::r_too_small,
                             "radius must be positive and >= diam x");
  }
  const std::size_t n = x.size();
  FiniteMmSpace::Data data;
  data.labels = x.labels();
  std::string z = "z";
  for (bool clash = true; clash;) {
    clash = false;
    for (const std::string& l : data.labels) {
      if (l == z) {
        z += "_";
        clash = true;
        break;
      }
    }
  }
  data.labels.push_back(z);
  data.dist.assign(n + 1, std::vector<Rat>(n + 1, r));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) data.dist[i][j] = x.dist(i, j);
  }
  data.dist[n][n] = 0;
  data.weights.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    data.weights.push_back((1 - eps) * x.weight(i));
  }
  data.weights.push_back(eps);
  return FiniteMmSpace::validate(std::move(data));
}

bool ExperimentReport::passed() const {
  for (const ReportAssertion& a : assertions) {
    if (!a.pass) return false;
  }
  return true;
}

namespace {

ReportAssertion make_le(std::string label, Rat lhs, Rat rhs) {
  bool ok = lhs <= rhs;
  return ReportAssertion{std::move(label), std::move(lhs), "le",
                         std::move(rhs), ok};
}

ReportAssertion make_eq(std::string label, Rat lhs, Rat rhs) {
  bool ok = lhs == rhs;
  return ReportAssertion{std::move(label), std::move(lhs), "eq",
                         std::move(rhs), ok};
}

void require_two_points(const FiniteMmSpace& x) {
  if (x.size() < 2) {
    throw precondition_error(errc::dimension_mismatch,
                             "experiment needs a space with >= 2 points");
  }
}

}  // namespace

ExperimentReport run_non_urysohn(const FiniteMmSpace& x,
                                 const std::vector<Rat>& eps_list,
                                 const std::vector<Rat>& r_list,
                                 unsigned jobs) {
  require_two_points(x);
  ExperimentReport report;
  report.name = "non_urysohn";
  report.columns = {"eps", "r", "box_scaled_vs_y", "box_z_vs_x"};
  const Rat diam = x.diameter();
  for (const Rat& eps : eps_list) {
    const FiniteMmSpace y = gen_y_eps(eps);
    for (const Rat& r : r_list) {
      const FiniteMmSpace z = gen_z_eps(x, eps, r);
      const Rat col1 =
          box_bounds(scale(z, ScaleFactor(1 / r)), y, jobs).upper;
      const Rat col2 = box_bounds(z, x, jobs).upper;
      const std::string tag =
          "eps=" + rat_to_string(eps) + " r=" + rat_to_string(r);
      report.rows.push_back({rat_to_string(eps), rat_to_string(r),
                             rat_to_string(col1), rat_to_string(col2)});
      report.assertions.push_back(
          make_le("scale_collapse " + tag, col1, diam / r));
      report.assertions.push_back(make_le("point_collapse " + tag, col2, eps));
    }
  }
  return report;
}

ExperimentReport run_limit_formula(const FiniteMmSpace& x,
                                   const KappaTuple& kappa,
                                   const std::vector<Rat>& eps_schedule,
                                   const std::vector<Rat>& delta_grid) {
  require_two_points(x);
  Rat min_kappa = kappa[0];
  for (std::size_t i = 1; i < kappa.groups(); ++i) {
    min_kappa = rat_min(min_kappa, kappa[i]);
  }
  for (const Rat& d : delta_grid) {
    if (d <= 0 || d >= min_kappa) {
      throw precondition_error(errc::out_of_domain,
                               "delta grid must lie in (0, min kappa)");
    }
  }
  if (eps_schedule.empty() || delta_grid.empty()) {
    throw precondition_error(errc::out_of_domain,
                             "eps schedule and delta grid must be nonempty");
  }
  ExperimentReport report;
  report.name = "limit_formula";
  report.columns = {"eps"};
  for (const Rat& d : delta_grid) {
    report.columns.push_back("delta=" + rat_to_string(d));
  }
  const Rat target = sep(x, kappa);
  const Rat diam = x.diameter();
  std::vector<Rat> last_row;
  for (const Rat& eps : eps_schedule) {
    const FiniteMmSpace xn = gen_z_eps(x, eps, diam);
    std::vector<std::string> row = {rat_to_string(eps)};
    last_row.clear();
    for (const Rat& d : delta_grid) {
      Rat v = sep(xn, kappa.shifted(-d));
      row.push_back(rat_to_string(v));
      last_row.push_back(std::move(v));
    }
    report.rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < delta_grid.size(); ++j) {
    report.assertions.push_back(
        make_eq("final_row delta=" + rat_to_string(delta_grid[j]),
                last_row[j], target));
  }
  return report;
}

ExperimentReport run_scale_recovery(const FiniteMmSpace& x, const Rat& t,
                                    const std::vector<Rat>& noise_schedule) {
  require_two_points(x);
  const ScaleFactor factor(t);
  ExperimentReport report;
  report.name = "scale_recovery";
  report.columns = {"eps", "r_delta_ratio", "sep_ratio"};
  const Rat diam = x.diameter();
  for (const Rat& eps : noise_schedule) {
    const FiniteMmSpace xn = gen_z_eps(x, eps, diam);
    const FiniteMmSpace xt = scale(xn, factor);
    const Delta delta((1 + xn.max_weight()) / 2);
    const Rat ratio_r = r_delta(xt, delta) / r_delta(xn, delta);
    const Rat half_min = xn.min_weight() / 2;
    const KappaTuple kappa({half_min, half_min});
    const Rat ratio_sep = sep(xt, kappa) / sep(xn, kappa);
    const std::string tag = "eps=" + rat_to_string(eps);
    report.rows.push_back({rat_to_string(eps), rat_to_string(ratio_r),
                           rat_to_string(ratio_sep)});
    report.assertions.push_back(make_eq("r_delta_ratio " + tag, ratio_r, t));
    report.assertions.push_back(make_eq("sep_ratio " + tag, ratio_sep, t));
  }
  return report;
}

}  // namespace mmkit
