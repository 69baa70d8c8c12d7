#include "mmkit/distances.hpp"

#include <algorithm>
#include <bitset>
#include <future>
#include <map>
#include <queue>
#include <set>
#include <utility>

namespace mmkit {

void check_measure(const std::vector<Rat>& mu, std::size_t n) {
  if (mu.size() != n) {
    throw validation_error(errc::dimension_mismatch,
                           "measure has " + std::to_string(mu.size()) +
                               " entries, expected " + std::to_string(n));
  }
  Rat sum = 0;
  for (const Rat& m : mu) {
    if (m < 0) {
      throw validation_error(errc::domain_mismatch,
                             "measure entry " + rat_to_string(m) +
                                 " is negative");
    }
    sum += m;
  }
  if (sum != 1) {
    throw validation_error(errc::domain_mismatch,
                           "measure entries sum to " + rat_to_string(sum) +
                               ", not 1");
  }
}

Rat tv(const std::vector<Rat>& mu, const std::vector<Rat>& nu) {
  check_measure(mu, mu.size());
  check_measure(nu, mu.size());
  Rat s = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += rat_abs(mu[i] - nu[i]);
  return s / 2;
}

namespace {

struct FlowPlan {
  Rat value;
  std::vector<std::vector<Rat>> plan;  // plan[i][j] <= arcs at d(i,j) <= t
};

// Edmonds-Karp on the bipartite network source -> rows (cap mu) -> cols
// (arcs where d <= threshold) -> sink (cap nu).  All arithmetic exact.
FlowPlan solve_flow(const FiniteMmSpace& x, const std::vector<Rat>& mu,
                    const std::vector<Rat>& nu, const Rat& threshold) {
  const std::size_t n = x.size();
  const std::size_t nodes = 2 * n + 2, src = 2 * n, sink = 2 * n + 1;
  std::vector<std::vector<Rat>> cap(nodes, std::vector<Rat>(nodes, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    cap[src][i] = mu[i];
    cap[n + i][sink] = nu[i];
    for (std::size_t j = 0; j < n; ++j)
      if (x.dist(i, j) <= threshold) cap[i][n + j] = 2;
  }
  std::vector<std::vector<Rat>> flow(nodes, std::vector<Rat>(nodes, Rat(0)));
  while (true) {
    std::vector<int> parent(nodes, -1);
    parent[src] = static_cast<int>(src);
    std::queue<std::size_t> q;
    q.push(src);
    while (!q.empty() && parent[sink] < 0) {
      std::size_t u = q.front();
      q.pop();
      for (std::size_t v = 0; v < nodes; ++v)
        if (parent[v] < 0 && cap[u][v] - flow[u][v] > 0) {
          parent[v] = static_cast<int>(u);
          q.push(v);
        }
    }
    if (parent[sink] < 0) break;
    Rat push = 0;
    bool first = true;
    for (std::size_t v = sink; v != src;) {
      std::size_t u = static_cast<std::size_t>(parent[v]);
      Rat r = cap[u][v] - flow[u][v];
      if (first || r < push) push = r;
      first = false;
      v = u;
    }
    for (std::size_t v = sink; v != src;) {
      std::size_t u = static_cast<std::size_t>(parent[v]);
      flow[u][v] += push;
      flow[v][u] -= push;
      v = u;
    }
  }
  FlowPlan out;
  out.value = 0;
  for (std::size_t i = 0; i < n; ++i) out.value += flow[src][i];
  out.plan.assign(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (flow[i][n + j] > 0) out.plan[i][j] = flow[i][n + j];
  return out;
}

// Minimal eps with T(eps) <= eps for a nonincreasing right-continuous step
// function: T = tvals[k] on [levels[k], levels[k+1]), the last level
// extending to infinity.  levels are ascending and start at 0, so the first
// interval holding a valid candidate yields the minimum.
Rat least_fixed(const std::vector<Rat>& levels, const std::vector<Rat>& tvals) {
  for (std::size_t k = 0; k < levels.size(); ++k) {
    Rat cand = rat_max(levels[k], tvals[k]);
    if (k + 1 == levels.size() || cand < levels[k + 1]) return cand;
  }
  return levels.back();  // unreachable: the last interval always qualifies
}

}  // namespace

Rat max_flow_within(const FiniteMmSpace& x, const std::vector<Rat>& mu,
                    const std::vector<Rat>& nu, const Rat& threshold) {
  check_measure(mu, x.size());
  check_measure(nu, x.size());
  return solve_flow(x, mu, nu, threshold).value;
}

Rat prokhorov(const FiniteMmSpace& x, const std::vector<Rat>& mu,
              const std::vector<Rat>& nu) {
  check_measure(mu, x.size());
  check_measure(nu, x.size());
  std::set<Rat> dset;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) dset.insert(x.dist(i, j));
  std::vector<Rat> levels{Rat(0)};
  levels.insert(levels.end(), dset.begin(), dset.end());
  // On (levels[k], levels[k+1]] the open neighbourhood condition uses the
  // arcs d <= levels[k]; the deficit h there is 1 - maxflow.  The infimum
  // on that interval is levels[k] itself when h <= levels[k] (approached
  // from the right, not attained), otherwise h when it fits the interval.
  for (std::size_t k = 0; k < levels.size(); ++k) {
    Rat h = Rat(1) - solve_flow(x, mu, nu, levels[k]).value;
    if (h <= levels[k]) return levels[k];
    if (k + 1 == levels.size() || h <= levels[k + 1]) return h;
  }
  return levels.back();  // unreachable: at full arc set the deficit is 0
}

Rat ky_fan(const std::vector<Rat>& masses, const std::vector<std::size_t>& f,
           const std::vector<std::size_t>& g, const FiniteMmSpace& x) {
  check_measure(masses, masses.size());
  if (f.size() != masses.size() || g.size() != masses.size()) {
    throw validation_error(errc::dimension_mismatch,
                           "maps must match the mass vector in length");
  }
  for (std::size_t k = 0; k < masses.size(); ++k)
    if (f[k] >= x.size() || g[k] >= x.size()) {
      throw validation_error(errc::domain_mismatch,
                             "map hits a point index outside the space");
    }
  std::vector<Rat> gap(masses.size());
  std::set<Rat> lset{Rat(0)};
  for (std::size_t k = 0; k < masses.size(); ++k) {
    gap[k] = x.dist(f[k], g[k]);
    lset.insert(gap[k]);
  }
  std::vector<Rat> levels(lset.begin(), lset.end());
  std::vector<Rat> tvals;
  tvals.reserve(levels.size());
  for (const Rat& level : levels) {
    Rat t = 0;
    for (std::size_t k = 0; k < masses.size(); ++k)
      if (gap[k] > level) t += masses[k];
    tvals.push_back(t);
  }
  return least_fixed(levels, tvals);
}

Coupling Coupling::validate(std::vector<std::vector<Rat>> matrix,
                            const std::vector<Rat>& mu,
                            const std::vector<Rat>& nu) {
  if (matrix.size() != mu.size()) {
    throw validation_error(errc::dimension_mismatch,
                           "coupling has " + std::to_string(matrix.size()) +
                               " rows, expected " + std::to_string(mu.size()));
  }
  std::vector<Rat> col_sum(nu.size(), Rat(0));
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (matrix[i].size() != nu.size()) {
      throw validation_error(errc::dimension_mismatch,
                             "coupling row " + std::to_string(i) + " has " +
                                 std::to_string(matrix[i].size()) +
                                 " columns, expected " +
                                 std::to_string(nu.size()));
    }
    Rat row_sum = 0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
      if (matrix[i][j] < 0) {
        throw validation_error(errc::invalid_coupling,
                               "negative entry at (" + std::to_string(i) +
                                   ", " + std::to_string(j) + ")");
      }
      row_sum += matrix[i][j];
      col_sum[j] += matrix[i][j];
    }
    if (row_sum != mu[i]) {
      throw validation_error(errc::invalid_coupling,
                             "row " + std::to_string(i) + " sums to " +
                                 rat_to_string(row_sum) + ", expected " +
                                 rat_to_string(mu[i]));
    }
  }
  for (std::size_t j = 0; j < nu.size(); ++j)
    if (col_sum[j] != nu[j]) {
      throw validation_error(errc::invalid_coupling,
                             "column " + std::to_string(j) + " sums to " +
                                 rat_to_string(col_sum[j]) + ", expected " +
                                 rat_to_string(nu[j]));
    }
  return Coupling(std::move(matrix));
}

namespace {

constexpr std::size_t kMaxSupport = 256;
using SupportMask = std::bitset<kMaxSupport>;

struct SupportClique {
  const std::vector<Rat>& weights;
  const std::vector<SupportMask>& adj;
  Rat best = 0;
  SupportMask best_set;

  void run(SupportMask cand, const Rat& current, const SupportMask& chosen) {
    if (current > best) {
      best = current;
      best_set = chosen;
    }
    std::size_t v = cand._Find_first();
    if (v >= kMaxSupport) return;
    Rat potential = current;
    for (std::size_t u = v; u < kMaxSupport; u = cand._Find_next(u))
      potential += weights[u];
    if (potential <= best) return;
    SupportMask with = cand & adj[v];
    SupportMask chosen_v = chosen;
    chosen_v.set(v);
    run(with, current + weights[v], chosen_v);
    cand.reset(v);
    run(cand, current, chosen);
  }
};

using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

// Shared core of the box upper bound from one coupling: the least eps such
// that some sub-collection of support pairs keeps mass >= 1 - eps at
// pairwise distortion <= eps.  Scans distortion levels upward; the first
// level admitting a valid candidate is the minimum.  When prune_at is set
// and no value below it is possible any more, returns prune_at unchanged.
Rat box_core(const FiniteMmSpace& x, const FiniteMmSpace& y,
             const std::vector<std::vector<Rat>>& pi, PairList* kept_out,
             const Rat* prune_at) {
  PairList support;
  std::vector<Rat> mass;
  for (std::size_t i = 0; i < pi.size(); ++i)
    for (std::size_t j = 0; j < pi[i].size(); ++j)
      if (pi[i][j] > 0) {
        support.emplace_back(i, j);
        mass.push_back(pi[i][j]);
      }
  const std::size_t s = support.size();
  if (s > kMaxSupport) {
    throw precondition_error(errc::dimension_mismatch,
                             "coupling support exceeds 256 pairs");
  }
  std::map<Rat, std::vector<std::pair<std::size_t, std::size_t>>> by_level;
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = a + 1; b < s; ++b) {
      Rat distortion =
          rat_abs(x.dist(support[a].first, support[b].first) -
                  y.dist(support[a].second, support[b].second));
      by_level[distortion].emplace_back(a, b);
    }
  std::vector<Rat> levels{Rat(0)};
  for (const auto& [level, edges] : by_level)
    if (level > 0) levels.push_back(level);
  std::vector<SupportMask> adj(s);
  auto admit = [&](const Rat& level) {
    auto it = by_level.find(level);
    if (it == by_level.end()) return;
    for (const auto& [a, b] : it->second) {
      adj[a].set(b);
      adj[b].set(a);
    }
  };
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (prune_at != nullptr && levels[k] >= *prune_at) return *prune_at;
    admit(levels[k]);
    SupportClique clique{mass, adj, Rat(0), SupportMask()};
    SupportMask all;
    for (std::size_t v = 0; v < s; ++v) all.set(v);
    clique.run(all, Rat(0), SupportMask());
    Rat cand = rat_max(levels[k], Rat(1) - clique.best);
    if (k + 1 == levels.size() || cand < levels[k + 1]) {
      if (kept_out != nullptr) {
        kept_out->clear();
        for (std::size_t v = clique.best_set._Find_first(); v < kMaxSupport;
             v = clique.best_set._Find_next(v))
          kept_out->push_back(support[v]);
      }
      return cand;
    }
  }
  return Rat(0);  // unreachable: empty support means both spaces are empty
}

}  // namespace

Rat box_from_coupling(const FiniteMmSpace& x, const FiniteMmSpace& y,
                      const Coupling& pi) {
  if (pi.rows() != x.size() || pi.cols() != y.size()) {
    throw validation_error(errc::invalid_coupling,
                           "coupling shape does not match the two spaces");
  }
  return box_core(x, y, pi.matrix(), nullptr, nullptr);
}

namespace {

// Cells of an n x m transport table, encoded i*m + j; a basis is a sorted
// cell list forming a spanning tree of the row/column incidence graph.

std::vector<int> northwest_basis(std::size_t n, std::size_t m,
                                 std::vector<Rat> a, std::vector<Rat> b) {
  std::vector<int> cells;
  std::size_t i = 0, j = 0;
  while (true) {
    cells.push_back(static_cast<int>(i * m + j));
    Rat t = rat_min(a[i], b[j]);
    a[i] -= t;
    b[j] -= t;
    if (i == n - 1 && j == m - 1) break;
    if (a[i] == 0 && i < n - 1)
      ++i;
    else
      ++j;
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

// Unique table values for a basis, by peeling leaves of the incidence
// tree; nullopt when any value would be negative.
std::optional<std::vector<std::vector<Rat>>> solve_basis(
    const std::vector<int>& cells, const std::vector<Rat>& mu,
    const std::vector<Rat>& nu) {
  const std::size_t n = mu.size(), m = nu.size();
  std::vector<std::vector<std::size_t>> incident(n + m);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::size_t i = static_cast<std::size_t>(cells[c]) / m;
    std::size_t j = static_cast<std::size_t>(cells[c]) % m;
    incident[i].push_back(c);
    incident[n + j].push_back(c);
  }
  std::vector<Rat> rem(n + m);
  for (std::size_t i = 0; i < n; ++i) rem[i] = mu[i];
  for (std::size_t j = 0; j < m; ++j) rem[n + j] = nu[j];
  std::vector<std::size_t> degree(n + m);
  for (std::size_t u = 0; u < n + m; ++u) degree[u] = incident[u].size();
  std::vector<char> cell_done(cells.size(), 0);
  std::vector<Rat> value(cells.size(), Rat(0));
  std::queue<std::size_t> leaves;
  for (std::size_t u = 0; u < n + m; ++u)
    if (degree[u] == 1) leaves.push(u);
  std::size_t solved = 0;
  while (!leaves.empty()) {
    std::size_t u = leaves.front();
    leaves.pop();
    if (degree[u] != 1) continue;
    std::size_t c = cells.size();
    for (std::size_t cc : incident[u])
      if (!cell_done[cc]) c = cc;
    if (c == cells.size()) continue;
    std::size_t i = static_cast<std::size_t>(cells[c]) / m;
    std::size_t j = static_cast<std::size_t>(cells[c]) % m;
    std::size_t other = (u == i) ? n + j : i;
    value[c] = rem[u];
    if (value[c] < 0) return std::nullopt;
    rem[u] = 0;
    rem[other] -= value[c];
    cell_done[c] = 1;
    ++solved;
    --degree[u];
    --degree[other];
    if (degree[other] == 1) leaves.push(other);
  }
  if (solved != cells.size()) return std::nullopt;  // not a forest
  std::vector<std::vector<Rat>> table(n, std::vector<Rat>(m, Rat(0)));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (value[c] < 0) return std::nullopt;
    table[static_cast<std::size_t>(cells[c]) / m]
         [static_cast<std::size_t>(cells[c]) % m] = value[c];
  }
  return table;
}

// Basis cells along the tree path joining the row and column of an
// entering cell; entries at odd positions from the entering cell lose mass
// when it pivots in.
std::vector<std::size_t> pivot_cycle_path(const std::vector<int>& cells,
                                          std::size_t n, std::size_t m,
                                          std::size_t row, std::size_t col) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n + m);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::size_t i = static_cast<std::size_t>(cells[c]) / m;
    std::size_t j = static_cast<std::size_t>(cells[c]) % m;
    adj[i].emplace_back(n + j, c);
    adj[n + j].emplace_back(i, c);
  }
  std::vector<int> parent_node(n + m, -1), parent_cell(n + m, -1);
  std::queue<std::size_t> q;
  parent_node[row] = static_cast<int>(row);
  q.push(row);
  while (!q.empty() && parent_node[n + col] < 0) {
    std::size_t u = q.front();
    q.pop();
    for (const auto& [v, c] : adj[u])
      if (parent_node[v] < 0) {
        parent_node[v] = static_cast<int>(u);
        parent_cell[v] = static_cast<int>(c);
        q.push(v);
      }
  }
  std::vector<std::size_t> path;  // from the column end back toward the row
  for (std::size_t v = n + col; v != row;) {
    path.push_back(static_cast<std::size_t>(parent_cell[v]));
    v = static_cast<std::size_t>(parent_node[v]);
  }
  return path;
}

}  // namespace

std::optional<std::vector<Coupling>> vertex_couplings(
    const std::vector<Rat>& mu, const std::vector<Rat>& nu,
    std::size_t max_vertices) {
  const std::size_t n = mu.size(), m = nu.size();
  if (n == 0 || m == 0) return std::vector<Coupling>{};
  const std::size_t basis_cap = std::max<std::size_t>(8 * max_vertices, 4000);
  std::vector<int> start = northwest_basis(n, m, mu, nu);
  std::set<std::vector<int>> seen{start};
  std::queue<std::vector<int>> frontier;
  frontier.push(start);
  std::set<std::vector<Rat>> matrices_seen;
  std::vector<Coupling> out;
  while (!frontier.empty()) {
    std::vector<int> basis = std::move(frontier.front());
    frontier.pop();
    auto table = solve_basis(basis, mu, nu);
    if (!table) continue;
    std::vector<Rat> flat;
    flat.reserve(n * m);
    for (const auto& row : *table)
      for (const Rat& v : row) flat.push_back(v);
    if (matrices_seen.insert(std::move(flat)).second) {
      if (out.size() == max_vertices) return std::nullopt;
      out.push_back(Coupling::validate(*table, mu, nu));
    }
    std::vector<char> in_basis(n * m, 0);
    std::vector<Rat> cell_value(n * m, Rat(0));
    for (int c : basis) {
      in_basis[static_cast<std::size_t>(c)] = 1;
      cell_value[static_cast<std::size_t>(c)] =
          (*table)[static_cast<std::size_t>(c) / m]
                  [static_cast<std::size_t>(c) % m];
    }
    for (std::size_t e = 0; e < n * m; ++e) {
      if (in_basis[e]) continue;
      auto path = pivot_cycle_path(basis, n, m, e / m, e % m);
      // path runs from the column end; odd cycle positions are path
      // indices 0, 2, ... counted from there.
      Rat theta = 0;
      bool first = true;
      for (std::size_t p = 0; p < path.size(); p += 2) {
        const Rat& v = cell_value[static_cast<std::size_t>(basis[path[p]])];
        if (first || v < theta) theta = v;
        first = false;
      }
      for (std::size_t p = 0; p < path.size(); p += 2) {
        int leave = basis[path[p]];
        if (cell_value[static_cast<std::size_t>(leave)] != theta) continue;
        std::vector<int> next;
        next.reserve(basis.size());
        for (int c : basis)
          if (c != leave) next.push_back(c);
        next.push_back(static_cast<int>(e));
        std::sort(next.begin(), next.end());
        if (seen.insert(next).second) {
          if (seen.size() > basis_cap) return std::nullopt;
          frontier.push(std::move(next));
        }
      }
    }
  }
  return out;
}

namespace {

using Table = std::vector<std::vector<Rat>>;

// Fill remaining row and column mass greedily in index order.  Applied to
// an all-zero table this is the northwest-corner rule.
void complete_greedy(Table& table, std::vector<Rat> row_rem,
                     std::vector<Rat> col_rem) {
  for (std::size_t i = 0; i < row_rem.size(); ++i)
    for (std::size_t j = 0; j < col_rem.size() && row_rem[i] > 0; ++j) {
      Rat t = rat_min(row_rem[i], col_rem[j]);
      if (t <= 0) continue;
      table[i][j] += t;
      row_rem[i] -= t;
      col_rem[j] -= t;
    }
}

Table nw_table(const std::vector<Rat>& mu, const std::vector<Rat>& nu,
               bool flip_rows, bool flip_cols) {
  const std::size_t n = mu.size(), m = nu.size();
  std::vector<Rat> a = mu, b = nu;
  if (flip_rows) std::reverse(a.begin(), a.end());
  if (flip_cols) std::reverse(b.begin(), b.end());
  Table t(n, std::vector<Rat>(m, Rat(0)));
  complete_greedy(t, a, b);
  if (flip_rows) std::reverse(t.begin(), t.end());
  if (flip_cols)
    for (auto& row : t) std::reverse(row.begin(), row.end());
  return t;
}

// Mass matched along pairs given by match(i) = j, remainder filled greedily.
Table matched_table(const std::vector<Rat>& mu, const std::vector<Rat>& nu,
                    const std::vector<std::optional<std::size_t>>& match) {
  Table t(mu.size(), std::vector<Rat>(nu.size(), Rat(0)));
  std::vector<Rat> row_rem = mu, col_rem = nu;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (match[i]) {
      std::size_t j = *match[i];
      Rat amount = rat_min(row_rem[i], col_rem[j]);
      t[i][j] = amount;
      row_rem[i] -= amount;
      col_rem[j] -= amount;
    }
  complete_greedy(t, std::move(row_rem), std::move(col_rem));
  return t;
}

std::vector<Table> seed_tables(const FiniteMmSpace& x, const FiniteMmSpace& y) {
  const std::vector<Rat>& mu = x.weights();
  const std::vector<Rat>& nu = y.weights();
  std::vector<Table> seeds;
  for (bool fr : {false, true})
    for (bool fc : {false, true}) seeds.push_back(nw_table(mu, nu, fr, fc));
  std::map<std::string, std::size_t> label_to_col;
  for (std::size_t j = y.labels().size(); j-- > 0;)
    label_to_col[y.labels()[j]] = j;
  std::vector<std::optional<std::size_t>> by_label(x.size());
  bool any_label = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = label_to_col.find(x.labels()[i]);
    if (it != label_to_col.end()) {
      by_label[i] = it->second;
      any_label = true;
    }
  }
  if (any_label) seeds.push_back(matched_table(mu, nu, by_label));
  if (x.size() == y.size()) {
    std::vector<std::optional<std::size_t>> diagonal(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diagonal[i] = i;
    seeds.push_back(matched_table(mu, nu, diagonal));
  }
  if (x.labels() == y.labels() && x.dist_matrix() == y.dist_matrix()) {
    // Same metric, different weights: route mass along the optimal
    // short-distance flow, which keeps distortion within twice the
    // Prokhorov distance on the retained pairs.
    Rat eps = prokhorov(x, mu, nu);
    FlowPlan fp = solve_flow(x, mu, nu, eps);
    Table t = fp.plan;
    std::vector<Rat> row_rem = mu, col_rem = nu;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) {
        row_rem[i] -= t[i][j];
        col_rem[j] -= t[i][j];
      }
    complete_greedy(t, std::move(row_rem), std::move(col_rem));
    seeds.push_back(std::move(t));
  }
  return seeds;
}

// First-improvement hill climb over two-by-two mass transfers, pushing the
// full transferable amount each move.  budget counts box evaluations.
void improve_table(const FiniteMmSpace& x, const FiniteMmSpace& y, Table& t,
                   Rat& value, long& budget) {
  const std::size_t n = t.size(), m = t[0].size();
  bool improved = true;
  while (improved && budget > 0) {
    improved = false;
    for (std::size_t i = 0; i < n && !improved; ++i)
      for (std::size_t j = 0; j < m && !improved; ++j) {
        if (t[i][j] <= 0) continue;
        for (std::size_t k = 0; k < n && !improved; ++k)
          for (std::size_t l = 0; l < m && !improved; ++l) {
            if (k == i || l == j || t[k][l] <= 0 || budget <= 0) continue;
            Rat theta = rat_min(t[i][j], t[k][l]);
            t[i][j] -= theta;
            t[k][l] -= theta;
            t[i][l] += theta;
            t[k][j] += theta;
            --budget;
            Rat candidate = box_core(x, y, t, nullptr, &value);
            if (candidate < value) {
              value = candidate;
              improved = true;
            } else {
              t[i][l] -= theta;
              t[k][j] -= theta;
              t[i][j] += theta;
              t[k][l] += theta;
            }
          }
      }
  }
}

// Deterministic minimum of box_core over the pool: chunks evaluated in
// parallel, combined in order, ties resolved to the earliest index.
std::pair<Rat, std::size_t> min_over_pool(const FiniteMmSpace& x,
                                          const FiniteMmSpace& y,
                                          const std::vector<Table>& pool,
                                          unsigned jobs) {
  auto scan = [&](std::size_t from, std::size_t to) {
    Rat best;
    std::size_t best_idx = pool.size();
    for (std::size_t i = from; i < to; ++i) {
      const Rat* prune = best_idx == pool.size() ? nullptr : &best;
      Rat v = box_core(x, y, pool[i], nullptr, prune);
      if (best_idx == pool.size() || v < best) {
        best = v;
        best_idx = i;
      }
    }
    return std::make_pair(best, best_idx);
  };
  if (jobs <= 1 || pool.size() < 2 * jobs) return scan(0, pool.size());
  std::size_t chunk = (pool.size() + jobs - 1) / jobs;
  std::vector<std::future<std::pair<Rat, std::size_t>>> parts;
  for (std::size_t from = 0; from < pool.size(); from += chunk) {
    std::size_t to = std::min(pool.size(), from + chunk);
    parts.push_back(
        std::async(std::launch::async, [&, from, to] { return scan(from, to); }));
  }
  Rat best;
  std::size_t best_idx = pool.size();
  for (auto& part : parts) {
    auto [v, idx] = part.get();
    if (idx < pool.size() && (best_idx == pool.size() || v < best)) {
      best = v;
      best_idx = idx;
    }
  }
  return {best, best_idx};
}

// Sound lower bound by falsification on a fixed grid: if the box distance
// were below eps, each partial-diameter comparison and each shifted-sep
// comparison below would have to hold; the largest eps where one fails is
// a certified lower bound.
Rat falsification_lower(const FiniteMmSpace& x, const FiniteMmSpace& y) {
  StepFunction px = partial_diam_profile(x, Rat(1));
  StepFunction py = partial_diam_profile(y, Rat(1));
  Rat lower = 0;
  for (int j = 15; j >= 1; --j) {
    Rat eps(j, 16);
    bool falsified = false;
    for (int a = 1; a <= 64 && !falsified; ++a) {
      Rat alpha(a, 64);
      if (alpha <= eps) continue;
      Rat shifted = alpha - eps;
      if (px.value_at(shifted) > py.value_at(alpha) + eps ||
          py.value_at(shifted) > px.value_at(alpha) + eps)
        falsified = true;
    }
    if (falsified) {
      lower = eps;
      break;
    }
  }
  std::vector<KappaTuple> demands{KappaTuple({Rat(1, 4), Rat(1, 4)}),
                                  KappaTuple({Rat(1, 2), Rat(1, 2)})};
  for (const KappaTuple& kappa : demands) {
    Rat sx = sep(x, kappa), sy = sep(y, kappa);
    for (int j = 15; j >= 1; --j) {
      Rat eps(j, 16);
      if (eps <= lower) break;
      Rat sys = sep(y, kappa.shifted(eps));
      Rat sxs = sep(x, kappa.shifted(eps));
      if ((sys > eps && sx < sys - eps) || (sxs > eps && sy < sxs - eps)) {
        lower = eps;
        break;
      }
    }
  }
  return lower;
}

}  // namespace

BoxBounds box_bounds(const FiniteMmSpace& x, const FiniteMmSpace& y,
                     unsigned jobs) {
  const std::vector<Rat>& mu = x.weights();
  const std::vector<Rat>& nu = y.weights();
  const bool tiny = x.size() <= 2 && y.size() <= 2;
  std::vector<Table> pool;
  bool have_vertices = false;
  {
    auto vertices = vertex_couplings(mu, nu, tiny ? 100 : 10000);
    if (vertices) {
      have_vertices = true;
      pool.reserve(vertices->size());
      for (const Coupling& c : *vertices) pool.push_back(c.matrix());
    }
  }
  if (!have_vertices) {
    pool = seed_tables(x, y);
    long budget = 1000;
    for (Table& t : pool) {
      Rat v = box_core(x, y, t, nullptr, nullptr);
      --budget;
      improve_table(x, y, t, v, budget);
      if (budget <= 0) break;
    }
  }
  auto [upper, best_idx] = min_over_pool(x, y, pool, jobs);
  BoxWitness witness{Coupling::validate(pool[best_idx], mu, nu), {}, upper};
  box_core(x, y, pool[best_idx], &witness.kept_pairs, nullptr);
  if (tiny) return BoxBounds{upper, upper, true, std::move(witness)};
  Rat lower = falsification_lower(x, y);
  return BoxBounds{lower, upper, lower == upper, std::move(witness)};
}

Rat dconc_upper(const FiniteMmSpace& x, const FiniteMmSpace& y,
                unsigned jobs) {
  return box_bounds(x, y, jobs).upper;
}

}  // namespace mmkit
