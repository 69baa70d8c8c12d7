#include "mmkit/space.hpp"

#include <algorithm>
#include <numeric>

namespace mmkit {

FiniteMmSpace FiniteMmSpace::validate(Data data) {
  const std::size_t n = data.labels.size();
  if (n == 0) {
    throw validation_error(errc::dimension_mismatch, "space has no points");
  }
  if (data.dist.size() != n || data.weights.size() != n) {
    throw validation_error(errc::dimension_mismatch,
                           "labels, dist and weights disagree in size");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (data.dist[i].size() != n) {
      throw validation_error(errc::dimension_mismatch,
                             "dist row " + std::to_string(i) +
                                 " has wrong length");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        if (data.dist[i][i] != 0) {
          throw validation_error(errc::asymmetric_matrix,
                                 "nonzero diagonal at " + std::to_string(i));
        }
        continue;
      }
      if (data.dist[i][j] != data.dist[j][i]) {
        throw validation_error(errc::asymmetric_matrix,
                               "dist(" + std::to_string(i) + "," +
                                   std::to_string(j) + ") != transpose");
      }
      if (data.dist[i][j] < 0) {
        throw validation_error(errc::zero_distance_distinct_points,
                               "negative distance at (" + std::to_string(i) +
                                   "," + std::to_string(j) + ")");
      }
      if (data.dist[i][j] == 0) {
        throw validation_error(errc::zero_distance_distinct_points,
                               "distinct points " + std::to_string(i) +
                                   " and " + std::to_string(j) +
                                   " at distance zero");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (data.dist[i][k] > data.dist[i][j] + data.dist[j][k]) {
          throw validation_error(
              errc::triangle_violation,
              "d(" + std::to_string(i) + "," + std::to_string(k) +
                  ") > d(" + std::to_string(i) + "," + std::to_string(j) +
                  ") + d(" + std::to_string(j) + "," + std::to_string(k) +
                  ")");
        }
      }
    }
  }
  Rat total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (data.weights[i] <= 0) {
      throw validation_error(errc::nonpositive_weight,
                             "weight " + std::to_string(i) +
                                 " is not strictly positive");
    }
    total += data.weights[i];
  }
  if (total != 1) {
    throw validation_error(errc::weight_sum_not_one,
                           "weights sum to " + rat_to_string(total));
  }
  return FiniteMmSpace(std::move(data));
}

Rat FiniteMmSpace::diameter() const {
  Rat d = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      d = rat_max(d, dist(i, j));
  return d;
}

Rat FiniteMmSpace::max_weight() const {
  return *std::max_element(data_.weights.begin(), data_.weights.end());
}

Rat FiniteMmSpace::min_weight() const {
  return *std::min_element(data_.weights.begin(), data_.weights.end());
}

Rat FiniteMmSpace::min_positive_dist() const {
  Rat best = 0;
  bool seen = false;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      if (!seen || dist(i, j) < best) {
        best = dist(i, j);
        seen = true;
      }
    }
  }
  return best;
}

ScaleFactor::ScaleFactor(Rat value) : value_(std::move(value)) {
  if (value_ <= 0) {
    throw precondition_error(errc::nonpositive_scale,
                             "scale factor " + rat_to_string(value_));
  }
}

FiniteMmSpace scale(const FiniteMmSpace& x, const ScaleFactor& t) {
  FiniteMmSpace::Data data;
  data.labels = x.labels();
  data.weights = x.weights();
  data.dist = x.dist_matrix();
  for (auto& row : data.dist)
    for (auto& entry : row) entry *= t.value();
  return FiniteMmSpace::validate(std::move(data));
}

namespace {

// Distance-preserving extension point by point; weights already matched.
bool extend_isomorphism(const FiniteMmSpace& x, const FiniteMmSpace& y,
                        std::vector<std::size_t>& image,
                        std::vector<bool>& used, std::size_t i) {
  const std::size_t n = x.size();
  if (i == n) return true;
  for (std::size_t j = 0; j < n; ++j) {
    if (used[j] || x.weight(i) != y.weight(j)) continue;
    bool ok = true;
    for (std::size_t k = 0; k < i; ++k) {
      if (x.dist(i, k) != y.dist(j, image[k])) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    image[i] = j;
    used[j] = true;
    if (extend_isomorphism(x, y, image, used, i + 1)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace

bool is_mm_isomorphic(const FiniteMmSpace& x, const FiniteMmSpace& y) {
  if (x.size() != y.size()) return false;
  // Weight multisets must agree before any assignment is tried.
  std::vector<Rat> wx = x.weights(), wy = y.weights();
  std::sort(wx.begin(), wx.end());
  std::sort(wy.begin(), wy.end());
  if (wx != wy) return false;
  std::vector<std::size_t> image(x.size());
  std::vector<bool> used(x.size(), false);
  return extend_isomorphism(x, y, image, used, 0);
}

}  // namespace mmkit
