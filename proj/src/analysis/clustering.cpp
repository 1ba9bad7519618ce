// SPDX-License-Identifier: Apache-2.0
#include "citeneed/analysis/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "citeneed/corpus/text.hpp"
#include "citeneed/error.hpp"
#include "citeneed/numerics/rng.hpp"
#include "citeneed/util/csv.hpp"

namespace citeneed::analysis {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

std::pair<std::size_t, double> nearest(const std::vector<double>& p, const Points& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = sq_dist(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return {best, best_d};
}

void check_points(const Points& points) {
  if (points.empty()) throw DataError("kmeans: no points");
  for (const auto& p : points) {
    if (p.size() != points.front().size()) throw ShapeError("kmeans: points differ in dimension");
  }
}

std::size_t farthest_from(const Points& points, const Points& centroids) {
  std::size_t best = 0;
  double best_d = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = nearest(points[i], centroids).second;
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

KMeansResult lloyd(const Points& points, Points centroids, std::size_t max_iter) {
  check_points(points);
  if (centroids.empty()) throw DataError("kmeans: no centroids");
  const std::size_t n = points.size(), k = centroids.size(), dim = points.front().size();
  KMeansResult out;
  out.assignments.assign(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> assign(n);
  for (std::size_t it = 0; it < std::max<std::size_t>(max_iter, 1); ++it) {
    double inertia = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto [c, d] = nearest(points[i], centroids);
      assign[i] = c;
      inertia += d;
    }
    out.inertia_trace.push_back(inertia);
    out.iterations = it + 1;
    const bool changed = assign != out.assignments;
    out.assignments = assign;
    out.inertia = inertia;
    if (!changed) break;

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < dim; ++j) sums[assign[i]][j] += points[i][j];
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = sq_dist(points[i], centroids[assign[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centroids[c] = points[far];
      assign[far] = c;
    }
  }
  out.centroids = std::move(centroids);
  return out;
}

KMeansResult kmeans(const Points& points, std::size_t k, std::uint64_t seed, std::size_t max_iter,
                    std::size_t n_init) {
  check_points(points);
  if (k == 0 || k > points.size()) {
    throw DataError("kmeans: k = " + std::to_string(k) + " with " + std::to_string(points.size()) + " points");
  }
  std::optional<KMeansResult> best;
  for (std::size_t run = 0; run < std::max<std::size_t>(n_init, 1); ++run) {
    numerics::Rng rng(numerics::derive_seed(seed, run));
    Points centroids{points[rng.below(points.size())]};
    while (centroids.size() < k) centroids.push_back(points[farthest_from(points, centroids)]);
    KMeansResult r = lloyd(points, std::move(centroids), max_iter);
    if (!best || r.inertia < best->inertia) best = std::move(r);
  }
  return *best;
}

ElbowChoice elbow_select(const std::vector<double>& inertias) {
  if (inertias.size() < 3) throw Error("elbow_select: need inertias for at least k = 1..3");
  double scale = 0;
  for (double v : inertias) scale = std::max(scale, std::abs(v));
  ElbowChoice out;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < inertias.size(); ++i) {
    const double d2 = inertias[i - 1] - 2.0 * inertias[i] + inertias[i + 1];
    if (d2 > best) {
      best = d2;
      out.k = i + 1;
    }
  }
  out.clear = best > 1e-9 * std::max(scale, 1e-300);
  return out;
}

ClusterReport cluster_sweep(const Points& points, std::size_t k_max, std::uint64_t seed, std::size_t fixed_k) {
  check_points(points);
  if (k_max == 0 || k_max > points.size()) {
    throw DataError("cluster_sweep: k_max = " + std::to_string(k_max) + " with " + std::to_string(points.size()) +
                    " points");
  }
  if (fixed_k > k_max) throw DataError("cluster_sweep: k exceeds k_max");
  ClusterReport report;
  std::vector<KMeansResult> runs;
  runs.push_back(kmeans(points, 1, seed, 300, 1));
  for (std::size_t k = 2; k <= k_max; ++k) {
    Points init = runs.back().centroids;
    init.push_back(points[farthest_from(points, init)]);
    runs.push_back(lloyd(points, std::move(init), 300));
  }
  for (const auto& r : runs) report.inertias.push_back(r.inertia);
  if (fixed_k) {
    report.k = fixed_k;
  } else if (k_max >= 3) {
    const ElbowChoice e = elbow_select(report.inertias);
    report.k = e.k;
    report.clear_elbow = e.clear;
  } else {
    report.k = k_max;
    report.clear_elbow = false;
  }
  report.result = runs[report.k - 1];
  return report;
}

ReasonVectors reason_vectors(const std::vector<std::string>& reasons, const encoder::PretrainedVectors& vectors) {
  ReasonVectors out;
  for (std::size_t i = 0; i < reasons.size(); ++i) {
    std::vector<double> mean(vectors.dim, 0.0);
    std::size_t known = 0;
    for (const std::string& tok : corpus::tokenize(reasons[i])) {
      auto it = vectors.vectors.find(corpus::to_lower(tok));
      if (it == vectors.vectors.end()) continue;
      for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += it->second[j];
      ++known;
    }
    if (known == 0) {
      ++out.dropped;
      continue;
    }
    for (double& v : mean) v /= static_cast<double>(known);
    out.vectors.push_back(std::move(mean));
    out.kept.push_back(i);
  }
  return out;
}

std::string cluster_assignments_csv(const std::vector<std::string>& reasons, const ReasonVectors& rv,
                                    const KMeansResult& result) {
  std::vector<long> cluster(reasons.size(), -1);
  for (std::size_t j = 0; j < rv.kept.size(); ++j) cluster[rv.kept[j]] = static_cast<long>(result.assignments.at(j));
  std::string out = "text,cluster\n";
  for (std::size_t i = 0; i < reasons.size(); ++i) {
    out += util::csv_field(reasons[i]) + "," + std::to_string(cluster[i]) + "\n";
  }
  return out;
}

}  // namespace citeneed::analysis
