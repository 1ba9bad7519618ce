// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "citeneed/encoder/embeddings.hpp"

namespace citeneed::analysis {

using Points = std::vector<std::vector<double>>;

struct KMeansResult {
  Points centroids;
  std::vector<std::size_t> assignments;
  double inertia = 0.0;              // sum of squared distances to the assigned centroid
  std::vector<double> inertia_trace;  // after each Lloyd assignment step
  std::size_t iterations = 0;
};

/// Lloyd iterations from the given centroids until the assignment stops
/// changing or max_iter. Ties go to the lower centroid index. A centroid left
/// without points moves onto the point farthest from its own centroid
/// (lowest index on ties).
KMeansResult lloyd(const Points& points, Points centroids, std::size_t max_iter);

/// Run i takes its first centroid at points[Rng(derive_seed(seed, i)).below(n)],
/// each next one the point farthest from those chosen (lowest index on
/// ties), then lloyd(). Returns the lowest-inertia run (earliest on ties).
/// Throws DataError when k is 0 or exceeds the number of points.
KMeansResult kmeans(const Points& points, std::size_t k, std::uint64_t seed, std::size_t max_iter = 300,
                    std::size_t n_init = 10);

struct ElbowChoice {
  std::size_t k = 0;
  bool clear = true;  // false when every second difference is ~0
};

/// inertias[i] belongs to k = i + 1. Picks the k in 2..K-1 with the largest
/// second difference I(k-1) - 2 I(k) + I(k+1), the smaller k on ties.
/// Throws Error for fewer than three values.
ElbowChoice elbow_select(const std::vector<double>& inertias);

struct ClusterReport {
  std::size_t k = 0;
  bool clear_elbow = true;
  std::vector<double> inertias;  // k = 1..k_max
  KMeansResult result;           // at the chosen k
};

/// Runs k = 1..k_max. k = 1 is the mean; every later k starts from the
/// previous solution plus the point farthest from it, so inertia never
/// increases along the sweep. With `fixed_k` the elbow is skipped.
ClusterReport cluster_sweep(const Points& points, std::size_t k_max, std::uint64_t seed,
                            std::size_t fixed_k = 0);

struct ReasonVectors {
  Points vectors;
  std::vector<std::size_t> kept;  // index of the source string per vector
  std::size_t dropped = 0;        // strings with no known token
};

/// Tokenizes and lowercases each free-text reason and averages the
/// pretrained vectors of its known tokens.
ReasonVectors reason_vectors(const std::vector<std::string>& reasons, const encoder::PretrainedVectors& vectors);

/// `text,cluster` rows in input order (dropped strings get cluster -1).
std::string cluster_assignments_csv(const std::vector<std::string>& reasons, const ReasonVectors& rv,
                                    const KMeansResult& result);

}  // namespace citeneed::analysis
