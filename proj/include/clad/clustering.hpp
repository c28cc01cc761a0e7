#pragma once

#include <cstdint>
#include <vector>

namespace clad::cluster {

struct KmeansResult {
    std::vector<int> assignment;                 // point -> cluster in [0, k)
    std::vector<std::vector<double>> centroids;  // k centroids (empty clusters keep last value)
    int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding. Ties break toward the lowest
// centroid index; an empty cluster steals the point farthest from its
// assigned centroid (when a donor cluster has at least two points).
KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                    int max_iter = 100);

// Minimum-cost assignment on a square matrix. Returns sigma with row j matched
// to column sigma[j]; among cost-optimal permutations the lexicographically
// smallest is returned.
std::vector<int> min_cost_matching(const std::vector<std::vector<double>>& cost);

// cost[j][j'] = mean over clients of new cluster j of their loss-vector entry
// for existing model j'; rows of empty clusters are a large sentinel
std::vector<std::vector<double>> build_match_cost(const std::vector<int>& assignment,
                                                  const std::vector<std::vector<double>>& vectors,
                                                  int k);

// Principal-component scores of the rows (Gram-matrix route), at most
// max_components columns. Deterministic up to a fixed sign convention.
std::vector<std::vector<double>> pca_project(const std::vector<std::vector<double>>& rows,
                                             int max_components);

// Fraction of points whose cluster matches their ground-truth group under the
// best injective cluster-to-group relabeling.
double assignment_purity(const std::vector<int>& assignment, const std::vector<int>& group_ids);

}  // namespace clad::cluster
