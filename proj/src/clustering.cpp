#include "clad/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "clad/rng.hpp"

namespace clad::cluster {

namespace {

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                    int max_iter) {
    if (k <= 0) throw std::invalid_argument("kmeans: k must be positive");
    if (points.empty()) throw std::invalid_argument("kmeans: no points");
    const std::size_t n = points.size();
    const std::size_t dim = points[0].size();
    for (const auto& p : points) {
        if (p.size() != dim) throw std::invalid_argument("kmeans: inconsistent point dimensions");
    }

    Rng rng(seed);
    // k-means++ seeding
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    centroids.push_back(points[rng.index(n)]);
    std::vector<double> d2(n, 0.0);
    while (centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = sqdist(points[i], centroids[0]);
            for (std::size_t c = 1; c < centroids.size(); ++c) {
                best = std::min(best, sqdist(points[i], centroids[c]));
            }
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            // all points coincide with chosen centroids; fall back to the
            // lowest-index uncovered points for determinism
            centroids.push_back(points[centroids.size() % n]);
            continue;
        }
        const double u = rng.uniform() * total;
        double acc = 0.0;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc > u) {
                pick = i;
                break;
            }
        }
        centroids.push_back(points[pick]);
    }

    KmeansResult result;
    result.assignment.assign(n, 0);
    std::vector<int> counts(k, 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        result.iterations = iter + 1;
        bool changed = iter == 0;
        std::vector<int> next(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sqdist(points[i], centroids[0]);
            for (int c = 1; c < k; ++c) {
                const double d = sqdist(points[i], centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            next[i] = best;
            if (next[i] != result.assignment[i]) changed = true;
        }
        result.assignment = std::move(next);

        counts.assign(k, 0);
        for (const int a : result.assignment) ++counts[a];

        // repair empty clusters: steal the point farthest from its centroid
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t worst = n;
            double worst_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[result.assignment[i]] < 2) continue;
                const double d = sqdist(points[i], centroids[result.assignment[i]]);
                if (d > worst_d) {
                    worst_d = d;
                    worst = i;
                }
            }
            if (worst == n) continue;  // fewer distinct points than clusters
            --counts[result.assignment[worst]];
            result.assignment[worst] = c;
            ++counts[c];
            changed = true;
        }

        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            std::vector<double> mean(dim, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (result.assignment[i] != c) continue;
                for (std::size_t f = 0; f < dim; ++f) mean[f] += points[i][f];
            }
            for (double& v : mean) v /= counts[c];
            centroids[c] = std::move(mean);
        }
        if (!changed) break;
    }
    result.centroids = std::move(centroids);
    return result;
}

namespace {

// O(n^3) Kuhn-Munkres on a square matrix; returns the optimal cost and fills
// row_to_col
double hungarian_cost(const std::vector<std::vector<double>>& cost, std::vector<int>& row_to_col) {
    const int n = static_cast<int>(cost.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    row_to_col.assign(n, -1);
    double total = 0.0;
    for (int j = 1; j <= n; ++j) {
        if (p[j] == 0) continue;
        row_to_col[p[j] - 1] = j - 1;
        total += cost[p[j] - 1][j - 1];
    }
    return total;
}

}  // namespace

std::vector<int> min_cost_matching(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    if (n == 0) throw std::invalid_argument("min_cost_matching: empty matrix");
    for (const auto& row : cost) {
        if (row.size() != n) throw std::invalid_argument("min_cost_matching: matrix not square");
        for (const double c : row) {
            if (!std::isfinite(c)) {
                throw std::invalid_argument("min_cost_matching: non-finite cost entry");
            }
        }
    }
    std::vector<int> sigma;
    const double optimal = hungarian_cost(cost, sigma);
    const double eps = 1e-9 * (1.0 + std::abs(optimal));

    // refine to the lexicographically smallest optimal permutation by fixing
    // rows in order and re-solving the remainder
    std::vector<int> fixed(n, -1);
    std::vector<char> col_used(n, 0);
    double fixed_cost = 0.0;
    std::vector<std::size_t> free_cols;
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t fallback = n;
        double fallback_total = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < n && fixed[r] < 0; ++c) {
            if (col_used[c]) continue;
            // candidate: does fixing (r, c) still reach the optimum?
            free_cols.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (!col_used[j] && j != c) free_cols.push_back(j);
            }
            double rest = 0.0;
            if (!free_cols.empty()) {
                std::vector<std::vector<double>> sub(free_cols.size(),
                                                     std::vector<double>(free_cols.size(), 0.0));
                for (std::size_t i = 0; i < free_cols.size(); ++i) {
                    for (std::size_t j = 0; j < free_cols.size(); ++j) {
                        sub[i][j] = cost[r + 1 + i][free_cols[j]];
                    }
                }
                std::vector<int> tmp;
                rest = hungarian_cost(sub, tmp);
            }
            const double total = fixed_cost + cost[r][c] + rest;
            if (total <= optimal + eps) {
                fixed[r] = static_cast<int>(c);
            } else if (total < fallback_total) {
                fallback_total = total;
                fallback = c;
            }
        }
        if (fixed[r] < 0) fixed[r] = static_cast<int>(fallback);  // float-drift safety
        col_used[fixed[r]] = 1;
        fixed_cost += cost[r][fixed[r]];
    }
    return fixed;
}

std::vector<std::vector<double>> build_match_cost(const std::vector<int>& assignment,
                                                  const std::vector<std::vector<double>>& vectors,
                                                  int k) {
    if (assignment.size() != vectors.size()) {
        throw std::invalid_argument("build_match_cost: assignment does not cover the vectors");
    }
    std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const int j = assignment[i];
        if (j < 0 || j >= k) throw std::invalid_argument("build_match_cost: cluster out of range");
        if (vectors[i].size() != static_cast<std::size_t>(k)) {
            throw std::invalid_argument("build_match_cost: loss vector of wrong length");
        }
        for (int jp = 0; jp < k; ++jp) cost[j][jp] += vectors[i][jp];
        ++counts[j];
    }
    double max_mean = 0.0;
    for (int j = 0; j < k; ++j) {
        if (counts[j] == 0) continue;
        for (double& c : cost[j]) {
            c /= static_cast<double>(counts[j]);
            max_mean = std::max(max_mean, c);
        }
    }
    // empty clusters get a maximal cost; kept in the magnitude family of the
    // real entries so the matching arithmetic stays well conditioned
    const double sentinel = max_mean + 1.0;
    for (int j = 0; j < k; ++j) {
        if (counts[j] == 0) std::fill(cost[j].begin(), cost[j].end(), sentinel);
    }
    return cost;
}

namespace {

// cyclic Jacobi eigendecomposition of a symmetric matrix
void jacobi_eigen(std::vector<std::vector<double>>& a, std::vector<std::vector<double>>& vecs) {
    const std::size_t n = a.size();
    vecs.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) vecs[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        }
        if (off < 1e-22) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i][p];
                    const double aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p][i];
                    const double aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = vecs[i][p];
                    const double viq = vecs[i][q];
                    vecs[i][p] = c * vip - s * viq;
                    vecs[i][q] = s * vip + c * viq;
                }
            }
        }
    }
}

}  // namespace

std::vector<std::vector<double>> pca_project(const std::vector<std::vector<double>>& rows,
                                             int max_components) {
    if (rows.empty()) throw std::invalid_argument("pca_project: no rows");
    const std::size_t n = rows.size();
    const std::size_t p = rows[0].size();
    for (const auto& r : rows) {
        if (r.size() != p) throw std::invalid_argument("pca_project: inconsistent row lengths");
    }
    std::vector<double> mean(p, 0.0);
    for (const auto& r : rows) {
        for (std::size_t f = 0; f < p; ++f) mean[f] += r[f];
    }
    for (double& v : mean) v /= static_cast<double>(n);

    // Gram trick: eigenvectors of X Xt give the scores without forming the
    // p x p covariance
    std::vector<std::vector<double>> gram(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t f = 0; f < p; ++f) {
                s += (rows[i][f] - mean[f]) * (rows[j][f] - mean[f]);
            }
            gram[i][j] = s;
            gram[j][i] = s;
        }
    }
    std::vector<std::vector<double>> vecs;
    jacobi_eigen(gram, vecs);
    std::vector<std::pair<double, std::size_t>> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = {gram[i][i], i};
    std::stable_sort(eig.begin(), eig.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    const std::size_t q = std::min<std::size_t>(static_cast<std::size_t>(max_components), n);
    std::vector<std::vector<double>> scores(n, std::vector<double>(q, 0.0));
    for (std::size_t comp = 0; comp < q; ++comp) {
        const double lambda = std::max(eig[comp].first, 0.0);
        const std::size_t col = eig[comp].second;
        const double scale = std::sqrt(lambda);
        // sign convention: largest-magnitude entry positive
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (std::abs(vecs[i][col]) > std::abs(vecs[arg][col])) arg = i;
        }
        const double sign = vecs[arg][col] < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) scores[i][comp] = sign * vecs[i][col] * scale;
    }
    return scores;
}

double assignment_purity(const std::vector<int>& assignment, const std::vector<int>& group_ids) {
    if (assignment.size() != group_ids.size() || assignment.empty()) {
        throw std::invalid_argument("assignment_purity: size mismatch");
    }
    int k = 0, g = 0;
    for (const int a : assignment) k = std::max(k, a + 1);
    for (const int d : group_ids) g = std::max(g, d + 1);
    const int n = std::max(k, g);
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] < 0) continue;
        cost[assignment[i]][group_ids[i]] -= 1.0;  // negate counts for min-cost matching
    }
    const std::vector<int> sigma = min_cost_matching(cost);
    double matched = 0.0;
    for (int j = 0; j < n; ++j) matched -= cost[j][sigma[j]];
    return matched / static_cast<double>(assignment.size());
}

}  // namespace clad::cluster
