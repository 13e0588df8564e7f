#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stochuc/core.hpp"

namespace stochuc {

/// Daily output curves of one signal: curves[day][period], MW.
struct CurveSet {
    std::string label;
    std::vector<std::vector<double>> curves;

    [[nodiscard]] int days() const { return static_cast<int>(curves.size()); }
    [[nodiscard]] int periods() const { return curves.empty() ? 0 : static_cast<int>(curves.front().size()); }
};

struct ClusterResult {
    std::vector<std::vector<double>> centroids;  // k x periods
    std::vector<int> assignments;                // per day
    std::vector<double> probabilities;           // cluster size / day count
    double sse = 0.0;
    /// SSE after every assignment pass, first entry from the seeded centroids.
    std::vector<double> sse_history;
    int iterations = 0;

    [[nodiscard]] int k() const { return static_cast<int>(centroids.size()); }
};

/// Throws std::invalid_argument for an empty set, ragged or negative curves.
void validate_curves(const CurveSet& curves);

/// Lloyd's algorithm from k-means++ seeding; stops when assignments repeat or
/// after max_iterations. An empty cluster takes over the point farthest from
/// its centroid. Throws std::invalid_argument unless 1 <= k <= days.
[[nodiscard]] ClusterResult kmeans(const CurveSet& curves, int k, std::uint64_t seed, int max_iterations = 300);

/// Knee of an SSE profile: the point farthest from the chord joining its ends,
/// ties toward the smaller k. ks must be increasing with at least two entries.
[[nodiscard]] int elbow_from_sse(const std::vector<int>& ks, const std::vector<double>& sse);

/// Runs kmeans for every k in [k_min, k_max] and returns the knee.
/// Throws std::invalid_argument unless 1 <= k_min < k_max <= days.
[[nodiscard]] int elbow_k(const CurveSet& curves, int k_min, int k_max, std::uint64_t seed, int threads = 1);

/// Cartesian product of wind and solar clusters under independence; scenario
/// (i, j) is at index i * |solar| + j and carries the shared hydro curve.
[[nodiscard]] ScenarioSet joint_scenarios(const ClusterResult& wind, const ClusterResult& solar,
                                          const std::vector<double>& hydro_cap);

}  // namespace stochuc
