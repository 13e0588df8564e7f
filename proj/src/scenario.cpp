#include "stochuc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>

namespace stochuc {

namespace {

using Curve = std::vector<double>;

double dist2(const Curve& a, const Curve& b) {
    double s = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double d = a[t] - b[t];
        s += d * d;
    }
    return s;
}

// Uniform double in [0,1) with the same stream on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<Curve> seed_plus_plus(const std::vector<Curve>& pts, int k, std::mt19937_64& rng) {
    const auto n = pts.size();
    std::vector<Curve> centers;
    centers.push_back(pts[static_cast<std::size_t>(rng() % n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = dist2(pts[i], centers[0]);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::size_t pick = 0;
        if (total > 0.0) {
            const double r = unit(rng) * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (r < acc && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            while (d2[pick] == 0.0 && pick > 0) --pick;
        } else {
            pick = static_cast<std::size_t>(rng() % n);
        }
        centers.push_back(pts[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], dist2(pts[i], centers.back()));
    }
    return centers;
}

// Nearest-centroid assignment with lowest-index ties, then empty-cluster repair.
double assign(const std::vector<Curve>& pts, std::vector<Curve>& centers, std::vector<int>& label) {
    const auto n = pts.size();
    const auto k = centers.size();
    std::vector<double> d(n);
    std::vector<int> size(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int best = 0;
        double bd = dist2(pts[i], centers[0]);
        for (std::size_t c = 1; c < k; ++c) {
            const double v = dist2(pts[i], centers[c]);
            if (v < bd) {
                bd = v;
                best = static_cast<int>(c);
            }
        }
        label[i] = best;
        d[i] = bd;
        ++size[static_cast<std::size_t>(best)];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (size[c] > 0) continue;
        std::size_t far = 0;
        double fd = -1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (size[static_cast<std::size_t>(label[i])] > 1 && d[i] > fd) {
                fd = d[i];
                far = i;
            }
        --size[static_cast<std::size_t>(label[far])];
        label[far] = static_cast<int>(c);
        size[c] = 1;
        centers[c] = pts[far];
        d[far] = 0.0;
    }
    double sse = 0.0;
    for (double v : d) sse += v;
    return sse;
}

void update(const std::vector<Curve>& pts, const std::vector<int>& label, std::vector<Curve>& centers) {
    const auto T = pts.front().size();
    std::vector<int> size(centers.size(), 0);
    for (auto& c : centers) c.assign(T, 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto& c = centers[static_cast<std::size_t>(label[i])];
        for (std::size_t t = 0; t < T; ++t) c[t] += pts[i][t];
        ++size[static_cast<std::size_t>(label[i])];
    }
    for (std::size_t c = 0; c < centers.size(); ++c)
        for (auto& v : centers[c]) v /= size[c];
}

double sse_of(const std::vector<Curve>& pts, const std::vector<int>& label, const std::vector<Curve>& centers) {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) s += dist2(pts[i], centers[static_cast<std::size_t>(label[i])]);
    return s;
}

}  // namespace

void validate_curves(const CurveSet& cs) {
    if (cs.curves.empty()) throw std::invalid_argument("curve set '" + cs.label + "' is empty");
    const auto T = cs.curves.front().size();
    if (T == 0) throw std::invalid_argument("curve set '" + cs.label + "' has no periods");
    for (std::size_t d = 0; d < cs.curves.size(); ++d) {
        if (cs.curves[d].size() != T)
            throw std::invalid_argument("curve set '" + cs.label + "': day " + std::to_string(d) + " has a different period count");
        for (double v : cs.curves[d])
            if (!(v >= 0.0)) throw std::invalid_argument("curve set '" + cs.label + "': negative or NaN entry on day " + std::to_string(d));
    }
}

ClusterResult kmeans(const CurveSet& cs, int k, std::uint64_t seed, int max_iterations) {
    validate_curves(cs);
    if (k < 1 || k > cs.days()) throw std::invalid_argument("kmeans: k must lie in [1, day count]");
    const auto& pts = cs.curves;
    std::mt19937_64 rng(seed);
    ClusterResult r;
    r.centroids = seed_plus_plus(pts, k, rng);
    r.assignments.assign(pts.size(), -1);
    r.sse_history.push_back(assign(pts, r.centroids, r.assignments));
    bool converged = false;
    while (r.iterations < max_iterations) {
        ++r.iterations;
        update(pts, r.assignments, r.centroids);
        const auto before = r.assignments;
        r.sse_history.push_back(assign(pts, r.centroids, r.assignments));
        if (r.assignments == before) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        update(pts, r.assignments, r.centroids);
        r.sse_history.push_back(sse_of(pts, r.assignments, r.centroids));
    }
    r.sse = sse_of(pts, r.assignments, r.centroids);
    r.probabilities.assign(static_cast<std::size_t>(k), 0.0);
    for (int a : r.assignments) r.probabilities[static_cast<std::size_t>(a)] += 1.0;
    for (auto& p : r.probabilities) p /= static_cast<double>(pts.size());
    return r;
}

int elbow_from_sse(const std::vector<int>& ks, const std::vector<double>& sse) {
    if (ks.size() < 2 || ks.size() != sse.size()) throw std::invalid_argument("elbow: need at least two points");
    const double x1 = ks.front(), y1 = sse.front();
    const double x2 = ks.back(), y2 = sse.back();
    const double norm = std::hypot(x2 - x1, y2 - y1);
    int best = ks.front();
    double best_d = 0.0;
    const double tie = 1e-12 * std::max({1.0, std::abs(y1), std::abs(y2)});
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double d = std::abs((x2 - x1) * (y1 - sse[i]) - (x1 - ks[i]) * (y2 - y1)) / norm;
        if (d > best_d + tie) {
            best_d = d;
            best = ks[i];
        }
    }
    return best;
}

int elbow_k(const CurveSet& cs, int k_min, int k_max, std::uint64_t seed, int threads) {
    validate_curves(cs);
    if (k_min < 1 || k_min >= k_max || k_max > cs.days()) throw std::invalid_argument("elbow_k: invalid k range");
    std::vector<int> ks;
    for (int k = k_min; k <= k_max; ++k) ks.push_back(k);
    std::vector<double> sse(ks.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < ks.size(); ++i) sse[i] = kmeans(cs, ks[i], seed).sse;
    } else {
        std::vector<std::future<double>> jobs;
        for (int k : ks) jobs.push_back(std::async(std::launch::async, [&cs, k, seed] { return kmeans(cs, k, seed).sse; }));
        for (std::size_t i = 0; i < ks.size(); ++i) sse[i] = jobs[i].get();
    }
    return elbow_from_sse(ks, sse);
}

ScenarioSet joint_scenarios(const ClusterResult& wind, const ClusterResult& solar, const std::vector<double>& hydro) {
    if (wind.centroids.empty() || solar.centroids.empty()) throw std::invalid_argument("joint_scenarios: empty clusters");
    const auto T = wind.centroids.front().size();
    if (solar.centroids.front().size() != T || hydro.size() != T)
        throw std::invalid_argument("joint_scenarios: mismatched period counts");
    ScenarioSet set;
    for (int i = 0; i < wind.k(); ++i)
        for (int j = 0; j < solar.k(); ++j) {
            Scenario s;
            s.probability = wind.probabilities[static_cast<std::size_t>(i)] * solar.probabilities[static_cast<std::size_t>(j)];
            s.wind_cap = wind.centroids[static_cast<std::size_t>(i)];
            s.solar_cap = solar.centroids[static_cast<std::size_t>(j)];
            s.hydro_cap = hydro;
            set.scenarios.push_back(std::move(s));
        }
    return set;
}

}  // namespace stochuc
