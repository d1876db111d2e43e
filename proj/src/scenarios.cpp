#include "mgplan/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include <fmt/format.h>

#include "mgplan/csv.hpp"

namespace mgplan::scenarios {

void ProfileSet::add(std::string key, ProfileKind kind,
                     std::vector<double> values) {
    Entry e{std::move(key), kind, std::move(values)};
    auto pos = std::lower_bound(
        entries.begin(), entries.end(), e, [](const Entry& a, const Entry& b) {
            return std::tie(a.kind, a.key) < std::tie(b.kind, b.key);
        });
    entries.insert(pos, std::move(e));
}

const ProfileSet::Entry* ProfileSet::find(const std::string& key,
                                          ProfileKind kind) const {
    for (const auto& e : entries)
        if (e.kind == kind && e.key == key) return &e;
    return nullptr;
}

std::vector<DayVector> slice_days(const ProfileSet& profiles) {
    if (profiles.entries.empty())
        throw EmptyInputError("slice_days: no profiles");
    for (const auto& e : profiles.entries) {
        if (e.values.size() != static_cast<std::size_t>(kDaysPerYear * kHoursPerDay))
            throw std::invalid_argument(
                fmt::format("profile {} has {} values, expected {}", e.key,
                            e.values.size(), kDaysPerYear * kHoursPerDay));
    }
    std::vector<DayVector> days(kDaysPerYear);
    const std::size_t width = profiles.entries.size() * kHoursPerDay;
    for (int d = 0; d < kDaysPerYear; ++d) {
        days[d].day_index = d;
        days[d].features.reserve(width);
        for (const auto& e : profiles.entries) {
            const auto* seg = e.values.data() + d * kHoursPerDay;
            days[d].features.insert(days[d].features.end(), seg,
                                    seg + kHoursPerDay);
        }
    }
    return days;
}

namespace {

// Canonical double in [0,1) from raw generator bits; avoids the
// implementation-defined std distributions so seeded runs are portable.
double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

int count_distinct(const std::vector<DayVector>& days) {
    std::set<std::vector<double>> uniq;
    for (const auto& d : days) uniq.insert(d.features);
    return static_cast<int>(uniq.size());
}

// Nearest centroid, ties to the lowest cluster index.
int nearest(const std::vector<double>& p,
            const std::vector<std::vector<double>>& centroids, double* dist_out) {
    int best = 0;
    double best_d = sq_dist(p, centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
        const double d = sq_dist(p, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    if (dist_out) *dist_out = best_d;
    return best;
}

std::vector<std::vector<double>> kmeanspp_init(const std::vector<DayVector>& days,
                                               int k, std::mt19937_64& gen) {
    const int n = static_cast<int>(days.size());
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    const int first = std::min(n - 1, static_cast<int>(uniform01(gen) * n));
    centroids.push_back(days[first].features);

    std::vector<double> d2(n);
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = sq_dist(days[i].features, centroids.back());
            if (centroids.size() == 1 || d < d2[i]) d2[i] = d;
            total += d2[i];
        }
        int pick = -1;
        if (total > 0.0) {
            const double target = uniform01(gen) * total;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        }
        if (pick < 0) {
            // All remaining mass is on already-chosen points; take the first
            // day not yet used as a centroid (k <= distinct guards this).
            for (int i = 0; i < n && pick < 0; ++i) {
                bool used = false;
                for (const auto& c : centroids)
                    if (c == days[i].features) used = true;
                if (!used) pick = i;
            }
            if (pick < 0) pick = 0;
        }
        centroids.push_back(days[pick].features);
    }
    return centroids;
}

// Assign every day to its nearest centroid; an emptied cluster is reseeded
// at the day farthest from its current centroid and the pass restarts.
std::vector<int> assign_with_repair(const std::vector<DayVector>& days,
                                    std::vector<std::vector<double>>& centroids) {
    const int n = static_cast<int>(days.size());
    const int k = static_cast<int>(centroids.size());
    std::vector<int> assignment(n);
    std::vector<double> dist(n);
    // Each repair strictly lowers the SSE, so this terminates; the bound is
    // a safety net only.
    for (int repair = 0; repair <= 2 * k + 8; ++repair) {
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            assignment[i] = nearest(days[i].features, centroids, &dist[i]);
            counts[assignment[i]]++;
        }
        int empty = -1;
        for (int c = 0; c < k; ++c)
            if (counts[c] == 0) {
                empty = c;
                break;
            }
        if (empty < 0) return assignment;
        int farthest = 0;
        for (int i = 1; i < n; ++i)
            if (dist[i] > dist[farthest]) farthest = i;
        centroids[empty] = days[farthest].features;
    }
    throw std::logic_error("kmeans: empty-cluster repair did not converge");
}

double sse(const std::vector<DayVector>& days,
           const std::vector<std::vector<double>>& centroids,
           const std::vector<int>& assignment) {
    double s = 0.0;
    for (std::size_t i = 0; i < days.size(); ++i)
        s += sq_dist(days[i].features, centroids[assignment[i]]);
    return s;
}

}  // namespace

ClusterResult kmeans(const std::vector<DayVector>& days, int k,
                     std::uint64_t seed, int max_iter, double tol) {
    if (days.empty()) throw EmptyInputError("kmeans: no day vectors");
    if (k < 1) throw KTooLargeError("kmeans: k must be >= 1");
    const int distinct = count_distinct(days);
    if (k > distinct) {
        throw KTooLargeError(fmt::format(
            "kmeans: k={} exceeds the {} distinct day vectors", k, distinct));
    }

    std::mt19937_64 gen(seed);
    ClusterResult res;
    res.centroids = kmeanspp_init(days, k, gen);
    res.assignment = assign_with_repair(days, res.centroids);
    res.objective_trace.push_back(sse(days, res.centroids, res.assignment));

    const std::size_t width = days[0].features.size();
    for (int iter = 0; iter < max_iter; ++iter) {
        // Centroid update: mean of members.
        std::vector<std::vector<double>> next(k, std::vector<double>(width, 0.0));
        std::vector<int> counts(k, 0);
        for (std::size_t i = 0; i < days.size(); ++i) {
            const int c = res.assignment[i];
            counts[c]++;
            for (std::size_t f = 0; f < width; ++f)
                next[c][f] += days[i].features[f];
        }
        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            for (std::size_t f = 0; f < width; ++f) next[c][f] /= counts[c];
            movement = std::max(movement, sq_dist(next[c], res.centroids[c]));
        }
        res.centroids = std::move(next);

        auto assignment = assign_with_repair(days, res.centroids);
        res.objective_trace.push_back(sse(days, res.centroids, assignment));
        res.iterations = iter + 1;
        const bool fixed_point = assignment == res.assignment;
        res.assignment = std::move(assignment);
        if (fixed_point || movement < tol * tol) break;
    }

    res.weights.assign(k, 0);
    for (int a : res.assignment) res.weights[a]++;
    return res;
}

std::string posture_name(Posture p) {
    switch (p) {
        case Posture::best: return "best";
        case Posture::nominal: return "nominal";
        case Posture::worst: return "worst";
    }
    return "?";
}

double RankingWeights::weight_for(const std::string& key,
                                  ProfileKind kind) const {
    auto it = per_key.find(key);
    if (it != per_key.end()) return it->second;
    return kind == ProfileKind::demand ? demand : availability;
}

const std::vector<RepresentativeDay>& Triplet::posture_set(Posture p) const {
    switch (p) {
        case Posture::best: return best;
        case Posture::worst: return worst;
        default: return nominal;
    }
}

namespace {

RepresentativeDay day_from_features(const ProfileSet& profiles,
                                    const std::vector<double>& features,
                                    std::string id, double weight) {
    RepresentativeDay day;
    day.id = std::move(id);
    day.weight = weight;
    std::size_t off = 0;
    for (const auto& e : profiles.entries) {
        DayProfile prof{};
        for (int h = 0; h < kHoursPerDay; ++h)
            prof[h] = std::clamp(features[off + h], 0.0, 1.0);
        off += kHoursPerDay;
        if (e.kind == ProfileKind::demand)
            day.demand_profile[e.key] = prof;
        else
            day.availability_profile[e.key] = prof;
    }
    return day;
}

double stress_key(const ProfileSet& profiles, const std::vector<double>& features,
                  const RankingWeights& ranking) {
    double s = 0.0;
    std::size_t off = 0;
    for (const auto& e : profiles.entries) {
        const double w = ranking.weight_for(e.key, e.kind);
        for (int h = 0; h < kHoursPerDay; ++h) s += w * features[off + h];
        off += kHoursPerDay;
    }
    return s;
}

}  // namespace

Triplet extract_triplet(const ProfileSet& profiles, int k, std::uint64_t seed,
                        const RankingWeights& ranking, int max_iter,
                        double tol) {
    const auto days = slice_days(profiles);
    Triplet out;
    out.clustering = kmeans(days, k, seed, max_iter, tol);

    for (int c = 0; c < k; ++c) {
        const double weight = out.clustering.weights[c];
        const std::string id = fmt::format("o{}", c);
        out.nominal.push_back(day_from_features(
            profiles, out.clustering.centroids[c], id, weight));

        int best_day = -1, worst_day = -1;
        double best_key = std::numeric_limits<double>::infinity();
        double worst_key = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < days.size(); ++i) {
            if (out.clustering.assignment[i] != c) continue;
            const double key = stress_key(profiles, days[i].features, ranking);
            if (key < best_key) {
                best_key = key;
                best_day = static_cast<int>(i);
            }
            if (key > worst_key) {
                worst_key = key;
                worst_day = static_cast<int>(i);
            }
        }
        out.best.push_back(day_from_features(profiles, days[best_day].features,
                                             id, weight));
        out.worst.push_back(day_from_features(profiles, days[worst_day].features,
                                              id, weight));
    }
    return out;
}

void write_scenarios_csv(const std::filesystem::path& path,
                         const std::vector<RepresentativeDay>& days) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "scenario_id,weight,profile_key";
    for (int h = 0; h < kHoursPerDay; ++h) out << ",h" << h;
    out << '\n';
    auto dump = [&out](const RepresentativeDay& day,
                       const std::map<std::string, DayProfile>& profs) {
        for (const auto& [key, prof] : profs) {
            out << day.id << ',' << csv::format_double(day.weight) << ',' << key;
            for (double v : prof) out << ',' << csv::format_double(v);
            out << '\n';
        }
    };
    for (const auto& day : days) {
        dump(day, day.demand_profile);
        dump(day, day.availability_profile);
    }
}

}  // namespace mgplan::scenarios
