// Representative-day construction: slice year-long normalized profiles into
// daily feature vectors, cluster them with k-means, and derive weighted
// best / nominal / worst scenario sets.

#ifndef MGPLAN_SCENARIOS_HPP
#define MGPLAN_SCENARIOS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgplan/domain.hpp"

namespace mgplan::scenarios {

inline constexpr int kDaysPerYear = 365;

struct EmptyInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct KTooLargeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class ProfileKind { demand, availability };

/// Year-long normalized profiles, one entry per profile key. Entries are
/// kept sorted by (kind, key) so feature layouts are reproducible.
struct ProfileSet {
    struct Entry {
        std::string key;
        ProfileKind kind = ProfileKind::demand;
        std::vector<double> values;  // 8760 values in [0,1]
    };
    std::vector<Entry> entries;

    void add(std::string key, ProfileKind kind, std::vector<double> values);
    const Entry* find(const std::string& key, ProfileKind kind) const;
};

/// One calendar day as a feature vector: the 24-hour slices of every
/// profile concatenated in ProfileSet order.
struct DayVector {
    int day_index = 0;  // 0..364
    std::vector<double> features;
};

std::vector<DayVector> slice_days(const ProfileSet& profiles);

struct ClusterResult {
    std::vector<std::vector<double>> centroids;  // k feature vectors
    std::vector<int> assignment;                  // day index -> cluster
    std::vector<int> weights;                     // cluster -> member count
    std::vector<double> objective_trace;  // within-cluster SSE per iteration
    int iterations = 0;

    double objective() const {
        return objective_trace.empty() ? 0.0 : objective_trace.back();
    }
};

/// Lloyd's algorithm with k-means++ seeding. Deterministic for a given
/// seed; ties in assignment go to the lowest cluster index and an emptied
/// cluster is reseeded at the point farthest from its centroid. Requires
/// 1 <= k <= number of distinct day vectors.
ClusterResult kmeans(const std::vector<DayVector>& days, int k,
                     std::uint64_t seed, int max_iter = 200, double tol = 1e-9);

enum class Posture { best, nominal, worst };

std::string posture_name(Posture p);

/// Net-load stress key used to pick best/worst members inside a cluster:
/// sum over hours of (demand_weight * demand features) +
/// (availability_weight * availability features), with optional per-key
/// overrides of the weight.
struct RankingWeights {
    double demand = 1.0;
    double availability = -1.0;
    std::map<std::string, double> per_key;

    double weight_for(const std::string& key, ProfileKind kind) const;
};

struct Triplet {
    std::vector<RepresentativeDay> best;
    std::vector<RepresentativeDay> nominal;
    std::vector<RepresentativeDay> worst;
    ClusterResult clustering;

    const std::vector<RepresentativeDay>& posture_set(Posture p) const;
};

/// Clusters the year into k representative days and extracts the three
/// risk postures. Nominal days are the centroids; best/worst are actual
/// member days minimizing/maximizing the ranking key, all carrying the
/// cluster's member count as weight.
Triplet extract_triplet(const ProfileSet& profiles, int k, std::uint64_t seed,
                        const RankingWeights& ranking = {}, int max_iter = 200,
                        double tol = 1e-9);

/// CSV export (`scenario_id,weight,profile_key,h0..h23`), demand profiles
/// first, for audit and offline use.
void write_scenarios_csv(const std::filesystem::path& path,
                         const std::vector<RepresentativeDay>& days);

}  // namespace mgplan::scenarios

#endif
