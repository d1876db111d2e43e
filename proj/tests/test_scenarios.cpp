#include <doctest.h>

#include <fstream>
#include <random>
#include <set>

#include "mgplan/scenarios.hpp"
#include "support/fixture_files.hpp"
#include "support/test_cases.hpp"

using namespace mgplan;
using namespace mgplan::scenarios;

namespace {

// A year where every day repeats one of the given 24-hour day templates,
// chosen by day index.
ProfileSet year_from_days(
    const std::vector<std::pair<std::string, ProfileKind>>& layout,
    const std::vector<std::map<std::string, DayProfile>>& day_templates,
    const std::vector<int>& day_choice) {
    ProfileSet set;
    for (const auto& [key, kind] : layout) {
        std::vector<double> values;
        values.reserve(8760);
        for (int d = 0; d < kDaysPerYear; ++d) {
            const auto& prof = day_templates[day_choice[d]].at(key);
            values.insert(values.end(), prof.begin(), prof.end());
        }
        set.add(key, kind, std::move(values));
    }
    return set;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("365 identical days collapse to one centroid of weight 365") {
    std::vector<std::map<std::string, DayProfile>> days(1);
    days[0]["load"] = testsupport::flat_profile(0.7);
    const auto profiles = year_from_days({{"load", ProfileKind::demand}}, days,
                                         std::vector<int>(365, 0));
    const auto vecs = slice_days(profiles);
    const auto res = kmeans(vecs, 1, 42);
    REQUIRE(res.centroids.size() == 1);
    CHECK(res.weights[0] == 365);
    for (double f : res.centroids[0]) CHECK(f == doctest::Approx(0.7));
    CHECK(res.objective() == doctest::Approx(0.0));
}

TEST_CASE("two distinct day values separate exactly with k=2") {
    std::vector<std::map<std::string, DayProfile>> days(2);
    days[0]["load"] = testsupport::flat_profile(0.2);
    days[1]["load"] = testsupport::flat_profile(0.9);
    std::vector<int> choice(365, 0);
    for (int d = 200; d < 365; ++d) choice[d] = 1;  // 200 low days, 165 high
    const auto profiles =
        year_from_days({{"load", ProfileKind::demand}}, days, choice);
    const auto vecs = slice_days(profiles);
    const auto res = kmeans(vecs, 2, 1);
    REQUIRE(res.centroids.size() == 2);
    CHECK(res.objective() == doctest::Approx(0.0));
    std::multiset<int> weights(res.weights.begin(), res.weights.end());
    CHECK(weights == std::multiset<int>{165, 200});
    std::multiset<double> levels{res.centroids[0][0], res.centroids[1][0]};
    CHECK(*levels.begin() == doctest::Approx(0.2));
    CHECK(*levels.rbegin() == doctest::Approx(0.9));
}

TEST_CASE("k beyond the distinct-day count is rejected") {
    std::vector<std::map<std::string, DayProfile>> days(2);
    days[0]["load"] = testsupport::flat_profile(0.2);
    days[1]["load"] = testsupport::flat_profile(0.9);
    std::vector<int> choice(365, 0);
    choice[100] = 1;
    const auto profiles =
        year_from_days({{"load", ProfileKind::demand}}, days, choice);
    const auto vecs = slice_days(profiles);
    CHECK_THROWS_AS(kmeans(vecs, 366, 1), KTooLargeError);
    CHECK_THROWS_AS(kmeans(vecs, 3, 1), KTooLargeError);  // only 2 distinct
    CHECK_THROWS_AS(kmeans(vecs, 0, 1), KTooLargeError);
    CHECK_THROWS_AS(kmeans({}, 1, 1), EmptyInputError);
}

TEST_CASE("objective is monotone and the assignment is a fixed point") {
    std::mt19937_64 gen(17);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<std::map<std::string, DayProfile>> days(12);
        for (auto& d : days) {
            d["load"] = testsupport::random_profile(gen, 0.1, 1.0);
            d["wind"] = testsupport::random_profile(gen, 0.0, 1.0);
        }
        std::vector<int> choice(365);
        for (auto& c : choice) c = testsupport::uniform_int(gen, 0, 11);
        const auto profiles = year_from_days({{"load", ProfileKind::demand},
                                              {"wind", ProfileKind::availability}},
                                             days, choice);
        const auto vecs = slice_days(profiles);
        const int k = testsupport::uniform_int(gen, 1, 8);
        const auto res = kmeans(vecs, k, rep);

        for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
            CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-12);

        // fixed point: re-assigning to the nearest centroid changes nothing
        for (std::size_t d = 0; d < vecs.size(); ++d) {
            int nearest = 0;
            double best = sq_dist(vecs[d].features, res.centroids[0]);
            for (std::size_t c = 1; c < res.centroids.size(); ++c) {
                const double dist = sq_dist(vecs[d].features, res.centroids[c]);
                if (dist < best) {
                    best = dist;
                    nearest = static_cast<int>(c);
                }
            }
            CHECK(nearest == res.assignment[d]);
        }

        int total = 0;
        for (int w : res.weights) {
            CHECK(w >= 1);
            total += w;
        }
        CHECK(total == 365);
    }
}

TEST_CASE("k equal to the distinct-day count drives the objective to zero") {
    std::mt19937_64 gen(23);
    std::vector<std::map<std::string, DayProfile>> days(6);
    for (auto& d : days) d["load"] = testsupport::random_profile(gen, 0.0, 1.0);
    std::vector<int> choice(365);
    for (int i = 0; i < 365; ++i) choice[i] = i % 6;
    const auto profiles =
        year_from_days({{"load", ProfileKind::demand}}, days, choice);
    const auto res = kmeans(slice_days(profiles), 6, 3);
    CHECK(res.objective() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("identical seeds give identical clusterings") {
    std::mt19937_64 gen(29);
    std::vector<std::map<std::string, DayProfile>> days(9);
    for (auto& d : days) d["load"] = testsupport::random_profile(gen, 0.0, 1.0);
    std::vector<int> choice(365);
    for (auto& c : choice) c = testsupport::uniform_int(gen, 0, 8);
    const auto profiles =
        year_from_days({{"load", ProfileKind::demand}}, days, choice);
    const auto vecs = slice_days(profiles);
    const auto a = kmeans(vecs, 4, 1234);
    const auto b = kmeans(vecs, 4, 1234);
    CHECK(a.assignment == b.assignment);
    CHECK(a.centroids == b.centroids);
    CHECK(a.weights == b.weights);
}

TEST_CASE("constant profiles make best, nominal and worst coincide") {
    // binary-exact constants so the centroid mean is exact as well
    std::vector<std::map<std::string, DayProfile>> days(1);
    days[0]["load"] = testsupport::flat_profile(0.5);
    days[0]["wind"] = testsupport::flat_profile(0.25);
    const auto profiles = year_from_days({{"load", ProfileKind::demand},
                                          {"wind", ProfileKind::availability}},
                                         days, std::vector<int>(365, 0));
    const auto triplet = extract_triplet(profiles, 1, 7);
    REQUIRE(triplet.best.size() == 1);
    CHECK(triplet.best[0].weight == 365.0);
    CHECK(triplet.best[0].demand_profile == triplet.nominal[0].demand_profile);
    CHECK(triplet.best[0].availability_profile ==
          triplet.worst[0].availability_profile);
    CHECK(triplet.nominal[0].id == triplet.worst[0].id);
}

TEST_CASE("the worst day maximizes net-load stress (zero-wind day wins)") {
    std::mt19937_64 gen(31);
    std::vector<std::map<std::string, DayProfile>> days(3);
    days[0]["load"] = testsupport::flat_profile(0.5);
    days[0]["wind"] = testsupport::flat_profile(0.8);
    days[1]["load"] = testsupport::flat_profile(0.5);
    days[1]["wind"] = testsupport::flat_profile(0.5);
    days[2]["load"] = testsupport::flat_profile(0.55);
    days[2]["wind"] = testsupport::flat_profile(0.0);  // calm day
    std::vector<int> choice(365, 0);
    for (int d = 100; d < 250; ++d) choice[d] = 1;
    choice[300] = 2;
    const auto profiles = year_from_days({{"load", ProfileKind::demand},
                                          {"wind", ProfileKind::availability}},
                                         days, choice);

    // oracle: argmax over raw days of (sum demand - sum availability)
    const auto vecs = slice_days(profiles);
    int argmax = 0;
    double best_key = -1e18;
    for (const auto& day : vecs) {
        double key = 0.0;
        for (int h = 0; h < 24; ++h)
            key += day.features[h] - day.features[24 + h];
        if (key > best_key) {
            best_key = key;
            argmax = day.day_index;
        }
    }
    CHECK(argmax == 300);

    const auto triplet = extract_triplet(profiles, 1, 11);
    REQUIRE(triplet.worst.size() == 1);
    for (double v : triplet.worst[0].availability_profile.at("wind"))
        CHECK(v == 0.0);
    for (double v : triplet.best[0].availability_profile.at("wind"))
        CHECK(v == doctest::Approx(0.8));
}

TEST_CASE("triplet weights conserve the year across postures") {
    std::mt19937_64 gen(37);
    std::vector<std::map<std::string, DayProfile>> days(5);
    for (auto& d : days) {
        d["load"] = testsupport::random_profile(gen, 0.2, 1.0);
        d["wind"] = testsupport::random_profile(gen, 0.0, 1.0);
    }
    std::vector<int> choice(365);
    for (auto& c : choice) c = testsupport::uniform_int(gen, 0, 4);
    const auto profiles = year_from_days({{"load", ProfileKind::demand},
                                          {"wind", ProfileKind::availability}},
                                         days, choice);
    const auto triplet = extract_triplet(profiles, 3, 5);
    for (const auto* set : {&triplet.best, &triplet.nominal, &triplet.worst}) {
        double total = 0.0;
        for (const auto& day : *set) total += day.weight;
        CHECK(total == doctest::Approx(365.0));
        CHECK(set->size() == 3);
    }
}

TEST_CASE("representative days export to the audit CSV") {
    std::vector<std::map<std::string, DayProfile>> days(1);
    days[0]["load"] = testsupport::flat_profile(0.6);
    days[0]["wind"] = testsupport::flat_profile(0.4);
    const auto profiles = year_from_days({{"load", ProfileKind::demand},
                                          {"wind", ProfileKind::availability}},
                                         days, std::vector<int>(365, 0));
    const auto triplet = extract_triplet(profiles, 1, 7);
    const auto path = testsupport::scratch_dir("scen") / "days.csv";
    write_scenarios_csv(path, triplet.nominal);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("scenario_id,weight,profile_key,h0", 0) == 0);
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);  // one demand profile + one availability profile
}

}  // TEST_SUITE
