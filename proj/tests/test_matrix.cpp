#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "extdep/matrix.hpp"
#include "extdep/synth.hpp"

using extdep::AssetStats;
using extdep::ClassSpec;
using extdep::DependenceClass;
using extdep::DependenceMatrix;
using extdep::PairResult;
using extdep::RandomStream;
using extdep::ReturnSeries;
using extdep::RunConfig;

namespace {

std::vector<std::string> make_dates(std::size_t n) {
    std::vector<std::string> dates;
    dates.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04zu-01-01", 1000 + i);   // lexicographically ordered
        dates.emplace_back(buf);
    }
    return dates;
}

ReturnSeries series_from(const std::string& id, const std::string& market,
                         const std::string& sector, const std::vector<std::string>& dates,
                         const std::vector<double>& values) {
    ReturnSeries s{id, market, sector, {}};
    for (std::size_t i = 0; i < values.size(); ++i)
        s.points.push_back({dates[i], values[i]});
    return s;
}

// Four assets: (A1, A2) share a single ray, (B1, B2) are independent Pareto.
std::vector<ReturnSeries> engineered_assets(std::uint64_t seed, std::size_t n = 822) {
    RandomStream rng(seed);
    const auto dates = make_dates(n);
    const auto ray = extdep::gen_class_sample(ClassSpec::full(1.0, 0.45), n, rng);
    std::vector<double> a1;
    std::vector<double> a2;
    for (const auto& z : ray) {
        a1.push_back(z.x);
        a2.push_back(z.y);
    }
    const auto b1 = extdep::gen_pareto(1.0, n, rng);
    const auto b2 = extdep::gen_pareto(1.0, n, rng);
    return {series_from("A1", "US", "Tech", dates, a1),
            series_from("A2", "US", "Tech", dates, a2),
            series_from("B1", "CN", "Energy", dates, b1),
            series_from("B2", "CN", "Energy", dates, b2)};
}

}  // namespace

TEST_CASE("matrix covers every unordered pair once", "[matrix]") {
    const auto assets = engineered_assets(3, 200);
    RunConfig cfg;
    cfg.seed = 11;
    cfg.repetitions = 4;
    cfg.B = 50;
    cfg.threads = 2;
    const std::vector<ReturnSeries> three(assets.begin(), assets.begin() + 3);
    const DependenceMatrix m = extdep::run_matrix(three, cfg);
    REQUIRE(m.assets.size() == 3);
    REQUIRE(m.pairs.size() == 3);
    for (const PairResult& p : m.pairs) REQUIRE(p.asset_a < p.asset_b);
    REQUIRE(std::is_sorted(m.pairs.begin(), m.pairs.end(),
                           [](const PairResult& x, const PairResult& y) {
                               return std::pair(x.asset_a, x.asset_b) <
                                      std::pair(y.asset_a, y.asset_b);
                           }));
}

TEST_CASE("engineered pairs recover their classes", "[matrix]") {
    const auto assets = engineered_assets(2024);
    RunConfig cfg;
    cfg.seed = 7;
    const DependenceMatrix m = extdep::run_matrix(assets, cfg);

    const auto find = [&](const std::string& a, const std::string& b) -> const PairResult& {
        for (const PairResult& p : m.pairs) {
            if (p.asset_a == a && p.asset_b == b) return p;
        }
        FAIL("pair not found");
        return m.pairs.front();
    };
    const PairResult& ray = find("A1", "A2");
    REQUIRE(ray.ok());
    REQUIRE(ray.vector->majority() == DependenceClass::Full);
    REQUIRE(ray.alpha_bar == 0.5 * (ray.alpha_a + ray.alpha_b));

    const PairResult& indep = find("B1", "B2");
    REQUIRE(indep.ok());
    REQUIRE(indep.vector->majority() == DependenceClass::Independence);
}

TEST_CASE("matrix output is schedule- and order-independent", "[matrix]") {
    const auto assets = engineered_assets(5, 300);
    RunConfig cfg;
    cfg.seed = 99;
    cfg.repetitions = 6;
    cfg.B = 50;

    cfg.threads = 1;
    const auto m1 = extdep::run_matrix(assets, cfg);
    cfg.threads = 4;
    const auto m4 = extdep::run_matrix(assets, cfg);
    REQUIRE(extdep::matrix_to_json(m1, cfg).dump(2) == extdep::matrix_to_json(m4, cfg).dump(2));

    auto shuffled = assets;
    std::swap(shuffled[0], shuffled[3]);
    std::swap(shuffled[1], shuffled[2]);
    const auto ms = extdep::run_matrix(shuffled, cfg);
    REQUIRE(extdep::matrix_to_json(ms, cfg).dump(2) == extdep::matrix_to_json(m1, cfg).dump(2));
}

TEST_CASE("pair orientation is canonical regardless of argument order", "[matrix]") {
    const auto assets = engineered_assets(8, 400);
    RunConfig cfg;
    cfg.seed = 5;
    cfg.repetitions = 5;
    cfg.B = 50;
    const AssetStats s0 = extdep::asset_stats(assets[0], cfg);
    const AssetStats s1 = extdep::asset_stats(assets[1], cfg);
    const auto ab = extdep::classify_pair(assets[0], assets[1], s0, s1, cfg);
    const auto ba = extdep::classify_pair(assets[1], assets[0], s1, s0, cfg);
    REQUIRE(ab.result.asset_a == ba.result.asset_a);
    REQUIRE(ab.result.asset_b == ba.result.asset_b);
    REQUIRE(ab.result.vector.has_value());
    REQUIRE(ab.result.vector->weights == ba.result.vector->weights);
    REQUIRE(ab.result.cone_fit->cone.a == ba.result.cone_fit->cone.a);
}

TEST_CASE("failures mark pairs unclassified without aborting", "[matrix]") {
    auto assets = engineered_assets(6, 200);
    // all-zero returns: no positive radii, no tail index
    for (auto& p : assets[2].points) p.value = 0.0;
    RunConfig cfg;
    cfg.seed = 3;
    cfg.repetitions = 3;
    cfg.B = 50;
    const DependenceMatrix m = extdep::run_matrix(assets, cfg);
    REQUIRE(m.pairs.size() == 6);
    std::size_t unclassified = 0;
    for (const PairResult& p : m.pairs) {
        if (!p.ok()) {
            ++unclassified;
            REQUIRE(p.status() == "unclassified");
            REQUIRE_FALSE(p.note.empty());
        }
    }
    REQUIRE(unclassified == 3);   // every pair touching the dead asset

    // disjoint dates: empty join
    auto disjoint = engineered_assets(9, 120);
    const auto other_dates = make_dates(240);
    for (std::size_t i = 0; i < disjoint[3].points.size(); ++i)
        disjoint[3].points[i].date = other_dates[120 + i];
    const DependenceMatrix md = extdep::run_matrix(disjoint, cfg);
    for (const PairResult& p : md.pairs) {
        if (p.asset_b == "B2") REQUIRE_FALSE(p.ok());
    }

    REQUIRE_THROWS_AS(extdep::run_matrix(std::vector<ReturnSeries>{assets[0]}, cfg),
                      std::invalid_argument);
    auto dup = assets;
    dup[1].asset_id = "A1";
    REQUIRE_THROWS_AS(extdep::run_matrix(dup, cfg), std::invalid_argument);
}

TEST_CASE("json and csv exports round-trip the record shape", "[matrix]") {
    const auto assets = engineered_assets(12, 300);
    RunConfig cfg;
    cfg.seed = 21;
    cfg.repetitions = 5;
    cfg.B = 50;
    const DependenceMatrix m = extdep::run_matrix(assets, cfg);

    const auto dir = std::filesystem::temp_directory_path() / "extdep_matrix_test";
    std::filesystem::create_directories(dir);
    const std::string json_path = (dir / "matrix.json").string();
    const std::string csv_path = (dir / "matrix.csv").string();
    extdep::write_matrix_json(m, cfg, json_path);
    extdep::write_matrix_csv(m, csv_path);

    const DependenceMatrix back = extdep::read_matrix_json(json_path);
    REQUIRE(back.assets.size() == m.assets.size());
    REQUIRE(back.pairs.size() == m.pairs.size());
    for (std::size_t i = 0; i < m.pairs.size(); ++i) {
        REQUIRE(back.pairs[i].asset_a == m.pairs[i].asset_a);
        REQUIRE(back.pairs[i].asset_b == m.pairs[i].asset_b);
        REQUIRE(back.pairs[i].ok() == m.pairs[i].ok());
        if (m.pairs[i].ok()) {
            REQUIRE(back.pairs[i].vector->weights == m.pairs[i].vector->weights);
            REQUIRE(back.pairs[i].cone_fit->cone.a == m.pairs[i].cone_fit->cone.a);
            REQUIRE(back.pairs[i].cone_fit->cone.b == m.pairs[i].cone_fit->cone.b);
        }
    }

    std::ifstream csv(csv_path);
    std::string header;
    std::getline(csv, header);
    REQUIRE(header ==
            "asset_a,asset_b,alpha_a,alpha_b,alpha_bar,a_hat,b_hat,"
            "w_independence,w_weak,w_strong,w_full,status");
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    REQUIRE(rows == m.pairs.size());
}

TEST_CASE("every json pair record carries the full contract", "[matrix]") {
    auto assets = engineered_assets(30, 250);
    for (auto& p : assets[1].points) p.value = 0.0;   // force one unclassified leg
    RunConfig cfg;
    cfg.seed = 2;
    cfg.repetitions = 3;
    cfg.B = 50;
    const nlohmann::ordered_json root =
        extdep::matrix_to_json(extdep::run_matrix(assets, cfg), cfg);

    REQUIRE(root.contains("config"));
    REQUIRE(root.at("config").at("seed") == 2);
    for (const auto& rec : root.at("pairs")) {
        for (const char* key : {"asset_a", "asset_b", "alpha_a", "alpha_b", "alpha_bar",
                                "a_hat", "b_hat", "weights", "status"}) {
            REQUIRE(rec.contains(key));
        }
        const std::string status = rec.at("status").get<std::string>();
        if (status == "ok") {
            REQUIRE(rec.at("weights").is_array());
            REQUIRE(rec.at("weights").size() == 4);
            double sum = 0.0;
            for (const auto& w : rec.at("weights")) sum += w.get<double>();
            REQUIRE(sum == Catch::Approx(1.0).epsilon(1e-12));
        } else {
            REQUIRE(status == "unclassified");
            REQUIRE(rec.at("weights").is_null());
        }
    }
}

TEST_CASE("standardization pulls both series to the average index", "[matrix]") {
    const RandomStream root(2048);
    int ok_a = 0;
    int ok_b = 0;
    const int runs = 20;
    for (int run = 0; run < runs; ++run) {
        RandomStream rng = root.substream(run);
        const auto dates = make_dates(822);
        const auto va = extdep::gen_pareto(1.2, 822, rng);
        const auto vb = extdep::gen_pareto(2.5, 822, rng);
        const ReturnSeries a = series_from("AA", "US", "S", dates, va);
        const ReturnSeries b = series_from("BB", "US", "S", dates, vb);

        RunConfig cfg;
        const AssetStats sa = extdep::asset_stats(a, cfg);
        const AssetStats sb = extdep::asset_stats(b, cfg);
        REQUIRE(sa.alpha.has_value());
        REQUIRE(sb.alpha.has_value());
        const double alpha_bar = 0.5 * (sa.alpha->alpha_hat + sb.alpha->alpha_hat);

        for (const auto& [series, stats, counter] :
             {std::tie(a, sa, ok_a), std::tie(b, sb, ok_b)}) {
            const auto transformed =
                extdep::power_transform(series.values(), stats.alpha->alpha_hat, alpha_bar);
            const auto sel = extdep::min_distance_k(transformed, 10, transformed.size() / 2);
            const auto tail = extdep::OrderedTail::from_radii(
                transformed, std::min(sel.k_used, transformed.size()));
            const double alpha_hat = extdep::hill_alpha(tail).alpha_hat;
            if (std::abs(alpha_hat - alpha_bar) <= 0.25 * alpha_bar) ++counter;
        }
    }
    REQUIRE(ok_a >= 18);
    REQUIRE(ok_b >= 18);
}

TEST_CASE("pair seeds depend on ids, not listing order", "[matrix]") {
    REQUIRE(extdep::pair_seed(1, "AAA", "BBB") == extdep::pair_seed(1, "AAA", "BBB"));
    REQUIRE(extdep::pair_seed(1, "AAA", "BBB") != extdep::pair_seed(2, "AAA", "BBB"));
    REQUIRE(extdep::pair_seed(1, "AAA", "BBB") != extdep::pair_seed(1, "AAA", "BBC"));
}
