#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "extdep/classifier.hpp"
#include "extdep/core.hpp"
#include "extdep/parallel.hpp"
#include "extdep/returns.hpp"
#include "extdep/rng.hpp"
#include "extdep/threshold.hpp"

namespace extdep {

// ---------------------------------------------------------------------------
// Pairwise dependence matrix over a collection of return series.
//
// Per asset: minimum-distance threshold and Hill index on its positive
// returns. Per unordered pair: power-transform both series to the average
// index, align on dates, polar-transform, select the pair tail size by the
// same threshold rule, fit the cone and run the repeated classifier. Pair
// jobs are independent; each derives its seed from (global seed, sorted ids),
// so results do not depend on scheduling or on the input order of assets.
// ---------------------------------------------------------------------------

struct RunConfig {
    std::uint64_t seed = 0;
    double lambda = 4.0;
    double grid_step = 0.01;
    std::size_t B = 200;
    std::size_t repetitions = 50;
    double precheck_width = 0.85;
    bool bonferroni = false;
    std::size_t k_min = 10;
    std::optional<std::size_t> k_max;       // default: floor(n/2)
    CapRule cap{};
    int subsample_offset = 0;               // every-other-day phase (ingestion)
    std::optional<std::size_t> threads;     // default: EXTREMALDEP_THREADS or cores
};

struct AssetStats {
    std::string asset_id;
    std::string market;
    std::string sector;
    std::size_t n_returns = 0;
    std::size_t n_positive = 0;
    std::optional<ThresholdSelection> threshold;
    std::optional<TailIndexEstimate> alpha;   // nullopt: too few positive returns
};

struct PairResult {
    std::string asset_a;   // lexicographically smaller id; its returns are x
    std::string asset_b;
    double alpha_a = std::numeric_limits<double>::quiet_NaN();
    double alpha_b = std::numeric_limits<double>::quiet_NaN();
    double alpha_bar = std::numeric_limits<double>::quiet_NaN();
    std::size_t n_joint = 0;
    std::size_t k_n = 0;
    std::size_t m = 0;
    std::size_t k_m = 0;
    std::optional<ConeFit> cone_fit;
    std::optional<DependenceVector> vector;
    std::string note;   // reason when unclassified

    bool ok() const { return vector.has_value(); }
    std::string status() const { return ok() ? "ok" : "unclassified"; }
};

struct DependenceMatrix {
    std::vector<AssetStats> assets;   // sorted by asset_id
    std::vector<PairResult> pairs;    // lexicographic by (asset_a, asset_b)
};

struct PairClassification {
    PairResult result;
    ClassificationDiagnostics diagnostics;
};

inline AssetStats asset_stats(const ReturnSeries& series, const RunConfig& cfg) {
    AssetStats stats;
    stats.asset_id = series.asset_id;
    stats.market = series.market;
    stats.sector = series.sector;
    stats.n_returns = series.points.size();

    std::vector<double> radii;
    radii.reserve(series.points.size());
    for (const ReturnPoint& p : series.points) {
        if (p.value > 0.0) radii.push_back(p.value);
    }
    stats.n_positive = radii.size();

    const std::size_t k_max_default = radii.size() / 2;
    const std::size_t k_max = std::min(cfg.k_max.value_or(k_max_default), k_max_default);
    if (cfg.k_min < 2 || k_max < cfg.k_min) return stats;   // too short to estimate

    ThresholdSelection sel = min_distance_k(radii, cfg.k_min, k_max, cfg.cap);
    sel.k_used = std::min(sel.k_used, radii.size());
    stats.threshold = sel;
    const OrderedTail tail = OrderedTail::from_radii(radii, sel.k_used);
    try {
        stats.alpha = hill_alpha(tail);
    } catch (const degenerate_tail_error&) {
        stats.threshold.reset();
    }
    return stats;
}

inline std::uint64_t pair_seed(std::uint64_t global_seed, const std::string& asset_a,
                               const std::string& asset_b) {
    return RandomStream(global_seed)
        .substream(fnv1a64(asset_a))
        .substream(fnv1a64(asset_b))
        .key();
}

// Classifies one pair end to end. `a` and `b` may arrive in either order;
// the lexicographically smaller id becomes the x component.
inline PairClassification classify_pair(const ReturnSeries& a, const ReturnSeries& b,
                                        const AssetStats& stats_a, const AssetStats& stats_b,
                                        const RunConfig& cfg) {
    const bool swap = b.asset_id < a.asset_id;
    const ReturnSeries& first = swap ? b : a;
    const ReturnSeries& second = swap ? a : b;
    const AssetStats& stats_first = swap ? stats_b : stats_a;
    const AssetStats& stats_second = swap ? stats_a : stats_b;

    PairClassification out;
    PairResult& res = out.result;
    res.asset_a = first.asset_id;
    res.asset_b = second.asset_id;
    if (!stats_first.alpha || !stats_second.alpha) {
        res.note = "tail index unavailable for at least one asset";
        return out;
    }
    res.alpha_a = stats_first.alpha->alpha_hat;
    res.alpha_b = stats_second.alpha->alpha_hat;
    res.alpha_bar = 0.5 * (res.alpha_a + res.alpha_b);

    // Standardize both series to the common tail index, then pair by date.
    ReturnSeries ta = first;
    ReturnSeries tb = second;
    {
        const std::vector<double> va = power_transform(first.values(), res.alpha_a, res.alpha_bar);
        const std::vector<double> vb =
            power_transform(second.values(), res.alpha_b, res.alpha_bar);
        for (std::size_t i = 0; i < va.size(); ++i) ta.points[i].value = va[i];
        for (std::size_t i = 0; i < vb.size(); ++i) tb.points[i].value = vb[i];
    }
    const std::vector<BivariateObservation> joint = align_pair(ta, tb);
    std::vector<PolarObservation> polar;
    polar.reserve(joint.size());
    for (const BivariateObservation& z : joint) {
        if (const auto p = to_polar(z)) polar.push_back(*p);
    }
    res.n_joint = polar.size();
    if (polar.empty()) {
        res.note = joint.empty() ? "no overlapping dates" : "no usable joint observations";
        return out;
    }

    std::vector<double> radii;
    radii.reserve(polar.size());
    for (const PolarObservation& p : polar) radii.push_back(p.r);
    const std::size_t k_max_default = radii.size() / 2;
    const std::size_t k_max = std::min(cfg.k_max.value_or(k_max_default), k_max_default);
    if (cfg.k_min < 2 || k_max < cfg.k_min) {
        res.note = "too few joint observations";
        return out;
    }

    try {
        ThresholdSelection sel = min_distance_k(radii, cfg.k_min, k_max, cfg.cap);
        res.k_n = std::min(sel.k_used, radii.size());

        BootstrapConfig bcfg =
            BootstrapConfig::for_sample(polar.size(), res.k_n,
                                        pair_seed(cfg.seed, res.asset_a, res.asset_b));
        bcfg.B = cfg.B;
        if (cfg.bonferroni) bcfg.set_bonferroni();
        res.m = bcfg.m;
        res.k_m = bcfg.k_m;

        ClassifyOptions opts;
        opts.repetitions = cfg.repetitions;
        opts.precheck_width = cfg.precheck_width;
        opts.lambda = cfg.lambda;
        opts.grid_step = cfg.grid_step;

        ClassifyResult cls = classify_repeated(polar, res.k_n, bcfg, opts);
        res.cone_fit = cls.diagnostics.cone_fit;
        res.vector = cls.vector;
        if (!res.vector) res.note = "too many failed repetitions";
        out.diagnostics = std::move(cls.diagnostics);
    } catch (const std::exception& e) {
        res.note = e.what();
    }
    return out;
}

inline DependenceMatrix run_matrix(std::span<const ReturnSeries> assets, const RunConfig& cfg) {
    if (assets.size() < 2) throw std::invalid_argument("run_matrix: need at least 2 assets");

    std::vector<const ReturnSeries*> sorted;
    sorted.reserve(assets.size());
    for (const ReturnSeries& s : assets) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(), [](const ReturnSeries* a, const ReturnSeries* b) {
        return a->asset_id < b->asset_id;
    });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i]->asset_id == sorted[i - 1]->asset_id)
            throw std::invalid_argument("run_matrix: duplicate asset_id " + sorted[i]->asset_id);
    }

    const std::size_t workers = worker_count(cfg.threads);

    DependenceMatrix matrix;
    matrix.assets.resize(sorted.size());
    parallel_for(sorted.size(), workers,
                 [&](std::size_t i) { matrix.assets[i] = asset_stats(*sorted[i], cfg); });

    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < sorted.size(); ++j) jobs.emplace_back(i, j);
    }
    matrix.pairs.resize(jobs.size());
    parallel_for(jobs.size(), workers, [&](std::size_t idx) {
        const auto [i, j] = jobs[idx];
        matrix.pairs[idx] =
            classify_pair(*sorted[i], *sorted[j], matrix.assets[i], matrix.assets[j], cfg).result;
    });
    return matrix;
}

// --------------------------- persistence -----------------------------------

// Shortest round-trip decimal form; deterministic for a given value.
inline std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// NaN has no JSON representation; emit null instead.
inline nlohmann::ordered_json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

inline nlohmann::ordered_json matrix_to_json(const DependenceMatrix& matrix,
                                             const RunConfig& cfg) {
    nlohmann::ordered_json root;
    root["generator"] = "extremaldep";
    nlohmann::ordered_json config;
    config["seed"] = cfg.seed;
    config["lambda"] = cfg.lambda;
    config["grid_step"] = cfg.grid_step;
    config["B"] = cfg.B;
    config["repetitions"] = cfg.repetitions;
    config["precheck"] = cfg.precheck_width;
    config["bonferroni"] = cfg.bonferroni;
    config["k_min"] = cfg.k_min;
    if (cfg.k_max) config["k_max"] = *cfg.k_max;
    else config["k_max"] = nullptr;
    config["cap_base"] = cfg.cap.base;
    config["cap_window"] = cfg.cap.window;
    config["subsample_offset"] = cfg.subsample_offset;
    root["config"] = config;

    nlohmann::ordered_json assets = nlohmann::ordered_json::array();
    for (const AssetStats& a : matrix.assets) {
        nlohmann::ordered_json rec;
        rec["asset_id"] = a.asset_id;
        rec["market"] = a.market;
        rec["sector"] = a.sector;
        rec["n_returns"] = a.n_returns;
        rec["n_positive"] = a.n_positive;
        if (a.threshold) {
            rec["k_star"] = a.threshold->k_star;
            rec["k_used"] = a.threshold->k_used;
            rec["ks_distance"] = a.threshold->ks_distance_at_star;
        } else {
            rec["k_star"] = nullptr;
            rec["k_used"] = nullptr;
            rec["ks_distance"] = nullptr;
        }
        if (a.alpha) rec["alpha"] = a.alpha->alpha_hat;
        else rec["alpha"] = nullptr;
        assets.push_back(std::move(rec));
    }
    root["assets"] = std::move(assets);

    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const PairResult& p : matrix.pairs) {
        nlohmann::ordered_json rec;
        rec["asset_a"] = p.asset_a;
        rec["asset_b"] = p.asset_b;
        rec["alpha_a"] = json_number(p.alpha_a);
        rec["alpha_b"] = json_number(p.alpha_b);
        rec["alpha_bar"] = json_number(p.alpha_bar);
        if (p.cone_fit) {
            rec["a_hat"] = p.cone_fit->cone.a;
            rec["b_hat"] = p.cone_fit->cone.b;
        } else {
            rec["a_hat"] = nullptr;
            rec["b_hat"] = nullptr;
        }
        rec["n_joint"] = p.n_joint;
        rec["k_n"] = p.k_n;
        rec["m"] = p.m;
        rec["k_m"] = p.k_m;
        if (p.vector) {
            rec["weights"] = p.vector->weights;
            rec["repetitions"] = p.vector->repetitions;
        } else {
            rec["weights"] = nullptr;
            rec["repetitions"] = nullptr;
        }
        rec["status"] = p.status();
        rec["note"] = p.note;
        pairs.push_back(std::move(rec));
    }
    root["pairs"] = std::move(pairs);
    return root;
}

inline void write_matrix_json(const DependenceMatrix& matrix, const RunConfig& cfg,
                              const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << matrix_to_json(matrix, cfg).dump(2) << '\n';
}

inline void write_matrix_csv(const DependenceMatrix& matrix, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "asset_a,asset_b,alpha_a,alpha_b,alpha_bar,a_hat,b_hat,"
           "w_independence,w_weak,w_strong,w_full,status\n";
    auto num = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
    for (const PairResult& p : matrix.pairs) {
        out << p.asset_a << ',' << p.asset_b << ',' << num(p.alpha_a) << ',' << num(p.alpha_b)
            << ',' << num(p.alpha_bar) << ',';
        if (p.cone_fit) out << format_double(p.cone_fit->cone.a) << ','
                            << format_double(p.cone_fit->cone.b) << ',';
        else out << ",,";
        if (p.vector) {
            for (const double w : p.vector->weights) out << format_double(w) << ',';
        } else {
            out << ",,,,";
        }
        out << p.status() << '\n';
    }
}

// Reads back the fields needed to re-render; numeric diagnostics that are
// null in the file stay NaN/empty here.
inline DependenceMatrix matrix_from_json(const nlohmann::json& root) {
    DependenceMatrix matrix;
    for (const auto& rec : root.at("assets")) {
        AssetStats a;
        a.asset_id = rec.at("asset_id").get<std::string>();
        a.market = rec.value("market", std::string());
        a.sector = rec.value("sector", std::string());
        matrix.assets.push_back(std::move(a));
    }
    for (const auto& rec : root.at("pairs")) {
        PairResult p;
        p.asset_a = rec.at("asset_a").get<std::string>();
        p.asset_b = rec.at("asset_b").get<std::string>();
        if (rec.contains("a_hat") && rec.at("a_hat").is_number()) {
            ConeFit fit;
            fit.cone = Cone{rec.at("a_hat").get<double>(), rec.at("b_hat").get<double>()};
            p.cone_fit = fit;
        }
        if (rec.contains("weights") && rec.at("weights").is_array()) {
            DependenceVector v;
            const auto& w = rec.at("weights");
            for (int c = 0; c < 4; ++c) v.weights[c] = w.at(c).get<double>();
            if (rec.contains("repetitions") && rec.at("repetitions").is_number())
                v.repetitions = rec.at("repetitions").get<std::size_t>();
            p.vector = v;
        }
        matrix.pairs.push_back(std::move(p));
    }
    return matrix;
}

inline DependenceMatrix read_matrix_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json root;
    in >> root;
    return matrix_from_json(root);
}

}  // namespace extdep
