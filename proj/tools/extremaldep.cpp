// Command-line front end: simulate known-class samples, select tail
// thresholds, classify pairs and whole matrices, and render heatmaps.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "extdep/extdep.hpp"

namespace {

struct CommonFlags {
    std::uint64_t seed = 0;
    double lambda = 4.0;
    std::size_t B = 200;
    std::size_t reps = 50;
    double precheck = 0.85;
    bool bonferroni = false;
    double grid = 0.01;
    int offset = 0;
    std::size_t kmin = 10;
    std::string kmax = "auto";
    std::string cap = "80,40";
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--seed", f.seed, "Global random seed");
    cmd->add_option("--lambda", f.lambda, "Cone-fit penalty weight")->check(CLI::NonNegativeNumber);
    cmd->add_option("--B", f.B, "Bootstrap resamples per test");
    cmd->add_option("--reps", f.reps, "Repetitions averaged into the dependence vector");
    cmd->add_option("--precheck", f.precheck, "Interval width that short-circuits to the T(g) test");
    cmd->add_flag("--bonferroni", f.bonferroni, "Run both tests at level 0.025");
    cmd->add_option("--grid", f.grid, "Cone search grid step");
    cmd->add_option("--offset", f.offset, "Every-other-day phase (0 or 1)")
        ->check(CLI::Range(0, 1));
    cmd->add_option("--kmin", f.kmin, "Smallest candidate tail size");
    cmd->add_option("--kmax", f.kmax, "Largest candidate tail size, or 'auto' for n/2");
    cmd->add_option("--cap", f.cap, "Threshold cap constants 'base,window'");
}

std::size_t parse_count(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const unsigned long v = std::stoul(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(std::string(what) + ": expected a nonnegative integer, got '" +
                                 s + "'");
    }
}

extdep::CapRule parse_cap(const std::string& s) {
    const std::size_t comma = s.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("--cap: expected 'base,window'");
    extdep::CapRule rule;
    rule.base = parse_count(s.substr(0, comma), "--cap base");
    rule.window = parse_count(s.substr(comma + 1), "--cap window");
    return rule;
}

extdep::RunConfig to_run_config(const CommonFlags& f) {
    extdep::RunConfig cfg;
    cfg.seed = f.seed;
    cfg.lambda = f.lambda;
    cfg.grid_step = f.grid;
    cfg.B = f.B;
    cfg.repetitions = f.reps;
    cfg.precheck_width = f.precheck;
    cfg.bonferroni = f.bonferroni;
    cfg.k_min = f.kmin;
    if (f.kmax != "auto") cfg.k_max = parse_count(f.kmax, "--kmax");
    cfg.cap = parse_cap(f.cap);
    cfg.subsample_offset = f.offset;
    return cfg;
}

std::vector<extdep::ReturnSeries> load_returns(const std::string& path,
                                               const extdep::RunConfig& cfg,
                                               std::size_t* dropped = nullptr) {
    const extdep::LoadResult loaded = extdep::load_prices(path);
    if (dropped != nullptr) *dropped = loaded.dropped_rows;
    std::vector<extdep::ReturnSeries> out;
    out.reserve(loaded.series.size());
    for (const extdep::PriceSeries& s : loaded.series) {
        const extdep::PriceSeries sub = extdep::every_other_day(s, cfg.subsample_offset);
        if (sub.points.size() < 2) {
            std::cerr << "warning: asset " << s.asset_id << " has fewer than 2 retained prices\n";
            continue;
        }
        out.push_back(extdep::abs_log_returns(sub));
    }
    return out;
}

extdep::ReturnSeries load_single_return_series(const std::string& path,
                                               const extdep::RunConfig& cfg) {
    const std::vector<extdep::ReturnSeries> all = load_returns(path, cfg);
    if (all.size() != 1)
        throw std::runtime_error(path + ": expected exactly one asset, found " +
                                 std::to_string(all.size()));
    return all.front();
}

const char* decision_name(extdep::TestDecision d) {
    return d == extdep::TestDecision::Accept ? "accept" : "reject";
}

nlohmann::ordered_json pair_to_json(const extdep::PairClassification& cls) {
    const extdep::PairResult& p = cls.result;
    nlohmann::ordered_json rec;
    rec["asset_a"] = p.asset_a;
    rec["asset_b"] = p.asset_b;
    rec["alpha_a"] = extdep::json_number(p.alpha_a);
    rec["alpha_b"] = extdep::json_number(p.alpha_b);
    rec["alpha_bar"] = extdep::json_number(p.alpha_bar);
    if (p.cone_fit) {
        rec["a_hat"] = p.cone_fit->cone.a;
        rec["b_hat"] = p.cone_fit->cone.b;
        rec["objective"] = p.cone_fit->objective;
    }
    rec["n_joint"] = p.n_joint;
    rec["k_n"] = p.k_n;
    rec["m"] = p.m;
    rec["k_m"] = p.k_m;
    if (p.vector) {
        rec["weights"] = p.vector->weights;
        rec["repetitions"] = p.vector->repetitions;
        rec["majority"] = extdep::to_string(p.vector->majority());
    } else {
        rec["weights"] = nullptr;
    }
    rec["status"] = p.status();
    if (!p.note.empty()) rec["note"] = p.note;

    nlohmann::ordered_json reps = nlohmann::ordered_json::array();
    for (const extdep::RepetitionOutcome& r : cls.diagnostics.per_repetition) {
        nlohmann::ordered_json rj;
        if (r.failed) {
            rj["failed"] = true;
        } else {
            rj["class"] = extdep::to_string(r.decided);
        }
        rj["precheck"] = r.precheck;
        if (r.h1) rj["h1"] = decision_name(*r.h1);
        if (r.h2) rj["h2"] = decision_name(*r.h2);
        if (r.h3) rj["h3"] = decision_name(*r.h3);
        reps.push_back(std::move(rj));
    }
    rec["per_repetition"] = std::move(reps);
    return rec;
}

int cmd_classify_pair(const std::string& file_a, const std::string& file_b,
                      const CommonFlags& flags, const std::string& out_path) {
    const extdep::RunConfig cfg = to_run_config(flags);
    const extdep::ReturnSeries a = load_single_return_series(file_a, cfg);
    const extdep::ReturnSeries b = load_single_return_series(file_b, cfg);
    if (a.asset_id == b.asset_id)
        throw std::runtime_error("classify-pair: the two files contain the same asset_id");

    const extdep::AssetStats stats_a = extdep::asset_stats(a, cfg);
    const extdep::AssetStats stats_b = extdep::asset_stats(b, cfg);
    const extdep::PairClassification cls = extdep::classify_pair(a, b, stats_a, stats_b, cfg);

    const std::string text = pair_to_json(cls).dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << text;
    }
    return 0;
}

int cmd_classify_matrix(const std::string& input, const std::string& out_dir,
                        const CommonFlags& flags) {
    const extdep::RunConfig cfg = to_run_config(flags);
    std::size_t dropped = 0;
    const std::vector<extdep::ReturnSeries> assets = load_returns(input, cfg, &dropped);
    if (dropped > 0) std::cerr << "warning: dropped " << dropped << " price rows\n";

    const extdep::DependenceMatrix matrix = extdep::run_matrix(assets, cfg);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    extdep::write_matrix_json(matrix, cfg, (dir / "matrix.json").string());
    extdep::write_matrix_csv(matrix, (dir / "matrix.csv").string());
    extdep::write_heatmap_svg(matrix, extdep::sector_meta_from_assets(matrix.assets),
                              (dir / "heatmap.svg").string());

    std::size_t ok = 0;
    for (const extdep::PairResult& p : matrix.pairs) ok += p.ok() ? 1 : 0;
    std::cerr << "classified " << ok << "/" << matrix.pairs.size() << " pairs over "
              << matrix.assets.size() << " assets -> " << out_dir << "\n";
    return 0;
}

int cmd_threshold(const std::string& input, const CommonFlags& flags) {
    const extdep::RunConfig cfg = to_run_config(flags);
    const std::vector<extdep::ReturnSeries> assets = load_returns(input, cfg);
    std::cout << "asset_id,n_returns,n_positive,k_star,k_used,ks_distance,alpha\n";
    for (const extdep::ReturnSeries& s : assets) {
        const extdep::AssetStats st = extdep::asset_stats(s, cfg);
        std::cout << st.asset_id << ',' << st.n_returns << ',' << st.n_positive << ',';
        if (st.threshold && st.alpha) {
            std::cout << st.threshold->k_star << ',' << st.threshold->k_used << ','
                      << extdep::format_double(st.threshold->ks_distance_at_star) << ','
                      << extdep::format_double(st.alpha->alpha_hat);
        } else {
            std::cout << ",,,";
        }
        std::cout << '\n';
    }
    return 0;
}

int cmd_simulate(const std::string& cls_name, double alpha, std::size_t n, double theta0,
                 const std::string& interval, const std::string& law_name, std::uint64_t seed,
                 const std::string& out_path) {
    extdep::ClassSpec spec = [&] {
        if (cls_name == "full") return extdep::ClassSpec::full(alpha, theta0);
        if (cls_name == "strong") {
            const std::size_t comma = interval.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error("simulate: --interval expects 'a,b'");
            double a = 0.0;
            double b = 0.0;
            try {
                a = std::stod(interval.substr(0, comma));
                b = std::stod(interval.substr(comma + 1));
            } catch (const std::exception&) {
                throw std::runtime_error("simulate: --interval expects numeric 'a,b', got '" +
                                         interval + "'");
            }
            return extdep::ClassSpec::strong(alpha, a, b);
        }
        if (cls_name == "weak") {
            const extdep::AngularLaw law = law_name == "beta22" ? extdep::AngularLaw::Beta22
                                                                : extdep::AngularLaw::Uniform;
            return extdep::ClassSpec::weak(alpha, law);
        }
        if (cls_name == "indep") return extdep::ClassSpec::independence(alpha);
        throw std::runtime_error("simulate: unknown class '" + cls_name + "'");
    }();

    extdep::RandomStream rng(seed);
    const std::vector<extdep::BivariateObservation> sample =
        extdep::gen_class_sample(spec, n, rng);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        out = &file;
    }
    *out << "x,y\n";
    for (const extdep::BivariateObservation& z : sample)
        *out << extdep::format_double(z.x) << ',' << extdep::format_double(z.y) << '\n';
    return 0;
}

int cmd_render(const std::string& matrix_path, const std::string& meta_path,
               const std::string& out_path) {
    const extdep::DependenceMatrix matrix = extdep::read_matrix_json(matrix_path);
    const extdep::SectorMeta meta = extdep::load_sector_meta(meta_path);
    extdep::write_heatmap_svg(matrix, meta, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extremal dependence classification for heavy-tailed return series"};
    app.require_subcommand(1);

    // classify-pair
    std::string pair_a;
    std::string pair_b;
    std::string pair_out;
    CommonFlags pair_flags;
    CLI::App* classify_pair_cmd =
        app.add_subcommand("classify-pair", "Classify the dependence of two price series");
    classify_pair_cmd->add_option("--a", pair_a, "Price CSV of the first asset")->required();
    classify_pair_cmd->add_option("--b", pair_b, "Price CSV of the second asset")->required();
    classify_pair_cmd->add_option("--out", pair_out, "Write the JSON result here (default stdout)");
    add_common_flags(classify_pair_cmd, pair_flags);

    // classify-matrix
    std::string matrix_input;
    std::string matrix_out;
    CommonFlags matrix_flags;
    CLI::App* classify_matrix_cmd =
        app.add_subcommand("classify-matrix", "Classify every pair in a price CSV");
    classify_matrix_cmd->add_option("--input", matrix_input, "Long-format price CSV")->required();
    classify_matrix_cmd->add_option("--out", matrix_out, "Output directory")->required();
    add_common_flags(classify_matrix_cmd, matrix_flags);

    // threshold
    std::string threshold_input;
    CommonFlags threshold_flags;
    CLI::App* threshold_cmd =
        app.add_subcommand("threshold", "Per-asset minimum-distance tail thresholds");
    threshold_cmd->add_option("--input", threshold_input, "Long-format price CSV")->required();
    add_common_flags(threshold_cmd, threshold_flags);

    // simulate
    std::string sim_class;
    double sim_alpha = 1.0;
    std::size_t sim_n = 822;
    double sim_theta0 = 0.5;
    std::string sim_interval = "0.3,0.7";
    std::string sim_law = "uniform";
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Generate a bivariate sample with a known class");
    simulate_cmd->add_option("--class", sim_class, "full|strong|weak|indep")->required();
    simulate_cmd->add_option("--alpha", sim_alpha, "Tail index of the radius")->required();
    simulate_cmd->add_option("--n", sim_n, "Sample size")->required();
    simulate_cmd->add_option("--theta0", sim_theta0, "Angle of the full-dependence ray");
    simulate_cmd->add_option("--interval", sim_interval, "Strong-dependence interval 'a,b'");
    simulate_cmd->add_option("--law", sim_law, "Weak-class angle law: uniform|beta22");
    simulate_cmd->add_option("--seed", sim_seed, "Random seed");
    simulate_cmd->add_option("--out", sim_out, "Write CSV here (default stdout)");

    // render
    std::string render_matrix;
    std::string render_meta;
    std::string render_out;
    CLI::App* render_cmd = app.add_subcommand("render", "Render a matrix.json as an SVG heatmap");
    render_cmd->add_option("--matrix", render_matrix, "matrix.json from classify-matrix")
        ->required();
    render_cmd->add_option("--meta", render_meta, "Sector metadata CSV")->required();
    render_cmd->add_option("--out", render_out, "Output SVG path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify_pair_cmd->parsed())
            return cmd_classify_pair(pair_a, pair_b, pair_flags, pair_out);
        if (classify_matrix_cmd->parsed())
            return cmd_classify_matrix(matrix_input, matrix_out, matrix_flags);
        if (threshold_cmd->parsed()) return cmd_threshold(threshold_input, threshold_flags);
        if (simulate_cmd->parsed())
            return cmd_simulate(sim_class, sim_alpha, sim_n, sim_theta0, sim_interval, sim_law,
                                sim_seed, sim_out);
        if (render_cmd->parsed()) return cmd_render(render_matrix, render_meta, render_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
