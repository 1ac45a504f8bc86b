#pragma once

// Experiment orchestration: a validated config in, a deterministic JSON
// report plus CSV curve files out. Re-running the same resolved config
// byte-reproduces the results section regardless of worker count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "entrolab/config.hpp"
#include "entrolab/entropy.hpp"
#include "entrolab/homology.hpp"
#include "entrolab/metric_entropy.hpp"
#include "entrolab/nets.hpp"
#include "entrolab/partition.hpp"
#include "entrolab/periodic.hpp"
#include "entrolab/pliss.hpp"
#include "entrolab/point_cloud.hpp"
#include "entrolab/splitting.hpp"
#include "entrolab/tail.hpp"

namespace entrolab {

using ojson = nlohmann::ordered_json;

struct Report {
    ojson document;
    std::map<std::string, std::string> csv_files;  // filename -> content

    std::string results_dump() const { return document.at("results").dump(2); }
};

struct RunOverrides {
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline MapSpec build_map(const ConfigFile& cfg) {
    std::string kind = cfg.get_string("map_kind");
    try {
        if (kind == "toral_automorphism" || kind == "perturbed_toral") {
            auto ints = cfg.get_int_list("map_matrix");
            int d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(ints.size()))));
            if (static_cast<size_t>(d) * d != ints.size())
                throw config_error("map_matrix must hold d*d integers",
                                   cfg.line_of("map_matrix"));
            IntMat a(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    a(i, j) = ints[static_cast<size_t>(i) * d + j];
            if (kind == "perturbed_toral")
                return MapSpec::perturbed_toral(a, cfg.get_double("map_eta"));
            return MapSpec::toral_automorphism(a);
        }
        if (kind == "rotation") return MapSpec::rotation(cfg.get_double_list("map_angles_turns"));
        if (kind == "identity")
            return MapSpec::identity(static_cast<int>(cfg.get_int_or("map_dim", 2)));
        if (kind == "standard_map") return MapSpec::standard_map(cfg.get_double("map_k_param"));
        if (kind == "henon") {
            Box box;
            if (cfg.has("map_domain_box")) {
                auto b = cfg.get_double_list("map_domain_box");
                if (b.size() != 4)
                    throw config_error("map_domain_box needs 4 numbers",
                                       cfg.line_of("map_domain_box"));
                box = Box{b[0], b[1], b[2], b[3]};
            }
            return MapSpec::henon(cfg.get_double("map_henon_a"), cfg.get_double("map_henon_b"),
                                  box);
        }
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("invalid map parameters: ") + e.what(),
                           cfg.line_of("map_kind"));
    }
    throw config_error("unknown map_kind '" + kind + "'", cfg.line_of("map_kind"));
}

inline PointCloud build_cloud(const ConfigFile& cfg, const MapSpec& m, std::uint64_t seed) {
    std::string kind = cfg.get_string_or("cloud_kind", "grid");
    if (kind == "grid") {
        int per_axis = static_cast<int>(cfg.get_int("cloud_grid_per_axis"));
        if (per_axis < 2)
            throw config_error("cloud_grid_per_axis must be >= 2",
                               cfg.line_of("cloud_grid_per_axis"));
        return m.is_toral() ? PointCloud::torus_grid(m.dim(), per_axis)
                            : PointCloud::planar_grid(m.domain_box(), per_axis);
    }
    if (kind == "random") {
        long long count = cfg.get_int("cloud_random_count");
        if (count < 1)
            throw config_error("cloud_random_count must be >= 1",
                               cfg.line_of("cloud_random_count"));
        return m.is_toral()
                   ? PointCloud::torus_random(m.dim(), static_cast<size_t>(count), seed)
                   : PointCloud::planar_random(m.domain_box(), static_cast<size_t>(count), seed);
    }
    throw config_error("unknown cloud_kind '" + kind + "'", cfg.line_of("cloud_kind"));
}

inline Point build_start_point(const ConfigFile& cfg, const MapSpec& m,
                               const char* key = "start_point") {
    auto vals = cfg.get_double_list(key);
    if (static_cast<int>(vals.size()) != m.dim())
        throw config_error(std::string(key) + " must have one value per map dimension",
                           cfg.line_of(key));
    Point p{std::vector<double>(vals.begin(), vals.end())};
    if (m.is_toral())
        for (int i = 0; i < p.dim(); ++i) p[i] = wrap01(p[i]);
    return p;
}

inline std::vector<Point> draw_samples(const PointCloud& cloud, size_t count,
                                       std::uint64_t seed) {
    SeededUniform rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<Point> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i)
        out.push_back(cloud.point(static_cast<size_t>(rng.next_below(cloud.size()))));
    return out;
}

inline ojson estimate_json(const EntropyEstimate& e) {
    ojson j;
    j["value_nats_per_iterate"] = e.value;
    j["bound"] = bound_name(e.bound);
    j["epsilon_schedule"] = e.epsilon_schedule;
    j["fit_window"] = {e.n_lo, e.n_hi};
    j["fit_residual"] = e.fit_residual;
    return j;
}

inline ojson entropy_results_json(const EntropyRun& run) {
    ojson j;
    j["estimate"] = estimate_json(run.estimate);
    ojson per = ojson::array();
    for (const auto& pe : run.per_epsilon) {
        ojson p;
        p["epsilon"] = pe.epsilon;
        p["slope"] = pe.fit.slope;
        p["fit_window"] = {pe.fit.n_lo, pe.fit.n_hi};
        p["fit_residual"] = pe.fit.residual;
        p["max_log_step"] = pe.fit.max_step;
        p["saturated_from_start"] = pe.saturated_from_start;
        ojson counts = ojson::array();
        for (const auto& [n, c] : pe.curve.entries) counts.push_back({{"n", n}, {"count", c}});
        p["separated_counts"] = counts;
        per.push_back(std::move(p));
    }
    j["per_epsilon"] = per;
    return j;
}

inline std::string entropy_csv(const EntropyRun& run) {
    std::string csv = "epsilon,n,separated_count,log_count\n";
    for (const auto& pe : run.per_epsilon)
        for (const auto& [n, c] : pe.curve.entries) {
            csv += fmt17(pe.epsilon) + "," + std::to_string(n) + "," + std::to_string(c) + "," +
                   fmt17(std::log(static_cast<double>(c))) + "\n";
        }
    return csv;
}

inline EntropyRun run_entropy_core(const ConfigFile& cfg, const MapSpec& map, int workers,
                                   std::uint64_t seed) {
    PointCloud cloud = build_cloud(cfg, map, seed);
    auto eps = cfg.get_double_list("epsilon_schedule");
    int n_max = static_cast<int>(cfg.get_int("n_max_iterates"));
    if (n_max < 2 || n_max > 64)
        throw config_error("n_max_iterates must be in [2, 64]", cfg.line_of("n_max_iterates"));
    for (double e : eps)
        if (!(e > 0.0) || !(e <= 0.5))
            throw config_error("epsilon_schedule entries must lie in (0, 0.5]",
                               cfg.line_of("epsilon_schedule"));
    EntropyOptions opts;
    opts.net.workers = workers;
    return entropy_estimate(map, cloud, eps, n_max, opts);
}

}  // namespace detail

/// Dispatch one experiment. Throws config_error for invalid configs,
/// unavailable_error for capabilities the map does not have, other
/// exceptions for runtime failures.
inline Report run_experiment(const ConfigFile& cfg, const std::string& experiment,
                             const RunOverrides& overrides = {}) {
    using detail::fmt17;
    auto t0 = std::chrono::steady_clock::now();

    static const std::set<std::string> known = {"entropy",     "tail",  "pliss",
                                                "splitting",   "conjecture",
                                                "metric_entropy", "profile"};
    if (!known.count(experiment))
        throw config_error("unknown experiment '" + experiment + "'");
    if (cfg.has("experiment") && cfg.get_string("experiment") != experiment)
        throw config_error("config 'experiment' disagrees with the requested experiment",
                           cfg.line_of("experiment"));

    bool seed_explicit = overrides.seed.has_value() || cfg.has("seed");
    std::uint64_t seed = overrides.seed.value_or(
        static_cast<std::uint64_t>(cfg.get_int_or("seed", 1)));
    auto require_seed = [&](const char* why) {
        if (!seed_explicit)
            throw config_error(std::string("randomized provenance (") + why +
                               ") requires an explicit seed (config key or --seed)");
    };
    int workers = overrides.workers.value_or(static_cast<int>(cfg.get_int_or("workers", 1)));
    if (workers < 1 || workers > 256) throw config_error("workers must be in [1, 256]");
    cfg.get_string_or("out_dir", "");  // consumed by the CLI, not here

    MapSpec map = detail::build_map(cfg);
    Report rep;
    ojson results;

    bool uses_cloud = experiment == "entropy" || experiment == "conjecture" ||
                      experiment == "tail" || experiment == "profile";
    if (uses_cloud && cfg.get_string_or("cloud_kind", "grid") == "random")
        require_seed("random cloud");
    if (experiment == "tail" || experiment == "profile") require_seed("sample draws");
    if (experiment == "metric_entropy" && cfg.get_string_or("mu_kind", "random") == "random")
        require_seed("random empirical measure");

    if (experiment == "entropy" || experiment == "conjecture") {
        if (experiment == "conjecture" && !map.has_lift())
            throw unavailable_error("conjecture experiment needs a toral map with a lift");
        EntropyRun run = detail::run_entropy_core(cfg, map, workers, seed);
        results = detail::entropy_results_json(run);
        if (experiment == "conjecture") {
            double tol = cfg.get_double_or("tolerance_nats", 0.15);
            ConjectureReport cr = conjecture_report(map, run.estimate, tol);
            HomologyAction act = homology_action(map);
            ojson cj;
            cj["log_sp"] = cr.log_sp;
            cj["sp_f_star"] = act.sp_f_star;
            cj["spectral_radii_by_degree"] = act.spectral_radii;
            cj["entropy_value"] = cr.entropy.value;
            cj["margin"] = cr.margin;
            cj["tolerance_nats"] = cr.tolerance;
            cj["verdict"] = verdict_name(cr.verdict);
            results["conjecture"] = cj;
        }
        rep.csv_files["entropy_curves.csv"] = detail::entropy_csv(run);
    } else if (experiment == "tail") {
        PointCloud cloud = detail::build_cloud(cfg, map, seed);
        double eps = cfg.get_double("tail_epsilon");
        double beta = cfg.get_double_or("tail_beta", eps / 4.0);
        int horizon = static_cast<int>(cfg.get_int("horizon_iterates"));
        size_t count = static_cast<size_t>(cfg.get_int_or("sample_count", 100));
        if (horizon < 2 || horizon > 64)
            throw config_error("horizon_iterates must be in [2, 64]",
                               cfg.line_of("horizon_iterates"));
        auto samples = detail::draw_samples(cloud, count, seed);
        TailOptions topts;
        topts.net.workers = 1;
        std::vector<double> vals = parallel_map<double>(samples.size(), workers, [&](size_t i) {
            return tail_entropy(map, samples[i], eps, horizon, beta, cloud, topts);
        });
        double sup = 0.0;
        for (double v : vals) sup = std::max(sup, v);
        results["epsilon"] = eps;
        results["beta"] = beta;
        results["horizon_iterates"] = horizon;
        results["sample_count"] = vals.size();
        results["bound"] = "lower";  // greedy separated counts under-count
        results["sup_tail_entropy"] = sup;
        results["tail_entropies"] = vals;
        std::string csv = "sample_index,tail_entropy\n";
        for (size_t i = 0; i < vals.size(); ++i)
            csv += std::to_string(i) + "," + fmt17(vals[i]) + "\n";
        rep.csv_files["tail_samples.csv"] = csv;
    } else if (experiment == "profile") {
        PointCloud cloud = detail::build_cloud(cfg, map, seed);
        auto eps_list = cfg.get_double_list("profile_epsilons");
        int horizon = static_cast<int>(cfg.get_int("horizon_iterates"));
        size_t count = static_cast<size_t>(cfg.get_int_or("sample_count", 100));
        std::string weighting = cfg.get_string_or("weighting", "sup");
        if (weighting != "sup" && weighting != "orbit")
            throw config_error("weighting must be 'sup' or 'orbit'", cfg.line_of("weighting"));
        auto sample_pts = detail::draw_samples(cloud, count, seed);
        PointCloud samples = PointCloud::from_points(sample_pts);
        auto prof = expansiveness_profile(map, eps_list, samples,
                                          weighting == "sup" ? ProfileWeighting::sup
                                                             : ProfileWeighting::empirical_orbit,
                                          horizon, cloud, workers);
        results["horizon_iterates"] = horizon;
        results["weighting"] = weighting;
        results["bound"] = "lower";
        ojson pts = ojson::array();
        std::string csv = "epsilon,h_estimate\n";
        for (const auto& p : prof) {
            pts.push_back({{"epsilon", p.epsilon}, {"h_estimate", p.h_estimate}});
            csv += fmt17(p.epsilon) + "," + fmt17(p.h_estimate) + "\n";
        }
        results["profile"] = pts;
        rep.csv_files["profile.csv"] = csv;
    } else if (experiment == "pliss") {
        Point start = detail::build_start_point(cfg, map);
        int length = static_cast<int>(cfg.get_int_or("sequence_length", 64));
        if (length < 1 || length > 1000000)
            throw config_error("sequence_length must be in [1, 1e6]",
                               cfg.line_of("sequence_length"));
        // per-step weakest expansion rate along the orbit
        std::vector<double> a;
        Point p = start;
        for (int i = 0; i < length; ++i) {
            if (p.escaped) throw escape_error("pliss experiment: orbit escaped");
            Mat j = map.jacobian(p);
            SymEig e = sym_eig(j.transposed() * j);
            double smin = std::sqrt(std::max(0.0, e.values.back()));
            a.push_back(std::log(smin));
            p = map.eval(p);
        }
        PlissParams params;
        params.c1 = cfg.get_double("c1_rate");
        params.c2 = cfg.get_double("c2_rate");
        double amin = *std::min_element(a.begin(), a.end());
        params.a_star = cfg.get_double_or("a_star_rate", amin);
        PlissResult res = pliss_times(a, params);
        results["sequence_length"] = res.n_total;
        results["a_star"] = params.a_star;
        results["c1"] = params.c1;
        results["c2"] = params.c2;
        results["theta"] = res.theta;
        results["hypothesis_ok"] = res.hypothesis_ok;
        results["count"] = res.count_l;
        results["density_bound_theta_n"] = res.theta * res.n_total;
        results["times"] = res.times;
        std::string csv = "j,time\n";
        for (size_t i = 0; i < res.times.size(); ++i)
            csv += std::to_string(i) + "," + std::to_string(res.times[i]) + "\n";
        rep.csv_files["pliss_times.csv"] = csv;
    } else if (experiment == "splitting") {
        Point start = detail::build_start_point(cfg, map);
        int n_blocks = static_cast<int>(cfg.get_int_or("blocks_n", 50));
        int l = static_cast<int>(cfg.get_int_or("block_len_l", 1));
        SplittingOptions opts;
        opts.lambda0 = cfg.get_double_or("lambda0_rate", 0.1);
        opts.l0 = static_cast<int>(cfg.get_int_or("l0_iterates", 8));
        if (cfg.has("lambda_threshold")) opts.lambda_threshold = cfg.get_double("lambda_threshold");
        SplittingEstimate est = estimate_splitting(map, start, n_blocks, l, opts);
        results["dims"] = {est.d1, est.d2, est.d3};
        results["classify_ok"] = est.classify_ok;
        results["center_at_most_line"] = est.center_at_most_line;
        results["exponents"] = est.exponents;
        results["scale_L"] = est.l;
        results["margin_low_pair"] = est.margin_low_pair;
        results["margin_high_pair"] = est.margin_high_pair;
        results["margin_vs_half"] = est.margin;
        results["margin_bound"] = "lower";  // sampled sup of growth ratios
        results["dominated"] = est.dominated;
        results["lambda0"] = est.lambda0;
        results["L0"] = est.l0;
        results["contraction_e1"] = est.contraction_e1;
        results["contraction_e3"] = est.contraction_e3;
    } else if (experiment == "metric_entropy") {
        if (!map.is_toral())
            throw unavailable_error("metric_entropy experiment requires a toral map");
        std::string mu_kind = cfg.get_string_or("mu_kind", "random");
        EmpiricalMeasure mu = [&] {
            if (mu_kind == "random") {
                long long count = cfg.get_int_or("mu_count", 100000);
                if (count < 10)
                    throw config_error("mu_count must be >= 10", cfg.line_of("mu_count"));
                return EmpiricalMeasure::from_cloud(
                    map.is_toral()
                        ? PointCloud::torus_random(map.dim(), static_cast<size_t>(count), seed)
                        : PointCloud::planar_random(map.domain_box(),
                                                    static_cast<size_t>(count), seed));
            }
            if (mu_kind == "orbit") {
                Point start = detail::build_start_point(cfg, map, "mu_orbit_start");
                long long length = cfg.get_int_or("mu_orbit_length", 100000);
                return EmpiricalMeasure::from_orbit(map, start, static_cast<size_t>(length));
            }
            throw config_error("mu_kind must be 'random' or 'orbit'", cfg.line_of("mu_kind"));
        }();
        int cells = static_cast<int>(cfg.get_int("partition_cells_per_axis"));
        int wlo = static_cast<int>(cfg.get_int("window_lo_iterates"));
        int whi = static_cast<int>(cfg.get_int("window_hi_iterates"));
        if (cells < 1 || cells > 4096)
            throw config_error("partition_cells_per_axis must be in [1, 4096]",
                               cfg.line_of("partition_cells_per_axis"));
        BoxPartition xi = BoxPartition::torus_mesh(map.dim(), cells);
        MetricEntropyRun run = metric_entropy_estimate(map, mu, xi, wlo, whi);
        results["h_mu"] = run.value;
        results["bound"] = "point";  // empirical-measure surrogate, see flags
        results["fit_window"] = {run.fit_lo, run.fit_hi};
        results["saturated_trim"] = run.saturated_trim;
        results["short_support"] = run.short_support;
        results["support"] = mu.support.size();
        ojson per = ojson::array();
        std::string csv = "n,distinct_words,entropy_nats\n";
        for (size_t i = 0; i < run.ns.size(); ++i) {
            per.push_back({{"n", run.ns[i]},
                           {"distinct_words", run.distinct_words[i]},
                           {"entropy_nats", run.h_per_n[i]}});
            csv += std::to_string(run.ns[i]) + "," + std::to_string(run.distinct_words[i]) +
                   "," + fmt17(run.h_per_n[i]) + "\n";
        }
        results["per_n"] = per;
        rep.csv_files["metric_entropy.csv"] = csv;
        if (cfg.has("epsilon_schedule")) {
            EntropyRun topr = detail::run_entropy_core(cfg, map, workers, seed);
            double tol = cfg.get_double_or("tolerance_nats", 0.15);
            VariationalVerdict v = variational_check(run.value, topr.estimate, tol);
            results["h_top"] = detail::estimate_json(topr.estimate);
            results["variational_verdict"] = variational_name(v);
            rep.csv_files["entropy_curves.csv"] = detail::entropy_csv(topr);
        }
    }

    cfg.reject_unknown_keys();

    ojson doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["tool_version"] = kToolVersion;
    doc["experiment"] = experiment;
    ojson echo;
    for (const auto& key : cfg.keys_in_order()) echo[key] = cfg.raw_value(key);
    echo["resolved_seed"] = seed;
    echo["resolved_workers"] = workers;
    doc["config"] = echo;
    doc["results"] = results;
    auto t1 = std::chrono::steady_clock::now();
    ojson prov;
    prov["seed"] = seed;
    prov["workers"] = workers;
    prov["runtime_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    prov["log_base"] = "e";
    doc["provenance"] = prov;
    rep.document = std::move(doc);
    return rep;
}

}  // namespace entrolab
