#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <initializer_list>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "lzwave/active_lz.hpp"
#include "lzwave/baselines.hpp"
#include "lzwave/common.hpp"
#include "lzwave/cost.hpp"
#include "lzwave/plot.hpp"
#include "lzwave/policy.hpp"
#include "lzwave/radar_scene.hpp"
#include "lzwave/rng.hpp"
#include "lzwave/tracking.hpp"

namespace lzwave {

enum class Scenario { stochastic_order3, adaptive_order2 };
enum class PolicyKind { universal, ts, random };

inline std::string to_string(Scenario s) {
    return s == Scenario::stochastic_order3 ? "stochastic_order3" : "adaptive_order2";
}
inline std::string to_string(PolicyKind p) {
    switch (p) {
        case PolicyKind::universal: return "universal";
        case PolicyKind::ts: return "ts";
        default: return "random";
    }
}
inline std::string to_string(Objective o) {
    return o == Objective::tracking ? "tracking" : "entropy";
}

inline Scenario scenario_from_string(const std::string& s) {
    if (s == "stochastic_order3") return Scenario::stochastic_order3;
    if (s == "adaptive_order2") return Scenario::adaptive_order2;
    throw ConfigError("unknown scenario: " + s);
}
inline PolicyKind policy_from_string(const std::string& s) {
    if (s == "universal") return PolicyKind::universal;
    if (s == "ts") return PolicyKind::ts;
    if (s == "random") return PolicyKind::random;
    throw ConfigError("unknown policy: " + s);
}
inline Objective objective_from_string(const std::string& s) {
    if (s == "tracking") return Objective::tracking;
    if (s == "entropy") return Objective::entropy;
    throw ConfigError("unknown objective: " + s);
}

struct ExperimentConfig {
    Scenario scenario = Scenario::stochastic_order3;
    Objective objective = Objective::tracking;
    PolicyKind policy = PolicyKind::universal;
    int tracks = 100;
    int cpis_per_track = 200;
    std::vector<std::uint64_t> seeds{1};
    std::string output_dir = "out";
    int threads = 1;
    int gate_half_width = 2;

    double track_init_range_m = 1000.0;
    double track_init_velocity_mps = 50.0;
    double track_jitter_range_m = 0.0;
    double track_jitter_velocity_mps = 0.0;
    double process_noise_intensity = 1.0;

    SceneConfig scene;
    LearnerConfig learner;
    CostSpec cost;
    std::vector<double> transition_table;  // optional explicit order-3 table

    void validate() const {
        if (tracks < 1) throw ConfigError("ExperimentConfig: tracks must be >= 1");
        if (cpis_per_track < 1) throw ConfigError("ExperimentConfig: cpis_per_track must be >= 1");
        if (seeds.empty()) throw ConfigError("ExperimentConfig: seeds must be nonempty");
        if (threads < 1) throw ConfigError("ExperimentConfig: threads must be >= 1");
        if (gate_half_width < 1) throw ConfigError("ExperimentConfig: gate_half_width must be >= 1");
        if (process_noise_intensity < 0.0)
            throw ConfigError("ExperimentConfig: process_noise_intensity must be >= 0");
        scene.validate();
        learner.validate();
        cost.validate();
    }
};

/// One per-CPI log row.
struct TrackRecord {
    std::uint64_t trial = 0;  // seed value
    int track = 0;
    int cpi = 0;
    PolicyKind policy = PolicyKind::universal;
    Objective objective = Objective::tracking;
    Scenario scenario = Scenario::stochastic_order3;
    WaveformClass wf_class = WaveformClass::lfm_upsweep;
    int subchannel = 0;
    double sinr_db = 0.0;
    double cost = 0.0;
    double rmse = 0.0;  // running track RMSE up to this CPI
    bool collision = false;
};

struct SummaryRow {
    Scenario scenario;
    Objective objective;
    PolicyKind policy;
    int track = 0;
    int seeds = 0;
    double sinr_db_mean = 0.0, sinr_db_se = 0.0;
    double final_rmse_mean = 0.0, final_rmse_se = 0.0;
    double cost_mean = 0.0, cost_se = 0.0;
    double collision_rate_mean = 0.0, collision_rate_se = 0.0;
};

// ---------------------------------------------------------------------------
// configuration file loading (strict: unknown keys are errors)
// ---------------------------------------------------------------------------

namespace config_detail {

inline void require_known_keys(const nlohmann::json& j, const char* section,
                               std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed)
            if (it.key() == key) { ok = true; break; }
        if (!ok)
            throw ConfigError(std::string("unknown key '") + it.key() + "' in " + section);
    }
}

template <typename T>
void maybe(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace config_detail

inline SceneConfig scene_from_json(const nlohmann::json& j) {
    using namespace config_detail;
    require_known_keys(j, "scene",
        {"carrier_hz", "pri_s", "pulses_per_cpi", "delay_cells", "doppler_cells",
         "subchannels", "snr0_db", "inr_db", "detection_threshold_db", "memory_l",
         "memory_j", "sigma_range_m", "sigma_velocity_mps", "range_cell_m",
         "doppler_cell_mps", "persist_prob", "occupancy_flip_prob"});
    SceneConfig s;
    maybe(j, "carrier_hz", s.carrier_hz);
    maybe(j, "pri_s", s.pri_s);
    maybe(j, "pulses_per_cpi", s.pulses_per_cpi);
    maybe(j, "delay_cells", s.delay_cells);
    maybe(j, "doppler_cells", s.doppler_cells);
    maybe(j, "subchannels", s.subchannels);
    maybe(j, "snr0_db", s.snr0_db);
    maybe(j, "inr_db", s.inr_db);
    maybe(j, "detection_threshold_db", s.detection_threshold_db);
    maybe(j, "memory_l", s.memory_l);
    maybe(j, "memory_j", s.memory_j);
    maybe(j, "sigma_range_m", s.sigma_range_m);
    maybe(j, "sigma_velocity_mps", s.sigma_velocity_mps);
    maybe(j, "range_cell_m", s.range_cell_m);
    maybe(j, "doppler_cell_mps", s.doppler_cell_mps);
    maybe(j, "persist_prob", s.persist_prob);
    maybe(j, "occupancy_flip_prob", s.occupancy_flip_prob);
    return s;
}

inline LearnerConfig learner_from_json(const nlohmann::json& j) {
    using namespace config_detail;
    require_known_keys(j, "learner", {"discount", "epsilon0", "g_max", "depth_cap"});
    LearnerConfig l;
    maybe(j, "discount", l.discount);
    maybe(j, "epsilon0", l.epsilon0);
    maybe(j, "g_max", l.g_max);
    maybe(j, "depth_cap", l.depth_cap);
    return l;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    using namespace config_detail;
    require_known_keys(j, "config",
        {"scenario", "objective", "policy", "tracks", "cpis_per_track", "seeds",
         "output_dir", "threads", "gate_half_width", "track_init_range_m",
         "track_init_velocity_mps", "track_jitter_range_m", "track_jitter_velocity_mps",
         "process_noise_intensity", "scene", "learner", "cost", "transition_table"});
    ExperimentConfig c;
    if (j.contains("scenario")) c.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    if (j.contains("objective")) c.objective = objective_from_string(j.at("objective").get<std::string>());
    if (j.contains("policy")) c.policy = policy_from_string(j.at("policy").get<std::string>());
    maybe(j, "tracks", c.tracks);
    maybe(j, "cpis_per_track", c.cpis_per_track);
    maybe(j, "seeds", c.seeds);
    maybe(j, "output_dir", c.output_dir);
    maybe(j, "threads", c.threads);
    maybe(j, "gate_half_width", c.gate_half_width);
    maybe(j, "track_init_range_m", c.track_init_range_m);
    maybe(j, "track_init_velocity_mps", c.track_init_velocity_mps);
    maybe(j, "track_jitter_range_m", c.track_jitter_range_m);
    maybe(j, "track_jitter_velocity_mps", c.track_jitter_velocity_mps);
    maybe(j, "process_noise_intensity", c.process_noise_intensity);
    if (j.contains("scene")) c.scene = scene_from_json(j.at("scene"));
    if (j.contains("learner")) c.learner = learner_from_json(j.at("learner"));
    if (j.contains("cost")) {
        const auto& cj = j.at("cost");
        require_known_keys(cj, "cost", {"g_max", "softmax_beta", "entropy_paper_sign"});
        maybe(cj, "g_max", c.cost.g_max);
        maybe(cj, "softmax_beta", c.cost.softmax_beta);
        maybe(cj, "entropy_paper_sign", c.cost.entropy_paper_sign);
    }
    maybe(j, "transition_table", c.transition_table);
    c.cost.objective = c.objective;
    c.learner.g_max = c.cost.g_max;
    c.validate();
    return c;
}

inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

// ---------------------------------------------------------------------------
// simulation
// ---------------------------------------------------------------------------

inline std::unique_ptr<WaveformPolicy> make_policy(const ExperimentConfig& config,
                                                   std::uint64_t policy_seed) {
    const int actions = 2 * config.scene.subchannels;
    switch (config.policy) {
        case PolicyKind::universal: {
            SymbolAlphabet alphabet{observation_symbol_count(config.scene), actions};
            LearnerConfig lc = config.learner;
            lc.seed = policy_seed;
            lc.g_max = config.cost.g_max;  // the cost module owns the bound
            return std::make_unique<ActiveLzLearner>(alphabet, lc);
        }
        case PolicyKind::ts:
            return std::make_unique<ThompsonSamplingPolicy>(actions, config.cost.g_max,
                                                            policy_seed);
        default:
            return std::make_unique<RandomPolicy>(actions, policy_seed);
    }
}

/// Effective measurement noise covariance implied by a detection.
inline Mat2 measurement_noise(const Observation& obs, const Waveform& waveform,
                              const SceneConfig& sc) {
    const double scale = std::pow(10.0, -(obs.sinr_db - sc.snr0_db) / 20.0);
    double sigma_r = sc.sigma_range_m * scale;
    double sigma_v = sc.sigma_velocity_mps * scale;
    if (waveform.wf_class == WaveformClass::phase_coded_zc64) {
        sigma_r *= 2.0;
        sigma_v *= 0.5;
    }
    sigma_r = std::max(sigma_r, 1e-9);
    sigma_v = std::max(sigma_v, 1e-9);
    return Mat2::diagonal(sigma_r * sigma_r, sigma_v * sigma_v);
}

/// Runs one track of cpis_per_track decision epochs.
///
/// Timing convention: the learner decides for CPI k from the previous CPI's
/// measurement, whose sensed occupancy is the interference state of CPI k-1.
/// The channel advances between CPIs (the adaptive emitter reacting to the
/// radar's last two bands), so reactive interference must be predicted, not
/// read off the current observation.
inline void run_track(const ExperimentConfig& config, WaveformPolicy& policy,
                      Rng& scene_rng, std::uint64_t trial, int track_index,
                      std::vector<TrackRecord>& out) {
    const SceneConfig& sc = config.scene;
    const WaveformCatalog catalog{sc.subchannels};
    const double dt = sc.cpi_duration_s();
    const Mat2 process_noise = cv_process_noise(config.process_noise_intensity, dt);

    policy.begin_track();

    TargetState truth{
        config.track_init_range_m
            + config.track_jitter_range_m * (2.0 * scene_rng.uniform_real() - 1.0),
        config.track_init_velocity_mps
            + config.track_jitter_velocity_mps * (2.0 * scene_rng.uniform_real() - 1.0)};

    StochasticChannel stochastic(sc, config.transition_table);
    AdaptiveEmitter emitter(sc.subchannels);
    if (config.scenario == Scenario::stochastic_order3)
        stochastic.init(scene_rng);
    else
        emitter.init(scene_rng);
    auto occupancy_now = [&] {
        return config.scenario == Scenario::stochastic_order3 ? stochastic.state().occupancy
                                                              : emitter.state().occupancy;
    };

    TrackEstimate estimate;
    estimate.state = {truth.range_m, truth.velocity_mps};
    estimate.covariance = Mat2::diagonal(sc.sigma_range_m * sc.sigma_range_m,
                                         sc.sigma_velocity_mps * sc.sigma_velocity_mps);

    // bootstrap observation: sensed occupancy, no detection yet
    Observation boot;
    boot.detected = false;
    boot.observed_occupancy = occupancy_now();
    int symbol = quantize_observation(boot);

    int prev_band = -1;
    double squared_error_sum = 0.0;

    for (int cpi = 1; cpi <= config.cpis_per_track; ++cpi) {
        const int action = policy.select_waveform(symbol);
        const Waveform waveform = catalog.at(action);

        const auto occupancy = occupancy_now();
        const double sinr_db = compute_sinr_db(waveform, occupancy, sc);
        const bool collision = occupancy[static_cast<std::size_t>(waveform.subchannel)] != 0;

        const TrackEstimate prior =
            cpi == 1 ? estimate : kalman_predict(estimate, dt, process_noise);
        const Observation obs = measure(truth, waveform, sinr_db, occupancy, scene_rng, sc);

        double cost;
        if (config.objective == Objective::tracking) {
            cost = obs.detected
                ? g_track({obs.range_est_m, obs.velocity_est_mps}, prior.state, config.cost)
                : g_track_missed(config.cost);
        } else {
            const GateEnergies gate = make_gate_energies(
                truth, prior.state, sinr_db, config.gate_half_width, scene_rng, sc);
            const CellProbabilityMap map = cell_probabilities(
                gate.energies_db, sc.detection_threshold_db, config.cost.softmax_beta);
            cost = g_entropy(map, config.cost);
        }

        estimate = obs.detected
            ? kalman_update(prior, {obs.range_est_m, obs.velocity_est_mps},
                            measurement_noise(obs, waveform, sc))
            : prior;

        const double dr = truth.range_m - estimate.state[0];
        const double dv = truth.velocity_mps - estimate.state[1];
        squared_error_sum += dr * dr + dv * dv;
        const double rmse = std::sqrt(squared_error_sum / cpi);

        const int next_symbol = quantize_observation(obs);
        policy.observe_outcome(symbol, action, cost, next_symbol);

        out.push_back({trial, track_index, cpi, config.policy, config.objective,
                       config.scenario, waveform.wf_class, waveform.subchannel, sinr_db,
                       cost, rmse, collision});

        // advance the scene for the next CPI
        if (config.scenario == Scenario::stochastic_order3)
            stochastic.step(scene_rng);
        else
            emitter.step(prev_band, waveform.subchannel);
        prev_band = waveform.subchannel;
        truth = advance_target(truth, sc);
        symbol = next_symbol;
    }
}

inline std::vector<TrackRecord> run_trial(const ExperimentConfig& config, std::uint64_t seed) {
    Rng base(seed);
    Rng scene_rng = base.fork(1);
    auto policy = make_policy(config, base.fork(2).seed());
    std::vector<TrackRecord> records;
    records.reserve(static_cast<std::size_t>(config.tracks) * config.cpis_per_track);
    for (int track = 1; track <= config.tracks; ++track)
        run_track(config, *policy, scene_rng, seed, track, records);
    return records;
}

/// All trials, serial or trial-parallel; records are merged in seed order
/// either way.
inline std::vector<TrackRecord> run_trials(const ExperimentConfig& config) {
    config.validate();
    std::vector<TrackRecord> merged;
    if (config.threads <= 1 || config.seeds.size() == 1) {
        for (std::uint64_t seed : config.seeds) {
            auto part = run_trial(config, seed);
            merged.insert(merged.end(), part.begin(), part.end());
        }
        return merged;
    }
    std::vector<std::future<std::vector<TrackRecord>>> futures;
    futures.reserve(config.seeds.size());
    for (std::uint64_t seed : config.seeds)
        futures.push_back(std::async(std::launch::async,
                                     [&config, seed] { return run_trial(config, seed); }));
    for (auto& f : futures) {
        auto part = f.get();
        merged.insert(merged.end(), part.begin(), part.end());
    }
    return merged;
}

// ---------------------------------------------------------------------------
// aggregation and output
// ---------------------------------------------------------------------------

inline std::vector<SummaryRow> summarize(const std::vector<TrackRecord>& records) {
    // per (scenario, objective, policy, track, trial) accumulators
    struct SeedMetrics {
        double sinr_sum = 0.0, cost_sum = 0.0, coll_sum = 0.0, final_rmse = 0.0;
        int count = 0;
    };
    std::map<std::tuple<int, int, int, int>, std::map<std::uint64_t, SeedMetrics>> groups;
    for (const auto& r : records) {
        auto key = std::make_tuple(static_cast<int>(r.scenario), static_cast<int>(r.objective),
                                   static_cast<int>(r.policy), r.track);
        auto& m = groups[key][r.trial];
        m.sinr_sum += r.sinr_db;
        m.cost_sum += r.cost;
        m.coll_sum += r.collision ? 1.0 : 0.0;
        m.final_rmse = r.rmse;
        ++m.count;
    }

    auto mean_se = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        const double se = v.size() > 1
            ? std::sqrt(var / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()))
            : 0.0;
        return std::make_pair(mean, se);
    };

    std::vector<SummaryRow> rows;
    for (const auto& [key, per_seed] : groups) {
        const auto& [scen, obj, pol, track] = key;
        std::vector<double> sinr, rmse, cost, coll;
        for (const auto& [trial, m] : per_seed) {
            sinr.push_back(m.sinr_sum / m.count);
            cost.push_back(m.cost_sum / m.count);
            coll.push_back(m.coll_sum / m.count);
            rmse.push_back(m.final_rmse);
        }
        SummaryRow row;
        row.scenario = static_cast<Scenario>(scen);
        row.objective = static_cast<Objective>(obj);
        row.policy = static_cast<PolicyKind>(pol);
        row.track = track;
        row.seeds = static_cast<int>(per_seed.size());
        std::tie(row.sinr_db_mean, row.sinr_db_se) = mean_se(sinr);
        std::tie(row.final_rmse_mean, row.final_rmse_se) = mean_se(rmse);
        std::tie(row.cost_mean, row.cost_se) = mean_se(cost);
        std::tie(row.collision_rate_mean, row.collision_rate_se) = mean_se(coll);
        rows.push_back(row);
    }
    return rows;
}

namespace csv_detail {
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}
}  // namespace csv_detail

inline constexpr const char* kRecordsHeader =
    "trial,track,cpi,policy,objective,scenario,wf_class,subchannel,sinr_db,cost,rmse,collision";

inline void write_records_csv(std::ostream& os, const std::vector<TrackRecord>& records) {
    os << kRecordsHeader << "\n";
    for (const auto& r : records) {
        os << r.trial << ',' << r.track << ',' << r.cpi << ',' << to_string(r.policy) << ','
           << to_string(r.objective) << ',' << to_string(r.scenario) << ','
           << (r.wf_class == WaveformClass::lfm_upsweep ? "lfm" : "zc64") << ','
           << r.subchannel << ',' << csv_detail::fmt(r.sinr_db) << ','
           << csv_detail::fmt(r.cost) << ',' << csv_detail::fmt(r.rmse) << ','
           << (r.collision ? 1 : 0) << "\n";
    }
}

inline constexpr const char* kSummaryHeader =
    "scenario,objective,policy,track,seeds,sinr_db_mean,sinr_db_se,final_rmse_mean,"
    "final_rmse_se,cost_mean,cost_se,collision_rate_mean,collision_rate_se";

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << kSummaryHeader << "\n";
    for (const auto& r : rows) {
        os << to_string(r.scenario) << ',' << to_string(r.objective) << ','
           << to_string(r.policy) << ',' << r.track << ',' << r.seeds << ','
           << csv_detail::fmt(r.sinr_db_mean) << ',' << csv_detail::fmt(r.sinr_db_se) << ','
           << csv_detail::fmt(r.final_rmse_mean) << ',' << csv_detail::fmt(r.final_rmse_se) << ','
           << csv_detail::fmt(r.cost_mean) << ',' << csv_detail::fmt(r.cost_se) << ','
           << csv_detail::fmt(r.collision_rate_mean) << ','
           << csv_detail::fmt(r.collision_rate_se) << "\n";
    }
}

/// One SVG per (scenario, objective) pair present in the summary, with SINR
/// and RMSE per-track panels and one series per policy. Returns the emitted
/// file names.
inline std::vector<std::string> emit_plots(const std::vector<SummaryRow>& summary,
                                           const std::string& out_dir) {
    std::map<std::pair<int, int>, std::map<int, std::vector<const SummaryRow*>>> combos;
    for (const auto& row : summary)
        combos[{static_cast<int>(row.scenario), static_cast<int>(row.objective)}]
              [static_cast<int>(row.policy)].push_back(&row);

    std::vector<std::string> files;
    for (const auto& [combo, by_policy] : combos) {
        const Scenario scen = static_cast<Scenario>(combo.first);
        const Objective obj = static_cast<Objective>(combo.second);
        std::vector<PlotSeries> sinr_series, rmse_series;
        for (const auto& [pol, rows] : by_policy) {
            PlotSeries s{to_string(static_cast<PolicyKind>(pol)), {}, {}};
            PlotSeries r = s;
            for (const SummaryRow* row : rows) {
                s.x.push_back(row->track);
                s.y.push_back(row->sinr_db_mean);
                r.x.push_back(row->track);
                r.y.push_back(row->final_rmse_mean);
            }
            sinr_series.push_back(std::move(s));
            rmse_series.push_back(std::move(r));
        }
        const std::string name =
            "plot_" + to_string(scen) + "_" + to_string(obj) + ".svg";
        const std::filesystem::path path = std::filesystem::path(out_dir) / name;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write plot file: " + path.string());
        const std::string subtitle = to_string(scen) + ", " + to_string(obj);
        write_two_panel_svg(out, "Average SINR per track (" + subtitle + ")", "SINR (dB)",
                            sinr_series, "RMSE per track (" + subtitle + ")", "RMSE",
                            rmse_series, "track");
        files.push_back(path.string());
    }
    return files;
}

struct ExperimentResult {
    std::vector<TrackRecord> records;
    std::vector<SummaryRow> summary;
};

/// Runs all trials, writes records.csv, summary.csv and the plots into the
/// configured output directory.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult result;
    result.records = run_trials(config);
    result.summary = summarize(result.records);

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    const auto records_path = std::filesystem::path(config.output_dir) / "records.csv";
    const auto summary_path = std::filesystem::path(config.output_dir) / "summary.csv";
    std::ofstream records_out(records_path);
    if (!records_out)
        throw std::runtime_error("cannot write " + records_path.string());
    write_records_csv(records_out, result.records);
    std::ofstream summary_out(summary_path);
    if (!summary_out)
        throw std::runtime_error("cannot write " + summary_path.string());
    write_summary_csv(summary_out, result.summary);
    emit_plots(result.summary, config.output_dir);
    return result;
}

/// Cartesian sweep over scenario x objective x policy with shared settings.
inline ExperimentResult run_sweep(const ExperimentConfig& base) {
    ExperimentResult merged;
    for (Scenario scen : {Scenario::stochastic_order3, Scenario::adaptive_order2}) {
        for (Objective obj : {Objective::tracking, Objective::entropy}) {
            for (PolicyKind pol : {PolicyKind::universal, PolicyKind::ts, PolicyKind::random}) {
                ExperimentConfig c = base;
                c.scenario = scen;
                c.objective = obj;
                c.policy = pol;
                c.cost.objective = obj;
                auto records = run_trials(c);
                merged.records.insert(merged.records.end(), records.begin(), records.end());
            }
        }
    }
    merged.summary = summarize(merged.records);

    std::error_code ec;
    std::filesystem::create_directories(base.output_dir, ec);
    const auto records_path = std::filesystem::path(base.output_dir) / "records.csv";
    const auto summary_path = std::filesystem::path(base.output_dir) / "summary.csv";
    std::ofstream records_out(records_path);
    if (!records_out) throw std::runtime_error("cannot write " + records_path.string());
    write_records_csv(records_out, merged.records);
    std::ofstream summary_out(summary_path);
    if (!summary_out) throw std::runtime_error("cannot write " + summary_path.string());
    write_summary_csv(summary_out, merged.summary);
    emit_plots(merged.summary, base.output_dir);
    return merged;
}

}  // namespace lzwave
