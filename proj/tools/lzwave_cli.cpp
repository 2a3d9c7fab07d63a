// Command-line front end: run one experiment, sweep the full scenario x
// objective x policy grid, or re-render plots from a summary CSV.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lzwave/harness.hpp"

namespace {

lzwave::ExperimentConfig load_with_overrides(const std::string& config_path,
                                             const std::vector<std::uint64_t>& seeds,
                                             const std::string& out_dir, int threads) {
    lzwave::ExperimentConfig config = config_path.empty()
        ? lzwave::ExperimentConfig{}
        : lzwave::load_config_file(config_path);
    if (!seeds.empty()) config.seeds = seeds;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (threads > 0) config.threads = threads;
    config.validate();
    return config;
}

std::vector<lzwave::SummaryRow> read_summary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open summary file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != lzwave::kSummaryHeader)
        throw std::runtime_error("unrecognized summary header in " + path);
    std::vector<lzwave::SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 13)
            throw std::runtime_error("malformed summary row: " + line);
        lzwave::SummaryRow row;
        row.scenario = lzwave::scenario_from_string(fields[0]);
        row.objective = lzwave::objective_from_string(fields[1]);
        row.policy = lzwave::policy_from_string(fields[2]);
        row.track = std::stoi(fields[3]);
        row.seeds = std::stoi(fields[4]);
        row.sinr_db_mean = std::stod(fields[5]);
        row.sinr_db_se = std::stod(fields[6]);
        row.final_rmse_mean = std::stod(fields[7]);
        row.final_rmse_se = std::stod(fields[8]);
        row.cost_mean = std::stod(fields[9]);
        row.cost_se = std::stod(fields[10]);
        row.collision_rate_mean = std::stod(fields[11]);
        row.collision_rate_se = std::stod(fields[12]);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"context-tree waveform selection experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir, summary_path;
    std::vector<std::uint64_t> seeds;
    int threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "JSON config file");
        cmd->add_option("-s,--seeds", seeds, "seed list override");
        cmd->add_option("-o,--out", out_dir, "output directory override");
        cmd->add_option("-j,--threads", threads, "trial-level worker threads");
    };

    CLI::App* run = app.add_subcommand("run", "run one configured experiment");
    add_common(run);
    CLI::App* sweep =
        app.add_subcommand("sweep", "run every scenario x objective x policy combination");
    add_common(sweep);
    CLI::App* plot = app.add_subcommand("plot", "render plots from a summary CSV");
    plot->add_option("--summary", summary_path, "summary.csv produced by run/sweep")
        ->required();
    plot->add_option("-o,--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto config = load_with_overrides(config_path, seeds, out_dir, threads);
            const auto result = lzwave::run_experiment(config);
            std::cout << "wrote " << result.records.size() << " records and "
                      << result.summary.size() << " summary rows to " << config.output_dir
                      << "\n";
        } else if (sweep->parsed()) {
            const auto config = load_with_overrides(config_path, seeds, out_dir, threads);
            const auto result = lzwave::run_sweep(config);
            std::cout << "wrote " << result.records.size() << " records and "
                      << result.summary.size() << " summary rows to " << config.output_dir
                      << "\n";
        } else if (plot->parsed()) {
            const auto rows = read_summary_csv(summary_path);
            std::error_code ec;
            std::filesystem::create_directories(out_dir, ec);
            const auto files = lzwave::emit_plots(rows, out_dir);
            std::cout << "wrote " << files.size() << " plot files to " << out_dir << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
