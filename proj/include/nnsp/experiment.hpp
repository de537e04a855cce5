#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nnsp/recovery.hpp"

namespace nnsp {

struct ChainParams {
    int n = 100;
    int clusters = 10;
    std::vector<double> coeff_cycle = {1.0, 5.0};
};

struct ExperimentConfig {
    std::string experiment;  // "chain" | "roadmap"
    std::optional<std::filesystem::path> graph_path;
    std::vector<std::uint64_t> seeds = {0};
    double w_in = 4.0;
    double w_out = 2.0;
    int cluster_centers = 3;
    int runs = 100;
    SolverConfig solver;
    ChainParams chain;

    static ExperimentConfig from_json(const nlohmann::json& j);
    void validate() const;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Runs the configured experiment, writes its CSVs under out_dir and returns
// the report (also written to out_dir/report.json by the CLI).
nlohmann::json run_experiment(const ExperimentConfig& cfg,
                              const std::filesystem::path& out_dir,
                              const std::string& config_digest);

// Rows x cols grid edge list with unit placeholder weights, original ids
// row-major starting at 0. Stands in for the roadmap dataset when the real
// edge list is not available.
std::vector<EdgeTriple> grid_edge_list(int rows, int cols);

}  // namespace nnsp
