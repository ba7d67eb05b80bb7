#pragma once

#include "zkpot/sim/config.hpp"
#include "zkpot/sim/messages.hpp"
#include "zkpot/sim/scheduler.hpp"

namespace zkpot::sim {

struct StageTimings {
    double setup_s = 0;
    double commitment_s = 0;
    double prove_s = 0;
    double verify_s = 0;
    double block_generation_s = 0;
};

struct MetricsRow {
    unsigned round = 0;
    double global_test_accuracy = 0;
    std::int64_t leader_id = -1;  // -1 marks a NoLeader round
    std::size_t pool_size = 0;
    std::size_t included_txs = 0;
    StageTimings timings;
    bool byzantine_elected = false;
    bool snark_sampled = false;  // large-N runs sample snark timings off-path
};

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsRow& row);
std::vector<MetricsRow> parse_metrics_csv(const std::string& text);

struct SimReport {
    std::vector<MetricsRow> rows;
    std::filesystem::path metrics_path;
    std::filesystem::path chain_path;
    Digest32 final_chain_hash{};
    bool agreement = true;
    unsigned byzantine_leader_rounds = 0;
    unsigned aborted_rounds = 0;
    double final_accuracy = 0;
    double setup_wall_s = 0;
    std::size_t chain_height = 0;
};

// Runs the full protocol: genesis, then per round selection, local training,
// quantize/commit/prove, pool collection, sorted voting, leader aggregation
// and block append, writing metrics.csv and chain.log under cfg.out_dir.
SimReport run_simulation(const SimConfig& cfg);

struct ScalePoint {
    std::size_t nodes = 0;
    double mean_block_s = 0;
    double std_block_s = 0;
};
std::vector<ScalePoint> scaling_experiment(std::span<const std::size_t> node_counts,
                                           SimConfig base);
std::string scale_csv(std::span<const ScalePoint> points);

// Stage x node-count table in the shape of the timing-breakdown experiments.
struct BreakdownTable {
    std::vector<std::size_t> node_counts;
    // stage name -> per-count seconds
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    std::string to_text() const;
};
BreakdownTable timing_breakdown(SimConfig base, std::span<const std::size_t> node_counts);

// Plot emission from a metrics or scale CSV; returns the written files.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& metrics_csv,
                                              const std::filesystem::path& out_dir);

}  // namespace zkpot::sim
