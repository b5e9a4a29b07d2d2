#pragma once

#include "pigw/dataio.hpp"
#include "pigw/ensembles.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pigw {

struct ExperimentConfig {
    std::string mnist_dir = "data/mnist";
    std::string output_dir = "out";
    std::vector<Scheme> schemes{Scheme::gaussian};
    int runs = 20;
    int epochs = 10;
    int batch = 100;
    double lr = 0.01;
    double l2_lambda = 0.0;
    std::vector<int> widths;              // empty: 784-10-10-10-10; otherwise 784-a-a-10 per entry
    std::uint64_t master_seed = 0;
    std::vector<int> layers_to_analyze;   // empty: every square layer of the architecture
    std::vector<int> predict_ids = default_predict_ids();
    int threads = 1;
    bool clip_negative = false;

    static std::vector<int> default_predict_ids();

    // Reads a flat JSON object; absent keys keep their defaults.
    static ExperimentConfig from_json_file(const std::filesystem::path& path);
    void validate() const;

    // Network configuration for one (scheme, width) cell; width 0 is the base architecture.
    NetConfig net_config(Scheme scheme, int width) const;
    std::string cell_name(Scheme scheme, int width) const;
};

struct GenerateSummary {
    std::vector<std::filesystem::path> stores;
    std::vector<std::string> lines;      // one accuracy line per cell
    std::map<std::string, std::vector<int>> failed_runs;
};

// Trains every (scheme, width) cell and writes one store per cell to output_dir.
GenerateSummary cmd_generate(const ExperimentConfig& config, const ProgressFn& progress = {});

struct AnalyzeOptions {
    std::vector<int> predict_ids = ExperimentConfig::default_predict_ids();
    bool clip_negative = false;
};

// Individual analysis tables over every (layer, epoch) cell of a store.
Table accuracy_table(const SnapshotStore& store);
Table invariant_table(const SnapshotStore& store);
Table params_table(const SnapshotStore& store);
Table lq_deviation_table(const SnapshotStore& store);
Table cq_table(const SnapshotStore& store, const std::vector<int>& ids);
Table wasserstein_table(const SnapshotStore& store, bool clip_negative);
Table pmcc_table(const SnapshotStore& store);
Table normalized_change_table(const SnapshotStore& store, const std::vector<int>& ids);

// Runs every table above and returns them keyed by file stem.
std::map<std::string, Table> cmd_analyze(const SnapshotStore& store, const AnalyzeOptions& options = {});

void write_tables(const std::map<std::string, Table>& tables, const std::filesystem::path& dir);

// Tables a report needs for each analyzed cell.
const std::vector<std::string>& required_tables();

// Assembles report.txt plus the baseline CSVs from the analyzed cells under
// `dir` (one subdirectory per cell). Throws IoError naming any missing table.
std::filesystem::path cmd_report(const std::filesystem::path& dir);

// Baseline tables mirroring the initialization layouts, for d x d matrices and N runs.
Table baseline_invariant_table(int d, int N);
Table baseline_param_table(int d, int N);

} // namespace pigw
