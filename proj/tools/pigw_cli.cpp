#include "pigw/errors.hpp"
#include "pigw/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace fs = std::filesystem;
using namespace pigw;

namespace {

constexpr int kExitMissingData = 2;
constexpr int kExitDiverged = 3;

std::vector<Scheme> schemes_from(const std::string& name) {
    if (name == "both") return {Scheme::gaussian, Scheme::uniform};
    return {parse_scheme(name)};
}

// Tables for one store land in <out>/<store stem>/ unless --out names a directory.
fs::path cell_dir(const fs::path& store_path, const std::string& out) {
    if (!out.empty()) return out;
    return store_path.parent_path() / store_path.stem();
}

void write_one(const std::string& name, const Table& table, const fs::path& dir) {
    fs::create_directories(dir);
    const fs::path path = dir / (name + ".csv");
    export_table(table, path);
    std::cout << "wrote " << path.string() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Permutation-invariant Gaussian matrix model analysis of trained weight ensembles"};
    app.require_subcommand(1);

    // generate
    ExperimentConfig cfg;
    std::string config_path, scheme_name;
    int seed_flag = -1;
    auto* gen = app.add_subcommand("generate", "Train ensembles on MNIST and write snapshot stores");
    gen->add_option("--config", config_path, "Flat JSON config; flags below override it");
    gen->add_option("--mnist", cfg.mnist_dir, "Directory with the MNIST IDX files");
    gen->add_option("--out", cfg.output_dir, "Output directory for the .pigw stores");
    gen->add_option("--scheme", scheme_name, "gaussian, uniform or both")
        ->check(CLI::IsMember({"gaussian", "uniform", "both"}));
    gen->add_option("--runs", cfg.runs, "Independent training runs per cell");
    gen->add_option("--epochs", cfg.epochs, "Training epochs per run");
    gen->add_option("--seed", seed_flag, "Master seed");
    gen->add_option("--l2", cfg.l2_lambda, "L2 regularization strength");
    gen->add_option("--width", cfg.widths, "Hidden width of the 784-a-a-10 variant (repeatable)");
    gen->add_option("--threads", cfg.threads, "Worker threads over runs");
    bool quiet = false;
    gen->add_flag("--quiet", quiet, "No per-epoch progress lines");

    // per-store table commands
    std::string store_path, table_out, analysis_config;
    std::vector<int> ids;
    bool clip = false;
    auto add_store = [&](CLI::App* sub) {
        sub->add_option("store", store_path, "Snapshot store (.pigw)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", table_out, "Directory for the CSV tables (default: next to the store)");
        sub->add_option("--config", analysis_config, "JSON config supplying predict_ids and clip_negative defaults")
            ->check(CLI::ExistingFile);
    };
    auto* inv = app.add_subcommand("invariants", "Ensemble statistics of all 52 invariants per layer and epoch");
    add_store(inv);
    auto* fit = app.add_subcommand("fit", "Fit the 13-parameter model per layer and epoch");
    add_store(fit);
    auto* pred = app.add_subcommand("predict", "Predicted cubic and quartic invariants with CQ deviations");
    add_store(pred);
    pred->add_option("--ids", ids, "Invariant ids to predict (default 14..52)");
    auto* dev = app.add_subcommand("deviations", "LQ deviations, layer PMCC and normalized change");
    add_store(dev);
    dev->add_option("--ids", ids, "Invariant ids for the normalized change (default 14..52)");
    auto* ws = app.add_subcommand("wasserstein", "Distance from the fitted models to the initialization model");
    add_store(ws);
    ws->add_flag("--clip", clip, "Clip negative block eigenvalues instead of reporting NaN");
    auto* ana = app.add_subcommand("analyze", "Every table above for one store");
    add_store(ana);
    ana->add_option("--ids", ids, "Invariant ids to predict (default 14..52)");
    ana->add_flag("--clip", clip, "Clip negative block eigenvalues instead of reporting NaN");

    std::string report_dir;
    auto* rep = app.add_subcommand("report", "Assemble report.txt from analyzed cells");
    rep->add_option("dir", report_dir, "Directory holding one analyzed subdirectory per cell")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            ExperimentConfig run = cfg;
            if (!config_path.empty()) {
                run = ExperimentConfig::from_json_file(config_path);
                // Explicit flags win over the file.
                for (const auto* opt : gen->get_options()) {
                    if (opt->count() == 0) continue;
                    const std::string n = opt->get_name();
                    if (n == "--mnist") run.mnist_dir = cfg.mnist_dir;
                    if (n == "--out") run.output_dir = cfg.output_dir;
                    if (n == "--runs") run.runs = cfg.runs;
                    if (n == "--epochs") run.epochs = cfg.epochs;
                    if (n == "--l2") run.l2_lambda = cfg.l2_lambda;
                    if (n == "--width") run.widths = cfg.widths;
                    if (n == "--threads") run.threads = cfg.threads;
                }
            }
            if (!scheme_name.empty()) run.schemes = schemes_from(scheme_name);
            if (seed_flag >= 0) run.master_seed = static_cast<std::uint64_t>(seed_flag);
            ProgressFn progress;
            if (!quiet)
                progress = [](int r, int e, double acc) {
                    std::fprintf(stderr, "run %d epoch %d accuracy %.4f\n", r, e, acc);
                };
            const GenerateSummary s = cmd_generate(run, progress);
            for (const auto& line : s.lines) std::cout << line << "\n";
            for (const auto& p : s.stores) std::cout << "wrote " << p.string() << "\n";
            if (!s.failed_runs.empty()) {
                for (const auto& [cell, runs] : s.failed_runs) {
                    std::cerr << cell << ": diverged runs";
                    for (int r : runs) std::cerr << " " << r;
                    std::cerr << "\n";
                }
                return kExitDiverged;
            }
            return 0;
        }
        if (*rep) {
            std::cout << "wrote " << cmd_report(report_dir).string() << "\n";
            return 0;
        }

        const SnapshotStore store = read_store(store_path);
        const fs::path dir = cell_dir(store_path, table_out);
        ExperimentConfig defaults;
        if (!analysis_config.empty()) defaults = ExperimentConfig::from_json_file(analysis_config);
        const std::vector<int> predict = ids.empty() ? defaults.predict_ids : ids;
        clip = clip || defaults.clip_negative;
        if (*inv) write_one("invariants", invariant_table(store), dir);
        if (*fit) write_one("params", params_table(store), dir);
        if (*pred) write_one("cq", cq_table(store, predict), dir);
        if (*dev) {
            write_one("lq_deviations", lq_deviation_table(store), dir);
            write_one("pmcc", pmcc_table(store), dir);
            write_one("normalized_change", normalized_change_table(store, predict), dir);
        }
        if (*ws) write_one("wasserstein", wasserstein_table(store, clip), dir);
        if (*ana) {
            write_tables(cmd_analyze(store, AnalyzeOptions{predict, clip}), dir);
            std::cout << "wrote " << required_tables().size() << " tables to " << dir.string() << "\n";
        }
        return 0;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMissingData;
    } catch (const RunError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
