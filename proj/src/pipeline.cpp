#include "pigw/pipeline.hpp"
#include "pigw/baselines.hpp"
#include "pigw/errors.hpp"
#include "pigw/invariants.hpp"
#include "pigw/metrics.hpp"
#include "pigw/pigmm.hpp"
#include "pigw/wick.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace pigw {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

std::vector<int> ExperimentConfig::default_predict_ids() { return invariant_range(14, 52); }

ExperimentConfig ExperimentConfig::from_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad config JSON: ") + e.what());
    }
    ExperimentConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    try {
        get("mnist_dir", c.mnist_dir);
        get("output_dir", c.output_dir);
        if (j.contains("schemes")) {
            c.schemes.clear();
            for (const auto& s : j.at("schemes")) c.schemes.push_back(parse_scheme(s.get<std::string>()));
        }
        get("runs", c.runs);
        get("epochs", c.epochs);
        get("batch", c.batch);
        get("lr", c.lr);
        get("l2_lambda", c.l2_lambda);
        get("widths", c.widths);
        get("master_seed", c.master_seed);
        get("layers_to_analyze", c.layers_to_analyze);
        get("predict_ids", c.predict_ids);
        get("threads", c.threads);
        get("clip_negative", c.clip_negative);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad config field: ") + e.what());
    }
    return c;
}

void ExperimentConfig::validate() const {
    if (runs < 2) throw ArgumentError("an experiment needs at least 2 runs");
    if (epochs < 0) throw ArgumentError("epochs must be non-negative");
    if (schemes.empty()) throw ArgumentError("no initialization scheme selected");
    for (int w : widths)
        if (w < 4) throw ArgumentError("hidden width must be at least 4");
    for (int id : predict_ids)
        if (id < 1 || id > kInvariantCount) throw ArgumentError("invariant id out of range");
    if (threads < 1) throw ArgumentError("threads must be at least 1");
}

NetConfig ExperimentConfig::net_config(Scheme scheme, int width) const {
    NetConfig n = width == 0 ? NetConfig{} : NetConfig::width_variant(width);
    n.scheme = scheme;
    n.lr = lr;
    n.batch = batch;
    n.epochs = epochs;
    n.l2_lambda = l2_lambda;
    n.runs = runs;
    n.master_seed = master_seed;
    if (!layers_to_analyze.empty()) n.analyzed_layers = layers_to_analyze;
    n.validate();
    return n;
}

std::string ExperimentConfig::cell_name(Scheme scheme, int width) const {
    std::string name = to_string(scheme);
    name += width == 0 ? "_base" : "_w" + std::to_string(width);
    if (l2_lambda > 0.0) name += "_l2";
    return name;
}

GenerateSummary cmd_generate(const ExperimentConfig& config, const ProgressFn& progress) {
    config.validate();
    if (!mnist_present(config.mnist_dir)) throw IoError("MNIST files not found in " + config.mnist_dir);
    const MnistData data = load_mnist(config.mnist_dir);
    fs::create_directories(config.output_dir);

    GenerateSummary summary;
    std::vector<int> widths = config.widths.empty() ? std::vector<int>{0} : config.widths;
    for (Scheme scheme : config.schemes) {
        for (int width : widths) {
            const NetConfig net = config.net_config(scheme, width);
            EnsembleResult res = generate_ensemble(net, data, config.threads, progress);
            const std::string cell = config.cell_name(scheme, width);
            const fs::path path = fs::path(config.output_dir) / (cell + ".pigw");
            write_store(res.store, path);
            summary.stores.push_back(path);
            if (!res.failed_runs.empty()) summary.failed_runs[cell] = res.failed_runs;

            double mean = 0.0, ss = 0.0;
            const int n = res.store.runs;
            for (const auto& acc : res.store.accuracies) mean += acc.back();
            if (n > 0) mean /= n;
            for (const auto& acc : res.store.accuracies) ss += (acc.back() - mean) * (acc.back() - mean);
            const double se = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
            std::ostringstream line;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.4f +- %.4f", mean, se);
            line << cell << ": " << n << " runs, final accuracy " << buf;
            summary.lines.push_back(line.str());
        }
    }
    return summary;
}

// ---------------------------------------------------------------------------
// Analysis
// ---------------------------------------------------------------------------

namespace {

void require_runs(const SnapshotStore& store) {
    if (store.runs < 2) throw ArgumentError("analysis needs a store with at least 2 runs");
}

LqVector lq_means(const SnapshotStore& store, int layer, int epoch) {
    const InvariantStats st = ensemble_stats(store, layer, epoch, invariant_range(1, 13));
    LqVector v{};
    for (int k = 0; k < kParamCount; ++k) v[k] = st.mean[k];
    return v;
}

ModelParams reference_model(const SnapshotStore& store) {
    const double fan_in = store.d;
    return store.scheme == Scheme::gaussian ? simple_gaussian_params(1.0 / fan_in, store.d)
                                            : uniform_equivalent_params(1.0 / std::sqrt(fan_in), store.d);
}

std::int64_t I(int x) { return static_cast<std::int64_t>(x); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Deviation vectors (13 each) for one (layer, epoch) cell.
struct LqDeviations {
    std::vector<double> invariant;
    std::vector<double> param;
};

LqDeviations lq_deviations(const SnapshotStore& store, int layer, int epoch) {
    const InvariantBaseline ib = init_invariant_baseline(store.scheme, store.d, store.runs);
    const ParamBaseline pb = init_param_baseline(store.scheme, store.d, store.runs);
    const LqVector obs = lq_means(store, layer, epoch);
    const ModelParams fit = fit_params(obs, store.d);
    LqDeviations out;
    for (int k = 0; k < kParamCount; ++k) {
        out.invariant.push_back(deviation_lq(obs[k], ib.expectation[k], ib.se[k]));
        out.param.push_back(deviation_lq(fit.f[k], pb.expectation[k], pb.sd[k]));
    }
    return out;
}

std::vector<double> cq_deviations(const SnapshotStore& store, int layer, int epoch, const std::vector<int>& ids) {
    const ModelParams fit = fit_params(lq_means(store, layer, epoch), store.d);
    const PatternMoments pm = to_pattern_moments(fit);
    const InvariantStats st = ensemble_stats(store, layer, epoch, ids);
    std::vector<double> out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const double theory = expected_invariant(pm, invariant(ids[k]));
        out.push_back(st.std[k] > 0.0 ? deviation_cq(theory, st.mean[k], st.std[k]) : kNaN);
    }
    return out;
}

} // namespace

Table accuracy_table(const SnapshotStore& store) {
    require_runs(store);
    Table t{{"epoch", "mean_accuracy", "se", "runs"}, {}};
    for (int e = 0; e <= store.epochs; ++e) {
        std::vector<double> acc;
        for (const auto& row : store.accuracies) acc.push_back(row[e]);
        double mean = 0.0;
        for (double a : acc) mean += a;
        mean /= acc.size();
        double ss = 0.0;
        for (double a : acc) ss += (a - mean) * (a - mean);
        const double se = std::sqrt(ss / (acc.size() - 1) / acc.size());
        t.add_row({I(e), mean, se, I(store.runs)});
    }
    return t;
}

Table invariant_table(const SnapshotStore& store) {
    require_runs(store);
    Table t{{"layer", "epoch", "id", "mean", "std", "se", "n"}, {}};
    const auto ids = invariant_range(1, kInvariantCount);
    for (int l = 0; l < store.layer_count; ++l)
        for (int e = 0; e <= store.epochs; ++e) {
            const InvariantStats st = ensemble_stats(store, l, e, ids);
            for (std::size_t k = 0; k < ids.size(); ++k)
                t.add_row({I(l + 1), I(e), I(ids[k]), st.mean[k], st.std[k], st.se[k], I(st.n)});
        }
    return t;
}

Table params_table(const SnapshotStore& store) {
    require_runs(store);
    Table t;
    t.columns = {"layer", "epoch"};
    for (int k = 1; k <= kParamCount; ++k) t.columns.push_back("f" + std::to_string(k));
    t.columns.push_back("psd_valid");
    for (int l = 0; l < store.layer_count; ++l)
        for (int e = 0; e <= store.epochs; ++e) {
            const ModelParams fit = fit_params(lq_means(store, l, e), store.d);
            std::vector<Cell> row{I(l + 1), I(e)};
            for (double f : fit.f) row.emplace_back(f);
            row.emplace_back(I(psd_check(fit).is_valid ? 1 : 0));
            t.add_row(std::move(row));
        }
    return t;
}

Table lq_deviation_table(const SnapshotStore& store) {
    require_runs(store);
    const InvariantBaseline ib = init_invariant_baseline(store.scheme, store.d, store.runs);
    const ParamBaseline pb = init_param_baseline(store.scheme, store.d, store.runs);
    Table t{{"layer", "epoch", "kind", "id", "observed", "expectation", "spread", "deviation"}, {}};
    for (int l = 0; l < store.layer_count; ++l)
        for (int e = 0; e <= store.epochs; ++e) {
            const LqVector obs = lq_means(store, l, e);
            const ModelParams fit = fit_params(obs, store.d);
            for (int k = 0; k < kParamCount; ++k)
                t.add_row({I(l + 1), I(e), std::string("invariant"), I(k + 1), obs[k], ib.expectation[k], ib.se[k],
                           deviation_lq(obs[k], ib.expectation[k], ib.se[k])});
            for (int k = 0; k < kParamCount; ++k)
                t.add_row({I(l + 1), I(e), std::string("param"), I(k + 1), fit.f[k], pb.expectation[k], pb.sd[k],
                           deviation_lq(fit.f[k], pb.expectation[k], pb.sd[k])});
        }
    return t;
}

Table cq_table(const SnapshotStore& store, const std::vector<int>& ids) {
    require_runs(store);
    Table t{{"layer", "epoch", "id", "theory", "exp_mean", "exp_std", "deviation"}, {}};
    for (int l = 0; l < store.layer_count; ++l)
        for (int e = 0; e <= store.epochs; ++e) {
            const ModelParams fit = fit_params(lq_means(store, l, e), store.d);
            const PatternMoments pm = to_pattern_moments(fit);
            const InvariantStats st = ensemble_stats(store, l, e, ids);
            for (std::size_t k = 0; k < ids.size(); ++k) {
                const double theory = expected_invariant(pm, invariant(ids[k]));
                const double dev = st.std[k] > 0.0 ? deviation_cq(theory, st.mean[k], st.std[k]) : kNaN;
                t.add_row({I(l + 1), I(e), I(ids[k]), theory, st.mean[k], st.std[k], dev});
            }
        }
    return t;
}

Table wasserstein_table(const SnapshotStore& store, bool clip_negative) {
    require_runs(store);
    const ModelParams ref = reference_model(store);
    Table t{{"layer", "epoch", "distance", "psd_valid"}, {}};
    for (int l = 0; l < store.layer_count; ++l)
        for (int e = 0; e <= store.epochs; ++e) {
            const ModelParams fit = fit_params(lq_means(store, l, e), store.d);
            const bool valid = psd_check(fit).is_valid;
            double dist = kNaN;
            if (valid || clip_negative) dist = wasserstein(ref, fit, WassersteinOptions{clip_negative});
            t.add_row({I(l + 1), I(e), dist, I(valid ? 1 : 0)});
        }
    return t;
}

Table pmcc_table(const SnapshotStore& store) {
    require_runs(store);
    Table t{{"kind", "stage", "layer_a", "layer_b", "pmcc"}, {}};
    const std::pair<const char*, int> stages[2] = {{"before", 0}, {"after", store.epochs}};
    for (const auto& [stage, epoch] : stages) {
        std::vector<LqDeviations> per_layer;
        for (int l = 0; l < store.layer_count; ++l) per_layer.push_back(lq_deviations(store, l, epoch));
        for (const char* kind : {"invariant", "param"}) {
            for (int a = 0; a < store.layer_count; ++a)
                for (int b = a + 1; b < store.layer_count; ++b) {
                    const bool inv = std::string(kind) == "invariant";
                    const auto& x = inv ? per_layer[a].invariant : per_layer[a].param;
                    const auto& y = inv ? per_layer[b].invariant : per_layer[b].param;
                    double r = kNaN;
                    try {
                        r = pmcc(x, y);
                    } catch (const DomainError&) {
                    }
                    t.add_row({std::string(kind), std::string(stage), I(a + 1), I(b + 1), r});
                }
        }
    }
    return t;
}

Table normalized_change_table(const SnapshotStore& store, const std::vector<int>& ids) {
    require_runs(store);
    Table t{{"layer", "id", "deviation_start", "deviation_final", "normalized_change", "undefined"}, {}};
    for (int l = 0; l < store.layer_count; ++l) {
        const auto start = cq_deviations(store, l, 0, ids);
        const auto final = cq_deviations(store, l, store.epochs, ids);
        for (std::size_t k = 0; k < ids.size(); ++k) {
            const NormalizedChange nc = normalized_change(start[k], final[k]);
            t.add_row({I(l + 1), I(ids[k]), start[k], final[k], nc.value, I(nc.undefined ? 1 : 0)});
        }
    }
    return t;
}

std::map<std::string, Table> cmd_analyze(const SnapshotStore& store, const AnalyzeOptions& options) {
    require_runs(store);
    std::map<std::string, Table> out;
    out["accuracy"] = accuracy_table(store);
    out["invariants"] = invariant_table(store);
    out["params"] = params_table(store);
    out["lq_deviations"] = lq_deviation_table(store);
    out["cq"] = cq_table(store, options.predict_ids);
    out["wasserstein"] = wasserstein_table(store, options.clip_negative);
    out["pmcc"] = pmcc_table(store);
    out["normalized_change"] = normalized_change_table(store, options.predict_ids);
    return out;
}

void write_tables(const std::map<std::string, Table>& tables, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& [name, table] : tables) export_table(table, dir / (name + ".csv"));
}

const std::vector<std::string>& required_tables() {
    static const std::vector<std::string> names = {"accuracy", "invariants", "params",            "lq_deviations",
                                                   "cq",       "wasserstein", "pmcc", "normalized_change"};
    return names;
}

// ---------------------------------------------------------------------------
// Baseline tables and report
// ---------------------------------------------------------------------------

Table baseline_invariant_table(int d, int N) {
    Table t{{"id", "gaussian_expectation", "gaussian_se", "uniform_expectation", "uniform_se"}, {}};
    const InvariantBaseline g = init_invariant_baseline(Scheme::gaussian, d, N);
    const InvariantBaseline u = init_invariant_baseline(Scheme::uniform, d, N);
    for (int k = 0; k < kParamCount; ++k) t.add_row({I(k + 1), g.expectation[k], g.se[k], u.expectation[k], u.se[k]});
    return t;
}

Table baseline_param_table(int d, int N) {
    Table t{{"param", "gaussian_expectation", "gaussian_sd", "uniform_expectation", "uniform_sd"}, {}};
    const ParamBaseline g = init_param_baseline(Scheme::gaussian, d, N);
    const ParamBaseline u = init_param_baseline(Scheme::uniform, d, N);
    for (int k = 0; k < kParamCount; ++k) t.add_row({I(k + 1), g.expectation[k], g.sd[k], u.expectation[k], u.sd[k]});
    return t;
}

namespace {

// a[b] notation with two significant figures, as in the printed tables.
std::string sig2(double x) {
    if (std::isnan(x)) return "nan";
    if (std::abs(x) < 1e-14) return "0";
    int e = static_cast<int>(std::floor(std::log10(std::abs(x)))) - 1;
    long mant = std::lround(x / std::pow(10.0, e));
    if (std::labs(mant) >= 100) {
        mant = std::lround(static_cast<double>(mant) / 10.0);
        ++e;
    }
    return std::to_string(mant) + "[" + std::to_string(e) + "]";
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

void write_grid(std::ostream& out, const std::string& label, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
    out << label << "\n";
    std::size_t w = 10;
    for (const auto& h : header) w = std::max(w, h.size() + 2);
    for (const auto& r : rows)
        for (const auto& c : r) w = std::max(w, c.size() + 2);
    for (const auto& h : header) out << pad(h, w);
    out << "\n";
    for (const auto& r : rows) {
        for (const auto& c : r) out << pad(c, w);
        out << "\n";
    }
    out << "\n";
}

std::string fixed4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

int table_max_int(const Table& t, const std::string& col) {
    int m = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) m = std::max(m, static_cast<int>(t.number(r, col)));
    return m;
}

} // namespace

fs::path cmd_report(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("report directory not found: " + dir.string());
    std::vector<fs::path> cells;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_directory()) cells.push_back(entry.path());
    std::sort(cells.begin(), cells.end());
    if (cells.empty()) throw IoError("no analyzed cells under " + dir.string());

    std::vector<std::string> missing;
    for (const auto& c : cells)
        for (const auto& name : required_tables())
            if (!fs::exists(c / (name + ".csv"))) missing.push_back((c / (name + ".csv")).string());
    if (!missing.empty()) {
        std::string msg = "missing analysis tables:";
        for (const auto& m : missing) msg += " " + m;
        throw IoError(msg);
    }

    std::ostringstream out;
    out << "Permutation-invariant Gaussian matrix model report\n";
    out << "Values in a[b] notation mean a x 10^b, two significant figures.\n\n";

    // Accuracy summary.
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& c : cells) {
            const Table acc = read_table(c / "accuracy.csv");
            const std::size_t last = acc.rows.size() - 1;
            rows.push_back({c.filename().string(), fixed4(acc.number(last, "mean_accuracy")),
                            fixed4(acc.number(last, "se")),
                            std::to_string(static_cast<int>(acc.number(last, "runs")))});
        }
        write_grid(out, "Final test accuracy per cell", {"cell", "accuracy", "se", "runs"}, rows);
    }

    // Baselines for the 10 x 10 hidden layers of the base architecture.
    const int d_ref = 10;
    int n_ref = 2;
    for (const auto& c : cells) {
        const Table acc = read_table(c / "accuracy.csv");
        n_ref = std::max(n_ref, static_cast<int>(acc.number(0, "runs")));
    }

    // Initialization baselines at N = 1000 and at the ensemble size.
    for (int N : {1000, n_ref}) {
        const Table bi = baseline_invariant_table(d_ref, N);
        const Table bp = baseline_param_table(d_ref, N);
        export_table(bi, dir / ("baseline_invariants_N" + std::to_string(N) + ".csv"));
        export_table(bp, dir / ("baseline_params_N" + std::to_string(N) + ".csv"));
        std::vector<std::vector<std::string>> ri, rp;
        for (std::size_t r = 0; r < bi.rows.size(); ++r) {
            ri.push_back({"I" + std::to_string(r + 1), sig2(bi.number(r, "gaussian_expectation")),
                          sig2(bi.number(r, "gaussian_se")), sig2(bi.number(r, "uniform_expectation")),
                          sig2(bi.number(r, "uniform_se"))});
            rp.push_back({"f" + std::to_string(r + 1), sig2(bp.number(r, "gaussian_expectation")),
                          sig2(bp.number(r, "gaussian_sd")), sig2(bp.number(r, "uniform_expectation")),
                          sig2(bp.number(r, "uniform_sd"))});
        }
        const std::string tag = " (d=" + std::to_string(d_ref) + ", N=" + std::to_string(N) + ")";
        write_grid(out, "Initialization invariant expectations and standard errors" + tag,
                   {"invariant", "G <I>", "G SE", "U <I>", "U SE"}, ri);
        write_grid(out, "Initialization parameter expectations and standard deviations" + tag,
                   {"param", "G <f>", "G sd", "U <f>", "U sd"}, rp);
    }

    for (const auto& c : cells) {
        const std::string cell = c.filename().string();
        const Table inv = read_table(c / "invariants.csv");
        const Table par = read_table(c / "params.csv");
        const Table dev = read_table(c / "lq_deviations.csv");
        const Table cq = read_table(c / "cq.csv");
        const Table ws = read_table(c / "wasserstein.csv");
        const Table pm = read_table(c / "pmcc.csv");
        const int epochs = table_max_int(inv, "epoch");
        const int layers = table_max_int(inv, "layer");

        out << "==== " << cell << " ====\n\n";
        for (int stage : {0, epochs}) {
            const std::string when = stage == 0 ? "before training (epoch 0)" : "after training (epoch " + std::to_string(stage) + ")";
            std::vector<std::vector<std::string>> ri, rp, rd;
            for (int l = 1; l <= layers; ++l) {
                std::vector<std::string> a{"L" + std::to_string(l)}, b{"L" + std::to_string(l)};
                std::vector<std::string> di{"L" + std::to_string(l) + " I"}, dp{"L" + std::to_string(l) + " f"};
                for (std::size_t r = 0; r < inv.rows.size(); ++r)
                    if (inv.number(r, "layer") == l && inv.number(r, "epoch") == stage && inv.number(r, "id") <= 13)
                        a.push_back(sig2(inv.number(r, "mean")));
                for (std::size_t r = 0; r < par.rows.size(); ++r)
                    if (par.number(r, "layer") == l && par.number(r, "epoch") == stage)
                        for (int k = 1; k <= kParamCount; ++k) b.push_back(sig2(par.number(r, "f" + std::to_string(k))));
                for (std::size_t r = 0; r < dev.rows.size(); ++r) {
                    if (dev.number(r, "layer") != l || dev.number(r, "epoch") != stage) continue;
                    const bool is_inv = std::get<std::string>(dev.rows[r][dev.column_index("kind")]) == "invariant";
                    (is_inv ? di : dp).push_back(sig2(dev.number(r, "deviation")));
                }
                ri.push_back(a);
                rp.push_back(b);
                rd.push_back(di);
                rd.push_back(dp);
            }
            std::vector<std::string> hi{"layer"}, hp{"layer"}, hd{"layer"};
            for (int k = 1; k <= kParamCount; ++k) {
                hi.push_back("I" + std::to_string(k));
                hp.push_back("f" + std::to_string(k));
                hd.push_back(std::to_string(k));
            }
            write_grid(out, "Observed invariants " + when, hi, ri);
            write_grid(out, "Fitted parameters " + when, hp, rp);
            write_grid(out, "LQ deviations " + when, hd, rd);
        }

        // Cubic/quartic deviations after training.
        {
            std::vector<std::vector<std::string>> rows;
            for (int l = 1; l <= layers; ++l) {
                double sum = 0.0, mx = 0.0;
                int n = 0;
                for (std::size_t r = 0; r < cq.rows.size(); ++r)
                    if (cq.number(r, "layer") == l && cq.number(r, "epoch") == epochs) {
                        const double v = cq.number(r, "deviation");
                        if (std::isnan(v)) continue;
                        sum += v;
                        mx = std::max(mx, v);
                        ++n;
                    }
                rows.push_back({"L" + std::to_string(l), format_real(n ? sum / n : kNaN), format_real(mx)});
            }
            write_grid(out, "CQ deviations at the final epoch", {"layer", "mean", "max"}, rows);
        }
        {
            std::vector<std::vector<std::string>> rows;
            for (std::size_t r = 0; r < pm.rows.size(); ++r)
                rows.push_back({std::get<std::string>(pm.rows[r][0]), std::get<std::string>(pm.rows[r][1]),
                                "L" + std::to_string(static_cast<int>(pm.number(r, "layer_a"))) + "-L" +
                                    std::to_string(static_cast<int>(pm.number(r, "layer_b"))),
                                format_real(pm.number(r, "pmcc"))});
            write_grid(out, "PMCC between layer deviation vectors", {"kind", "stage", "pair", "pmcc"}, rows);
        }
        {
            std::vector<std::vector<std::string>> rows;
            for (int l = 1; l <= layers; ++l) {
                std::vector<std::string> row{"L" + std::to_string(l)};
                for (std::size_t r = 0; r < ws.rows.size(); ++r)
                    if (ws.number(r, "layer") == l && (ws.number(r, "epoch") == 0 || ws.number(r, "epoch") == epochs))
                        row.push_back(format_real(ws.number(r, "distance")));
                rows.push_back(row);
            }
            write_grid(out, "Wasserstein distance to the initialization model", {"layer", "epoch 0", "final"}, rows);
        }
        out << "Figure data: " << cell << "/lq_deviations.csv (LQ trajectories), " << cell
            << "/normalized_change.csv (normalized change), " << cell << "/cq.csv (CQ trajectories), " << cell
            << "/wasserstein.csv (distance trajectories)\n\n";
    }

    const fs::path report = dir / "report.txt";
    std::ofstream f(report, std::ios::binary);
    if (!f) throw IoError("cannot write " + report.string());
    f << out.str();
    return report;
}

} // namespace pigw
