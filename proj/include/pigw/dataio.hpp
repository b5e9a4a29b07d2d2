#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace pigw {

// ---------------------------------------------------------------------------
// MNIST IDX containers
// ---------------------------------------------------------------------------

struct ImageTensor {
    std::size_t count = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> pixels; // count*rows*cols values in [0, 1], row-major per image

    std::size_t image_size() const { return rows * cols; }
};

struct LabelVector {
    std::vector<int> labels;
    std::size_t count() const { return labels.size(); }
};

// Reads an IDX3 image file (magic 2051). Pixels are raw bytes divided by 255.
ImageTensor load_idx_images(const std::filesystem::path& path);

// Reads an IDX1 label file (magic 2049). Every label must lie in 0..9.
LabelVector load_idx_labels(const std::filesystem::path& path);

void write_idx_images(const std::filesystem::path& path, std::size_t count, std::size_t rows,
                      std::size_t cols, const std::vector<std::uint8_t>& bytes);
void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels);

struct MnistData {
    ImageTensor train_images;
    LabelVector train_labels;
    ImageTensor test_images;
    LabelVector test_labels;
};

// Loads the four standard MNIST files (train-images-idx3-ubyte, ...) from dir.
MnistData load_mnist(const std::filesystem::path& dir);
bool mnist_present(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Snapshot store
// ---------------------------------------------------------------------------

enum class Scheme { gaussian, uniform };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

/// Ensemble of square weight matrices indexed by (run, layer, epoch).
///
/// Epoch 0 holds the weights before any update, so each (run, layer) has
/// `epochs + 1` snapshots. Accuracies follow the same epoch indexing.
struct SnapshotStore {
    Scheme scheme = Scheme::gaussian;
    bool regularized = false;
    int d = 0;
    int layer_count = 0;
    int epochs = 0;
    int runs = 0;
    std::uint64_t master_seed = 0;
    std::vector<Eigen::MatrixXd> matrices;        // runs * layer_count * (epochs + 1)
    std::vector<std::vector<double>> accuracies;  // [run][epoch]

    int snapshots() const { return epochs + 1; }
    std::size_t slot(int run, int layer, int epoch) const {
        return (static_cast<std::size_t>(run) * layer_count + layer) * snapshots() + epoch;
    }
    const Eigen::MatrixXd& at(int run, int layer, int epoch) const { return matrices[slot(run, layer, epoch)]; }
    Eigen::MatrixXd& at(int run, int layer, int epoch) { return matrices[slot(run, layer, epoch)]; }

    // All runs' matrices for one (layer, epoch) cell, in run order.
    std::vector<Eigen::MatrixXd> ensemble(int layer, int epoch) const;

    // Throws DataError if the matrix and accuracy arrays disagree with the header.
    void validate() const;
};

void write_store(const SnapshotStore& store, const std::filesystem::path& path);
SnapshotStore read_store(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// CSV tables
// ---------------------------------------------------------------------------

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
    std::size_t column_index(const std::string& name) const;
    double number(std::size_t row, const std::string& column) const;
};

// Writes a header row plus one line per row. Reals use 17 significant digits.
void export_table(const Table& table, const std::filesystem::path& path);

// Parses a CSV written by export_table. Cells that parse fully as numbers
// come back as double, everything else as string.
Table read_table(const std::filesystem::path& path);

std::string format_real(double x);

} // namespace pigw
