#include "pigw/dataio.hpp"
#include "pigw/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pigw {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;
constexpr char kStoreMagic[4] = {'P', 'I', 'G', 'W'};
constexpr std::uint32_t kStoreVersion = 1;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& buf, std::size_t offset, const std::string& what) {
    if (buf.size() < offset + 4) throw IoError("truncated IDX header in " + what);
    return (std::uint32_t(buf[offset]) << 24) | (std::uint32_t(buf[offset + 1]) << 16) |
           (std::uint32_t(buf[offset + 2]) << 8) | std::uint32_t(buf[offset + 3]);
}

void put_be32(std::ostream& out, std::uint32_t v) {
    const char b[4] = {char(v >> 24), char(v >> 16), char(v >> 8), char(v)};
    out.write(b, 4);
}

// Little-endian 64/32-bit encoding regardless of host byte order.
template <typename T>
void put_le(std::ostream& out, T v) {
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    std::array<char, sizeof(T)> raw{};
    std::memcpy(raw.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
    out.write(raw.data(), sizeof(T));
}

template <typename T>
T get_le(const std::uint8_t* p) {
    std::array<std::uint8_t, sizeof(T)> raw{};
    std::memcpy(raw.data(), p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
    T v;
    std::memcpy(&v, raw.data(), sizeof(T));
    return v;
}

} // namespace

ImageTensor load_idx_images(const std::filesystem::path& path) {
    const auto buf = read_file(path);
    const auto name = path.string();
    const std::uint32_t magic = read_be32(buf, 0, name);
    if (magic != kImageMagic)
        throw FormatError("bad IDX image magic " + std::to_string(magic) + " in " + name);
    ImageTensor t;
    t.count = read_be32(buf, 4, name);
    t.rows = read_be32(buf, 8, name);
    t.cols = read_be32(buf, 12, name);
    const std::size_t n = t.count * t.rows * t.cols;
    if (buf.size() < 16 + n) throw IoError("truncated IDX image payload in " + name);
    t.pixels.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.pixels[i] = buf[16 + i] / 255.0;
    return t;
}

LabelVector load_idx_labels(const std::filesystem::path& path) {
    const auto buf = read_file(path);
    const auto name = path.string();
    const std::uint32_t magic = read_be32(buf, 0, name);
    if (magic != kLabelMagic)
        throw FormatError("bad IDX label magic " + std::to_string(magic) + " in " + name);
    const std::size_t n = read_be32(buf, 4, name);
    if (buf.size() < 8 + n) throw IoError("truncated IDX label payload in " + name);
    LabelVector v;
    v.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int label = buf[8 + i];
        if (label > 9) throw DataError("label " + std::to_string(label) + " out of range in " + name);
        v.labels[i] = label;
    }
    return v;
}

void write_idx_images(const std::filesystem::path& path, std::size_t count, std::size_t rows,
                      std::size_t cols, const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() != count * rows * cols) throw ArgumentError("IDX image byte count mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    put_be32(out, kImageMagic);
    put_be32(out, std::uint32_t(count));
    put_be32(out, std::uint32_t(rows));
    put_be32(out, std::uint32_t(cols));
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    put_be32(out, kLabelMagic);
    put_be32(out, std::uint32_t(labels.size()));
    out.write(reinterpret_cast<const char*>(labels.data()), std::streamsize(labels.size()));
}

namespace {
const char* kMnistFiles[4] = {"train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                              "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"};
}

bool mnist_present(const std::filesystem::path& dir) {
    for (const char* f : kMnistFiles)
        if (!std::filesystem::exists(dir / f)) return false;
    return true;
}

MnistData load_mnist(const std::filesystem::path& dir) {
    for (const char* f : kMnistFiles)
        if (!std::filesystem::exists(dir / f)) throw IoError("missing MNIST file " + (dir / f).string());
    MnistData m;
    m.train_images = load_idx_images(dir / kMnistFiles[0]);
    m.train_labels = load_idx_labels(dir / kMnistFiles[1]);
    m.test_images = load_idx_images(dir / kMnistFiles[2]);
    m.test_labels = load_idx_labels(dir / kMnistFiles[3]);
    if (m.train_images.count != m.train_labels.count() || m.test_images.count != m.test_labels.count())
        throw DataError("MNIST image and label counts differ");
    return m;
}

// ---------------------------------------------------------------------------

std::string to_string(Scheme s) { return s == Scheme::gaussian ? "gaussian" : "uniform"; }

Scheme parse_scheme(const std::string& name) {
    if (name == "gaussian") return Scheme::gaussian;
    if (name == "uniform") return Scheme::uniform;
    throw ArgumentError("unknown scheme '" + name + "'");
}

std::vector<Eigen::MatrixXd> SnapshotStore::ensemble(int layer, int epoch) const {
    if (layer < 0 || layer >= layer_count || epoch < 0 || epoch > epochs)
        throw ArgumentError("layer/epoch outside store");
    std::vector<Eigen::MatrixXd> out;
    out.reserve(runs);
    for (int r = 0; r < runs; ++r) out.push_back(at(r, layer, epoch));
    return out;
}

void SnapshotStore::validate() const {
    if (d < 0 || layer_count < 0 || epochs < 0 || runs < 0) throw DataError("negative store dimension");
    const std::size_t expected = static_cast<std::size_t>(runs) * layer_count * snapshots();
    if (matrices.size() != expected)
        throw DataError("store holds " + std::to_string(matrices.size()) + " matrices, header implies " +
                        std::to_string(expected));
    for (const auto& m : matrices)
        if (m.rows() != d || m.cols() != d) throw DataError("matrix shape differs from header d");
    if (accuracies.size() != static_cast<std::size_t>(runs)) throw DataError("accuracy rows differ from runs");
    for (const auto& a : accuracies)
        if (a.size() != static_cast<std::size_t>(snapshots())) throw DataError("accuracy row length differs from epochs");
}

void write_store(const SnapshotStore& store, const std::filesystem::path& path) {
    store.validate();
    nlohmann::json meta = {
        {"scheme", to_string(store.scheme)}, {"regularized", store.regularized},
        {"d", store.d},                      {"layer_count", store.layer_count},
        {"epochs", store.epochs},            {"runs", store.runs},
        {"master_seed", store.master_seed},
    };
    const std::string text = meta.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(kStoreMagic, 4);
    put_le<std::uint32_t>(out, kStoreVersion);
    put_le<std::uint64_t>(out, text.size());
    out.write(text.data(), std::streamsize(text.size()));
    for (const auto& m : store.matrices)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) put_le<double>(out, m(i, j));
    for (const auto& row : store.accuracies)
        for (double a : row) put_le<double>(out, a);
    if (!out) throw IoError("write failed for " + path.string());
}

SnapshotStore read_store(const std::filesystem::path& path) {
    const auto buf = read_file(path);
    const auto name = path.string();
    if (buf.size() < 16 || std::memcmp(buf.data(), kStoreMagic, 4) != 0)
        throw FormatError("not a PIGW store: " + name);
    const auto version = get_le<std::uint32_t>(buf.data() + 4);
    if (version != kStoreVersion) throw FormatError("unsupported PIGW version " + std::to_string(version));
    const auto meta_len = get_le<std::uint64_t>(buf.data() + 8);
    if (buf.size() < 16 + meta_len) throw IoError("truncated PIGW metadata in " + name);

    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(buf.begin() + 16, buf.begin() + 16 + static_cast<std::ptrdiff_t>(meta_len));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad PIGW metadata: ") + e.what());
    }

    SnapshotStore s;
    try {
        s.scheme = parse_scheme(meta.at("scheme").get<std::string>());
        s.regularized = meta.at("regularized").get<bool>();
        s.d = meta.at("d").get<int>();
        s.layer_count = meta.at("layer_count").get<int>();
        s.epochs = meta.at("epochs").get<int>();
        s.runs = meta.at("runs").get<int>();
        s.master_seed = meta.at("master_seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("incomplete PIGW metadata: ") + e.what());
    }
    if (s.d < 0 || s.layer_count < 0 || s.epochs < 0 || s.runs < 0) throw DataError("negative dimension in header");

    const std::size_t n_mat = static_cast<std::size_t>(s.runs) * s.layer_count * s.snapshots();
    const std::size_t n_acc = static_cast<std::size_t>(s.runs) * s.snapshots();
    const std::size_t payload = (n_mat * s.d * s.d + n_acc) * sizeof(double);
    const std::size_t offset = 16 + meta_len;
    if (buf.size() - offset != payload)
        throw DataError("PIGW payload is " + std::to_string(buf.size() - offset) + " bytes, header implies " +
                        std::to_string(payload));

    const std::uint8_t* p = buf.data() + offset;
    s.matrices.assign(n_mat, Eigen::MatrixXd(s.d, s.d));
    for (auto& m : s.matrices)
        for (int i = 0; i < s.d; ++i)
            for (int j = 0; j < s.d; ++j, p += 8) m(i, j) = get_le<double>(p);
    s.accuracies.assign(s.runs, std::vector<double>(s.snapshots()));
    for (auto& row : s.accuracies)
        for (double& a : row) {
            a = get_le<double>(p);
            p += 8;
        }
    return s;
}

// ---------------------------------------------------------------------------

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw ArgumentError("no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string& column) const {
    const Cell& c = rows.at(row).at(column_index(column));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw DataError("column '" + column + "' is not numeric");
}

namespace {

std::string render(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) return format_real(*d);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

Cell parse_cell(const std::string& s) {
    if (s.empty()) return s;
    double v = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec == std::errc() && ptr == end) return v;
    if (s == "nan" || s == "-nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    return s;
}

} // namespace

void export_table(const Table& table, const std::filesystem::path& path) {
    for (const auto& r : table.rows)
        if (r.size() != table.columns.size()) throw ArgumentError("table rows are not rectangular");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << render(table.columns[i]);
    out << '\n';
    for (const auto& r : table.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << render(r[i]);
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

Table read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    Table t;
    std::string line;
    if (!std::getline(in, line)) return t;
    t.columns = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<Cell> row;
        for (const auto& f : split_csv_line(line)) row.push_back(parse_cell(f));
        if (row.size() != t.columns.size()) throw DataError("ragged CSV row in " + path.string());
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace pigw
