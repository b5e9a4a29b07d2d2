#include "pigw/dataio.hpp"
#include "pigw/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <fstream>

using namespace pigw;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "pigw_test_dataio";
    fs::create_directories(dir);
    return dir / name;
}

SnapshotStore tiny_store() {
    SnapshotStore s;
    s.scheme = Scheme::uniform;
    s.regularized = true;
    s.d = 4;
    s.layer_count = 2;
    s.epochs = 1;
    s.runs = 3;
    s.master_seed = 123456789012345ULL;
    Rng rng(8);
    for (int k = 0; k < s.runs * s.layer_count * s.snapshots(); ++k)
        s.matrices.push_back(pigw::testing::random_matrix(4, rng));
    for (int r = 0; r < s.runs; ++r) s.accuracies.push_back({0.1 * r, 0.5 + 0.1 * r});
    return s;
}

} // namespace

TEST_CASE("IDX round trip") {
    const std::vector<std::uint8_t> px{0, 51, 255, 17, 34, 68, 102, 136, 0, 1, 2, 3};
    write_idx_images(scratch("img"), 3, 2, 2, px);
    write_idx_labels(scratch("lbl"), {7, 0, 9});
    const ImageTensor x = load_idx_images(scratch("img"));
    CHECK(x.count == 3);
    CHECK(x.image_size() == 4);
    CHECK(x.pixels[1] == doctest::Approx(0.2));
    CHECK(x.pixels[2] == 1.0);
    const LabelVector y = load_idx_labels(scratch("lbl"));
    CHECK(y.labels == std::vector<int>{7, 0, 9});
}

TEST_CASE("IDX errors") {
    write_idx_labels(scratch("bad_lbl"), {3, 12});
    CHECK_THROWS_AS(load_idx_labels(scratch("bad_lbl")), DataError);
    CHECK_THROWS_AS(load_idx_images(scratch("bad_lbl")), FormatError);
    CHECK_THROWS_AS(load_idx_images(scratch("does_not_exist")), IoError);
    {
        std::ofstream f(scratch("short"), std::ios::binary);
        f << "ab";
    }
    CHECK_THROWS_AS(load_idx_labels(scratch("short")), IoError);
    CHECK_FALSE(mnist_present(scratch("")));
}

TEST_CASE("store round trip") {
    const SnapshotStore s = tiny_store();
    write_store(s, scratch("s.pigw"));
    const SnapshotStore t = read_store(scratch("s.pigw"));
    CHECK(t.scheme == Scheme::uniform);
    CHECK(t.regularized);
    CHECK(t.d == 4);
    CHECK(t.layer_count == 2);
    CHECK(t.epochs == 1);
    CHECK(t.runs == 3);
    CHECK(t.master_seed == s.master_seed);
    REQUIRE(t.matrices.size() == s.matrices.size());
    for (std::size_t k = 0; k < s.matrices.size(); ++k) CHECK((t.matrices[k] - s.matrices[k]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(t.accuracies == s.accuracies);
    CHECK((t.at(2, 1, 0) - s.matrices[s.slot(2, 1, 0)]).norm() == 0.0);
    CHECK(t.ensemble(1, 1).size() == 3);
}

TEST_CASE("store validation") {
    SnapshotStore s = tiny_store();
    s.matrices.pop_back();
    CHECK_THROWS_AS(s.validate(), DataError);
    {
        std::ofstream f(scratch("junk.pigw"), std::ios::binary);
        f << "NOPE0000000000000000";
    }
    CHECK_THROWS_AS(read_store(scratch("junk.pigw")), FormatError);
    CHECK_THROWS_AS(parse_scheme("laplace"), ArgumentError);
    CHECK(parse_scheme("gaussian") == Scheme::gaussian);
    CHECK(to_string(Scheme::uniform) == "uniform");
}

TEST_CASE("CSV round trip") {
    Table t{{"name", "n", "x"}, {}};
    t.add_row({std::string("plain"), std::int64_t{3}, 0.1});
    t.add_row({std::string("has,comma"), std::int64_t{-4}, 1.0 / 3.0});
    t.add_row({std::string("q\"uote"), std::int64_t{0}, std::nan("")});
    export_table(t, scratch("t.csv"));
    const Table r = read_table(scratch("t.csv"));
    CHECK(r.columns == t.columns);
    REQUIRE(r.rows.size() == 3);
    CHECK(std::get<std::string>(r.rows[1][0]) == "has,comma");
    CHECK(std::get<std::string>(r.rows[2][0]) == "q\"uote");
    CHECK(r.number(1, "n") == -4.0);
    CHECK(r.number(1, "x") == 1.0 / 3.0); // 17 significant digits survive the trip
    CHECK(std::isnan(r.number(2, "x")));
    CHECK_THROWS_AS(r.column_index("missing"), ArgumentError);
}

#ifdef PIGW_MNIST_DIR
TEST_CASE("MNIST files, when present") {
    if (!mnist_present(PIGW_MNIST_DIR)) return;
    const MnistData m = load_mnist(PIGW_MNIST_DIR);
    CHECK(m.train_images.count == 60000);
    CHECK(m.test_images.count == 10000);
    CHECK(m.train_images.image_size() == 784);
    CHECK(m.train_labels.labels[0] == 5);
}
#endif
