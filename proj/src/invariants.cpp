#include "pigw/invariants.hpp"
#include "pigw/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pigw {

namespace {

InvariantId make(int index, std::vector<Edge> edges) {
    int nodes = 0;
    for (const auto& e : edges) nodes = std::max({nodes, e.src + 1, e.dst + 1});
    return {index, static_cast<int>(edges.size()), nodes, std::move(edges)};
}

std::array<InvariantId, kInvariantCount> build_catalogue() {
    // Node 0 = i, 1 = j, 2 = k, ...; Edge{a, b} = W_ab.
    const Edge ii{0, 0}, jj{1, 1}, ij{0, 1}, ji{1, 0};
    return {{
        make(1, {ii}),
        make(2, {ij}),
        // quadratic
        make(3, {ij, ij}),
        make(4, {ij, ji}),
        make(5, {ii, ij}),
        make(6, {ii, ji}),
        make(7, {ij, {0, 2}}),
        make(8, {ij, {2, 1}}),
        make(9, {ij, {1, 2}}),
        make(10, {ij, {2, 3}}),
        make(11, {ii, ii}),
        make(12, {ii, jj}),
        make(13, {ii, {1, 2}}),
        // cubic
        make(14, {ii, ii, ii}),
        make(15, {ii, ii, jj}),
        make(16, {ii, ij, jj}),
        make(17, {ii, ii, ij}),
        make(18, {ji, ii, ii}),
        make(19, {ii, ij, ij}),
        make(20, {ji, ii, ij}),
        make(21, {ji, ji, ii}),
        make(22, {ij, ij, ij}),
        make(23, {ij, ij, ji}),
        make(24, {ii, {1, 2}, {3, 4}}),
        make(25, {ij, {1, 2}, {3, 4}}),
        make(26, {ij, {2, 1}, {3, 4}}),
        make(27, {ji, {1, 2}, {3, 4}}),
        make(28, {ij, {2, 3}, {4, 5}}),
        // quartic
        make(29, {ii, ii, ii, ii}),
        make(30, {ii, ii, ii, jj}),
        make(31, {ii, ii, jj, jj}),
        make(32, {ii, ii, ii, ij}),
        make(33, {ji, ii, ii, ii}),
        make(34, {ii, ii, ij, jj}),
        make(35, {jj, ji, ii, ii}),
        make(36, {ii, ii, ij, ij}),
        make(37, {ji, ii, ii, ij}),
        make(38, {ji, ji, ii, ii}),
        make(39, {ii, ij, ij, jj}),
        make(40, {ji, ii, ij, jj}),
        make(41, {ii, ij, ij, ij}),
        make(42, {ji, ii, ij, ij}),
        make(43, {ji, ji, ii, ij}),
        make(44, {ji, ji, ji, ii}),
        make(45, {ij, ij, ij, ij}),
        make(46, {ji, ij, ij, ij}),
        make(47, {ji, ji, ij, ij}),
        make(48, {ii, {1, 2}, {3, 4}, {5, 6}}),
        make(49, {ij, {1, 2}, {3, 4}, {5, 6}}),
        make(50, {ij, {2, 1}, {3, 4}, {5, 6}}),
        make(51, {ji, {1, 2}, {3, 4}, {5, 6}}),
        make(52, {ij, {2, 3}, {4, 5}, {6, 7}}),
    }};
}

void require_square(const Eigen::MatrixXd& W) {
    if (W.rows() != W.cols()) throw ArgumentError("invariants need a square matrix");
}

} // namespace

const std::array<InvariantId, kInvariantCount>& invariant_catalogue() {
    static const auto catalogue = build_catalogue();
    return catalogue;
}

const InvariantId& invariant(int index) {
    if (index < 1 || index > kInvariantCount) throw ArgumentError("invariant index out of range");
    return invariant_catalogue()[index - 1];
}

std::vector<int> invariant_range(int first, int last) {
    std::vector<int> ids;
    for (int i = first; i <= last; ++i) ids.push_back(i);
    return ids;
}

double naive_eval(const Eigen::MatrixXd& W, const InvariantId& graph) {
    require_square(W);
    const int d = static_cast<int>(W.rows());
    const int n = graph.node_count;
    if (d == 0) return 0.0;
    std::vector<int> idx(n, 0);
    // Extended precision: the literal sum cancels heavily when the invariant is small.
    long double total = 0.0L;
    while (true) {
        long double term = 1.0L;
        for (const auto& e : graph.edges) term *= W(idx[e.src], idx[e.dst]);
        total += term;
        int pos = n - 1;
        while (pos >= 0 && ++idx[pos] == d) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return static_cast<double>(total);
}

double naive_eval(const Eigen::MatrixXd& W, int index) { return naive_eval(W, invariant(index)); }

InvariantVector eval_all(const Eigen::MatrixXd& W) {
    require_square(W);
    using Eigen::ArrayXd;
    using Eigen::ArrayXXd;

    const ArrayXXd A = W.array();
    const ArrayXXd At = W.transpose().array();
    const ArrayXd D = W.diagonal().array();
    const ArrayXd r = W.rowwise().sum().array();
    const ArrayXd c = W.colwise().sum().transpose().array();
    const double T = D.sum();
    const double S = A.sum();

    const ArrayXXd A2 = A.square();
    const ArrayXXd A3 = A2 * A;
    const ArrayXXd Asym = A * At; // W_ij W_ji

    // Row sums over j of elementwise products with the "i" index first.
    const ArrayXd row_A2 = A2.rowwise().sum();           // sum_j W_ij^2
    const ArrayXd col_A2 = A2.colwise().sum().transpose(); // sum_j W_ji^2
    const ArrayXd row_A3 = A3.rowwise().sum();
    const ArrayXd col_A3 = A3.colwise().sum().transpose();
    const ArrayXd row_sym = Asym.rowwise().sum();         // sum_j W_ij W_ji
    const ArrayXd row_A2At = (A2 * At).rowwise().sum();   // sum_j W_ij^2 W_ji
    const ArrayXd row_AAt2 = (A * At.square()).rowwise().sum(); // sum_j W_ij W_ji^2

    auto quad = [&](const ArrayXd& x, const ArrayXXd& M, const ArrayXd& y) {
        return (x.matrix().transpose() * M.matrix() * y.matrix()).value();
    };

    const double I7 = r.square().sum();
    const double I8 = c.square().sum();
    const double I9 = (c * r).sum();

    InvariantVector v{};
    auto set = [&](int id, double x) { v[id - 1] = x; };

    set(1, T);
    set(2, S);
    set(3, A2.sum());
    set(4, Asym.sum());
    set(5, (D * r).sum());
    set(6, (D * c).sum());
    set(7, I7);
    set(8, I8);
    set(9, I9);
    set(10, S * S);
    set(11, D.square().sum());
    set(12, T * T);
    set(13, T * S);

    set(14, D.cube().sum());
    set(15, D.square().sum() * T);
    set(16, quad(D, A, D));
    set(17, (D.square() * r).sum());
    set(18, (D.square() * c).sum());
    set(19, (D * row_A2).sum());
    set(20, (D * row_sym).sum());
    set(21, (D * col_A2).sum());
    set(22, A3.sum());
    set(23, (A2 * At).sum());
    set(24, T * S * S);
    set(25, I9 * S);
    set(26, I8 * S);
    set(27, I7 * S);
    set(28, S * S * S);

    set(29, D.square().square().sum());
    set(30, D.cube().sum() * T);
    set(31, D.square().sum() * D.square().sum());
    set(32, (D.cube() * r).sum());
    set(33, (D.cube() * c).sum());
    set(34, quad(D.square(), A, D));
    set(35, quad(D, A, D.square()));
    set(36, (D.square() * row_A2).sum());
    set(37, (D.square() * row_sym).sum());
    set(38, (D.square() * col_A2).sum());
    set(39, quad(D, A2, D));
    set(40, quad(D, Asym, D));
    set(41, (D * row_A3).sum());
    set(42, (D * row_A2At).sum());
    set(43, (D * row_AAt2).sum());
    set(44, (D * col_A3).sum());
    set(45, A2.square().sum());
    set(46, (A3 * At).sum());
    set(47, (A2 * At.square()).sum());
    set(48, T * S * S * S);
    set(49, I9 * S * S);
    set(50, I8 * S * S);
    set(51, I7 * S * S);
    set(52, S * S * S * S);
    return v;
}

double eval_invariant(const Eigen::MatrixXd& W, int index) {
    if (index < 1 || index > kInvariantCount) throw ArgumentError("invariant index out of range");
    return eval_all(W)[index - 1];
}

InvariantStats ensemble_stats(const std::vector<Eigen::MatrixXd>& matrices, const std::vector<int>& ids) {
    const int n = static_cast<int>(matrices.size());
    if (n < 2) throw ArgumentError("ensemble statistics need at least two matrices");
    for (int id : ids)
        if (id < 1 || id > kInvariantCount) throw ArgumentError("invariant index out of range");

    std::vector<InvariantVector> values(n);
    for (int r = 0; r < n; ++r) values[r] = eval_all(matrices[r]);

    InvariantStats st;
    st.ids = ids;
    st.n = n;
    for (int id : ids) {
        double mean = 0.0;
        for (const auto& v : values) mean += v[id - 1];
        mean /= n;
        double ss = 0.0;
        for (const auto& v : values) ss += (v[id - 1] - mean) * (v[id - 1] - mean);
        const double sd = std::sqrt(ss / (n - 1));
        st.mean.push_back(mean);
        st.std.push_back(sd);
        st.se.push_back(sd / std::sqrt(static_cast<double>(n)));
    }
    return st;
}

InvariantStats ensemble_stats(const SnapshotStore& store, int layer, int epoch, const std::vector<int>& ids) {
    return ensemble_stats(store.ensemble(layer, epoch), ids);
}

} // namespace pigw
