#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace pigw {

/// Calls fn(labels, blocks) once for every set partition of {0..n-1}.
/// labels[v] is the block of element v, written as a restricted growth string
/// (labels[0] = 0, each new block takes the next unused label).
template <typename Fn>
void for_each_set_partition(int n, Fn&& fn) {
    if (n == 0) {
        std::vector<int> empty;
        fn(empty, 0);
        return;
    }
    std::vector<int> a(n, 0), m(n, 0); // m[i] = max(a[0..i])
    while (true) {
        fn(a, m[n - 1] + 1);
        int i = n - 1;
        while (i > 0 && a[i] == m[i - 1] + 1) --i;
        if (i == 0) return;
        ++a[i];
        m[i] = std::max(m[i - 1], a[i]);
        for (int k = i + 1; k < n; ++k) {
            a[k] = 0;
            m[k] = m[i];
        }
    }
}

/// d (d-1) ... (d-k+1), the number of injective labellings of k blocks.
inline double falling_factorial(int d, int k) {
    double out = 1.0;
    for (int t = 0; t < k; ++t) out *= static_cast<double>(d - t);
    return out;
}

} // namespace pigw
