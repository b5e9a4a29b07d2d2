#pragma once

#include "pigw/dataio.hpp"
#include "pigw/random.hpp"

#include <random>

namespace pigw::testing {

// Random images whose label is encoded in the brightness of a pixel block,
// so a small net can learn it in a few epochs.
inline MnistData synthetic_mnist(std::size_t n_train, std::size_t n_test, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> noise(0.0, 0.3);
    std::uniform_int_distribution<int> label(0, 9);
    auto fill = [&](ImageTensor& x, LabelVector& y, std::size_t n) {
        x.count = n;
        x.rows = 28;
        x.cols = 28;
        x.pixels.assign(n * 784, 0.0);
        y.labels.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int c = label(rng);
            y.labels[i] = c;
            for (int p = 0; p < 784; ++p) x.pixels[i * 784 + p] = noise(rng);
            for (int p = 0; p < 28; ++p) x.pixels[i * 784 + c * 56 + p] = 1.0;
        }
    };
    MnistData d;
    fill(d.train_images, d.train_labels, n_train);
    fill(d.test_images, d.test_labels, n_test);
    return d;
}

} // namespace pigw::testing
