#pragma once

#include <cstdint>

#include "iea/mlp.hpp"

namespace iea {

// Seeded Gaussian-blob classification benchmark: one uniform-random
// center per class in [0,1)^dim, points scattered around the centers
// with isotropic noise, classes balanced. The two-class preset mirrors
// a binary-income-style task at one bit per label.
struct BlobSpec {
    int classes = 8;
    int feature_dim = 20;
    std::size_t train_size = 8000;
    std::size_t test_size = 2000;
    double noise = 0.15;
};

struct Benchmark {
    Dataset train;
    Dataset test;
};

Benchmark make_blob_benchmark(const BlobSpec& spec, std::uint64_t seed);

}  // namespace iea
