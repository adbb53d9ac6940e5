#include "iea/benchmark.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "iea/prng.hpp"

namespace iea {
namespace {

// Box-Muller transform over the toolkit uniform stream.
class GaussianSampler {
public:
    explicit GaussianSampler(Xoshiro256StarStar& rng) : rng_(rng) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - rng_.uniform01();  // (0, 1]
        const double u2 = rng_.uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    Xoshiro256StarStar& rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

Dataset sample_blobs(const Eigen::MatrixXd& centers, std::size_t count, double noise,
                     GaussianSampler& gauss) {
    const int dim = static_cast<int>(centers.rows());
    const int classes = static_cast<int>(centers.cols());
    Dataset data;
    data.features.resize(dim, static_cast<Eigen::Index>(count));
    data.labels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const int label = static_cast<int>(i % classes);
        data.labels[i] = label;
        for (int d = 0; d < dim; ++d) {
            data.features(d, static_cast<Eigen::Index>(i)) = centers(d, label) + noise * gauss.next();
        }
    }
    return data;
}

}  // namespace

Benchmark make_blob_benchmark(const BlobSpec& spec, std::uint64_t seed) {
    if (spec.classes < 2) throw std::invalid_argument("make_blob_benchmark: need >= 2 classes");
    if (spec.feature_dim < 1) throw std::invalid_argument("make_blob_benchmark: need >= 1 dimension");
    if (spec.train_size == 0 || spec.test_size == 0) {
        throw std::invalid_argument("make_blob_benchmark: empty split");
    }
    Xoshiro256StarStar rng(seed);
    Eigen::MatrixXd centers(spec.feature_dim, spec.classes);
    for (int c = 0; c < spec.classes; ++c) {
        for (int d = 0; d < spec.feature_dim; ++d) centers(d, c) = rng.uniform01();
    }
    GaussianSampler gauss(rng);
    Benchmark bench;
    bench.train = sample_blobs(centers, spec.train_size, spec.noise, gauss);
    bench.test = sample_blobs(centers, spec.test_size, spec.noise, gauss);
    return bench;
}

}  // namespace iea
