#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "iea/attackset.hpp"
#include "iea/mlp.hpp"
#include "iea/prng.hpp"

namespace iea {

inline constexpr double kDefaultCostPerQuery = 5e-4;

struct OracleStats {
    std::uint64_t queries_issued = 0;
    double cost_per_query = kDefaultCostPerQuery;

    double total_cost() const { return static_cast<double>(queries_issued) * cost_per_query; }
};

// Query-metered prediction interface. Each call pays one query; the
// counter is atomic and never resets.
class PredictionOracle {
public:
    virtual ~PredictionOracle() = default;

    int query(std::size_t point_index, const Eigen::Ref<const Eigen::VectorXd>& point);

    OracleStats stats() const { return {queries_.load(), cost_per_query_}; }
    void set_cost_per_query(double cost) { cost_per_query_ = cost; }
    void close() { open_ = false; }
    bool is_open() const { return open_; }

protected:
    virtual int answer(std::size_t point_index, const Eigen::Ref<const Eigen::VectorXd>& point) = 0;

private:
    std::atomic<std::uint64_t> queries_{0};
    double cost_per_query_ = kDefaultCostPerQuery;
    bool open_ = true;
};

// The deployed (possibly post-processed) classifier.
class ModelOracle : public PredictionOracle {
public:
    explicit ModelOracle(MlpClassifier model) : model_(std::move(model)) {}

protected:
    int answer(std::size_t, const Eigen::Ref<const Eigen::VectorXd>& point) override {
        return model_.predict(point);
    }

private:
    MlpClassifier model_;
};

// Simulated noisy label channel standing in for post-processing damage.
// A corrupted query returns a uniformly random label != truth, or (with
// unused_label_weight) a uniformly random unused label. Answers come
// from a per-query seeded stream, so a fixed query order reproduces the
// same transcript.
struct ChannelSpec {
    double corruption_p = 0.0;
    std::map<int, double> per_group_p;  // group id (1-based) -> corruption rate
    double unused_label_weight = 0.0;
    std::uint64_t seed = 0;

    double rate_for_group(int group) const;
};

class BscOracle : public PredictionOracle {
public:
    BscOracle(std::vector<int> true_labels, std::vector<int> group_index, int class_count,
              int usable_labels, const ChannelSpec& spec);

protected:
    int answer(std::size_t point_index, const Eigen::Ref<const Eigen::VectorXd>& point) override;

private:
    std::vector<int> true_labels_;
    std::vector<int> group_index_;
    int class_count_;
    int usable_labels_;
    ChannelSpec spec_;
    Xoshiro256StarStar rng_;
};

// Opt-in memoizing wrapper: repeat queries for the same point index are
// answered from the cache without paying the inner oracle. Excluded from
// paper-comparison runs.
class CachingOracle : public PredictionOracle {
public:
    explicit CachingOracle(PredictionOracle& inner) : inner_(inner) {}

protected:
    int answer(std::size_t point_index, const Eigen::Ref<const Eigen::VectorXd>& point) override;

private:
    PredictionOracle& inner_;
    std::unordered_map<std::size_t, int> cache_;
};

// Regenerates a group's points from the metadata and queries each once,
// in order.
std::vector<int> query_group(PredictionOracle& oracle, const AttackMetadata& metadata, int group);

}  // namespace iea
