#include "iea/oracle.hpp"

#include <stdexcept>

namespace iea {

int PredictionOracle::query(std::size_t point_index, const Eigen::Ref<const Eigen::VectorXd>& point) {
    if (!open_) throw std::runtime_error("oracle is closed");
    const int label = answer(point_index, point);
    queries_.fetch_add(1, std::memory_order_relaxed);
    return label;
}

double ChannelSpec::rate_for_group(int group) const {
    const auto it = per_group_p.find(group);
    return it == per_group_p.end() ? corruption_p : it->second;
}

BscOracle::BscOracle(std::vector<int> true_labels, std::vector<int> group_index, int class_count,
                     int usable_labels, const ChannelSpec& spec)
    : true_labels_(std::move(true_labels)),
      group_index_(std::move(group_index)),
      class_count_(class_count),
      usable_labels_(usable_labels),
      spec_(spec),
      rng_(spec.seed) {
    if (class_count_ < 2) throw std::invalid_argument("BscOracle: need >= 2 classes");
    if (group_index_.size() != true_labels_.size()) {
        throw std::invalid_argument("BscOracle: group index size mismatch");
    }
    if (spec_.corruption_p < 0.0 || spec_.corruption_p > 1.0) {
        throw std::invalid_argument("BscOracle: corruption probability outside [0, 1]");
    }
    for (const auto& [group, p] : spec_.per_group_p) {
        if (p < 0.0 || p > 1.0) {
            throw std::invalid_argument("BscOracle: per-group probability outside [0, 1]");
        }
    }
}

int BscOracle::answer(std::size_t point_index, const Eigen::Ref<const Eigen::VectorXd>&) {
    if (point_index >= true_labels_.size()) {
        throw std::out_of_range("BscOracle: point index beyond the attack dataset");
    }
    const int truth = true_labels_[point_index];
    const double p = spec_.rate_for_group(group_index_[point_index]);
    if (rng_.uniform01() >= p) return truth;
    const int unused = class_count_ - usable_labels_;
    if (unused > 0 && spec_.unused_label_weight > 0.0 &&
        rng_.uniform01() < spec_.unused_label_weight) {
        return usable_labels_ + static_cast<int>(rng_.bounded(static_cast<std::uint64_t>(unused)));
    }
    const auto r = static_cast<int>(rng_.bounded(static_cast<std::uint64_t>(class_count_ - 1)));
    return r >= truth ? r + 1 : r;
}

int CachingOracle::answer(std::size_t point_index, const Eigen::Ref<const Eigen::VectorXd>& point) {
    const auto it = cache_.find(point_index);
    if (it != cache_.end()) return it->second;
    const int label = inner_.query(point_index, point);
    cache_.emplace(point_index, label);
    return label;
}

std::vector<int> query_group(PredictionOracle& oracle, const AttackMetadata& metadata, int group) {
    std::size_t offset = 0;
    std::size_t count = 0;
    if (metadata.scheme == AttackScheme::direct) {
        if (group != 1) throw std::invalid_argument("query_group: direct scheme has one group");
        count = metadata.direct_label_count();
    } else {
        const GroupLayout layout = metadata.layout();
        if (group < 1 || group > layout.group_count()) {
            throw std::invalid_argument("query_group: group index out of range");
        }
        offset = layout.group_label_offset(group - 1);
        count = layout.group_labels(group - 1);
    }
    const Eigen::MatrixXd points =
        generate_points(metadata.point_count(), metadata.feature_dim, metadata.master_seed);
    std::vector<int> labels;
    labels.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        labels.push_back(oracle.query(offset + i, points.col(static_cast<Eigen::Index>(offset + i))));
    }
    return labels;
}

}  // namespace iea
