#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "iea/attackset.hpp"

namespace iea {

struct Dataset {
    Eigen::MatrixXd features;  // feature_dim x n, column per example
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
};

// Feed-forward classifier: ReLU hidden layers, softmax output. Every
// connection carries a prune mask; masked weights are exactly zero and
// stay zero through any further training.
class MlpClassifier {
public:
    MlpClassifier() = default;

    // Scaled-uniform initializer: weights ~ U(-sqrt(3/fan_in), +sqrt(3/fan_in))
    // (standard deviation 1/sqrt(fan_in)), drawn layer by layer in row-major
    // order from the toolkit PRNG; biases zero, masks all-ones.
    static MlpClassifier init(const std::vector<int>& sizes, std::uint64_t seed);

    const std::vector<int>& layer_sizes() const { return sizes_; }
    int layer_count() const { return static_cast<int>(weights_.size()); }
    int feature_dim() const { return sizes_.front(); }
    int class_count() const { return sizes_.back(); }

    Eigen::MatrixXd& weights(int layer) { return weights_[layer]; }
    const Eigen::MatrixXd& weights(int layer) const { return weights_[layer]; }
    Eigen::VectorXd& biases(int layer) { return biases_[layer]; }
    const Eigen::VectorXd& biases(int layer) const { return biases_[layer]; }
    Eigen::MatrixXd& mask(int layer) { return masks_[layer]; }
    const Eigen::MatrixXd& mask(int layer) const { return masks_[layer]; }

    Eigen::MatrixXd logits(const Eigen::MatrixXd& x) const;
    // Activations of hidden layer `layer` (0-based) for a batch.
    Eigen::MatrixXd hidden_activations(const Eigen::MatrixXd& x, int layer) const;

    // Argmax of the output scores, ties broken toward the smaller label.
    int predict(const Eigen::VectorXd& x) const;
    std::vector<int> predict_batch(const Eigen::MatrixXd& x) const;

    void apply_masks();

private:
    std::vector<int> sizes_;
    std::vector<Eigen::MatrixXd> weights_;
    std::vector<Eigen::VectorXd> biases_;
    std::vector<Eigen::MatrixXd> masks_;
};

double accuracy(const MlpClassifier& model, const Dataset& data);

// Fraction of attack points that get their assigned label.
double attack_accuracy(const MlpClassifier& model, const AttackDataset& attack);

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

double cross_entropy_loss(const MlpClassifier& model, const Eigen::MatrixXd& x,
                          const std::vector<int>& labels);

// Mean softmax cross-entropy over the batch and its analytic gradients.
Gradients loss_gradients(const MlpClassifier& model, const Eigen::MatrixXd& x,
                         const std::vector<int>& labels, double* loss_out = nullptr);

struct TrainConfig {
    int epochs = 60;
    int batch_size = 64;         // examples from the real training set
    int attack_batch_size = 10;  // attack points added to every batch
    double learning_rate = 0.1;
    std::vector<int> decay_epochs = {20, 50};  // 1-based; lr multiplies by decay_factor
    double decay_factor = 0.1;
    std::uint64_t seed = 1;
};

// Plain SGD on softmax cross-entropy. Every step combines batch_size
// examples of the real training data (shuffled each epoch) with
// attack_batch_size attack points sampled uniformly with replacement.
// Single-threaded and deterministic: identical seeds give bitwise
// identical weights.
MlpClassifier train_embed(MlpClassifier model, const Dataset& train,
                          const AttackDataset* attack, const TrainConfig& config);

// Little-endian flat model format, version byte first, then layer sizes,
// then per layer: weights (row-major doubles), biases, masks (one byte
// per connection).
void save_model(const MlpClassifier& model, const std::string& path);
MlpClassifier load_model(const std::string& path);

}  // namespace iea
