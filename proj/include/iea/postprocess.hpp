#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iea/mlp.hpp"

namespace iea {

// The eight user-side post-processing methods, adapted to the fully
// connected model: filters become hidden neurons.
enum class PostMethod {
    none,
    ftll,     // fine-tune the last layer
    ftal,     // fine-tune all layers
    prwt,     // prune small-magnitude weights
    prwt_ft,  // ... then fine-tune survivors
    prfl,     // prune low-L1 hidden neurons
    prfl_ft,
    adpr,     // prune low-activation-sum neurons, last hidden layer
    adpr_ft,
};

std::string to_string(PostMethod method);
PostMethod post_method_from_string(const std::string& name);
const std::vector<PostMethod>& all_post_methods();

struct FineTuneConfig {
    int epochs = 40;
    double learning_rate = 0.001;
    int batch_size = 64;
    std::uint64_t seed = 1;
};

struct PruneConfig {
    double accuracy_drop_budget = 0.03;  // absolute test-accuracy drop
    double step_fraction = 0.005;        // of total weights per PRWT iteration
    FineTuneConfig fine_tune;
};

MlpClassifier fine_tune_last_layer(MlpClassifier model, const Dataset& train,
                                   const FineTuneConfig& config);
MlpClassifier fine_tune_all_layers(MlpClassifier model, const Dataset& train,
                                   const FineTuneConfig& config);

struct PruneResult {
    MlpClassifier model;          // last iterate whose accuracy drop <= budget
    int iterations = 0;
    bool budget_unreachable = false;  // the very first step already exceeded the budget
    double base_accuracy = 0.0;
    double final_accuracy = 0.0;
};

// Iteratively masks the globally smallest-magnitude unmasked weights,
// step_fraction of the total per iteration, re-measuring test accuracy
// after each step.
PruneResult prune_weights(const MlpClassifier& model, const Dataset& test,
                          const PruneConfig& config);

// Per iteration removes the fraction 1/f of lowest-L1 (incoming weights)
// neurons from every hidden layer, f = smallest hidden-layer width.
PruneResult prune_neurons_l1(const MlpClassifier& model, const Dataset& test,
                             const PruneConfig& config);

// Importance = sum of post-ReLU activations over the training set;
// prunes one lowest-importance neuron of the last hidden layer per
// iteration.
PruneResult prune_neurons_activation(const MlpClassifier& model, const Dataset& train,
                                     const Dataset& test, const PruneConfig& config);

MlpClassifier apply_postprocess(PostMethod method, const MlpClassifier& model,
                                const Dataset& train, const Dataset& test,
                                const PruneConfig& config);

}  // namespace iea
