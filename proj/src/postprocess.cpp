#include "iea/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "iea/prng.hpp"

namespace iea {
namespace {

MlpClassifier fine_tune(MlpClassifier model, const Dataset& train, const FineTuneConfig& config,
                        bool last_layer_only) {
    if (train.size() == 0) throw std::invalid_argument("fine_tune: empty training set");
    Xoshiro256StarStar rng(config.seed);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const int last = model.layer_count() - 1;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        fisher_yates_shuffle(order, rng);
        for (std::size_t start = 0; start < train.size(); start += config.batch_size) {
            const std::size_t m = std::min<std::size_t>(config.batch_size, train.size() - start);
            Eigen::MatrixXd x(model.feature_dim(), static_cast<Eigen::Index>(m));
            std::vector<int> y(m);
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t idx = order[start + i];
                x.col(static_cast<Eigen::Index>(i)) = train.features.col(static_cast<Eigen::Index>(idx));
                y[i] = train.labels[idx];
            }
            const Gradients grads = loss_gradients(model, x, y);
            for (int l = last_layer_only ? last : 0; l <= last; ++l) {
                model.weights(l) -= config.learning_rate * grads.weights[l];
                model.biases(l) -= config.learning_rate * grads.biases[l];
            }
            model.apply_masks();
        }
    }
    return model;
}

// Shared stop rule: keep stepping while the test-accuracy drop stays
// within budget; return the last iterate inside it.
PruneResult run_prune_loop(const MlpClassifier& model, const Dataset& test, double budget,
                           const std::function<bool(MlpClassifier&)>& step) {
    if (!(budget > 0.0 && budget < 1.0) && budget != 1.0) {
        throw std::invalid_argument("prune: accuracy drop budget must be in (0, 1]");
    }
    PruneResult result;
    result.base_accuracy = accuracy(model, test);
    result.model = model;
    result.final_accuracy = result.base_accuracy;
    for (;;) {
        MlpClassifier candidate = result.model;
        if (!step(candidate)) break;  // nothing left to prune
        const double acc = accuracy(candidate, test);
        if (result.base_accuracy - acc > budget) break;
        result.model = std::move(candidate);
        result.final_accuracy = acc;
        ++result.iterations;
    }
    result.budget_unreachable = result.iterations == 0;
    return result;
}

std::size_t total_weight_count(const MlpClassifier& model) {
    std::size_t total = 0;
    for (int l = 0; l < model.layer_count(); ++l) {
        total += static_cast<std::size_t>(model.weights(l).size());
    }
    return total;
}

bool neuron_pruned(const MlpClassifier& model, int layer, int neuron) {
    return model.mask(layer).row(neuron).sum() == 0.0;
}

void prune_neuron(MlpClassifier& model, int layer, int neuron) {
    model.mask(layer).row(neuron).setZero();
    model.biases(layer)(neuron) = 0.0;
    model.mask(layer + 1).col(neuron).setZero();
    model.apply_masks();
}

}  // namespace

std::string to_string(PostMethod method) {
    switch (method) {
        case PostMethod::none: return "none";
        case PostMethod::ftll: return "ftll";
        case PostMethod::ftal: return "ftal";
        case PostMethod::prwt: return "prwt";
        case PostMethod::prwt_ft: return "prwt-ft";
        case PostMethod::prfl: return "prfl";
        case PostMethod::prfl_ft: return "prfl-ft";
        case PostMethod::adpr: return "adpr";
        case PostMethod::adpr_ft: return "adpr-ft";
    }
    throw std::logic_error("to_string: bad PostMethod");
}

PostMethod post_method_from_string(const std::string& name) {
    for (PostMethod m : all_post_methods()) {
        if (to_string(m) == name) return m;
    }
    throw std::invalid_argument("unknown post-processing method '" + name + "'");
}

const std::vector<PostMethod>& all_post_methods() {
    static const std::vector<PostMethod> methods = {
        PostMethod::none,    PostMethod::ftll,    PostMethod::ftal,
        PostMethod::prwt,    PostMethod::prwt_ft, PostMethod::prfl,
        PostMethod::prfl_ft, PostMethod::adpr,    PostMethod::adpr_ft,
    };
    return methods;
}

MlpClassifier fine_tune_last_layer(MlpClassifier model, const Dataset& train,
                                   const FineTuneConfig& config) {
    return fine_tune(std::move(model), train, config, /*last_layer_only=*/true);
}

MlpClassifier fine_tune_all_layers(MlpClassifier model, const Dataset& train,
                                   const FineTuneConfig& config) {
    return fine_tune(std::move(model), train, config, /*last_layer_only=*/false);
}

PruneResult prune_weights(const MlpClassifier& model, const Dataset& test,
                          const PruneConfig& config) {
    const std::size_t per_step = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(config.step_fraction *
                                              static_cast<double>(total_weight_count(model)))));
    auto step = [per_step](MlpClassifier& m) {
        struct Entry {
            double magnitude;
            int layer;
            Eigen::Index row, col;
        };
        std::vector<Entry> alive;
        for (int l = 0; l < m.layer_count(); ++l) {
            const auto& w = m.weights(l);
            const auto& mask = m.mask(l);
            for (Eigen::Index r = 0; r < w.rows(); ++r) {
                for (Eigen::Index c = 0; c < w.cols(); ++c) {
                    if (mask(r, c) != 0.0) alive.push_back({std::abs(w(r, c)), l, r, c});
                }
            }
        }
        if (alive.empty()) return false;
        const std::size_t take = std::min(per_step, alive.size());
        std::nth_element(alive.begin(), alive.begin() + static_cast<std::ptrdiff_t>(take - 1),
                         alive.end(),
                         [](const Entry& a, const Entry& b) { return a.magnitude < b.magnitude; });
        for (std::size_t i = 0; i < take; ++i) {
            m.mask(alive[i].layer)(alive[i].row, alive[i].col) = 0.0;
        }
        m.apply_masks();
        return true;
    };
    return run_prune_loop(model, test, config.accuracy_drop_budget, step);
}

PruneResult prune_neurons_l1(const MlpClassifier& model, const Dataset& test,
                             const PruneConfig& config) {
    const int hidden_layers = model.layer_count() - 1;
    if (hidden_layers < 1) throw std::invalid_argument("prune_neurons_l1: no hidden layer");
    int smallest = std::numeric_limits<int>::max();
    for (int l = 0; l < hidden_layers; ++l) {
        smallest = std::min(smallest, model.layer_sizes()[l + 1]);
    }
    const double fraction = 1.0 / static_cast<double>(smallest);  // p = 1/f

    auto step = [hidden_layers, fraction, &model](MlpClassifier& m) {
        bool pruned_any = false;
        for (int l = 0; l < hidden_layers; ++l) {
            const int width = model.layer_sizes()[l + 1];
            const auto count = static_cast<int>(std::ceil(fraction * width));
            std::vector<std::pair<double, int>> importance;  // (L1 of incoming weights, neuron)
            for (int j = 0; j < width; ++j) {
                if (neuron_pruned(m, l, j)) continue;
                importance.emplace_back(m.weights(l).row(j).cwiseAbs().sum(), j);
            }
            std::sort(importance.begin(), importance.end());
            for (int t = 0; t < count && t < static_cast<int>(importance.size()); ++t) {
                prune_neuron(m, l, importance[static_cast<std::size_t>(t)].second);
                pruned_any = true;
            }
        }
        return pruned_any;
    };
    return run_prune_loop(model, test, config.accuracy_drop_budget, step);
}

PruneResult prune_neurons_activation(const MlpClassifier& model, const Dataset& train,
                                     const Dataset& test, const PruneConfig& config) {
    const int hidden_layers = model.layer_count() - 1;
    if (hidden_layers < 1) throw std::invalid_argument("prune_neurons_activation: no hidden layer");
    if (train.size() == 0) throw std::invalid_argument("prune_neurons_activation: empty training set");
    const int layer = hidden_layers - 1;  // last hidden layer

    auto step = [layer, &train](MlpClassifier& m) {
        const Eigen::VectorXd sums = m.hidden_activations(train.features, layer).rowwise().sum();
        int victim = -1;
        double lowest = std::numeric_limits<double>::infinity();
        for (int j = 0; j < sums.size(); ++j) {
            if (neuron_pruned(m, layer, j)) continue;
            if (sums(j) < lowest) {
                lowest = sums(j);
                victim = j;
            }
        }
        if (victim < 0) return false;
        prune_neuron(m, layer, victim);
        return true;
    };
    return run_prune_loop(model, test, config.accuracy_drop_budget, step);
}

MlpClassifier apply_postprocess(PostMethod method, const MlpClassifier& model,
                                const Dataset& train, const Dataset& test,
                                const PruneConfig& config) {
    switch (method) {
        case PostMethod::none:
            return model;
        case PostMethod::ftll:
            return fine_tune_last_layer(model, train, config.fine_tune);
        case PostMethod::ftal:
            return fine_tune_all_layers(model, train, config.fine_tune);
        case PostMethod::prwt:
            return prune_weights(model, test, config).model;
        case PostMethod::prwt_ft:
            return fine_tune_all_layers(prune_weights(model, test, config).model, train,
                                        config.fine_tune);
        case PostMethod::prfl:
            return prune_neurons_l1(model, test, config).model;
        case PostMethod::prfl_ft:
            return fine_tune_all_layers(prune_neurons_l1(model, test, config).model, train,
                                        config.fine_tune);
        case PostMethod::adpr:
            return prune_neurons_activation(model, train, test, config).model;
        case PostMethod::adpr_ft:
            return fine_tune_all_layers(prune_neurons_activation(model, train, test, config).model,
                                        train, config.fine_tune);
    }
    throw std::logic_error("apply_postprocess: bad PostMethod");
}

}  // namespace iea
