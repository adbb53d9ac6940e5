#include "iea/mlp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "iea/prng.hpp"

namespace iea {
namespace {

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd p = logits;
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
        p.col(c).array() -= p.col(c).maxCoeff();
        p.col(c) = p.col(c).array().exp();
        p.col(c) /= p.col(c).sum();
    }
    return p;
}

void check_feature_dim(const MlpClassifier& model, Eigen::Index rows) {
    if (rows != model.feature_dim()) {
        throw std::invalid_argument("feature dimension mismatch");
    }
}

}  // namespace

MlpClassifier MlpClassifier::init(const std::vector<int>& sizes, std::uint64_t seed) {
    if (sizes.size() < 2) {
        throw std::invalid_argument("MlpClassifier::init: need at least input and output sizes");
    }
    for (int s : sizes) {
        if (s < 1) throw std::invalid_argument("MlpClassifier::init: layer sizes must be >= 1");
    }
    MlpClassifier model;
    model.sizes_ = sizes;
    Xoshiro256StarStar rng(seed);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int fan_in = sizes[l];
        const int fan_out = sizes[l + 1];
        const double bound = std::sqrt(3.0 / fan_in);
        Eigen::MatrixXd w(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) {
                w(r, c) = (2.0 * rng.uniform01() - 1.0) * bound;
            }
        }
        model.weights_.push_back(std::move(w));
        model.biases_.push_back(Eigen::VectorXd::Zero(fan_out));
        model.masks_.push_back(Eigen::MatrixXd::Ones(fan_out, fan_in));
    }
    return model;
}

Eigen::MatrixXd MlpClassifier::logits(const Eigen::MatrixXd& x) const {
    check_feature_dim(*this, x.rows());
    Eigen::MatrixXd h = x;
    for (int l = 0; l < layer_count(); ++l) {
        Eigen::MatrixXd z = (weights_[l] * h).colwise() + biases_[l];
        h = (l + 1 < layer_count()) ? relu(z) : std::move(z);
    }
    return h;
}

Eigen::MatrixXd MlpClassifier::hidden_activations(const Eigen::MatrixXd& x, int layer) const {
    check_feature_dim(*this, x.rows());
    if (layer < 0 || layer >= layer_count() - 1) {
        throw std::invalid_argument("hidden_activations: not a hidden layer");
    }
    Eigen::MatrixXd h = x;
    for (int l = 0; l <= layer; ++l) {
        h = relu((weights_[l] * h).colwise() + biases_[l]);
    }
    return h;
}

int MlpClassifier::predict(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd scores = logits(x);
    int best = 0;
    for (int c = 1; c < scores.size(); ++c) {
        if (scores(c) > scores(best)) best = c;
    }
    return best;
}

std::vector<int> MlpClassifier::predict_batch(const Eigen::MatrixXd& x) const {
    const Eigen::MatrixXd scores = logits(x);
    std::vector<int> out(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
        int best = 0;
        for (Eigen::Index c = 1; c < scores.rows(); ++c) {
            if (scores(c, i) > scores(best, i)) best = static_cast<int>(c);
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

void MlpClassifier::apply_masks() {
    for (int l = 0; l < layer_count(); ++l) {
        weights_[l] = weights_[l].cwiseProduct(masks_[l]);
    }
}

double accuracy(const MlpClassifier& model, const Dataset& data) {
    if (data.size() == 0) {
        throw std::invalid_argument("accuracy: empty dataset");
    }
    const std::vector<int> predictions = model.predict_batch(data.features);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (predictions[i] == data.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

double attack_accuracy(const MlpClassifier& model, const AttackDataset& attack) {
    if (attack.size() == 0) {
        throw std::invalid_argument("attack_accuracy: empty attack dataset");
    }
    const std::vector<int> predictions = model.predict_batch(attack.points);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < attack.size(); ++i) {
        if (predictions[i] == attack.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(attack.size());
}

double cross_entropy_loss(const MlpClassifier& model, const Eigen::MatrixXd& x,
                          const std::vector<int>& labels) {
    double loss = 0.0;
    const Eigen::MatrixXd z = model.logits(x);
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
        const double zmax = z.col(i).maxCoeff();
        const double lse = zmax + std::log((z.col(i).array() - zmax).exp().sum());
        loss += lse - z(labels[static_cast<std::size_t>(i)], i);
    }
    return loss / static_cast<double>(x.cols());
}

Gradients loss_gradients(const MlpClassifier& model, const Eigen::MatrixXd& x,
                         const std::vector<int>& labels, double* loss_out) {
    check_feature_dim(model, x.rows());
    if (static_cast<std::size_t>(x.cols()) != labels.size() || labels.empty()) {
        throw std::invalid_argument("loss_gradients: batch shape mismatch");
    }
    const int L = model.layer_count();
    const double batch = static_cast<double>(x.cols());

    std::vector<Eigen::MatrixXd> activations(L + 1);  // post-activation values
    activations[0] = x;
    for (int l = 0; l < L; ++l) {
        Eigen::MatrixXd z = (model.weights(l) * activations[l]).colwise() + model.biases(l);
        activations[l + 1] = (l + 1 < L) ? relu(z) : std::move(z);
    }

    Eigen::MatrixXd delta = softmax_columns(activations[L]);
    if (loss_out != nullptr) {
        double loss = 0.0;
        for (Eigen::Index i = 0; i < x.cols(); ++i) {
            loss -= std::log(std::max(delta(labels[static_cast<std::size_t>(i)], i), 1e-300));
        }
        *loss_out = loss / batch;
    }
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
        delta(labels[static_cast<std::size_t>(i)], i) -= 1.0;
    }
    delta /= batch;

    Gradients grads;
    grads.weights.resize(L);
    grads.biases.resize(L);
    for (int l = L - 1; l >= 0; --l) {
        grads.weights[l] = delta * activations[l].transpose();
        grads.biases[l] = delta.rowwise().sum();
        if (l > 0) {
            delta = (model.weights(l).transpose() * delta)
                        .cwiseProduct((activations[l].array() > 0.0).cast<double>().matrix());
        }
    }
    return grads;
}

MlpClassifier train_embed(MlpClassifier model, const Dataset& train,
                          const AttackDataset* attack, const TrainConfig& config) {
    if (train.size() == 0) throw std::invalid_argument("train_embed: empty training set");
    check_feature_dim(model, train.features.rows());
    if (config.batch_size < 1) throw std::invalid_argument("train_embed: batch_size must be >= 1");
    if (config.attack_batch_size < 0) {
        throw std::invalid_argument("train_embed: attack_batch_size must be >= 0");
    }
    const bool use_attack = attack != nullptr && attack->size() > 0 && config.attack_batch_size > 0;
    if (use_attack) check_feature_dim(model, attack->points.rows());

    Xoshiro256StarStar rng(config.seed);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    double lr = config.learning_rate;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        for (int decay_at : config.decay_epochs) {
            if (epoch == decay_at) lr *= config.decay_factor;
        }
        fisher_yates_shuffle(order, rng);
        for (std::size_t start = 0; start < train.size(); start += config.batch_size) {
            const std::size_t real = std::min<std::size_t>(config.batch_size, train.size() - start);
            const std::size_t extra = use_attack ? config.attack_batch_size : 0;
            Eigen::MatrixXd x(model.feature_dim(), static_cast<Eigen::Index>(real + extra));
            std::vector<int> y(real + extra);
            for (std::size_t i = 0; i < real; ++i) {
                const std::size_t idx = order[start + i];
                x.col(static_cast<Eigen::Index>(i)) = train.features.col(static_cast<Eigen::Index>(idx));
                y[i] = train.labels[idx];
            }
            for (std::size_t i = 0; i < extra; ++i) {
                const auto idx = static_cast<std::size_t>(rng.bounded(attack->size()));
                x.col(static_cast<Eigen::Index>(real + i)) =
                    attack->points.col(static_cast<Eigen::Index>(idx));
                y[real + i] = attack->labels[idx];
            }
            const Gradients grads = loss_gradients(model, x, y);
            for (int l = 0; l < model.layer_count(); ++l) {
                model.weights(l) -= lr * grads.weights[l];
                model.biases(l) -= lr * grads.biases[l];
            }
            model.apply_masks();
        }
    }
    return model;
}

void save_model(const MlpClassifier& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_model: cannot open '" + path + "'");
    const std::uint8_t version = 1;
    out.put(static_cast<char>(version));
    auto put_u32 = [&](std::uint32_t v) {
        char buf[4];
        for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        out.write(buf, 4);
    };
    auto put_doubles = [&](const double* data, std::size_t count) {
        out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
    };
    put_u32(static_cast<std::uint32_t>(model.layer_sizes().size()));
    for (int s : model.layer_sizes()) put_u32(static_cast<std::uint32_t>(s));
    for (int l = 0; l < model.layer_count(); ++l) {
        // row-major order
        const Eigen::MatrixXd& w = model.weights(l);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                const double v = w(r, c);
                put_doubles(&v, 1);
            }
        }
        put_doubles(model.biases(l).data(), static_cast<std::size_t>(model.biases(l).size()));
        const Eigen::MatrixXd& m = model.mask(l);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                out.put(m(r, c) != 0.0 ? '\1' : '\0');
            }
        }
    }
    if (!out) throw std::runtime_error("save_model: write failed for '" + path + "'");
}

MlpClassifier load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_model: cannot open '" + path + "'");
    const int version = in.get();
    if (version != 1) throw std::runtime_error("load_model: unsupported format version");
    auto get_u32 = [&]() {
        char buf[4];
        in.read(buf, 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
        return v;
    };
    const std::uint32_t num_sizes = get_u32();
    if (num_sizes < 2 || num_sizes > 64) throw std::runtime_error("load_model: corrupt header");
    std::vector<int> sizes(num_sizes);
    for (auto& s : sizes) s = static_cast<int>(get_u32());
    MlpClassifier model = MlpClassifier::init(sizes, 0);
    for (int l = 0; l < model.layer_count(); ++l) {
        Eigen::MatrixXd& w = model.weights(l);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                double v;
                in.read(reinterpret_cast<char*>(&v), sizeof(double));
                w(r, c) = v;
            }
        }
        in.read(reinterpret_cast<char*>(model.biases(l).data()),
                static_cast<std::streamsize>(model.biases(l).size() * sizeof(double)));
        Eigen::MatrixXd& m = model.mask(l);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                m(r, c) = in.get() ? 1.0 : 0.0;
            }
        }
    }
    if (!in) throw std::runtime_error("load_model: truncated file '" + path + "'");
    model.apply_masks();
    return model;
}

}  // namespace iea
