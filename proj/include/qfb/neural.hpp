// Copyright 2026 The qfbench Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qfb/features.hpp"

namespace qfb::neural {

using features::Matrix;

/// One model input: a 1 x d row for feed-forward models, T x F (oldest row first)
/// for recurrent models.
using Sample = Matrix;

Sample as_sample(std::span<const double> x);

// ---------------------------------------------------------------------------
// Model interface over a flat parameter vector
// ---------------------------------------------------------------------------

class Model {
public:
    virtual ~Model() = default;
    virtual std::size_t param_count() const = 0;
    virtual std::vector<double> init_params(std::uint64_t seed) const = 0;
    /// Probability in [0, 1].
    virtual double forward(std::span<const double> w, const Sample& x) const = 0;
    /// Probability and its gradient with respect to every parameter (grad is overwritten).
    virtual double forward_grad(std::span<const double> w, const Sample& x,
                                std::span<double> grad) const = 0;
    virtual std::string describe() const = 0;
};

// ---------------------------------------------------------------------------
// ANN
// ---------------------------------------------------------------------------

enum class Activation { tanh, relu, sigmoid };
std::string to_string(Activation a);
Activation parse_activation(const std::string& s);

struct AnnSpec {
    std::vector<int> layer_sizes; ///< input d, hidden..., 1
    Activation hidden = Activation::tanh;

    void validate() const;
    /// Sum over layers of (n_in + 1) n_out.
    std::size_t param_count() const;
    std::string key() const; ///< e.g. "3-11-1"
};

/// Baseline network for a given input dimension: 3-11-1, 7-32-16-1, 64-32-1.
AnnSpec baseline_ann(int input_dim);

class Ann final : public Model {
public:
    explicit Ann(AnnSpec spec);
    std::size_t param_count() const override { return spec_.param_count(); }
    std::vector<double> init_params(std::uint64_t seed) const override;
    double forward(std::span<const double> w, const Sample& x) const override;
    double forward_grad(std::span<const double> w, const Sample& x,
                        std::span<double> grad) const override;
    std::string describe() const override { return "ANN[" + spec_.key() + "]"; }
    const AnnSpec& spec() const { return spec_; }

private:
    AnnSpec spec_;
};

/// Weights are laid out layer by layer: W (n_out x n_in, row-major) then b (n_out).
double ann_forward(const AnnSpec& spec, std::span<const double> weights, std::span<const double> x);

// ---------------------------------------------------------------------------
// QNN
// ---------------------------------------------------------------------------

enum class QnnArch { SQ, MQ, HybridSQ, HybridMQ };
enum class Encoding { angle, amplitude };
std::string to_string(QnnArch a);
std::string to_string(Encoding e);
QnnArch parse_qnn_arch(const std::string& s);
Encoding parse_encoding(const std::string& s);

struct QnnSpec {
    QnnArch arch = QnnArch::SQ;
    Encoding encoding = Encoding::angle;
    int layers = 1;    ///< ansatz depth L
    int n_qubits = 1;  ///< q
    int input_dim = 1; ///< d

    bool hybrid() const { return arch == QnnArch::HybridSQ || arch == QnnArch::HybridMQ; }
    bool multi_readout() const { return arch == QnnArch::MQ || arch == QnnArch::HybridMQ; }
    /// Width fed to the encoder: q for angle, 2^q for amplitude.
    int encoded_dim() const;
    /// False when the candidate cannot be built (e.g. 2^q < d without projection).
    bool feasible() const;
    void validate() const; ///< throws std::invalid_argument when infeasible
    std::size_t param_count() const;
    std::string key() const;
};

/// Layout: [hybrid projection (encoded_dim x d)] [3 q L ansatz angles] [MQ readout q + 1].
class Qnn final : public Model {
public:
    explicit Qnn(QnnSpec spec);
    std::size_t param_count() const override { return spec_.param_count(); }
    std::vector<double> init_params(std::uint64_t seed) const override;
    double forward(std::span<const double> w, const Sample& x) const override;
    double forward_grad(std::span<const double> w, const Sample& x,
                        std::span<double> grad) const override;
    std::string describe() const override { return "QNN[" + spec_.key() + "]"; }
    const QnnSpec& spec() const { return spec_; }

private:
    QnnSpec spec_;
};

double qnn_forward(const QnnSpec& spec, std::span<const double> params, std::span<const double> x);

// ---------------------------------------------------------------------------
// LSTM / QLSTM
// ---------------------------------------------------------------------------

struct LstmSpec {
    int input_dim = 4; ///< F
    int hidden = 4;    ///< h
    int layers = 2;    ///< stacked LSTM layers

    void validate() const;
    /// Per layer 4h(in + h) + 8h (two bias vectors), plus an h -> 1 readout.
    std::size_t param_count() const;
    std::string key() const;
};

struct CellState {
    std::vector<double> h;
    std::vector<double> c;
};

/// One step of a single LSTM layer with PyTorch gate order (i, f, g, o).
/// `weights` holds W_ih (4h x in), W_hh (4h x h), b_ih (4h), b_hh (4h).
CellState lstm_step(int input_dim, int hidden, std::span<const double> weights,
                    std::span<const double> x_t, const CellState& prev);

class Lstm final : public Model {
public:
    explicit Lstm(LstmSpec spec);
    std::size_t param_count() const override { return spec_.param_count(); }
    std::vector<double> init_params(std::uint64_t seed) const override;
    double forward(std::span<const double> w, const Sample& x) const override;
    double forward_grad(std::span<const double> w, const Sample& x,
                        std::span<double> grad) const override;
    std::string describe() const override { return "LSTM[" + spec_.key() + "]"; }
    const LstmSpec& spec() const { return spec_; }
    /// Final top-layer hidden state.
    std::vector<double> final_hidden(std::span<const double> w, const Sample& x) const;

private:
    LstmSpec spec_;
};

struct QlstmSpec {
    int input_dim = 4; ///< F
    int hidden = 4;    ///< h = number of qubits
    int layers = 2;    ///< ansatz depth inside each circuit block

    void validate() const;
    /// (h + F) h + h embedding, 6 blocks of (2h + 3hL), h + 1 readout.
    std::size_t param_count() const;
    std::string key() const;
};

/// Circuit block: elementwise affine input, RY angle encoding, L ansatz layers,
/// Z readout on every qubit. Layout: a (q), b (q), angles (3 q L).
std::size_t vqc_block_params(int q, int layers);
std::vector<double> vqc_block(int q, int layers, std::span<const double> params,
                              std::span<const double> input);

/// QLSTM cell. Blocks 0..3 give f, i, g, o from the shared embedding of [h_prev, x_t];
/// block 4 maps o * tanh(c_t) to h_t. `weights` is the full QLSTM parameter vector.
CellState qlstm_step(const QlstmSpec& spec, std::span<const double> weights,
                     std::span<const double> x_t, const CellState& prev);

class Qlstm final : public Model {
public:
    explicit Qlstm(QlstmSpec spec);
    std::size_t param_count() const override { return spec_.param_count(); }
    std::vector<double> init_params(std::uint64_t seed) const override;
    double forward(std::span<const double> w, const Sample& x) const override;
    double forward_grad(std::span<const double> w, const Sample& x,
                        std::span<double> grad) const override;
    std::string describe() const override { return "QLSTM[" + spec_.key() + "]"; }
    const QlstmSpec& spec() const { return spec_; }
    std::vector<double> final_hidden(std::span<const double> w, const Sample& x) const;

private:
    QlstmSpec spec_;
};

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct ClassWeights {
    double negative = 1.0;
    double positive = 1.0;
};

/// Inverse class frequency, normalised so that a balanced set gets weights 1.
ClassWeights inverse_frequency_weights(std::span<const double> labels);

inline constexpr double kProbClamp = 1e-7;

/// -mean[w_y (y log p + (1 - y) log(1 - p))] with p clamped to [1e-7, 1 - 1e-7].
double weighted_bce(std::span<const double> probs, std::span<const double> labels,
                    const ClassWeights& weights);

struct TrainConfig {
    double learning_rate = 0.05;
    double momentum = 0.9;
    int max_epochs = 200;
    int patience = 30;
    std::size_t batch_size = 32;
    std::uint64_t seed = 1;
    std::optional<ClassWeights> class_weights; ///< default: inverse frequency on train

    void validate() const;
};

struct Dataset {
    std::vector<Sample> x;
    std::vector<double> y;

    std::size_t size() const { return y.size(); }
    Dataset slice(features::IndexRange r) const;
};

Dataset from_labeled(const features::LabeledDataset& ds);
Dataset from_windows(const features::WindowTensor& wt);

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;
    double es_auc = 0.0; ///< NaN when the slice holds a single class
};

struct TrainResult {
    std::vector<double> weights; ///< best early-stop weights
    std::vector<EpochRecord> history;
    int best_epoch = 0;
    double best_es_auc = 0.0;
    bool diverged = false;
};

TrainResult train(const Model& model, const Dataset& train_set, const Dataset& early_stop,
                  const TrainConfig& config);

std::vector<double> predict(const Model& model, std::span<const double> w, const Dataset& ds);

// ---------------------------------------------------------------------------
// Architecture search
// ---------------------------------------------------------------------------

using ModelSpec = std::variant<AnnSpec, QnnSpec, LstmSpec, QlstmSpec>;

std::unique_ptr<Model> make_model(const ModelSpec& spec);
std::string spec_key(const ModelSpec& spec);
std::size_t spec_param_count(const ModelSpec& spec);
bool spec_feasible(const ModelSpec& spec);

/// Every arch x layer (x qubit count for amplitude) combination in lexicographic order.
std::vector<ModelSpec> qnn_grid(Encoding enc, int input_dim, std::span<const int> layers,
                                std::span<const int> qubits);
std::vector<ModelSpec> lstm_grid(int input_dim, std::span<const int> hidden,
                                 std::span<const int> layers);
std::vector<ModelSpec> qlstm_grid(int input_dim, std::span<const int> hidden,
                                  std::span<const int> layers);

struct Candidate {
    ModelSpec spec;
    double mean_auc = 0.0;
    bool feasible = true;
};

struct SearchOutcome {
    std::size_t best = 0;
    std::vector<Candidate> candidates;
    const Candidate& winner() const { return candidates[best]; }
};

/// Highest mean AUC wins; ties go to fewer parameters, then the smaller spec key.
std::size_t select_best(const std::vector<Candidate>& scored);

/// Scores every feasible grid point with `evaluate` (mean validation AUC over folds).
/// Infeasible points are kept with AUC -inf.
SearchOutcome architecture_search(const std::vector<ModelSpec>& grid,
                                  const std::function<double(const ModelSpec&)>& evaluate,
                                  int jobs = 1);

// ---------------------------------------------------------------------------
// Serialisation
// ---------------------------------------------------------------------------

/// {"spec": {...}, "weights": [...], "history": [{"epoch", "train_loss", "es_auc"}]}
std::string to_json(const ModelSpec& spec, const TrainResult& result);
struct LoadedModel {
    ModelSpec spec;
    TrainResult result;
};
LoadedModel from_json(const std::string& text);

} // namespace qfb::neural
