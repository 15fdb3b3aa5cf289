#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "aptfs/dataset.hpp"
#include "aptfs/error.hpp"
#include "aptfs/selection.hpp"

namespace aptfs {

struct AnnealSchedule {
    double t_start = 10.0;
    double t_end = 0.1;
    std::size_t epochs = 200;
};

/// Exponential decay t_start * (t_end/t_start)^(epoch/epochs); epoch 0 gives
/// t_start, epoch == epochs gives t_end. A zero-epoch schedule stays at
/// t_start.
double anneal_temperature(std::size_t epoch, const AnnealSchedule& schedule);

/// softmax((logits + gumbel)/temperature): the relaxed one-hot row of one
/// concrete selector unit.
std::vector<double> concrete_sample(std::span<const double> logit_row, double temperature,
                                    std::span<const double> gumbel_noise);

/// Hard selection from a k x d logits matrix: row order, argmax per row, and
/// on collision the row's next-highest unused column. Always yields k distinct
/// indices (k <= d).
std::vector<int> select_from_logits(const Matrix& logits);

struct TrainTrace {
    std::vector<double> epoch_loss;  // one mean loss per completed epoch
    double final_temperature = 0.0;
    std::uint64_t seed = 0;
};

/// Raised when a training loss leaves the finite range; carries the partial
/// trace for audit.
class TrainingDiverged : public Error {
public:
    TrainingDiverged(const std::string& what, TrainTrace t)
        : Error(what), trace(std::move(t)) {}
    TrainTrace trace;
};

struct NetConfig {
    std::size_t hidden = 128;
};

struct OptConfig {
    double learning_rate = 1e-3;
    std::size_t batch = 64;
};

/// Parameters of the concrete autoencoder: selector logits plus a one-hidden-
/// layer decoder reconstructing all d inputs from the k selected projections.
struct CaeParams {
    Matrix logits;  // k x d
    Matrix w1;      // k x hidden
    Matrix b1;      // 1 x hidden
    Matrix w2;      // hidden x d
    Matrix b2;      // 1 x d
};

/// Mean squared reconstruction loss of one batch under fixed Gumbel noise and
/// temperature; fills grads (same shapes) when non-null. Exposed so gradient
/// checks can drive the exact training computation.
double cae_loss(const Matrix& batch, const CaeParams& p, const Matrix& gumbel, double temperature,
                CaeParams* grads = nullptr);

/// Parameters of the concrete classification head: selector logits plus a
/// linear softmax layer over the k selected projections.
struct CfmiParams {
    Matrix logits;  // k x d
    Matrix w;       // k x n_classes
    Matrix b;       // 1 x n_classes
};

/// Mean softmax cross-entropy (nats) of one batch; label_codes are dense
/// 0..n_classes-1. Fills grads when non-null.
double cfmi_loss(const Matrix& batch, const std::vector<int>& label_codes, std::size_t n_classes,
                 const CfmiParams& p, const Matrix& gumbel, double temperature,
                 CfmiParams* grads = nullptr);

/// Trains the concrete autoencoder and returns the hard selection plus the
/// per-epoch loss trace. Scores hold each feature's maximum selector logit.
std::pair<SelectionResult, TrainTrace> train_cae(const Dataset& train, std::size_t k_select,
                                                 const AnnealSchedule& schedule = {},
                                                 const NetConfig& net = {},
                                                 const OptConfig& opt = {},
                                                 std::uint64_t seed = 0);

/// Trains the concrete selector against labels with a linear-softmax
/// cross-entropy head (a mutual-information lower bound standing in for the
/// reference's estimator; recorded in params).
std::pair<SelectionResult, TrainTrace> train_cfmi(const Dataset& train, std::size_t k_select,
                                                  const AnnealSchedule& schedule = {},
                                                  const OptConfig& opt = {},
                                                  std::uint64_t seed = 0);

}  // namespace aptfs
