#include "aptfs/concrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aptfs/autodiff.hpp"
#include "aptfs/mutual_info.hpp"
#include "aptfs/rng.hpp"

namespace aptfs {

double anneal_temperature(std::size_t epoch, const AnnealSchedule& schedule) {
    if (!(schedule.t_start > schedule.t_end && schedule.t_end > 0.0))
        throw ConfigError("anneal_temperature: need t_start > t_end > 0");
    if (epoch > schedule.epochs)
        throw ConfigError("anneal_temperature: epoch " + std::to_string(epoch) +
                          " past schedule end " + std::to_string(schedule.epochs));
    if (schedule.epochs == 0) return schedule.t_start;
    const double frac = static_cast<double>(epoch) / static_cast<double>(schedule.epochs);
    return schedule.t_start * std::pow(schedule.t_end / schedule.t_start, frac);
}

std::vector<double> concrete_sample(std::span<const double> logit_row, double temperature,
                                    std::span<const double> gumbel_noise) {
    if (logit_row.size() != gumbel_noise.size())
        throw DataError("concrete_sample: logits and noise sizes differ");
    if (!(temperature > 0.0)) throw ConfigError("concrete_sample: temperature must be > 0");
    std::vector<double> out(logit_row.size());
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = (logit_row[j] + gumbel_noise[j]) / temperature;
        hi = std::max(hi, out[j]);
    }
    double sum = 0.0;
    for (double& v : out) {
        v = std::exp(v - hi);
        sum += v;
    }
    for (double& v : out) v /= sum;
    return out;
}

std::vector<int> select_from_logits(const Matrix& logits) {
    const std::size_t k = logits.rows;
    const std::size_t d = logits.cols;
    if (k > d)
        throw ConfigError("select_from_logits: " + std::to_string(k) + " selectors for " +
                          std::to_string(d) + " features cannot be distinct");
    std::vector<char> used(d, 0);
    std::vector<int> picked(k);
    for (std::size_t r = 0; r < k; ++r) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_j = d;
        for (std::size_t j = 0; j < d; ++j) {
            if (used[j]) continue;
            if (logits(r, j) > best) {
                best = logits(r, j);
                best_j = j;
            }
        }
        used[best_j] = 1;
        picked[r] = static_cast<int>(best_j);
    }
    return picked;
}

namespace {

Matrix gather_rows(const Matrix& X, std::span<const std::uint32_t> rows) {
    Matrix out(rows.size(), X.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double* src = X.row(rows[i]);
        std::copy(src, src + X.cols, out.row(i));
    }
    return out;
}

void check_scaled(const Dataset& train, const char* who) {
    for (double v : train.X.data) {
        if (v < 0.0 || v > 1.0)
            throw DataError(std::string(who) + ": expects [0,1]-scaled features, found value " +
                            std::to_string(v));
    }
}

Matrix normal_matrix(Rng& rng, std::size_t r, std::size_t c, double stddev) {
    Matrix m(r, c);
    for (double& v : m.data) v = rng.normal() * stddev;
    return m;
}

Matrix gumbel_matrix(Rng& rng, std::size_t r, std::size_t c) {
    Matrix m(r, c);
    for (double& v : m.data) v = rng.gumbel();
    return m;
}

/// Adam with bias correction; state shapes mirror the parameter list.
class Adam {
public:
    Adam(std::vector<Matrix*> params, double lr) : params_(std::move(params)), lr_(lr) {
        for (Matrix* p : params_) {
            m_.emplace_back(p->rows, p->cols);
            v_.emplace_back(p->rows, p->cols);
        }
    }

    void step(const std::vector<const Matrix*>& grads) {
        ++t_;
        const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
        for (std::size_t p = 0; p < params_.size(); ++p) {
            auto& par = params_[p]->data;
            const auto& g = grads[p]->data;
            auto& m = m_[p].data;
            auto& v = v_[p].data;
            for (std::size_t i = 0; i < par.size(); ++i) {
                m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
                v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
                par[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + kEps);
            }
        }
    }

    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;

private:
    std::vector<Matrix*> params_;
    double lr_;
    std::size_t t_ = 0;
    std::vector<Matrix> m_, v_;
};

SelectionResult selection_from(FsMethod method, const Matrix& logits, std::size_t d) {
    SelectionResult result;
    result.method = method;
    result.k = logits.rows;
    result.scores.assign(d, -std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < d; ++j) {
        double hi = logits(0, j);
        for (std::size_t r = 1; r < logits.rows; ++r) hi = std::max(hi, logits(r, j));
        result.scores[j] = hi;
    }
    result.selected = select_from_logits(logits);
    sort_by_score(result.selected, result.scores);
    return result;
}

}  // namespace

double cae_loss(const Matrix& batch, const CaeParams& p, const Matrix& gumbel, double temperature,
                CaeParams* grads) {
    ad::Tape tape;
    const ad::Var logits = tape.param(p.logits);
    const ad::Var w1 = tape.param(p.w1);
    const ad::Var b1 = tape.param(p.b1);
    const ad::Var w2 = tape.param(p.w2);
    const ad::Var b2 = tape.param(p.b2);
    const ad::Var x = tape.constant(batch);

    const ad::Var weights = tape.softmax_rows(tape.affine(logits, 1.0 / temperature, gumbel));
    const ad::Var z = tape.matmul_nt(x, weights);
    const ad::Var h = tape.tanh(tape.add_row(tape.matmul(z, w1), b1));
    const ad::Var xhat = tape.add_row(tape.matmul(h, w2), b2);
    const ad::Var loss = tape.mse_loss(xhat, batch);

    if (grads) {
        tape.backward(loss);
        grads->logits = tape.grad(logits);
        grads->w1 = tape.grad(w1);
        grads->b1 = tape.grad(b1);
        grads->w2 = tape.grad(w2);
        grads->b2 = tape.grad(b2);
    }
    return tape.value(loss)(0, 0);
}

double cfmi_loss(const Matrix& batch, const std::vector<int>& label_codes, std::size_t n_classes,
                 const CfmiParams& p, const Matrix& gumbel, double temperature,
                 CfmiParams* grads) {
    if (p.w.cols != n_classes) throw DataError("cfmi_loss: head width must equal n_classes");
    ad::Tape tape;
    const ad::Var logits = tape.param(p.logits);
    const ad::Var w = tape.param(p.w);
    const ad::Var b = tape.param(p.b);
    const ad::Var x = tape.constant(batch);

    const ad::Var weights = tape.softmax_rows(tape.affine(logits, 1.0 / temperature, gumbel));
    const ad::Var z = tape.matmul_nt(x, weights);
    const ad::Var scores = tape.add_row(tape.matmul(z, w), b);
    const ad::Var loss = tape.ce_loss(scores, label_codes);

    if (grads) {
        tape.backward(loss);
        grads->logits = tape.grad(logits);
        grads->w = tape.grad(w);
        grads->b = tape.grad(b);
    }
    return tape.value(loss)(0, 0);
}

namespace {

struct TrainBudget {
    std::size_t k_select;
    const AnnealSchedule& schedule;
    const OptConfig& opt;
    std::uint64_t seed;
};

void validate_training(const Dataset& train, const TrainBudget& tb, const char* who) {
    check_scaled(train, who);
    if (tb.k_select < 1 || tb.k_select > train.n_features())
        throw ConfigError(std::string(who) + ": k_select must be in [1, d], got " +
                          std::to_string(tb.k_select) + " with d = " +
                          std::to_string(train.n_features()));
    if (tb.opt.batch < 1) throw ConfigError(std::string(who) + ": batch must be >= 1");
    if (!(tb.schedule.t_start > tb.schedule.t_end && tb.schedule.t_end > 0.0))
        throw ConfigError(std::string(who) + ": need t_start > t_end > 0");
}

/// Mini-batch loop shared by both trainers. step(rows, temperature) returns
/// the batch loss after applying one update; the loop owns shuffling, the
/// anneal schedule, divergence handling, and the trace.
template <typename Step>
TrainTrace run_epochs(const Dataset& train, const TrainBudget& tb, Rng& rng, const char* who,
                      Step step) {
    const std::size_t n = train.n_samples();
    TrainTrace trace;
    trace.seed = tb.seed;
    trace.final_temperature = tb.schedule.t_start;

    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    for (std::size_t epoch = 0; epoch < tb.schedule.epochs; ++epoch) {
        const double temperature = anneal_temperature(epoch, tb.schedule);
        trace.final_temperature = temperature;
        rng.shuffle(perm);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += tb.opt.batch) {
            const std::size_t len = std::min(tb.opt.batch, n - start);
            const std::span<const std::uint32_t> rows(perm.data() + start, len);
            const double loss = step(rows, temperature);
            if (!std::isfinite(loss)) {
                throw TrainingDiverged(
                    std::string(who) + ": non-finite loss at epoch " + std::to_string(epoch) +
                        ", batch offset " + std::to_string(start),
                    trace);
            }
            epoch_loss += loss * static_cast<double>(len);
        }
        trace.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
    }
    return trace;
}

}  // namespace

std::pair<SelectionResult, TrainTrace> train_cae(const Dataset& train, std::size_t k_select,
                                                 const AnnealSchedule& schedule,
                                                 const NetConfig& net, const OptConfig& opt,
                                                 std::uint64_t seed) {
    const TrainBudget tb{k_select, schedule, opt, seed};
    validate_training(train, tb, "train_cae");
    if (net.hidden < 1) throw ConfigError("train_cae: hidden width must be >= 1");
    const std::size_t d = train.n_features();
    const std::size_t h = net.hidden;

    Rng rng(seed);
    CaeParams p;
    p.logits = normal_matrix(rng, k_select, d, 0.01);
    p.w1 = normal_matrix(rng, k_select, h, 1.0 / std::sqrt(static_cast<double>(k_select)));
    p.b1 = Matrix(1, h);
    p.w2 = normal_matrix(rng, h, d, 1.0 / std::sqrt(static_cast<double>(h)));
    p.b2 = Matrix(1, d);

    Adam adam({&p.logits, &p.w1, &p.b1, &p.w2, &p.b2}, opt.learning_rate);
    CaeParams g;
    const TrainTrace trace = run_epochs(
        train, tb, rng, "train_cae", [&](std::span<const std::uint32_t> rows, double temperature) {
            const Matrix batch = gather_rows(train.X, rows);
            const Matrix gumbel = gumbel_matrix(rng, k_select, d);
            const double loss = cae_loss(batch, p, gumbel, temperature, &g);
            adam.step({&g.logits, &g.w1, &g.b1, &g.w2, &g.b2});
            return loss;
        });

    SelectionResult result = selection_from(FsMethod::cae, p.logits, d);
    result.seed = seed;
    result.params["epochs"] = std::to_string(schedule.epochs);
    result.params["batch"] = std::to_string(opt.batch);
    result.params["learning_rate"] = std::to_string(opt.learning_rate);
    result.params["hidden"] = std::to_string(net.hidden);
    result.params["t_start"] = std::to_string(schedule.t_start);
    result.params["t_end"] = std::to_string(schedule.t_end);
    result.params["optimizer"] = "adam(0.9,0.999,1e-8)";
    result.params["objective"] = "mean_squared_reconstruction";
    return {std::move(result), trace};
}

std::pair<SelectionResult, TrainTrace> train_cfmi(const Dataset& train, std::size_t k_select,
                                                  const AnnealSchedule& schedule,
                                                  const OptConfig& opt, std::uint64_t seed) {
    const TrainBudget tb{k_select, schedule, opt, seed};
    validate_training(train, tb, "train_cfmi");
    std::size_t n_classes = 0;
    const std::vector<int> codes = dense_codes(train.y, n_classes);
    if (n_classes < 2)
        throw DataError("train_cfmi: training labels hold a single class; cross-entropy cannot "
                        "rank features");
    const std::size_t d = train.n_features();

    Rng rng(seed);
    CfmiParams p;
    p.logits = normal_matrix(rng, k_select, d, 0.01);
    p.w = normal_matrix(rng, k_select, n_classes, 1.0 / std::sqrt(static_cast<double>(k_select)));
    p.b = Matrix(1, n_classes);

    Adam adam({&p.logits, &p.w, &p.b}, opt.learning_rate);
    CfmiParams g;
    std::vector<int> batch_codes;
    const TrainTrace trace = run_epochs(
        train, tb, rng, "train_cfmi",
        [&](std::span<const std::uint32_t> rows, double temperature) {
            const Matrix batch = gather_rows(train.X, rows);
            batch_codes.resize(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) batch_codes[i] = codes[rows[i]];
            const Matrix gumbel = gumbel_matrix(rng, k_select, d);
            const double loss = cfmi_loss(batch, batch_codes, n_classes, p, gumbel, temperature, &g);
            adam.step({&g.logits, &g.w, &g.b});
            return loss;
        });

    SelectionResult result = selection_from(FsMethod::cfmi, p.logits, d);
    result.seed = seed;
    result.params["epochs"] = std::to_string(schedule.epochs);
    result.params["batch"] = std::to_string(opt.batch);
    result.params["learning_rate"] = std::to_string(opt.learning_rate);
    result.params["t_start"] = std::to_string(schedule.t_start);
    result.params["t_end"] = std::to_string(schedule.t_end);
    result.params["optimizer"] = "adam(0.9,0.999,1e-8)";
    result.params["objective"] = "softmax_cross_entropy_mi_lower_bound";
    result.params["head"] = "linear softmax over selected projections";
    return {std::move(result), trace};
}

}  // namespace aptfs
