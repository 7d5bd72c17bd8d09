#pragma once

#include "uvwipe/rl/nn.hpp"
#include "uvwipe/rl/sgcnn.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace uvwipe::rl {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

struct SacConfig {
    SgcnnConfig extractor;
    std::vector<int> actor_hidden{256, 256};
    std::vector<int> critic_hidden{256, 256};
    double learning_rate = 3e-4;
    double discount = 0.99;
    double tau = 0.005;
    double target_entropy = -1.0;
    double initial_temperature = 1.0;
    bool auto_temperature = true;
    // When false the actor loss also trains the shared extractor.
    bool critic_only_extractor = true;
};

// Column-per-transition mini-batch. Actions are normalized to [-1, 1].
template <typename S>
struct Batch {
    Mat<S> obs;
    Mat<S> action;  // 1 x B
    Mat<S> reward;  // 1 x B
    Mat<S> next_obs;
    Mat<S> done;  // 1 x B, 1 = terminal (no bootstrap)

    [[nodiscard]] Eigen::Index size() const { return obs.cols(); }
};

// Standard-normal draws for the reparameterized current and next actions.
template <typename S>
struct Noise {
    Mat<S> current;  // 1 x B
    Mat<S> next;     // 1 x B
};

struct LossReport {
    double critic = 0.0;
    double actor = 0.0;
    double temperature_loss = 0.0;
    double temperature = 0.0;
    double entropy = 0.0;  // -mean log pi of the current actions
};

// log of the tanh-squashed Gaussian density, in the stable
// 2 (log 2 - u - softplus(-2u)) form for log(1 - tanh(u)^2).
double squashed_log_prob(double eps, double log_std, double pre_tanh);

// r if terminal, else r + discount * (min target Q - temperature * log pi).
template <typename S>
S soft_bellman_target(S reward, bool terminal, double discount, S next_q, S next_log_prob,
                      S temperature);

template <typename S>
class SacAgent {
public:
    SacAgent() = default;
    SacAgent(const SacConfig& config, std::uint64_t seed);

    SacAgent(const SacAgent&) = delete;
    SacAgent& operator=(const SacAgent&) = delete;
    SacAgent(SacAgent&&) = delete;

    // Normalized action in [-1, 1]; deterministic uses tanh(mean).
    [[nodiscard]] double act(const Mat<S>& obs, bool deterministic, std::mt19937_64& rng) const;
    [[nodiscard]] std::vector<double> act_batch(const Mat<S>& obs, bool deterministic,
                                                std::mt19937_64& rng) const;

    // One SAC update (critic, actor, temperature, targets).
    LossReport update(const Batch<S>& batch, const Noise<S>& noise);

    // Loss values with gradients accumulated into the respective
    // parameters (grads are zeroed first). No parameter changes.
    double critic_loss(const Batch<S>& batch, const Noise<S>& noise);
    // Same, against precomputed (frozen) Bellman targets.
    double critic_loss(const Batch<S>& batch, const Mat<S>& targets);
    double actor_loss(const Batch<S>& batch, const Noise<S>& noise);

    // Soft Bellman targets (1 x B) from the target critics and the current
    // policy at the next observations.
    [[nodiscard]] Mat<S> bellman_targets(const Batch<S>& batch, const Noise<S>& noise) const;

    [[nodiscard]] ParamList<S> critic_parameters();  // extractor + both Q heads
    [[nodiscard]] ParamList<S> actor_parameters();
    [[nodiscard]] ParamList<S> target_parameters();
    [[nodiscard]] ParamList<S> all_parameters();  // everything that is checkpointed

    [[nodiscard]] double temperature() const;
    [[nodiscard]] const SacConfig& config() const { return config_; }
    [[nodiscard]] const Sgcnn<S>& extractor() const { return extractor_; }
    [[nodiscard]] int observation_dim() const { return extractor_.input_dim(); }

    void polyak(double tau);
    void sync_targets();

    // Mean and clamped log-std rows of the policy head for given features.
    struct PolicyOut {
        Mat<S> mean;
        Mat<S> log_std;
        Mat<S> raw_log_std;
    };
    [[nodiscard]] PolicyOut policy(const Mat<S>& features) const;

private:
    Mat<S> q_input(const Mat<S>& features, const Mat<S>& action) const;
    // Actor loss on fixed features; accumulates actor gradients and, when
    // dfeatures is given, the loss gradient with respect to the features.
    double actor_pass(const Mat<S>& features, const Noise<S>& noise, Mat<S>* dfeatures,
                      Mat<S>* log_prob);

    SacConfig config_;
    Sgcnn<S> extractor_;
    Sgcnn<S> target_extractor_;
    Mlp<S> actor_;
    Mlp<S> q1_;
    Mlp<S> q2_;
    Mlp<S> q1_target_;
    Mlp<S> q2_target_;
    Parameter<S> log_temperature_;
    Adam<S> critic_opt_;
    Adam<S> actor_opt_;
    Adam<S> temperature_opt_;
    typename Sgcnn<S>::Cache extractor_cache_;
};

}  // namespace uvwipe::rl
