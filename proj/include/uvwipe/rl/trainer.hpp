#pragma once

#include "uvwipe/baselines.hpp"
#include "uvwipe/coverage_env.hpp"
#include "uvwipe/rl/sac.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace uvwipe::rl {

struct TrainConfig {
    SacConfig sac;
    std::size_t batch_size = 256;
    long total_steps = 2'000'000;
    std::size_t buffer_capacity = 1'000'000;
    long warmup_steps = 1000;  // uniform random actions before learning starts
    int update_every = 1;      // environment steps per gradient update
    // Std of additive Gaussian noise on collected normalized actions.
    double action_noise = 3e-4;
    bool action_noise_enabled = true;
    std::uint64_t seed = 0;
    long eval_interval = 5000;
    int eval_episodes = 3;
    long checkpoint_interval = 0;  // 0: only at the end

    void validate() const;
};

struct TrainLogRow {
    long step = 0;
    long episode = 0;
    double steps_per_episode = 0.0;  // mean over evaluation episodes
    double coverage = 0.0;           // mean coverage at termination
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    double temperature_loss = 0.0;
    double temperature = 0.0;
};

void write_train_log_csv(std::ostream& out, const std::vector<TrainLogRow>& rows);

// Maps an observation to an omega command in degrees.
using Policy = std::function<double(const Observation&)>;

struct EpisodeResult {
    int steps = 0;
    double coverage = 0.0;
    DoneReason reason = DoneReason::none;
};

struct EvalSummary {
    std::vector<EpisodeResult> episodes;
    double mean_steps = 0.0;
    double mean_coverage = 0.0;
};

// Runs one episode per start seed base_seed, base_seed + 1, ...
EvalSummary evaluate_policy(const Policy& policy, const GridWorld& world, const EnvConfig& env,
                            int episodes, std::uint64_t base_seed);

Policy agent_policy(const SacAgent<float>& agent, bool deterministic, std::uint64_t seed);
Policy random_policy(std::uint64_t seed);

struct TrainHooks {
    std::function<void(const TrainLogRow&)> on_log;
    std::function<void(long step)> on_checkpoint;
};

// Start seeds of evaluation episodes, shared by every evaluation of a run.
inline constexpr std::uint64_t kEvalSeedBase = 1'000'003;

std::vector<TrainLogRow> train(SacAgent<float>& agent, const GridWorld& world, const EnvConfig& env,
                               const TrainConfig& config, const TrainHooks& hooks = {});

struct RolloutResult {
    UVPath path;
    std::vector<TraceRow> trace;
    double coverage = 0.0;
    DoneReason reason = DoneReason::none;
};

RolloutResult rollout(const Policy& policy, const GridWorld& world, const EnvConfig& env,
                      std::uint64_t start_seed);

}  // namespace uvwipe::rl
