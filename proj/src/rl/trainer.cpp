#include "uvwipe/rl/trainer.hpp"
#include "uvwipe/error.hpp"
#include "uvwipe/rl/replay_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>

namespace uvwipe::rl {

void TrainConfig::validate() const {
    if (batch_size == 0 || total_steps <= 0 || buffer_capacity < batch_size || warmup_steps < 0 ||
        update_every <= 0 || eval_interval <= 0 || eval_episodes <= 0 || checkpoint_interval < 0) {
        throw Error(ErrorKind::invalid_argument, "training sizes and intervals must be positive");
    }
    if (!(action_noise >= 0.0)) {
        throw Error(ErrorKind::invalid_argument, "action noise must be non-negative");
    }
    if (!(sac.discount > 0.0 && sac.discount < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "discount must lie in (0, 1)");
    }
}

void write_train_log_csv(std::ostream& out, const std::vector<TrainLogRow>& rows) {
    out << "step,episode,steps_per_episode,coverage,critic_loss,actor_loss,temperature_loss,temperature\n";
    out << std::setprecision(9);
    for (const TrainLogRow& r : rows) {
        out << r.step << ',' << r.episode << ',' << r.steps_per_episode << ',' << r.coverage << ','
            << r.critic_loss << ',' << r.actor_loss << ',' << r.temperature_loss << ','
            << r.temperature << '\n';
    }
}

EvalSummary evaluate_policy(const Policy& policy, const GridWorld& world, const EnvConfig& env,
                            int episodes, std::uint64_t base_seed) {
    EvalSummary summary;
    CoverageEnv e(world, env);
    for (int k = 0; k < episodes; ++k) {
        Observation obs = e.reset(base_seed + static_cast<std::uint64_t>(k));
        StepResult r;
        do {
            r = e.step(policy(obs));
            obs = std::move(r.observation);
        } while (!r.done);
        summary.episodes.push_back({e.agent().step_count, e.world().coverage_fraction(), r.done_reason});
    }
    for (const EpisodeResult& ep : summary.episodes) {
        summary.mean_steps += ep.steps;
        summary.mean_coverage += ep.coverage;
    }
    summary.mean_steps /= episodes;
    summary.mean_coverage /= episodes;
    return summary;
}

Policy agent_policy(const SacAgent<float>& agent, bool deterministic, std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [&agent, deterministic, rng](const Observation& obs) {
        return kMaxOmegaDeg * agent.act(observation_matrix<float>(obs), deterministic, *rng);
    };
}

Policy random_policy(std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng](const Observation&) {
        return std::uniform_real_distribution<double>(-kMaxOmegaDeg, kMaxOmegaDeg)(*rng);
    };
}

std::vector<TrainLogRow> train(SacAgent<float>& agent, const GridWorld& world, const EnvConfig& env,
                               const TrainConfig& config, const TrainHooks& hooks) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    ReplayBuffer buffer(config.buffer_capacity, agent.observation_dim());
    CoverageEnv e(world, env);

    std::vector<TrainLogRow> log;
    long episode = 0;
    Observation obs = e.reset(rng());
    LossReport last;
    for (long step = 1; step <= config.total_steps; ++step) {
        double action;
        if (step <= config.warmup_steps) {
            action = uniform(rng);
        } else {
            action = agent.act(observation_matrix<float>(obs), false, rng);
            if (config.action_noise_enabled && config.action_noise > 0.0) {
                action = std::clamp(action + config.action_noise * normal(rng), -1.0, 1.0);
            }
        }
        StepResult r = e.step(kMaxOmegaDeg * action);
        // Only reaching the coverage target ends the return; the step cap is
        // a time limit and still bootstraps.
        buffer.add(obs, action, r.reward, r.observation, r.done_reason == DoneReason::target_reached);
        if (r.done) {
            ++episode;
            obs = e.reset(rng());
        } else {
            obs = std::move(r.observation);
        }

        if (step > config.warmup_steps && buffer.size() >= config.batch_size &&
            step % config.update_every == 0) {
            const auto slots = buffer.sample_slots(config.batch_size, rng);
            const Batch<float> batch = buffer.gather<float>(slots);
            Noise<float> noise;
            noise.current.resize(1, batch.size());
            noise.next.resize(1, batch.size());
            for (Eigen::Index b = 0; b < batch.size(); ++b) {
                noise.current(0, b) = static_cast<float>(normal(rng));
                noise.next(0, b) = static_cast<float>(normal(rng));
            }
            last = agent.update(batch, noise);
        }

        if (step % config.eval_interval == 0 || step == config.total_steps) {
            const EvalSummary eval = evaluate_policy(agent_policy(agent, true, 0), world, env,
                                                     config.eval_episodes, kEvalSeedBase);
            TrainLogRow row;
            row.step = step;
            row.episode = episode;
            row.steps_per_episode = eval.mean_steps;
            row.coverage = eval.mean_coverage;
            row.critic_loss = last.critic;
            row.actor_loss = last.actor;
            row.temperature_loss = last.temperature_loss;
            row.temperature = agent.temperature();
            log.push_back(row);
            if (hooks.on_log) hooks.on_log(row);
        }
        if (hooks.on_checkpoint && config.checkpoint_interval > 0 && step % config.checkpoint_interval == 0) {
            hooks.on_checkpoint(step);
        }
    }
    if (hooks.on_checkpoint) hooks.on_checkpoint(config.total_steps);
    return log;
}

RolloutResult rollout(const Policy& policy, const GridWorld& world, const EnvConfig& env,
                      std::uint64_t start_seed) {
    CoverageEnv e(world, env);
    Observation obs = e.reset(start_seed);
    StepResult r;
    do {
        r = e.step(policy(obs));
        obs = std::move(r.observation);
    } while (!r.done);
    RolloutResult out;
    out.trace = e.trace();
    std::vector<Vec2> points;
    points.reserve(out.trace.size());
    for (const TraceRow& t : out.trace) points.emplace_back(t.u, t.v);
    out.path = make_uv_path(points);
    out.coverage = e.world().coverage_fraction();
    out.reason = r.done_reason;
    return out;
}

}  // namespace uvwipe::rl
