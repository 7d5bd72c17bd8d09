#include "uvwipe/rl/sac.hpp"
#include "uvwipe/error.hpp"

#include <algorithm>
#include <cmath>

namespace uvwipe::rl {

namespace {

constexpr double kLog2 = 0.69314718055994530942;
constexpr double kHalfLog2Pi = 0.91893853320467274178;

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

std::vector<int> mlp_sizes(int in, const std::vector<int>& hidden, int out) {
    std::vector<int> sizes{in};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

}  // namespace

double squashed_log_prob(double eps, double log_std, double pre_tanh) {
    const double gauss = -0.5 * eps * eps - log_std - kHalfLog2Pi;
    return gauss - 2.0 * (kLog2 - pre_tanh - softplus(-2.0 * pre_tanh));
}

template <typename S>
S soft_bellman_target(S reward, bool terminal, double discount, S next_q, S next_log_prob,
                      S temperature) {
    if (terminal) {
        return reward;
    }
    return reward + static_cast<S>(discount) * (next_q - temperature * next_log_prob);
}

template <typename S>
SacAgent<S>::SacAgent(const SacConfig& config, std::uint64_t seed) : config_(config) {
    if (!(config.discount > 0.0 && config.discount < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "discount must lie in (0, 1)");
    }
    if (!(config.tau > 0.0 && config.tau <= 1.0) || !(config.learning_rate > 0.0) ||
        !(config.initial_temperature > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "tau, learning rate and temperature must be positive");
    }
    std::mt19937_64 rng(seed);
    extractor_ = Sgcnn<S>("extractor", config.extractor, rng);
    target_extractor_ = Sgcnn<S>("target_extractor", config.extractor, rng);
    const int f = extractor_.feature_dim();
    actor_ = Mlp<S>("actor", mlp_sizes(f, config.actor_hidden, 2), false, rng);
    q1_ = Mlp<S>("q1", mlp_sizes(f + 1, config.critic_hidden, 1), false, rng);
    q2_ = Mlp<S>("q2", mlp_sizes(f + 1, config.critic_hidden, 1), false, rng);
    q1_target_ = Mlp<S>("q1_target", mlp_sizes(f + 1, config.critic_hidden, 1), false, rng);
    q2_target_ = Mlp<S>("q2_target", mlp_sizes(f + 1, config.critic_hidden, 1), false, rng);
    log_temperature_.name = "log_temperature";
    log_temperature_.value = Mat<S>::Constant(1, 1, static_cast<S>(std::log(config.initial_temperature)));
    log_temperature_.zero_grad();
    sync_targets();

    const AdamConfig adam{config.learning_rate};
    ParamList<S> critic = critic_parameters();
    ParamList<S> actor = actor_parameters();
    critic_opt_ = Adam<S>(critic, adam);
    actor_opt_ = Adam<S>(actor, adam);
    temperature_opt_ = Adam<S>(ParamList<S>{&log_temperature_}, adam);
}

template <typename S>
ParamList<S> SacAgent<S>::critic_parameters() {
    ParamList<S> out;
    extractor_.collect(out);
    q1_.collect(out);
    q2_.collect(out);
    return out;
}

template <typename S>
ParamList<S> SacAgent<S>::actor_parameters() {
    ParamList<S> out;
    actor_.collect(out);
    return out;
}

template <typename S>
ParamList<S> SacAgent<S>::target_parameters() {
    ParamList<S> out;
    target_extractor_.collect(out);
    q1_target_.collect(out);
    q2_target_.collect(out);
    return out;
}

template <typename S>
ParamList<S> SacAgent<S>::all_parameters() {
    ParamList<S> out = critic_parameters();
    for (Parameter<S>* p : actor_parameters()) out.push_back(p);
    for (Parameter<S>* p : target_parameters()) out.push_back(p);
    out.push_back(&log_temperature_);
    return out;
}

template <typename S>
double SacAgent<S>::temperature() const {
    return std::exp(static_cast<double>(log_temperature_.value(0, 0)));
}

template <typename S>
void SacAgent<S>::sync_targets() {
    copy_values(critic_parameters(), target_parameters());
}

template <typename S>
void SacAgent<S>::polyak(double tau) {
    polyak_update(critic_parameters(), target_parameters(), tau);
}

template <typename S>
typename SacAgent<S>::PolicyOut SacAgent<S>::policy(const Mat<S>& features) const {
    const Mat<S> out = actor_.forward(features);
    PolicyOut p;
    p.mean = out.row(0);
    p.raw_log_std = out.row(1);
    p.log_std = p.raw_log_std.array().max(static_cast<S>(kLogStdMin)).min(static_cast<S>(kLogStdMax));
    return p;
}

template <typename S>
std::vector<double> SacAgent<S>::act_batch(const Mat<S>& obs, bool deterministic,
                                           std::mt19937_64& rng) const {
    const PolicyOut p = policy(extractor_.forward(obs));
    std::normal_distribution<double> normal;
    std::vector<double> actions(static_cast<std::size_t>(obs.cols()));
    for (Eigen::Index b = 0; b < obs.cols(); ++b) {
        double u = static_cast<double>(p.mean(0, b));
        if (!deterministic) {
            u += std::exp(static_cast<double>(p.log_std(0, b))) * normal(rng);
        }
        actions[b] = std::tanh(u);
    }
    return actions;
}

template <typename S>
double SacAgent<S>::act(const Mat<S>& obs, bool deterministic, std::mt19937_64& rng) const {
    return act_batch(obs, deterministic, rng).front();
}

template <typename S>
Mat<S> SacAgent<S>::q_input(const Mat<S>& features, const Mat<S>& action) const {
    Mat<S> x(features.rows() + 1, features.cols());
    x.topRows(features.rows()) = features;
    x.bottomRows(1) = action;
    return x;
}

template <typename S>
Mat<S> SacAgent<S>::bellman_targets(const Batch<S>& batch, const Noise<S>& noise) const {
    const Eigen::Index n = batch.size();
    const PolicyOut p = policy(extractor_.forward(batch.next_obs));
    Mat<S> next_action(1, n);
    std::vector<S> log_prob(n);
    for (Eigen::Index b = 0; b < n; ++b) {
        const double eps = static_cast<double>(noise.next(0, b));
        const double ls = static_cast<double>(p.log_std(0, b));
        const double u = static_cast<double>(p.mean(0, b)) + std::exp(ls) * eps;
        next_action(0, b) = static_cast<S>(std::tanh(u));
        log_prob[b] = static_cast<S>(squashed_log_prob(eps, ls, u));
    }
    const Mat<S> x = q_input(target_extractor_.forward(batch.next_obs), next_action);
    const Mat<S> t1 = q1_target_.forward(x);
    const Mat<S> t2 = q2_target_.forward(x);
    const S alpha = static_cast<S>(temperature());
    Mat<S> y(1, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        y(0, b) = soft_bellman_target<S>(batch.reward(0, b), batch.done(0, b) > S(0.5), config_.discount,
                                         std::min(t1(0, b), t2(0, b)), log_prob[b], alpha);
    }
    return y;
}

template <typename S>
double SacAgent<S>::critic_loss(const Batch<S>& batch, const Noise<S>& noise) {
    return critic_loss(batch, bellman_targets(batch, noise));
}

template <typename S>
double SacAgent<S>::critic_loss(const Batch<S>& batch, const Mat<S>& y) {
    zero_grads(critic_parameters());
    const Eigen::Index n = batch.size();
    const Mat<S> features = extractor_.forward(batch.obs, extractor_cache_);
    const Mat<S> x = q_input(features, batch.action);
    typename Mlp<S>::Cache c1, c2;
    const Mat<S> v1 = q1_.forward(x, c1);
    const Mat<S> v2 = q2_.forward(x, c2);
    const Mat<S> e1 = v1 - y;
    const Mat<S> e2 = v2 - y;
    const double loss = 0.5 * (static_cast<double>(e1.squaredNorm()) + static_cast<double>(e2.squaredNorm())) /
                        static_cast<double>(n);
    const S inv = S(1) / static_cast<S>(n);
    const Mat<S> g1 = q1_.backward(c1, e1 * inv, true);
    const Mat<S> g2 = q2_.backward(c2, e2 * inv, true);
    const Eigen::Index f = features.rows();
    extractor_.backward(extractor_cache_, g1.topRows(f) + g2.topRows(f));
    return loss;
}

template <typename S>
double SacAgent<S>::actor_pass(const Mat<S>& features, const Noise<S>& noise, Mat<S>* dfeatures,
                               Mat<S>* log_prob_out) {
    const Eigen::Index n = features.cols();
    typename Mlp<S>::Cache cache;
    const Mat<S> out = actor_.forward(features, cache);
    Mat<S> action(1, n);
    std::vector<double> u(n), a(n), stdv(n), logp(n);
    Mat<S> log_prob(1, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        const double eps = static_cast<double>(noise.current(0, b));
        const double ls = std::clamp(static_cast<double>(out(1, b)), kLogStdMin, kLogStdMax);
        stdv[b] = std::exp(ls);
        u[b] = static_cast<double>(out(0, b)) + stdv[b] * eps;
        a[b] = std::tanh(u[b]);
        logp[b] = squashed_log_prob(eps, ls, u[b]);
        action(0, b) = static_cast<S>(a[b]);
        log_prob(0, b) = static_cast<S>(logp[b]);
    }
    const Mat<S> x = q_input(features, action);
    typename Mlp<S>::Cache c1, c2;
    const Mat<S> v1 = q1_.forward(x, c1);
    const Mat<S> v2 = q2_.forward(x, c2);
    const double alpha = temperature();
    double loss = 0.0;
    Mat<S> d1 = Mat<S>::Zero(1, n);
    Mat<S> d2 = Mat<S>::Zero(1, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        const bool first = v1(0, b) <= v2(0, b);
        const double q = static_cast<double>(first ? v1(0, b) : v2(0, b));
        loss += alpha * logp[b] - q;
        (first ? d1 : d2)(0, b) = static_cast<S>(-1.0 / static_cast<double>(n));
    }
    loss /= static_cast<double>(n);

    // Q networks only pass gradients through; their parameters are untouched.
    const Mat<S> gx1 = q1_.backward(c1, d1, true, false);
    const Mat<S> gx2 = q2_.backward(c2, d2, true, false);
    const Eigen::Index f = features.rows();
    Mat<S> dout(2, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        const double eps = static_cast<double>(noise.current(0, b));
        const double dq_da = static_cast<double>(gx1(f, b) + gx2(f, b));
        const double du = alpha * 2.0 * a[b] / static_cast<double>(n) + dq_da * (1.0 - a[b] * a[b]);
        const double raw = static_cast<double>(out(1, b));
        const bool inside = raw > kLogStdMin && raw < kLogStdMax;
        dout(0, b) = static_cast<S>(du);
        dout(1, b) = inside ? static_cast<S>(-alpha / static_cast<double>(n) + du * stdv[b] * eps) : S(0);
    }
    const Mat<S> gf = actor_.backward(cache, dout, dfeatures != nullptr);
    if (dfeatures) {
        *dfeatures = gf + gx1.topRows(f) + gx2.topRows(f);
    }
    if (log_prob_out) {
        *log_prob_out = log_prob;
    }
    return loss;
}

template <typename S>
double SacAgent<S>::actor_loss(const Batch<S>& batch, const Noise<S>& noise) {
    zero_grads(actor_parameters());
    return actor_pass(extractor_.forward(batch.obs), noise, nullptr, nullptr);
}

template <typename S>
LossReport SacAgent<S>::update(const Batch<S>& batch, const Noise<S>& noise) {
    LossReport report;
    report.temperature = temperature();
    report.critic = critic_loss(batch, noise);
    zero_grads(actor_parameters());
    Mat<S> log_prob;
    // Features from the critic pass; the actor sees them as constants
    // unless it is allowed to train the extractor as well.
    const Mat<S>& features = extractor_cache_.fc.output;
    if (config_.critic_only_extractor) {
        report.actor = actor_pass(features, noise, nullptr, &log_prob);
    } else {
        Mat<S> dfeatures;
        report.actor = actor_pass(features, noise, &dfeatures, &log_prob);
        extractor_.backward(extractor_cache_, dfeatures);
    }
    if (!std::isfinite(report.critic) || !std::isfinite(report.actor)) {
        throw Error(ErrorKind::diverged, "non-finite SAC loss (critic " + std::to_string(report.critic) +
                                             ", actor " + std::to_string(report.actor) + ")");
    }
    critic_opt_.step();
    actor_opt_.step();

    const double mean_log_prob = static_cast<double>(log_prob.mean());
    report.entropy = -mean_log_prob;
    const double shift = mean_log_prob + config_.target_entropy;
    report.temperature_loss = -static_cast<double>(log_temperature_.value(0, 0)) * shift;
    if (config_.auto_temperature) {
        log_temperature_.grad(0, 0) = static_cast<S>(-shift);
        temperature_opt_.step();
    }
    polyak(config_.tau);
    return report;
}

template float soft_bellman_target<float>(float, bool, double, float, float, float);
template double soft_bellman_target<double>(double, bool, double, double, double, double);
template class SacAgent<float>;
template class SacAgent<double>;

}  // namespace uvwipe::rl
