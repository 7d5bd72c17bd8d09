#include "uvwipe/rl/replay_buffer.hpp"
#include "uvwipe/error.hpp"

#include <algorithm>
#include <unordered_set>

namespace uvwipe::rl {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int observation_dim)
    : capacity_(capacity), dim_(observation_dim), words_((observation_dim + 63) / 64) {
    if (capacity == 0 || observation_dim <= 0) {
        throw Error(ErrorKind::invalid_argument, "replay buffer needs positive capacity and size");
    }
}

void ReplayBuffer::pack(const Observation& obs, std::uint64_t* dst) const {
    std::fill(dst, dst + words_, 0);
    for (int i = 0; i < dim_; ++i) {
        if (obs.data[i]) dst[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
}

template <typename S>
void ReplayBuffer::unpack(const std::uint64_t* src, S* dst) const {
    for (int w = 0; w * 64 < dim_; ++w) {
        std::uint64_t bits = src[w];
        const int end = std::min(64, dim_ - w * 64);
        S* out = dst + w * 64;
        for (int i = 0; i < end; ++i, bits >>= 1) out[i] = static_cast<S>(bits & 1);
    }
}

void ReplayBuffer::add(const Observation& obs, double action, double reward,
                       const Observation& next_obs, bool terminal) {
    if (static_cast<int>(obs.data.size()) != dim_ || static_cast<int>(next_obs.data.size()) != dim_) {
        throw Error(ErrorKind::shape_mismatch, "observation size does not match the replay buffer");
    }
    scales_ = obs.scales;
    obs_size_ = obs.size;
    if (size_ < capacity_) {
        obs_bits_.resize(obs_bits_.size() + words_);
        next_bits_.resize(next_bits_.size() + words_);
        actions_.push_back(0.0f);
        rewards_.push_back(0.0f);
        terminals_.push_back(0);
        ids_.push_back(0);
        ++size_;
    }
    const std::size_t slot = next_;
    pack(obs, obs_bits_.data() + slot * words_);
    pack(next_obs, next_bits_.data() + slot * words_);
    actions_[slot] = static_cast<float>(action);
    rewards_[slot] = static_cast<float>(reward);
    terminals_[slot] = terminal ? 1 : 0;
    ids_[slot] = inserted_++;
    next_ = (next_ + 1) % capacity_;
}

std::uint64_t ReplayBuffer::oldest_id() const {
    if (size_ == 0) {
        throw Error(ErrorKind::invalid_argument, "replay buffer is empty");
    }
    return size_ < capacity_ ? ids_[0] : ids_[next_];
}

std::vector<std::size_t> ReplayBuffer::sample_slots(std::size_t batch, std::mt19937_64& rng) const {
    if (batch > size_) {
        throw Error(ErrorKind::invalid_argument, "batch larger than the replay buffer contents");
    }
    // Floyd's algorithm: distinct draws without materializing a permutation.
    std::vector<std::size_t> out;
    out.reserve(batch);
    std::unordered_set<std::size_t> chosen;
    for (std::size_t j = size_ - batch; j < size_; ++j) {
        const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
        const std::size_t pick = chosen.insert(t).second ? t : j;
        if (pick == j) chosen.insert(j);
        out.push_back(pick);
    }
    return out;
}

template <typename S>
Batch<S> ReplayBuffer::gather(const std::vector<std::size_t>& slots) const {
    const Eigen::Index n = static_cast<Eigen::Index>(slots.size());
    Batch<S> b;
    b.obs.resize(dim_, n);
    b.next_obs.resize(dim_, n);
    b.action.resize(1, n);
    b.reward.resize(1, n);
    b.done.resize(1, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const std::size_t s = slots[k];
        unpack(obs_bits_.data() + s * words_, b.obs.col(k).data());
        unpack(next_bits_.data() + s * words_, b.next_obs.col(k).data());
        b.action(0, k) = static_cast<S>(actions_[s]);
        b.reward(0, k) = static_cast<S>(rewards_[s]);
        b.done(0, k) = terminals_[s] ? S(1) : S(0);
    }
    return b;
}

Observation ReplayBuffer::observation_at(std::size_t slot, bool next) const {
    if (slot >= size_) {
        throw Error(ErrorKind::invalid_argument, "replay slot out of range");
    }
    Observation obs(scales_, obs_size_);
    const std::uint64_t* src = (next ? next_bits_ : obs_bits_).data() + slot * words_;
    for (int i = 0; i < dim_; ++i) {
        obs.data[i] = static_cast<std::uint8_t>((src[i >> 6] >> (i & 63)) & 1);
    }
    return obs;
}

template <typename S>
Mat<S> observation_matrix(const std::vector<const Observation*>& observations) {
    if (observations.empty()) return {};
    const Eigen::Index dim = static_cast<Eigen::Index>(observations.front()->data.size());
    Mat<S> m(dim, static_cast<Eigen::Index>(observations.size()));
    for (std::size_t k = 0; k < observations.size(); ++k) {
        const auto& d = observations[k]->data;
        if (static_cast<Eigen::Index>(d.size()) != dim) {
            throw Error(ErrorKind::shape_mismatch, "observations differ in size");
        }
        for (Eigen::Index i = 0; i < dim; ++i) m(i, static_cast<Eigen::Index>(k)) = static_cast<S>(d[i]);
    }
    return m;
}

template Batch<float> ReplayBuffer::gather<float>(const std::vector<std::size_t>&) const;
template Batch<double> ReplayBuffer::gather<double>(const std::vector<std::size_t>&) const;
template Mat<float> observation_matrix<float>(const std::vector<const Observation*>&);
template Mat<double> observation_matrix<double>(const std::vector<const Observation*>&);

}  // namespace uvwipe::rl
