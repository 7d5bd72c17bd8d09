#pragma once

#include "uvwipe/coverage_env.hpp"
#include "uvwipe/rl/sac.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace uvwipe::rl {

// FIFO ring of transitions with observations stored one bit per value.
class ReplayBuffer {
public:
    ReplayBuffer(std::size_t capacity, int observation_dim);

    void add(const Observation& obs, double action, double reward, const Observation& next_obs,
             bool terminal);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
    [[nodiscard]] int observation_dim() const noexcept { return dim_; }
    [[nodiscard]] std::uint64_t total_inserted() const noexcept { return inserted_; }
    // Insertion index (0-based, over the buffer's lifetime) of the stored
    // transition in `slot`, and of the oldest one still held.
    [[nodiscard]] std::uint64_t id_at(std::size_t slot) const { return ids_.at(slot); }
    [[nodiscard]] std::uint64_t oldest_id() const;

    // `batch` distinct slots drawn uniformly.
    [[nodiscard]] std::vector<std::size_t> sample_slots(std::size_t batch, std::mt19937_64& rng) const;

    template <typename S>
    [[nodiscard]] Batch<S> gather(const std::vector<std::size_t>& slots) const;

    [[nodiscard]] Observation observation_at(std::size_t slot, bool next) const;
    [[nodiscard]] double action_at(std::size_t slot) const { return actions_.at(slot); }
    [[nodiscard]] double reward_at(std::size_t slot) const { return rewards_.at(slot); }
    [[nodiscard]] bool terminal_at(std::size_t slot) const { return terminals_.at(slot) != 0; }

private:
    void pack(const Observation& obs, std::uint64_t* dst) const;
    template <typename S>
    void unpack(const std::uint64_t* src, S* dst) const;

    std::size_t capacity_;
    int dim_;
    std::size_t words_;
    std::size_t size_ = 0;
    std::size_t next_ = 0;
    std::uint64_t inserted_ = 0;
    int scales_ = 0;
    int obs_size_ = 0;
    std::vector<std::uint64_t> obs_bits_;
    std::vector<std::uint64_t> next_bits_;
    std::vector<float> actions_;
    std::vector<float> rewards_;
    std::vector<std::uint8_t> terminals_;
    std::vector<std::uint64_t> ids_;
};

// Observations as one (scales * 3 * size * size) column each.
template <typename S>
Mat<S> observation_matrix(const std::vector<const Observation*>& observations);

template <typename S>
Mat<S> observation_matrix(const Observation& observation) {
    return observation_matrix<S>(std::vector<const Observation*>{&observation});
}

}  // namespace uvwipe::rl
