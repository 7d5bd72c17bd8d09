#pragma once

#include "uvwipe/rl/nn.hpp"

#include <string>
#include <vector>

namespace uvwipe::rl {

struct SgcnnConfig {
    int obs_size = 64;
    int scales = 2;
    std::vector<int> conv_channels{16, 32, 32};
    int kernel = 3;
    int stride = 2;
    std::vector<int> fc_widths{256, 256};
};

// One convolution group per observation scale (weights not shared), the
// flattened group outputs concatenated, then fully connected layers.
template <typename S>
class Sgcnn {
public:
    struct Cache {
        std::vector<std::vector<Mat<S>>> cols;  // [scale][layer]
        std::vector<std::vector<Mat<S>>> acts;  // [scale][layer] post-activation
        typename Mlp<S>::Cache fc;
    };

    Sgcnn() = default;
    Sgcnn(const std::string& name, const SgcnnConfig& config, std::mt19937_64& rng);

    // obs: (scales * 3 * size * size) x batch, scale-major as in Observation.
    [[nodiscard]] Mat<S> forward(const Mat<S>& obs) const;
    Mat<S> forward(const Mat<S>& obs, Cache& cache) const;
    void backward(const Cache& cache, const Mat<S>& dfeatures);
    void collect(ParamList<S>& out);

    [[nodiscard]] int input_dim() const { return config_.scales * 3 * config_.obs_size * config_.obs_size; }
    [[nodiscard]] int feature_dim() const { return fc_.out_features(); }
    [[nodiscard]] const SgcnnConfig& config() const { return config_; }

private:
    Mat<S> run(const Mat<S>& obs, Cache* cache) const;

    SgcnnConfig config_;
    std::vector<std::vector<Conv2d<S>>> groups_;
    Mlp<S> fc_;
    int group_dim_ = 0;
};

}  // namespace uvwipe::rl
