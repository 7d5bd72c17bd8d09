#include "uvwipe/rl/sgcnn.hpp"
#include "uvwipe/error.hpp"

namespace uvwipe::rl {

template <typename S>
Sgcnn<S>::Sgcnn(const std::string& name, const SgcnnConfig& config, std::mt19937_64& rng)
    : config_(config) {
    if (config.scales <= 0 || config.conv_channels.empty() || config.fc_widths.empty()) {
        throw Error(ErrorKind::invalid_argument, name + ": empty extractor configuration");
    }
    const int padding = config.kernel / 2;
    for (int s = 0; s < config.scales; ++s) {
        std::vector<Conv2d<S>> group;
        int channels = 3;
        int size = config.obs_size;
        for (std::size_t l = 0; l < config.conv_channels.size(); ++l) {
            group.emplace_back(name + ".scale" + std::to_string(s) + ".conv" + std::to_string(l),
                               channels, config.conv_channels[l], size, config.kernel, config.stride,
                               padding, rng);
            channels = config.conv_channels[l];
            size = group.back().out_size();
        }
        group_dim_ = group.back().output_dim();
        groups_.push_back(std::move(group));
    }
    std::vector<int> sizes{group_dim_ * config.scales};
    sizes.insert(sizes.end(), config.fc_widths.begin(), config.fc_widths.end());
    fc_ = Mlp<S>(name + ".fc", sizes, true, rng);
}

template <typename S>
Mat<S> Sgcnn<S>::run(const Mat<S>& obs, Cache* cache) const {
    if (obs.rows() != input_dim()) {
        throw Error(ErrorKind::shape_mismatch, "observation has " + std::to_string(obs.rows()) +
                                                   " values, extractor expects " +
                                                   std::to_string(input_dim()));
    }
    const Eigen::Index block = 3 * config_.obs_size * config_.obs_size;
    Mat<S> fused(static_cast<Eigen::Index>(group_dim_) * config_.scales, obs.cols());
    if (cache) {
        cache->cols.assign(config_.scales, {});
        cache->acts.assign(config_.scales, {});
    }
    for (int s = 0; s < config_.scales; ++s) {
        Mat<S> h = obs.middleRows(s * block, block);
        for (const Conv2d<S>& conv : groups_[s]) {
            Mat<S> col;
            h = conv.forward(h, col);
            elu_inplace(h);
            if (cache) {
                cache->cols[s].push_back(std::move(col));
                cache->acts[s].push_back(h);
            }
        }
        fused.middleRows(static_cast<Eigen::Index>(s) * group_dim_, group_dim_) = h;
    }
    return cache ? fc_.forward(fused, cache->fc) : fc_.forward(fused);
}

template <typename S>
Mat<S> Sgcnn<S>::forward(const Mat<S>& obs) const {
    return run(obs, nullptr);
}

template <typename S>
Mat<S> Sgcnn<S>::forward(const Mat<S>& obs, Cache& cache) const {
    return run(obs, &cache);
}

template <typename S>
void Sgcnn<S>::backward(const Cache& cache, const Mat<S>& dfeatures) {
    const Mat<S> dfused = fc_.backward(cache.fc, dfeatures, true);
    for (int s = 0; s < config_.scales; ++s) {
        Mat<S> g = dfused.middleRows(static_cast<Eigen::Index>(s) * group_dim_, group_dim_);
        for (std::size_t l = groups_[s].size(); l-- > 0;) {
            elu_backward_inplace(cache.acts[s][l], g);
            g = groups_[s][l].backward(cache.cols[s][l], g, l > 0);
        }
    }
}

template <typename S>
void Sgcnn<S>::collect(ParamList<S>& out) {
    for (auto& group : groups_) {
        for (auto& conv : group) conv.collect(out);
    }
    fc_.collect(out);
}

template class Sgcnn<float>;
template class Sgcnn<double>;

}  // namespace uvwipe::rl
