#include "uvwipe/rl/nn.hpp"
#include "uvwipe/error.hpp"

#include <algorithm>
#include <cmath>

namespace uvwipe::rl {

namespace {

template <typename S>
Mat<S> uniform_matrix(int rows, int cols, double bound, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    Mat<S> m(rows, cols);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            m(i, j) = static_cast<S>(dist(rng));
        }
    }
    return m;
}

template <typename S>
Parameter<S> make_parameter(const std::string& name, Mat<S> value) {
    Parameter<S> p;
    p.name = name;
    p.value = std::move(value);
    p.zero_grad();
    return p;
}

}  // namespace

template <typename S>
void elu_inplace(Mat<S>& x) {
    // exp(x) - 1 vectorizes where expm1 does not; the clamp keeps exp finite.
    x = (x.array() < S(0)).select(x.array().min(S(0)).exp() - S(1), x.array());
}

template <typename S>
void elu_backward_inplace(const Mat<S>& y, Mat<S>& dy) {
    const S* a = y.data();
    S* g = dy.data();
    const Eigen::Index n = y.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (a[i] < S(0)) g[i] *= a[i] + S(1);
    }
}

template <typename S>
Linear<S>::Linear(const std::string& name, int in, int out, std::mt19937_64& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    weight = make_parameter<S>(name + ".weight", uniform_matrix<S>(out, in, bound, rng));
    bias = make_parameter<S>(name + ".bias", uniform_matrix<S>(out, 1, bound, rng));
}

template <typename S>
Mat<S> Linear<S>::forward(const Mat<S>& x) const {
    if (x.rows() != weight.value.cols()) {
        throw Error(ErrorKind::shape_mismatch, weight.name + ": expected " +
                                                   std::to_string(weight.value.cols()) +
                                                   " inputs, got " + std::to_string(x.rows()));
    }
    Mat<S> y = weight.value * x;
    y.colwise() += bias.value.col(0);
    return y;
}

template <typename S>
Mat<S> Linear<S>::backward(const Mat<S>& x, const Mat<S>& dy, bool input_grad, bool param_grad) {
    if (param_grad) {
        weight.grad.noalias() += dy * x.transpose();
        bias.grad.col(0) += dy.rowwise().sum();
    }
    if (!input_grad) return {};
    return weight.value.transpose() * dy;
}

template <typename S>
void Linear<S>::collect(ParamList<S>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
}

template <typename S>
Conv2d<S>::Conv2d(const std::string& name, int in_channels, int out_channels, int in_size,
                  int kernel, int stride, int padding, std::mt19937_64& rng)
    : in_channels_(in_channels),
      out_channels_(out_channels),
      in_size_(in_size),
      out_size_((in_size + 2 * padding - kernel) / stride + 1),
      kernel_(kernel),
      stride_(stride),
      padding_(padding) {
    if (out_size_ <= 0) {
        throw Error(ErrorKind::invalid_argument, name + ": input too small for the kernel");
    }
    const int fan_in = in_channels * kernel * kernel;
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    weight = make_parameter<S>(name + ".weight", uniform_matrix<S>(out_channels, fan_in, bound, rng));
    bias = make_parameter<S>(name + ".bias", uniform_matrix<S>(out_channels, 1, bound, rng));
}

// col is (out_pixels * batch) x (in_channels * k * k); row p * B + b holds
// the receptive field of output pixel p of sample b, so every tap copies a
// contiguous run of B values from the transposed input.
template <typename S>
void Conv2d<S>::im2col(const Mat<S>& x, Mat<S>& col) const {
    const Eigen::Index batch = x.cols();
    const int n = in_size_;
    const int m = out_size_;
    const Mat<S> xt = x.transpose();  // batch x features
    col.resize(static_cast<Eigen::Index>(m) * m * batch,
               static_cast<Eigen::Index>(in_channels_) * kernel_ * kernel_);
    for (int c = 0; c < in_channels_; ++c) {
        for (int ky = 0; ky < kernel_; ++ky) {
            for (int kx = 0; kx < kernel_; ++kx) {
                S* dst = col.col((c * kernel_ + ky) * kernel_ + kx).data();
                for (int oy = 0; oy < m; ++oy) {
                    const int iy = oy * stride_ - padding_ + ky;
                    for (int ox = 0; ox < m; ++ox, dst += batch) {
                        const int ix = ox * stride_ - padding_ + kx;
                        if (iy < 0 || iy >= n || ix < 0 || ix >= n) {
                            std::fill(dst, dst + batch, S(0));
                        } else {
                            const S* src = xt.col((c * n + iy) * n + ix).data();
                            std::copy(src, src + batch, dst);
                        }
                    }
                }
            }
        }
    }
}

template <typename S>
void Conv2d<S>::col2im(const Mat<S>& col, Mat<S>& dx) const {
    const int n = in_size_;
    const int m = out_size_;
    const Eigen::Index batch = col.rows() / (static_cast<Eigen::Index>(m) * m);
    Mat<S> dxt = Mat<S>::Zero(batch, static_cast<Eigen::Index>(in_channels_) * n * n);
    for (int c = 0; c < in_channels_; ++c) {
        for (int ky = 0; ky < kernel_; ++ky) {
            for (int kx = 0; kx < kernel_; ++kx) {
                const S* src = col.col((c * kernel_ + ky) * kernel_ + kx).data();
                for (int oy = 0; oy < m; ++oy) {
                    const int iy = oy * stride_ - padding_ + ky;
                    for (int ox = 0; ox < m; ++ox, src += batch) {
                        const int ix = ox * stride_ - padding_ + kx;
                        if (iy < 0 || iy >= n || ix < 0 || ix >= n) continue;
                        S* dst = dxt.col((c * n + iy) * n + ix).data();
                        for (Eigen::Index b = 0; b < batch; ++b) dst[b] += src[b];
                    }
                }
            }
        }
    }
    dx = dxt.transpose();
}

template <typename S>
Mat<S> Conv2d<S>::forward(const Mat<S>& x, Mat<S>& col) const {
    if (x.rows() != static_cast<Eigen::Index>(in_channels_) * in_size_ * in_size_) {
        throw Error(ErrorKind::shape_mismatch, weight.name + ": unexpected input size " +
                                                   std::to_string(x.rows()));
    }
    im2col(x, col);
    Mat<S> yt = col * weight.value.transpose();  // (pixels * batch) x out_channels
    yt.array().rowwise() += bias.value.col(0).transpose().array();
    const Eigen::Index pixels = static_cast<Eigen::Index>(out_size_) * out_size_;
    const Eigen::Index batch = x.cols();
    // Row p * B + b of column co becomes feature co * P + p of sample b.
    Mat<S> y(out_channels_ * pixels, batch);
    for (int co = 0; co < out_channels_; ++co) {
        y.middleRows(co * pixels, pixels) =
            Eigen::Map<const Mat<S>>(yt.col(co).data(), batch, pixels).transpose();
    }
    return y;
}

template <typename S>
Mat<S> Conv2d<S>::backward(const Mat<S>& col, const Mat<S>& dy, bool input_grad) {
    const Eigen::Index pixels = static_cast<Eigen::Index>(out_size_) * out_size_;
    const Eigen::Index batch = dy.cols();
    Mat<S> dyt(pixels * batch, out_channels_);
    for (int co = 0; co < out_channels_; ++co) {
        Eigen::Map<Mat<S>>(dyt.col(co).data(), batch, pixels) = dy.middleRows(co * pixels, pixels).transpose();
    }
    weight.grad.noalias() += dyt.transpose() * col;
    bias.grad.col(0) += dyt.colwise().sum().transpose();
    if (!input_grad) return {};
    const Mat<S> dcol = dyt * weight.value;
    Mat<S> dx;
    col2im(dcol, dx);
    return dx;
}

template <typename S>
void Conv2d<S>::collect(ParamList<S>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
}

template <typename S>
Mlp<S>::Mlp(const std::string& name, const std::vector<int>& sizes, bool activate_last,
            std::mt19937_64& rng)
    : activate_last_(activate_last) {
    if (sizes.size() < 2) {
        throw Error(ErrorKind::invalid_argument, name + ": an MLP needs at least two sizes");
    }
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        layers_.emplace_back(name + "." + std::to_string(i), sizes[i], sizes[i + 1], rng);
    }
}

template <typename S>
Mat<S> Mlp<S>::forward(const Mat<S>& x) const {
    Mat<S> h = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        h = layers_[i].forward(h);
        if (i + 1 < layers_.size() || activate_last_) elu_inplace(h);
    }
    return h;
}

template <typename S>
Mat<S> Mlp<S>::forward(const Mat<S>& x, Cache& cache) const {
    cache.inputs.clear();
    Mat<S> h = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        cache.inputs.push_back(h);
        h = layers_[i].forward(h);
        if (i + 1 < layers_.size() || activate_last_) elu_inplace(h);
    }
    cache.output = h;
    return h;
}

template <typename S>
Mat<S> Mlp<S>::backward(const Cache& cache, const Mat<S>& dy, bool input_grad, bool param_grad) {
    Mat<S> g = dy;
    for (std::size_t k = layers_.size(); k-- > 0;) {
        if (k + 1 < layers_.size() || activate_last_) {
            const Mat<S>& out = k + 1 < layers_.size() ? cache.inputs[k + 1] : cache.output;
            elu_backward_inplace(out, g);
        }
        g = layers_[k].backward(cache.inputs[k], g, input_grad || k > 0, param_grad);
    }
    return g;
}

template <typename S>
void Mlp<S>::collect(ParamList<S>& out) {
    for (auto& layer : layers_) layer.collect(out);
}

template <typename S>
Adam<S>::Adam(ParamList<S> params, AdamConfig config) : params_(std::move(params)), config_(config) {
    for (Parameter<S>* p : params_) {
        m_.push_back(Mat<S>::Zero(p->value.rows(), p->value.cols()));
        v_.push_back(Mat<S>::Zero(p->value.rows(), p->value.cols()));
    }
}

template <typename S>
void Adam<S>::step() {
    ++t_;
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    const S b1 = static_cast<S>(config_.beta1);
    const S b2 = static_cast<S>(config_.beta2);
    const S step = static_cast<S>(config_.lr / c1);
    const S inv_c2 = static_cast<S>(1.0 / c2);
    const S eps = static_cast<S>(config_.eps);
    for (std::size_t i = 0; i < params_.size(); ++i) {
        auto g = params_[i]->grad.array();
        m_[i].array() = b1 * m_[i].array() + (S(1) - b1) * g;
        v_[i].array() = b2 * v_[i].array() + (S(1) - b2) * g.square();
        params_[i]->value.array() -= step * m_[i].array() / ((v_[i].array() * inv_c2).sqrt() + eps);
    }
}

template <typename S>
void polyak_update(const ParamList<S>& online, const ParamList<S>& target, double tau) {
    const S t = static_cast<S>(tau);
    for (std::size_t i = 0; i < online.size(); ++i) {
        target[i]->value = (S(1) - t) * target[i]->value + t * online[i]->value;
    }
}

template <typename S>
void copy_values(const ParamList<S>& from, const ParamList<S>& to) {
    for (std::size_t i = 0; i < from.size(); ++i) {
        if (from[i]->value.rows() != to[i]->value.rows() ||
            from[i]->value.cols() != to[i]->value.cols()) {
            throw Error(ErrorKind::shape_mismatch, "cannot copy " + from[i]->name + " into " + to[i]->name);
        }
        to[i]->value = from[i]->value;
    }
}

#define UVWIPE_INSTANTIATE(S)                                                        \
    template void elu_inplace<S>(Mat<S>&);                                           \
    template void elu_backward_inplace<S>(const Mat<S>&, Mat<S>&);                   \
    template class Linear<S>;                                                        \
    template class Conv2d<S>;                                                        \
    template class Mlp<S>;                                                           \
    template class Adam<S>;                                                          \
    template void polyak_update<S>(const ParamList<S>&, const ParamList<S>&, double); \
    template void copy_values<S>(const ParamList<S>&, const ParamList<S>&);

UVWIPE_INSTANTIATE(float)
UVWIPE_INSTANTIATE(double)

#undef UVWIPE_INSTANTIATE

}  // namespace uvwipe::rl
