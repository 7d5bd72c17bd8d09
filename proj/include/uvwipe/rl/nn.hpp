#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace uvwipe::rl {

// Activations are stored one sample per column.
template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <typename S>
struct Parameter {
    std::string name;
    Mat<S> value;
    Mat<S> grad;

    void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

template <typename S>
using ParamList = std::vector<Parameter<S>*>;

template <typename S>
void zero_grads(const ParamList<S>& params) {
    for (Parameter<S>* p : params) p->zero_grad();
}

// ELU with alpha = 1, applied in place.
template <typename S>
void elu_inplace(Mat<S>& x);

// dy *= elu'(z), expressed through the activation output y = elu(z).
template <typename S>
void elu_backward_inplace(const Mat<S>& y, Mat<S>& dy);

template <typename S>
class Linear {
public:
    Linear() = default;
    Linear(const std::string& name, int in, int out, std::mt19937_64& rng);

    [[nodiscard]] Mat<S> forward(const Mat<S>& x) const;
    // Accumulates weight and bias gradients unless `param_grad` is false;
    // returns dL/dx when requested.
    Mat<S> backward(const Mat<S>& x, const Mat<S>& dy, bool input_grad, bool param_grad = true);
    void collect(ParamList<S>& out);

    [[nodiscard]] int in_features() const { return static_cast<int>(weight.value.cols()); }
    [[nodiscard]] int out_features() const { return static_cast<int>(weight.value.rows()); }

    Parameter<S> weight;
    Parameter<S> bias;
};

// Square-kernel 2D convolution with zero padding. Each input column is one
// sample laid out channel-major, then row-major.
template <typename S>
class Conv2d {
public:
    Conv2d() = default;
    Conv2d(const std::string& name, int in_channels, int out_channels, int in_size, int kernel,
           int stride, int padding, std::mt19937_64& rng);

    // `col` receives the unfolded input needed by backward.
    [[nodiscard]] Mat<S> forward(const Mat<S>& x, Mat<S>& col) const;
    Mat<S> backward(const Mat<S>& col, const Mat<S>& dy, bool input_grad);
    void collect(ParamList<S>& out);

    [[nodiscard]] int in_channels() const { return in_channels_; }
    [[nodiscard]] int out_channels() const { return out_channels_; }
    [[nodiscard]] int in_size() const { return in_size_; }
    [[nodiscard]] int out_size() const { return out_size_; }
    [[nodiscard]] int output_dim() const { return out_channels_ * out_size_ * out_size_; }

    Parameter<S> weight;  // out_channels x (in_channels * kernel * kernel)
    Parameter<S> bias;

private:
    void im2col(const Mat<S>& x, Mat<S>& col) const;
    void col2im(const Mat<S>& col, Mat<S>& dx) const;

    int in_channels_ = 0;
    int out_channels_ = 0;
    int in_size_ = 0;
    int out_size_ = 0;
    int kernel_ = 0;
    int stride_ = 1;
    int padding_ = 0;
};

// Linear layers with ELU between them; the last layer is linear unless
// `activate_last` is set.
template <typename S>
class Mlp {
public:
    struct Cache {
        std::vector<Mat<S>> inputs;  // input of each layer
        Mat<S> output;
    };

    Mlp() = default;
    Mlp(const std::string& name, const std::vector<int>& sizes, bool activate_last,
        std::mt19937_64& rng);

    [[nodiscard]] Mat<S> forward(const Mat<S>& x) const;
    Mat<S> forward(const Mat<S>& x, Cache& cache) const;
    Mat<S> backward(const Cache& cache, const Mat<S>& dy, bool input_grad, bool param_grad = true);
    void collect(ParamList<S>& out);

    [[nodiscard]] int in_features() const { return layers_.front().in_features(); }
    [[nodiscard]] int out_features() const { return layers_.back().out_features(); }

private:
    std::vector<Linear<S>> layers_;
    bool activate_last_ = false;
};

struct AdamConfig {
    double lr = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

template <typename S>
class Adam {
public:
    Adam() = default;
    Adam(ParamList<S> params, AdamConfig config);

    void step();
    [[nodiscard]] const ParamList<S>& params() const { return params_; }
    [[nodiscard]] long steps() const { return t_; }

private:
    ParamList<S> params_;
    AdamConfig config_;
    std::vector<Mat<S>> m_;
    std::vector<Mat<S>> v_;
    long t_ = 0;
};

// target <- (1 - tau) * target + tau * online, parameter by parameter.
template <typename S>
void polyak_update(const ParamList<S>& online, const ParamList<S>& target, double tau);

// Copies values between parameter lists of identical shapes.
template <typename S>
void copy_values(const ParamList<S>& from, const ParamList<S>& to);

}  // namespace uvwipe::rl
