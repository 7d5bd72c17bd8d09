#include "support/rl_fixtures.hpp"

#include "uvwipe/error.hpp"
#include "uvwipe/rl/nn.hpp"
#include "uvwipe/rl/sgcnn.hpp"

#include <gtest/gtest.h>

using namespace uvwipe;
using namespace uvwipe::rl;

namespace {

Mat<double> random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat<double> m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    return m;
}

}  // namespace

TEST(Conv2d, MatchesDirectConvolution) {
    std::mt19937_64 rng(1);
    Conv2d<double> conv("c", 2, 3, 7, 3, 2, 1, rng);
    EXPECT_EQ(conv.out_size(), 4);
    const Mat<double> x = random_matrix(2 * 49, 2, rng);
    Mat<double> col;
    const Mat<double> y = conv.forward(x, col);
    for (int b = 0; b < 2; ++b) {
        for (int co = 0; co < 3; ++co) {
            for (int oy = 0; oy < 4; ++oy) {
                for (int ox = 0; ox < 4; ++ox) {
                    double sum = conv.bias.value(co, 0);
                    for (int c = 0; c < 2; ++c) {
                        for (int ky = 0; ky < 3; ++ky) {
                            for (int kx = 0; kx < 3; ++kx) {
                                const int iy = oy * 2 - 1 + ky;
                                const int ix = ox * 2 - 1 + kx;
                                if (iy < 0 || ix < 0 || iy >= 7 || ix >= 7) continue;
                                sum += conv.weight.value(co, (c * 3 + ky) * 3 + kx) * x(c * 49 + iy * 7 + ix, b);
                            }
                        }
                    }
                    EXPECT_NEAR(y(co * 16 + oy * 4 + ox, b), sum, 1e-12);
                }
            }
        }
    }
}

TEST(Conv2d, GradientsMatchFiniteDifferences) {
    std::mt19937_64 rng(2);
    Conv2d<double> conv("c", 3, 4, 8, 3, 2, 1, rng);
    const Mat<double> x = random_matrix(3 * 64, 3, rng);
    const Mat<double> w = random_matrix(conv.output_dim(), 3, rng);
    Mat<double> col;
    auto loss = [&] {
        conv.weight.zero_grad();
        conv.bias.zero_grad();
        Mat<double> y = conv.forward(x, col);
        elu_inplace(y);
        Mat<double> dy = w;
        elu_backward_inplace(y, dy);
        conv.backward(col, dy, false);
        return (y.array() * w.array()).sum();
    };
    ParamList<double> params;
    conv.collect(params);
    EXPECT_LT(fixtures::gradient_check(params, loss).worst_relative_error, 1e-6);

    // Input gradient.
    Mat<double> y = conv.forward(x, col);
    const Mat<double> dx = conv.backward(col, w, true);
    Mat<double> xp = x;
    for (int i : {0, 17, 100, 191}) {
        xp(i, 1) = x(i, 1) + 1e-6;
        const double up = (conv.forward(xp, col).array() * w.array()).sum();
        xp(i, 1) = x(i, 1) - 1e-6;
        const double down = (conv.forward(xp, col).array() * w.array()).sum();
        xp(i, 1) = x(i, 1);
        EXPECT_NEAR(dx(i, 1), (up - down) / 2e-6, 1e-7);
    }
}

TEST(Mlp, GradientsMatchFiniteDifferences) {
    std::mt19937_64 rng(3);
    Mlp<double> mlp("m", {5, 7, 6, 2}, false, rng);
    const Mat<double> x = random_matrix(5, 4, rng);
    const Mat<double> w = random_matrix(2, 4, rng);
    ParamList<double> params;
    mlp.collect(params);
    auto loss = [&] {
        zero_grads(params);
        typename Mlp<double>::Cache cache;
        const Mat<double> y = mlp.forward(x, cache);
        mlp.backward(cache, w, false);
        return (y.array() * w.array()).sum();
    };
    EXPECT_LT(fixtures::gradient_check(params, loss).worst_relative_error, 1e-6);
}

TEST(Mlp, RejectsWrongInputSize) {
    std::mt19937_64 rng(3);
    Mlp<float> mlp("m", {5, 3}, false, rng);
    EXPECT_THROW((void)mlp.forward(Mat<float>::Zero(4, 1)), Error);
}

TEST(Adam, MinimizesQuadratic) {
    Parameter<double> p{"p", Mat<double>::Constant(3, 1, 5.0), Mat<double>::Zero(3, 1)};
    Adam<double> opt({&p}, AdamConfig{0.05});
    for (int i = 0; i < 2000; ++i) {
        p.grad = 2.0 * (p.value.array() - 1.0).matrix();
        opt.step();
    }
    EXPECT_LT((p.value.array() - 1.0).abs().maxCoeff(), 1e-3);
}

TEST(Polyak, GeometricDecayWithFrozenOnline) {
    std::mt19937_64 rng(4);
    Parameter<double> online{"o", random_matrix(6, 5, rng), {}};
    Parameter<double> target{"t", random_matrix(6, 5, rng), {}};
    const double tau = 0.005;
    const double initial = (target.value - online.value).norm();
    for (int k = 1; k <= 2000; ++k) {
        polyak_update<double>({&online}, {&target}, tau);
        if (k % 250 == 0) {
            const double expected = initial * std::pow(1.0 - tau, k);
            EXPECT_NEAR((target.value - online.value).norm() / expected, 1.0, 1e-9);
        }
    }
}

TEST(Sgcnn, ZeroObservationIsFinite) {
    std::mt19937_64 rng(5);
    SgcnnConfig cfg;
    cfg.obs_size = 16;
    Sgcnn<float> net("x", cfg, rng);
    const Mat<float> f = net.forward(Mat<float>::Zero(net.input_dim(), 2));
    EXPECT_EQ(f.rows(), 256);
    EXPECT_TRUE(f.allFinite());
}

TEST(Sgcnn, DeterministicAndScalesNotTied) {
    std::mt19937_64 rng(6);
    SgcnnConfig cfg;
    cfg.obs_size = 16;
    cfg.conv_channels = {8, 8, 8};
    cfg.fc_widths = {32, 32};
    Sgcnn<double> net("x", cfg, rng);
    std::bernoulli_distribution bit(0.5);
    Mat<double> obs(net.input_dim(), 1);
    for (Eigen::Index i = 0; i < obs.size(); ++i) obs.data()[i] = bit(rng);
    const Mat<double> a = net.forward(obs);
    const Mat<double> b = net.forward(obs);
    EXPECT_EQ(a, b);
    const Eigen::Index block = net.input_dim() / 2;
    Mat<double> swapped(obs.rows(), 1);
    swapped.topRows(block) = obs.bottomRows(block);
    swapped.bottomRows(block) = obs.topRows(block);
    EXPECT_GT((net.forward(swapped) - a).norm(), 1e-6);
    EXPECT_THROW((void)net.forward(Mat<double>::Zero(5, 1)), Error);
}

TEST(Sgcnn, GradientsMatchFiniteDifferences) {
    std::mt19937_64 rng(7);
    SgcnnConfig cfg;
    cfg.obs_size = 8;
    cfg.conv_channels = {3, 4};
    cfg.fc_widths = {6};
    Sgcnn<double> net("x", cfg, rng);
    std::bernoulli_distribution bit(0.5);
    Mat<double> obs(net.input_dim(), 2);
    for (Eigen::Index i = 0; i < obs.size(); ++i) obs.data()[i] = bit(rng);
    const Mat<double> w = random_matrix(6, 2, rng);
    ParamList<double> params;
    net.collect(params);
    auto loss = [&] {
        zero_grads(params);
        typename Sgcnn<double>::Cache cache;
        const Mat<double> f = net.forward(obs, cache);
        net.backward(cache, w);
        return (f.array() * w.array()).sum();
    };
    EXPECT_LT(fixtures::gradient_check(params, loss).worst_relative_error, 1e-6);
}
