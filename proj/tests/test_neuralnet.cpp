#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "beamforge/adam.hpp"
#include "beamforge/checkpoint.hpp"
#include "beamforge/conv_net.hpp"
#include "beamforge/gradcheck.hpp"
#include "beamforge/loss.hpp"
#include "doctest.h"

using namespace beamforge;

namespace {

Tensor tensor1(const std::vector<double>& v) {
  Tensor t(1, static_cast<int>(v.size()));
  t.v = v;
  return t;
}

ConvParams conv_layer(int in_ch, int out_ch, int kernel) {
  ConvParams p;
  p.in_ch = in_ch;
  p.out_ch = out_ch;
  p.kernel = kernel;
  p.w.assign(static_cast<std::size_t>(out_ch) * in_ch * kernel, 0.0);
  p.b.assign(static_cast<std::size_t>(out_ch), 0.0);
  return p;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("conv forward: hand-computed cross-correlation with zero padding") {
  ConvParams p = conv_layer(1, 1, 3);
  p.w = {1.0, 0.0, -1.0};
  const Tensor y = conv1d_forward(tensor1({1.0, 2.0, 3.0}), p, false);
  CHECK(y.at(0, 0) == doctest::Approx(-2.0));
  CHECK(y.at(0, 1) == doctest::Approx(-2.0));
  CHECK(y.at(0, 2) == doctest::Approx(2.0));

  const Tensor yr = conv1d_forward(tensor1({1.0, 2.0, 3.0}), p, true);
  CHECK(yr.at(0, 0) == doctest::Approx(0.0));
  CHECK(yr.at(0, 1) == doctest::Approx(0.0));
  CHECK(yr.at(0, 2) == doctest::Approx(2.0));
}

TEST_CASE("conv forward: center-tap kernel is the identity") {
  ConvParams p = conv_layer(1, 1, 3);
  p.w = {0.0, 1.0, 0.0};
  RngStream rng = derive_stream(1, 2);
  std::vector<double> x(10);
  for (double& v : x) v = rng.normal();
  const Tensor y = conv1d_forward(tensor1(x), p, false);
  for (int i = 0; i < 10; ++i) CHECK(y.at(0, i) == doctest::Approx(x[i]));
}

TEST_CASE("conv forward: even kernel pads 4 left, 5 right") {
  ConvParams p = conv_layer(1, 1, 10);
  // Weight on the first tap reads position i - 4.
  p.w[0] = 1.0;
  std::vector<double> x(12);
  for (int i = 0; i < 12; ++i) x[i] = i + 1.0;
  const Tensor y = conv1d_forward(tensor1(x), p, false);
  CHECK(y.len == 12);
  for (int i = 0; i < 4; ++i) CHECK(y.at(0, i) == doctest::Approx(0.0));
  for (int i = 4; i < 12; ++i) CHECK(y.at(0, i) == doctest::Approx(x[i - 4]));
}

TEST_CASE("conv forward rejects mismatched channels") {
  ConvParams p = conv_layer(2, 1, 3);
  CHECK_THROWS_AS(conv1d_forward(tensor1({1.0, 2.0}), p, false),
                  std::invalid_argument);
}

TEST_CASE("max pool semantics") {
  std::vector<int> argmax;
  const Tensor y = maxpool_forward(tensor1({1.0, 3.0, 2.0, 0.0}), argmax);
  CHECK(y.at(0, 0) == 3.0);
  CHECK(y.at(0, 1) == 2.0);
  CHECK(argmax[0] == 1);
  CHECK(argmax[1] == 2);

  const Tensor tie = maxpool_forward(tensor1({5.0, 5.0}), argmax);
  CHECK(tie.at(0, 0) == 5.0);
  CHECK(argmax[0] == 0);  // tie keeps the earlier position

  const Tensor flat = maxpool_forward(tensor1({2.0, 2.0, 2.0, 2.0}), argmax);
  CHECK(flat.len == 2);
  CHECK(flat.at(0, 0) == 2.0);
  CHECK(flat.at(0, 1) == 2.0);

  CHECK_THROWS_AS(maxpool_forward(tensor1({1.0, 2.0, 3.0}), argmax),
                  std::invalid_argument);
}

TEST_CASE("fc forward closed forms and oracle") {
  FcParams p;
  p.in_dim = 2;
  p.out_dim = 2;
  p.w = {1.0, 2.0, 3.0, 4.0};
  p.b = {0.0, 1.0};
  const std::vector<double> y = fc_forward({1.0, 1.0}, p);
  CHECK(y[0] == doctest::Approx(3.0));
  CHECK(y[1] == doctest::Approx(8.0));

  FcParams eye;
  eye.in_dim = 3;
  eye.out_dim = 3;
  eye.w = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  eye.b = {0, 0, 0};
  const std::vector<double> same = fc_forward({4.0, 5.0, 6.0}, eye);
  CHECK(same == std::vector<double>{4.0, 5.0, 6.0});

  RngStream rng = derive_stream(8, 1);
  FcParams rand_p;
  rand_p.in_dim = 7;
  rand_p.out_dim = 5;
  rand_p.w.resize(35);
  rand_p.b.resize(5);
  for (double& v : rand_p.w) v = rng.normal();
  for (double& v : rand_p.b) v = rng.normal();
  std::vector<double> x(7);
  for (double& v : x) v = rng.normal();
  const std::vector<double> got = fc_forward(x, rand_p);
  for (int o = 0; o < 5; ++o) {
    double acc = rand_p.b[o];
    for (int i = 0; i < 7; ++i) acc += rand_p.w[o * 7 + i] * x[i];
    CHECK(std::abs(got[o] - acc) < 1e-13);
  }

  CHECK_THROWS_AS(fc_forward({1.0}, p), std::invalid_argument);
}

TEST_CASE("network forward shapes for both presets at M = 128") {
  for (const Preset preset : {Preset::kNps1, Preset::kNps2}) {
    const ArchitectureSpec arch = preset == Preset::kNps1
                                      ? ArchitectureSpec::nps1(256, 256)
                                      : ArchitectureSpec::nps2(256, 256);
    RngStream rng = derive_stream(3, 0);
    const NetworkParameters params = init_params(arch, rng);
    ForwardCache cache;
    std::vector<double> x(256);
    for (double& v : x) v = rng.normal();
    const std::vector<double>& logits = network_forward(x, params, cache);

    CHECK(cache.postact[0].len == 256);
    CHECK(cache.pooled[0].len == 128);
    CHECK(cache.pooled[1].len == 64);
    CHECK(cache.pooled[2].len == 32);
    const int flatten = preset == Preset::kNps1 ? 64 * 32 : 128 * 32;
    CHECK(static_cast<int>(cache.flat.size()) == flatten);
    CHECK(logits.size() == 256);
  }
}

TEST_CASE("all-zero parameters produce all-zero logits") {
  const ArchitectureSpec arch = gradcheck_toy_arch();
  const NetworkParameters params = NetworkParameters::zeros(arch);
  ForwardCache cache;
  const std::vector<double>& logits =
      network_forward(std::vector<double>(16, 1.0), params, cache);
  for (double q : logits) CHECK(q == 0.0);
}

TEST_CASE("network forward rejects wrong input length") {
  const ArchitectureSpec arch = gradcheck_toy_arch();
  const NetworkParameters params = NetworkParameters::zeros(arch);
  ForwardCache cache;
  CHECK_THROWS_AS(network_forward(std::vector<double>(24, 0.0), params, cache),
                  std::invalid_argument);
}

TEST_CASE("loss anchors") {
  const std::vector<double> zeros(256, 0.0);
  std::vector<double> labels(256, 0.0);
  labels[3] = 1.0;
  CHECK(std::abs(sigmoid_ce_loss(zeros, labels) - std::log(2.0)) < 1e-12);

  CHECK(std::abs(sigmoid_ce_loss({10.0}, {1.0}) -
                 std::log1p(std::exp(-10.0))) < 1e-12);
  CHECK(sigmoid_ce_loss({10.0}, {1.0}) == doctest::Approx(4.5399e-5).epsilon(1e-4));
  CHECK(std::abs(sigmoid_ce_loss({10.0}, {0.0}) -
                 (10.0 + std::log1p(std::exp(-10.0)))) < 1e-12);
}

TEST_CASE("loss is non-negative and stable for huge logits") {
  RngStream rng = derive_stream(14, 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> logits(16);
    std::vector<double> labels(16);
    for (double& v : logits) v = rng.uniform(-1e3, 1e3);
    for (double& v : labels) v = rng.bounded(2) ? 1.0 : 0.0;
    const double loss = sigmoid_ce_loss(logits, labels);
    CHECK(loss >= 0.0);
    CHECK(std::isfinite(loss));
  }
}

TEST_CASE("loss decreases as the correct logit grows") {
  double prev = sigmoid_ce_loss({-5.0}, {1.0});
  for (double q = -4.0; q <= 5.0; q += 1.0) {
    const double cur = sigmoid_ce_loss({q}, {1.0});
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("logit gradient closed forms") {
  std::vector<double> dlogits;
  std::vector<double> logits(256, 0.0);
  std::vector<double> labels(256, 0.0);
  labels[0] = 1.0;
  sigmoid_ce_grad(logits, labels, dlogits);
  CHECK(dlogits[0] == doctest::Approx(-0.5 / 256.0));
  CHECK(dlogits[1] == doctest::Approx(0.5 / 256.0));
}

TEST_CASE("fc bias gradient at zero logits and labels is 0.5/N per output") {
  const ArchitectureSpec arch = gradcheck_toy_arch();
  const NetworkParameters params = NetworkParameters::zeros(arch);
  ForwardCache cache;
  network_forward(std::vector<double>(16, 0.5), params, cache);
  NetworkParameters grads = NetworkParameters::zeros(arch);
  network_backward(cache, params, std::vector<double>(8, 0.0), grads);
  for (double g : grads.fc.b) CHECK(g == doctest::Approx(0.5 / 8.0));
}

TEST_CASE("backprop matches central finite differences on the toy network") {
  const GradCheckResult result = run_gradient_check(gradcheck_toy_arch(), 4, 99);
  CHECK(result.max_rel_error < 1e-6);
}

TEST_CASE("per-layer adjoints match finite differences") {
  // Scalar objective J = sum_i c_i y_i probes each layer's backward pass.
  RngStream rng = derive_stream(55, 0);
  const double h = 1e-6;

  SUBCASE("conv layer, with ReLU") {
    ConvParams p = conv_layer(2, 3, 5);
    for (double& v : p.w) v = rng.normal();
    for (double& v : p.b) v = rng.normal() * 0.1;
    Tensor x(2, 12);
    for (double& v : x.v) v = rng.normal();
    Tensor c(3, 12);
    for (double& v : c.v) v = rng.normal();

    Tensor preact;
    const Tensor y = conv1d_forward(x, p, true, &preact);
    Tensor dy = c;
    Tensor dx;
    ConvParams grad;
    conv1d_backward(x, p, preact, true, dy, dx, grad);

    auto objective = [&](const Tensor& xin, const ConvParams& pin) {
      const Tensor yy = conv1d_forward(xin, pin, true);
      double j = 0.0;
      for (std::size_t i = 0; i < yy.v.size(); ++i) j += c.v[i] * yy.v[i];
      return j;
    };

    for (std::size_t i = 0; i < x.v.size(); ++i) {
      Tensor xp = x, xm = x;
      xp.v[i] += h;
      xm.v[i] -= h;
      const double fd = (objective(xp, p) - objective(xm, p)) / (2 * h);
      CHECK(std::abs(dx.v[i] - fd) < 1e-6);
    }
    for (std::size_t i = 0; i < p.w.size(); ++i) {
      ConvParams pp = p, pm = p;
      pp.w[i] += h;
      pm.w[i] -= h;
      const double fd = (objective(x, pp) - objective(x, pm)) / (2 * h);
      CHECK(std::abs(grad.w[i] - fd) < 1e-6);
    }
    for (std::size_t i = 0; i < p.b.size(); ++i) {
      ConvParams pp = p, pm = p;
      pp.b[i] += h;
      pm.b[i] -= h;
      const double fd = (objective(x, pp) - objective(x, pm)) / (2 * h);
      CHECK(std::abs(grad.b[i] - fd) < 1e-6);
    }
  }

  SUBCASE("max pool routes gradient to the argmax") {
    Tensor x(2, 8);
    for (double& v : x.v) v = rng.normal();
    Tensor c(2, 4);
    for (double& v : c.v) v = rng.normal();
    std::vector<int> argmax;
    maxpool_forward(x, argmax);
    const Tensor dx = maxpool_backward(c, argmax, 8);

    auto objective = [&](const Tensor& xin) {
      std::vector<int> am;
      const Tensor yy = maxpool_forward(xin, am);
      double j = 0.0;
      for (std::size_t i = 0; i < yy.v.size(); ++i) j += c.v[i] * yy.v[i];
      return j;
    };
    for (std::size_t i = 0; i < x.v.size(); ++i) {
      Tensor xp = x, xm = x;
      xp.v[i] += h;
      xm.v[i] -= h;
      const double fd = (objective(xp) - objective(xm)) / (2 * h);
      CHECK(std::abs(dx.v[i] - fd) < 1e-6);
    }
  }

  SUBCASE("fully connected layer") {
    FcParams p;
    p.in_dim = 6;
    p.out_dim = 4;
    p.w.resize(24);
    p.b.resize(4);
    for (double& v : p.w) v = rng.normal();
    for (double& v : p.b) v = rng.normal();
    std::vector<double> x(6);
    for (double& v : x) v = rng.normal();
    std::vector<double> c(4);
    for (double& v : c) v = rng.normal();

    std::vector<double> dx;
    FcParams grad;
    fc_backward(x, p, c, dx, grad);

    auto objective = [&](const std::vector<double>& xin, const FcParams& pin) {
      const std::vector<double> yy = fc_forward(xin, pin);
      double j = 0.0;
      for (std::size_t i = 0; i < yy.size(); ++i) j += c[i] * yy[i];
      return j;
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::vector<double> xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      CHECK(std::abs(dx[i] - (objective(xp, p) - objective(xm, p)) / (2 * h)) <
            1e-6);
    }
    for (std::size_t i = 0; i < p.w.size(); ++i) {
      FcParams pp = p, pm = p;
      pp.w[i] += h;
      pm.w[i] -= h;
      CHECK(std::abs(grad.w[i] -
                     (objective(x, pp) - objective(x, pm)) / (2 * h)) < 1e-6);
    }
  }
}

TEST_CASE("forward and backward are bit-reproducible") {
  const ArchitectureSpec arch = gradcheck_toy_arch();
  RngStream rng = derive_stream(71, 0);
  const NetworkParameters params = init_params(arch, rng);
  std::vector<double> x(16);
  for (double& v : x) v = rng.normal();
  std::vector<double> labels(8, 0.0);
  labels[2] = 1.0;

  ForwardCache c1, c2;
  const std::vector<double> l1 = network_forward(x, params, c1);
  const std::vector<double> l2 = network_forward(x, params, c2);
  CHECK(l1 == l2);

  NetworkParameters g1 = NetworkParameters::zeros(arch);
  NetworkParameters g2 = NetworkParameters::zeros(arch);
  network_backward(c1, params, labels, g1);
  network_backward(c2, params, labels, g2);
  CHECK(g1.fc.w == g2.fc.w);
  CHECK(g1.conv[0].w == g2.conv[0].w);
}

TEST_CASE("adam single-step closed form") {
  const ArchitectureSpec arch = gradcheck_toy_arch();
  NetworkParameters params = NetworkParameters::zeros(arch);
  NetworkParameters grads = NetworkParameters::zeros(arch);
  AdamState state = AdamState::zeros_like(arch);
  grads.fc.b[0] = 2.0;
  adam_step(params, grads, state, 0.01);
  // -lr * g / (|g| + eps) on the first step.
  const double expect = -0.01 * 2.0 / (2.0 + 1e-8);
  CHECK(std::abs(params.fc.b[0] - expect) < 1e-12);
  CHECK(state.step == 1);
}

TEST_CASE("adam leaves parameters alone on zero gradient") {
  const ArchitectureSpec arch = gradcheck_toy_arch();
  RngStream rng = derive_stream(4, 4);
  NetworkParameters params = init_params(arch, rng);
  const NetworkParameters before = params;
  NetworkParameters grads = NetworkParameters::zeros(arch);
  AdamState state = AdamState::zeros_like(arch);
  adam_step(params, grads, state, 0.01);
  CHECK(params.fc.w == before.fc.w);
  CHECK(params.conv[1].w == before.conv[1].w);
  CHECK(state.step == 1);
}

TEST_CASE("adam first step moves against the gradient") {
  const ArchitectureSpec arch = gradcheck_toy_arch();
  RngStream rng = derive_stream(4, 5);
  NetworkParameters params = NetworkParameters::zeros(arch);
  NetworkParameters grads = NetworkParameters::zeros(arch);
  for (double& g : grads.fc.w) g = rng.normal();
  AdamState state = AdamState::zeros_like(arch);
  adam_step(params, grads, state, 0.01);
  for (std::size_t i = 0; i < grads.fc.w.size(); ++i) {
    if (grads.fc.w[i] != 0.0) {
      CHECK(params.fc.w[i] * grads.fc.w[i] < 0.0);
    }
  }
}

TEST_CASE("init_params: deterministic, bounded, correct variance") {
  const ArchitectureSpec arch = ArchitectureSpec::custom(64, 16, 5, {100, 200, 8});
  RngStream r1 = derive_stream(10, 0);
  RngStream r2 = derive_stream(10, 0);
  const NetworkParameters a = init_params(arch, r1);
  const NetworkParameters b = init_params(arch, r2);
  CHECK(a.conv[1].w == b.conv[1].w);
  CHECK(a.fc.w == b.fc.w);

  // conv2: fan_in = 100 * 5, bound = sqrt(6/500); 200*100*5 = 1e5 draws.
  const double bound = std::sqrt(6.0 / 500.0);
  double sum_sq = 0.0;
  for (double w : a.conv[1].w) {
    CHECK(std::abs(w) <= bound);
    sum_sq += w * w;
  }
  const double var = sum_sq / static_cast<double>(a.conv[1].w.size());
  CHECK(std::abs(var - bound * bound / 3.0) < 0.02 * bound * bound / 3.0);

  for (double bias : a.conv[0].b) CHECK(bias == 0.0);
  for (double bias : a.fc.b) CHECK(bias == 0.0);
}

TEST_CASE("checkpoint round-trip is bit-identical") {
  const ArchitectureSpec arch = ArchitectureSpec::nps1(256, 256);
  RngStream rng = derive_stream(12, 0);
  const NetworkParameters params = init_params(arch, rng);
  CHECK(params.count() == 537536);

  const std::string path = temp_path("bf_test_ckpt.ampn");
  save_checkpoint(params, arch, path);
  const Checkpoint loaded = load_checkpoint(path);
  CHECK(loaded.params.fc.w == params.fc.w);
  CHECK(loaded.params.fc.b == params.fc.b);
  for (int s = 0; s < 3; ++s) {
    CHECK(loaded.params.conv[s].w == params.conv[s].w);
    CHECK(loaded.params.conv[s].b == params.conv[s].b);
  }
  CHECK(loaded.arch.preset == Preset::kNps1);
  CHECK(loaded.arch.input_len == 256);
  CHECK(loaded.arch.output_dim == 256);

  // Saving the loaded parameters reproduces the file byte for byte.
  const std::string path2 = temp_path("bf_test_ckpt2.ampn");
  save_checkpoint(loaded.params, loaded.arch, path2);
  std::ifstream f1(path, std::ios::binary);
  std::ifstream f2(path2, std::ios::binary);
  const std::string b1((std::istreambuf_iterator<char>(f1)),
                       std::istreambuf_iterator<char>());
  const std::string b2((std::istreambuf_iterator<char>(f2)),
                       std::istreambuf_iterator<char>());
  CHECK(b1 == b2);
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("checkpoint rejects corruption") {
  const ArchitectureSpec arch = gradcheck_toy_arch();
  RngStream rng = derive_stream(13, 0);
  const NetworkParameters params = init_params(arch, rng);
  const std::string path = temp_path("bf_test_corrupt.ampn");
  save_checkpoint(params, arch, path);

  SUBCASE("bad magic") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.put('X');
    f.close();
    CHECK_THROWS_WITH_AS(load_checkpoint(path),
                         doctest::Contains("bad checkpoint magic"),
                         std::runtime_error);
  }

  SUBCASE("truncation names the offset") {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    std::filesystem::resize_file(path, size - 9, ec);
    REQUIRE(!ec);
    try {
      load_checkpoint(path);
      FAIL("expected a truncation error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("shape conservation on random architectures") {
  RngStream rng = derive_stream(90, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int input_len = 8 * static_cast<int>(1 + rng.bounded(16));
    const int kernel = 1 + static_cast<int>(rng.bounded(10));
    const std::array<int, 3> filters = {
        1 + static_cast<int>(rng.bounded(6)),
        1 + static_cast<int>(rng.bounded(6)),
        1 + static_cast<int>(rng.bounded(6))};
    const int out_dim = 1 + static_cast<int>(rng.bounded(32));
    const ArchitectureSpec arch =
        ArchitectureSpec::custom(input_len, out_dim, kernel, filters);
    const NetworkParameters params = init_params(arch, rng);
    ForwardCache cache;
    std::vector<double> x(static_cast<std::size_t>(input_len));
    for (double& v : x) v = rng.normal();
    const std::vector<double>& logits = network_forward(x, params, cache);
    for (int s = 0; s < 3; ++s) {
      CHECK(cache.postact[s].len == (s == 0 ? input_len : cache.pooled[s - 1].len));
      CHECK(cache.pooled[s].len * 2 == cache.postact[s].len);
    }
    CHECK(static_cast<int>(logits.size()) == out_dim);
  }
}
