#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bd/adam.hpp"
#include "bd/commands.hpp"
#include "bd/gradcheck.hpp"
#include "bd/layers.hpp"
#include "bd/rng.hpp"
#include "bd/tensor.hpp"

using namespace bd;
using nn::Tensor;

TEST_CASE("rng streams are reproducible and bounded") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(c.below(10) < 10);
  }
  std::vector<int> v1 = {1, 2, 3, 4, 5, 6, 7, 8};
  auto v2 = v1;
  Rng s1(9), s2(9);
  s1.shuffle(v1);
  s2.shuffle(v2);
  CHECK(v1 == v2);
}

TEST_CASE("tensor shape bookkeeping and finite checks") {
  Tensor t({2, 3});
  CHECK(t.size() == 6);
  t.at(1, 2) = 5.0;
  CHECK(t.data[5] == 5.0);
  nn::require_finite(t, "t");
  t.at(0, 1) = std::nan("");
  CHECK_THROWS_AS(nn::require_finite(t, "t"), std::runtime_error);
}

TEST_CASE("embedding forward") {
  EmbeddingTable table;
  table.dim = 3;
  table.data = {0, 0, 0,   // PAD
                1, 1, 1,   // UNK
                2, 4, 6};  // id 2
  SUBCASE("PAD ids give zero rows") {
    const Tensor out = nn::embedding_forward({0, 0}, table);
    for (double v : out.data) CHECK(v == 0.0);
  }
  SUBCASE("a known id returns its vector") {
    const Tensor out = nn::embedding_forward({2}, table);
    CHECK(out.data == std::vector<double>{2, 4, 6});
  }
  SUBCASE("out-of-range id throws") {
    CHECK_THROWS_AS(nn::embedding_forward({9}, table), std::out_of_range);
  }
  SUBCASE("backward accumulates into rows but never PAD") {
    Tensor grad_out({3, 3});
    grad_out.fill(1.0);
    Tensor grad_table({3, 3});
    nn::embedding_backward({0, 2, 2}, grad_out, grad_table);
    for (std::size_t d = 0; d < 3; ++d) {
      CHECK(grad_table.at(std::size_t{0}, d) == 0.0);
      CHECK(grad_table.at(std::size_t{2}, d) == 2.0);
    }
  }
}

TEST_CASE("conv1d forward cases") {
  SUBCASE("all-zero input with zero bias is zero") {
    Tensor x({6, 2}), k({3, 2, 4}), b({4});
    k.fill(0.5);
    const Tensor out = nn::conv1d_forward(x, k, b);
    CHECK(out.dim(0) == 4);
    for (double v : out.data) CHECK(v == 0.0);
  }
  SUBCASE("hand-summed single window") {
    Tensor x({5, 1}), k({5, 1, 1}), b({1});
    for (std::size_t i = 0; i < 5; ++i) x.at(i, std::size_t{0}) = static_cast<double>(i + 1);
    k.fill(1.0);
    const Tensor out = nn::conv1d_forward(x, k, b);
    REQUIRE(out.size() == 1);
    CHECK(out.data[0] == 15.0);
  }
  SUBCASE("input shorter than the kernel throws") {
    Tensor x({3, 1}), k({5, 1, 1}), b({1});
    CHECK_THROWS_AS(nn::conv1d_forward(x, k, b), std::invalid_argument);
  }
}

TEST_CASE("maxpool1d") {
  SUBCASE("pool of one is the identity") {
    Tensor x({4, 2});
    for (std::size_t i = 0; i < x.size(); ++i) x.data[i] = static_cast<double>(i) * 0.5;
    CHECK(nn::maxpool1d_forward(x, 1).out == x);
  }
  SUBCASE("hand case with remainder dropped") {
    Tensor x({6, 1});
    const double vals[] = {1, 3, 2, 2, 5, 4};
    for (std::size_t i = 0; i < 6; ++i) x.at(i, std::size_t{0}) = vals[i];
    const auto pooled = nn::maxpool1d_forward(x, 2);
    CHECK(pooled.out.data == std::vector<double>{3, 2, 5});

    Tensor x7({7, 1});
    for (std::size_t i = 0; i < 7; ++i) x7.at(i, std::size_t{0}) = static_cast<double>(i);
    CHECK(nn::maxpool1d_forward(x7, 2).out.dim(0) == 3);  // trailing element dropped
  }
  SUBCASE("backward routes the gradient to the earliest argmax") {
    Tensor x({4, 1});
    x.data = {2, 2, 1, 7};  // tie in the first window
    const auto pooled = nn::maxpool1d_forward(x, 2);
    Tensor grad_out({2, 1});
    grad_out.fill(1.0);
    const Tensor gx = nn::maxpool1d_backward(x, pooled, grad_out);
    CHECK(gx.data == std::vector<double>{1, 0, 0, 1});
  }
}

TEST_CASE("global maxpool") {
  SUBCASE("single row is the identity") {
    Tensor x({1, 3});
    x.data = {1, -2, 3};
    CHECK(nn::global_maxpool_forward(x).out.data == std::vector<double>{1, -2, 3});
  }
  SUBCASE("all-negative column still takes the max") {
    Tensor x({3, 1});
    x.data = {-1, -5, -2};
    CHECK(nn::global_maxpool_forward(x).out.data == std::vector<double>{-1});
  }
}

TEST_CASE("lstm forward special cases") {
  SUBCASE("all-zero weights give a zero final state") {
    auto params = nn::make_lstm_params(3, 4);
    Tensor x({5, 3});
    Rng rng(3);
    for (double& v : x.data) v = rng.uniform(-2.0, 2.0);
    const Tensor h = nn::lstm_forward(x, params, nullptr);
    for (double v : h.data) CHECK(v == 0.0);
  }
  SUBCASE("scalar closed form at unit weights") {
    auto params = nn::make_lstm_params(1, 1);
    params.w_x.fill(1.0);
    params.w_h.fill(1.0);
    params.bias.fill(0.0);
    Tensor x({1, 1});
    x.data = {1.0};
    const Tensor h = nn::lstm_forward(x, params, nullptr);
    const auto sigmoid = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    const double expected = sigmoid(1.0) * std::tanh(sigmoid(1.0) * std::tanh(1.0));
    CHECK(h.data[0] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("dense softmax head") {
  SUBCASE("zero weights give uniform probabilities and ln C loss") {
    Tensor h({4}), w({6, 4}), b({6});
    h.fill(0.3);
    const auto out = nn::dense_softmax_xent_forward(h, w, b, 2);
    for (double p : out.probs) CHECK(p == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(out.loss == doctest::Approx(std::log(6.0)).epsilon(1e-12));
  }
  SUBCASE("extreme logits do not overflow") {
    const auto probs = nn::softmax({1000.0, 0.0});
    CHECK(probs[0] == doctest::Approx(1.0));
    CHECK(probs[1] >= 0.0);
    CHECK(std::isfinite(probs[1]));
  }
  SUBCASE("softmax sums to one and stays positive") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> logits(6);
      for (double& v : logits) v = rng.uniform(-50.0, 50.0);
      const auto probs = nn::softmax(logits);
      double sum = 0.0;
      for (double p : probs) {
        CHECK(p > 0.0);
        sum += p;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("label out of range throws") {
    Tensor h({4}), w({6, 4}), b({6});
    CHECK_THROWS_AS(nn::dense_softmax_xent_forward(h, w, b, 6), std::out_of_range);
  }
}

TEST_CASE("dropout") {
  Tensor x({100});
  x.fill(1.0);
  Rng rng(11);
  SUBCASE("rate zero is the identity") {
    CHECK(nn::dropout_forward(x, 0.0, rng, true) == x);
  }
  SUBCASE("inference mode is the identity at any rate") {
    CHECK(nn::dropout_forward(x, 0.9, rng, false) == x);
  }
  SUBCASE("zero fraction matches the rate over a million draws") {
    const std::size_t n = 1'000'000;
    const auto mask = nn::dropout_mask(n, 0.2, rng);
    std::size_t zeros = 0;
    for (double m : mask) {
      if (m == 0.0)
        ++zeros;
      else
        CHECK(m == doctest::Approx(1.25));  // 1 / (1 - 0.2)
    }
    const double fraction = static_cast<double>(zeros) / static_cast<double>(n);
    CHECK(fraction >= 0.198);
    CHECK(fraction <= 0.202);
  }
  SUBCASE("same seed, same mask") {
    Rng r1(42), r2(42);
    CHECK(nn::dropout_mask(1000, 0.5, r1) == nn::dropout_mask(1000, 0.5, r2));
  }
}

TEST_CASE("adam steps") {
  nn::AdamHyper hyper;
  SUBCASE("zero gradient from a fresh state leaves parameters unchanged") {
    std::vector<double> p = {1.5};
    nn::AdamState state;
    nn::adam_step(p, {0.0}, state, 1, hyper);
    CHECK(p[0] == 1.5);
    CHECK(state.m[0] == 0.0);
    CHECK(state.v[0] == 0.0);
  }
  SUBCASE("moments decay by beta factors on a zero gradient") {
    std::vector<double> p = {1.5};
    nn::AdamState state;
    nn::adam_step(p, {2.0}, state, 1, hyper);
    const double m1 = state.m[0];
    const double v1 = state.v[0];
    nn::adam_step(p, {0.0}, state, 2, hyper);
    CHECK(state.m[0] == doctest::Approx(hyper.beta1 * m1));
    CHECK(state.v[0] == doctest::Approx(hyper.beta2 * v1));
  }
  SUBCASE("first step matches the hand-evaluated formulas") {
    std::vector<double> p = {0.0};
    nn::AdamState state;
    nn::AdamHyper h;
    h.lr = 0.1;
    nn::adam_step(p, {1.0}, state, 1, h);
    // m_hat = 1, v_hat = 1 => step = lr / (1 + eps)
    CHECK(p[0] == doctest::Approx(-0.1).epsilon(1e-6));
  }
  SUBCASE("minimizing p^2 converges") {
    std::vector<double> p = {5.0};
    nn::AdamState state;
    nn::AdamHyper h;
    h.lr = 0.05;
    for (std::size_t t = 1; t <= 2000; ++t) {
      const std::vector<double> grad = {2.0 * p[0]};
      nn::adam_step(p, grad, state, t, h);
    }
    CHECK(std::abs(p[0]) < 1e-3);
  }
}

TEST_CASE("gradient suite passes for every layer and the full network") {
  for (const auto& entry : run_gradient_suite()) {
    INFO(entry.name, " max_rel_error=", entry.max_rel_error);
    CHECK(entry.passed());
  }
}

TEST_CASE("lstm gradients with variational dropout masks") {
  Rng rng(77);
  Tensor x({4, 3});
  for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
  auto params = nn::make_lstm_params(3, 2);
  for (double& v : params.w_x.data) v = rng.uniform(-0.5, 0.5);
  for (double& v : params.w_h.data) v = rng.uniform(-0.5, 0.5);

  const std::vector<double> imask = {1.25, 0.0, 1.25};
  const std::vector<double> rmask = {1.25, 1.25};
  Tensor coeff({2});
  coeff.data = {0.7, -0.4};

  nn::LstmCache cache;
  nn::lstm_forward(x, params, &cache, &imask, &rmask);
  nn::LstmGrads grads;
  grads.w_x = Tensor(params.w_x.shape);
  grads.w_h = Tensor(params.w_h.shape);
  grads.bias = Tensor(params.bias.shape);
  const Tensor gx = nn::lstm_backward(x, params, cache, coeff, grads);

  std::vector<nn::GradCheckBlock> blocks = {
      {"w_x", params.w_x.data.data(), grads.w_x.data.data(), params.w_x.size()},
      {"w_h", params.w_h.data.data(), grads.w_h.data.data(), params.w_h.size()},
      {"bias", params.bias.data.data(), grads.bias.data.data(), params.bias.size()},
      {"x", x.data.data(), gx.data.data(), x.size()},
  };
  auto loss = [&]() {
    const Tensor h = nn::lstm_forward(x, params, nullptr, &imask, &rmask);
    return h.data[0] * coeff.data[0] + h.data[1] * coeff.data[1];
  };
  const auto report = nn::gradient_check(loss, blocks);
  CHECK(report.max_rel_error < 1e-5);
}
