#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <vector>

#include "morphoforge/nn.hpp"
#include "morphoforge/util.hpp"

using namespace morpho;

namespace {

double lstm_scalar_loss(const nn::LstmWeights& w,
                        const std::vector<nn::Vec>& xs,
                        const std::vector<nn::Vec>& probes) {
  nn::LstmTrace trace;
  nn::lstm_forward(w, xs, trace);
  double loss = 0.0;
  for (std::size_t t = 0; t < xs.size(); ++t)
    loss += probes[t].dot(trace.h[t]);
  return loss;
}

}  // namespace

TEST_CASE("softmax basics") {
  nn::Vec logits(3);
  logits << 1.0, 2.0, 3.0;
  nn::Vec p = nn::softmax(logits);
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p[2] > p[1]);
  CHECK(p[1] > p[0]);

  nn::Vec shifted = logits.array() + 1000.0;
  nn::Vec q = nn::softmax(shifted);
  for (int k = 0; k < 3; ++k)
    CHECK(q[k] == doctest::Approx(p[k]).epsilon(1e-12));

  nn::Vec zeros = nn::Vec::Zero(2);
  nn::Vec u = nn::softmax(zeros);
  CHECK(u[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(u[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("xavier init is deterministic and bounded") {
  nn::Mat a(7, 11), b(7, 11);
  auto r1 = make_rng(42);
  auto r2 = make_rng(42);
  nn::xavier_init(a, r1);
  nn::xavier_init(b, r2);
  CHECK(a == b);
  const double bound = std::sqrt(6.0 / (7 + 11));
  CHECK(a.maxCoeff() <= bound);
  CHECK(a.minCoeff() >= -bound);
  CHECK(a.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("adam step matches hand computation at t=1") {
  nn::Param p;
  p.init(1, 1);
  p.value(0, 0) = 0.5;
  p.grad(0, 0) = 2.0;
  nn::adam_step({&p}, 0.1, 1);
  // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
  double expected = 0.5 - 0.1 * 2.0 / (2.0 + 1e-8);
  CHECK(p.value(0, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("matrix json round trip is exact") {
  nn::Mat m(2, 3);
  m << 0.1, -2.5, 3.0, 1e-17, -0.0, 7.25;
  auto j = nn::mat_to_json(m);
  nn::Mat back = nn::mat_from_json(j);
  CHECK(back.rows() == 2);
  CHECK(back.cols() == 3);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) CHECK(back(r, c) == m(r, c));
}

TEST_CASE("lstm forward shapes and forget bias init") {
  auto rng = make_rng(3);
  nn::LstmWeights w;
  w.init(4, 3, rng);
  CHECK(w.hidden() == 4);
  CHECK(w.input_dim() == 3);
  for (int k = 0; k < 4; ++k) CHECK(w.b.value(4 + k, 0) == 1.0);

  std::vector<nn::Vec> xs(5, nn::Vec::Zero(3));
  nn::LstmTrace trace;
  nn::lstm_forward(w, xs, trace);
  CHECK(trace.h.size() == 5);
  CHECK(trace.c.size() == 5);
  for (const auto& h : trace.h) {
    CHECK(h.size() == 4);
    CHECK(h.cwiseAbs().maxCoeff() < 1.0);
  }
}

TEST_CASE("lstm gradients match central finite differences") {
  auto rng = make_rng(99);
  for (int trial = 0; trial < 6; ++trial) {
    int H = 2 + static_cast<int>(uniform_below(rng, 3));
    int D = 2 + static_cast<int>(uniform_below(rng, 3));
    int T = 2 + static_cast<int>(uniform_below(rng, 4));

    nn::LstmWeights w;
    w.init(H, D, rng);
    std::vector<nn::Vec> xs(T), probes(T);
    for (int t = 0; t < T; ++t) {
      xs[t] = nn::Vec(D);
      probes[t] = nn::Vec(H);
      for (int k = 0; k < D; ++k)
        xs[t][k] = 2.0 * uniform_real01(rng) - 1.0;
      for (int k = 0; k < H; ++k)
        probes[t][k] = 2.0 * uniform_real01(rng) - 1.0;
    }

    nn::LstmTrace trace;
    nn::lstm_forward(w, xs, trace);
    for (auto* p : w.params()) p->zero_grad();
    auto dx = nn::lstm_backward(w, trace, probes);

    const double eps = 1e-6;
    double max_rel = 0.0;
    auto check_param = [&](nn::Param& p) {
      for (int r = 0; r < p.value.rows(); ++r) {
        for (int c = 0; c < p.value.cols(); ++c) {
          double old = p.value(r, c);
          p.value(r, c) = old + eps;
          double lp = lstm_scalar_loss(w, xs, probes);
          p.value(r, c) = old - eps;
          double lm = lstm_scalar_loss(w, xs, probes);
          p.value(r, c) = old;
          double numeric = (lp - lm) / (2.0 * eps);
          double analytic = p.grad(r, c);
          double denom = std::max(std::abs(numeric), std::abs(analytic));
          if (denom < 1e-8) continue;
          max_rel =
              std::max(max_rel, std::abs(numeric - analytic) / denom);
        }
      }
    };
    check_param(w.wx);
    check_param(w.wh);
    check_param(w.b);

    for (int t = 0; t < T; ++t) {
      for (int k = 0; k < D; ++k) {
        double old = xs[t][k];
        xs[t][k] = old + eps;
        double lp = lstm_scalar_loss(w, xs, probes);
        xs[t][k] = old - eps;
        double lm = lstm_scalar_loss(w, xs, probes);
        xs[t][k] = old;
        double numeric = (lp - lm) / (2.0 * eps);
        double analytic = dx[t][k];
        double denom = std::max(std::abs(numeric), std::abs(analytic));
        if (denom < 1e-8) continue;
        max_rel = std::max(max_rel, std::abs(numeric - analytic) / denom);
      }
    }

    CAPTURE(trial);
    CHECK(max_rel <= 1e-4);
  }
}
