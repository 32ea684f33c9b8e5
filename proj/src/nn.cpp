#include "morphoforge/nn.hpp"

#include <cmath>

#include "morphoforge/errors.hpp"
#include "morphoforge/util.hpp"

namespace morpho::nn {

void xavier_init(Mat& w, std::mt19937_64& rng) {
  const double bound =
      std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      w(i, j) = (2.0 * uniform_real01(rng) - 1.0) * bound;
}

void adam_step(const std::vector<Param*>& params, double lr, long long t,
               double beta1, double beta2, double eps) {
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (Param* p : params) {
    p->m = beta1 * p->m + (1.0 - beta1) * p->grad;
    p->v = beta2 * p->v.array().matrix() +
           (1.0 - beta2) * p->grad.array().square().matrix();
    const Mat m_hat = p->m / bc1;
    const Mat v_hat = p->v / bc2;
    p->value.array() -=
        lr * m_hat.array() / (v_hat.array().sqrt() + eps);
  }
}

nlohmann::ordered_json mat_to_json(const Mat& m) {
  nlohmann::ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  nlohmann::ordered_json data = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(i, c));
  j["data"] = std::move(data);
  return j;
}

Mat mat_from_json(const nlohmann::ordered_json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw ParseError("matrix payload size mismatch");
  Mat m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = data[static_cast<std::size_t>(k++)].get<double>();
  return m;
}

void LstmWeights::init(int hidden, int input_dim, std::mt19937_64& rng) {
  wx.init(4 * hidden, input_dim);
  wh.init(4 * hidden, hidden);
  b.init(4 * hidden, 1);
  xavier_init(wx.value, rng);
  xavier_init(wh.value, rng);
  b.value.block(hidden, 0, hidden, 1).setOnes();  // forget gate bias
}

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void lstm_forward(const LstmWeights& w, const std::vector<Vec>& inputs,
                  LstmTrace& trace) {
  const int H = w.hidden();
  const std::size_t T = inputs.size();
  trace.x = inputs;
  trace.i.assign(T, Vec());
  trace.f.assign(T, Vec());
  trace.g.assign(T, Vec());
  trace.o.assign(T, Vec());
  trace.c.assign(T, Vec());
  trace.h.assign(T, Vec());
  Vec h_prev = Vec::Zero(H);
  Vec c_prev = Vec::Zero(H);
  for (std::size_t t = 0; t < T; ++t) {
    Vec z = w.wx.value * inputs[t] + w.wh.value * h_prev + w.b.value;
    Vec i(H), f(H), g(H), o(H);
    for (int k = 0; k < H; ++k) {
      i(k) = sigmoid(z(k));
      f(k) = sigmoid(z(H + k));
      g(k) = std::tanh(z(2 * H + k));
      o(k) = sigmoid(z(3 * H + k));
    }
    Vec c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
    Vec h = o.cwiseProduct(c.array().tanh().matrix());
    trace.i[t] = std::move(i);
    trace.f[t] = std::move(f);
    trace.g[t] = std::move(g);
    trace.o[t] = std::move(o);
    trace.c[t] = c;
    trace.h[t] = h;
    c_prev = std::move(c);
    h_prev = std::move(h);
  }
}

std::vector<Vec> lstm_backward(LstmWeights& w, const LstmTrace& trace,
                               const std::vector<Vec>& dh) {
  const int H = w.hidden();
  const std::size_t T = trace.x.size();
  std::vector<Vec> dx(T);
  Vec dh_next = Vec::Zero(H);
  Vec dc_next = Vec::Zero(H);
  for (std::size_t t = T; t-- > 0;) {
    const Vec& i = trace.i[t];
    const Vec& f = trace.f[t];
    const Vec& g = trace.g[t];
    const Vec& o = trace.o[t];
    const Vec tanh_c = trace.c[t].array().tanh().matrix();
    const Vec c_prev = t == 0 ? Vec(Vec::Zero(H)) : trace.c[t - 1];
    const Vec h_prev = t == 0 ? Vec(Vec::Zero(H)) : trace.h[t - 1];

    const Vec dht = dh[t] + dh_next;
    const Vec dc = dht.cwiseProduct(o).cwiseProduct(
                       (1.0 - tanh_c.array().square()).matrix()) +
                   dc_next;
    const Vec do_ = dht.cwiseProduct(tanh_c);
    const Vec di = dc.cwiseProduct(g);
    const Vec dg = dc.cwiseProduct(i);
    const Vec df = dc.cwiseProduct(c_prev);

    Vec dz(4 * H);
    for (int k = 0; k < H; ++k) {
      dz(k) = di(k) * i(k) * (1.0 - i(k));
      dz(H + k) = df(k) * f(k) * (1.0 - f(k));
      dz(2 * H + k) = dg(k) * (1.0 - g(k) * g(k));
      dz(3 * H + k) = do_(k) * o(k) * (1.0 - o(k));
    }

    w.wx.grad += dz * trace.x[t].transpose();
    w.wh.grad += dz * h_prev.transpose();
    w.b.grad += dz;
    dx[t] = w.wx.value.transpose() * dz;
    dh_next = w.wh.value.transpose() * dz;
    dc_next = dc.cwiseProduct(f);
  }
  return dx;
}

Vec softmax(const Vec& logits) {
  const double mx = logits.maxCoeff();
  Vec e = (logits.array() - mx).exp().matrix();
  return e / e.sum();
}

}  // namespace morpho::nn
