#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <random>
#include <vector>

namespace morpho::nn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Trainable tensor with its gradient and Adam moments.
struct Param {
  Mat value;
  Mat grad;
  Mat m;
  Mat v;

  void init(int rows, int cols) {
    value = Mat::Zero(rows, cols);
    grad = Mat::Zero(rows, cols);
    m = Mat::Zero(rows, cols);
    v = Mat::Zero(rows, cols);
  }
  void zero_grad() { grad.setZero(); }
};

void xavier_init(Mat& w, std::mt19937_64& rng);

// One Adam update over the given parameters; t is the 1-based step count.
void adam_step(const std::vector<Param*>& params, double lr, long long t,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

nlohmann::ordered_json mat_to_json(const Mat& m);
Mat mat_from_json(const nlohmann::ordered_json& j);

// Single LSTM layer; gate order i, f, g, o stacked along rows.
struct LstmWeights {
  Param wx;  // [4H x D]
  Param wh;  // [4H x H]
  Param b;   // [4H x 1], forget-gate slice initialized to 1

  int hidden() const { return static_cast<int>(wh.value.cols()); }
  int input_dim() const { return static_cast<int>(wx.value.cols()); }
  void init(int hidden, int input_dim, std::mt19937_64& rng);
  std::vector<Param*> params() { return {&wx, &wh, &b}; }
};

struct LstmTrace {
  std::vector<Vec> x, i, f, g, o, c, h;
};

// Runs the cell over inputs, filling the trace; trace.h holds the outputs.
void lstm_forward(const LstmWeights& w, const std::vector<Vec>& inputs,
                  LstmTrace& trace);

// dh holds dLoss/dh_t per step; gradients are accumulated into w's params.
// Returns dLoss/dx_t per step.
std::vector<Vec> lstm_backward(LstmWeights& w, const LstmTrace& trace,
                               const std::vector<Vec>& dh);

Vec softmax(const Vec& logits);

}  // namespace morpho::nn
