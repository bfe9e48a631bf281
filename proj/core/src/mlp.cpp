// Copyright 2026 The eqlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eqlab/mlp.hpp"

#include <cmath>

#include "eqlab/rng.hpp"

namespace eqlab {

namespace {
constexpr double kSeluLambda = 1.0507009873554804934193350815946;
constexpr double kSeluAlpha = 1.6732632423543772848170429916717;

Mat lecun_normal(int rows, int cols, Prng& rng) {
  Mat w(rows, cols);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) w(r, c) = scale * rng.normal();
  }
  return w;
}

Mat selu_mat(Mat z) {
  return z.unaryExpr([](double x) { return selu(x); });
}

Mat selu_grad_mat(const Mat& z) {
  return z.unaryExpr([](double x) { return selu_grad(x); });
}
}  // namespace

double selu(double x) {
  return x > 0.0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * std::expm1(x);
}

double selu_grad(double x) {
  return x > 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(x);
}

Mlp::Mlp(int in_dim, int out_dim, std::uint64_t init_key, int hidden,
         double out_scale) {
  Prng rng = stream_rng(init_key, RngStream::kInit);
  w1_ = lecun_normal(hidden, in_dim, rng);
  w2_ = lecun_normal(hidden, hidden, rng);
  w3_ = out_scale * lecun_normal(out_dim, hidden, rng);
  b1_ = Vec::Zero(hidden);
  b2_ = Vec::Zero(hidden);
  b3_ = Vec::Zero(out_dim);
}

Mat Mlp::forward(const Mat& x) const {
  const Mat h1 = selu_mat((x * w1_.transpose()).rowwise() + b1_.transpose());
  const Mat h2 = selu_mat((h1 * w2_.transpose()).rowwise() + b2_.transpose());
  return (h2 * w3_.transpose()).rowwise() + b3_.transpose();
}

Mlp::Cache Mlp::forward_cached(const Mat& x) const {
  Cache c;
  c.x = x;
  c.z1 = (x * w1_.transpose()).rowwise() + b1_.transpose();
  c.h1 = selu_mat(c.z1);
  c.z2 = (c.h1 * w2_.transpose()).rowwise() + b2_.transpose();
  c.h2 = selu_mat(c.z2);
  c.out = (c.h2 * w3_.transpose()).rowwise() + b3_.transpose();
  return c;
}

Mlp::Grads Mlp::backward(const Cache& c, const Mat& d_out) const {
  Grads g;
  g.w3 = d_out.transpose() * c.h2;
  g.b3 = d_out.colwise().sum().transpose();
  const Mat d_h2 = (d_out * w3_).cwiseProduct(selu_grad_mat(c.z2));
  g.w2 = d_h2.transpose() * c.h1;
  g.b2 = d_h2.colwise().sum().transpose();
  const Mat d_h1 = (d_h2 * w2_).cwiseProduct(selu_grad_mat(c.z1));
  g.w1 = d_h1.transpose() * c.x;
  g.b1 = d_h1.colwise().sum().transpose();
  return g;
}

bool Mlp::finite() const {
  for (const Mat* w : weight_params()) {
    if (!w->allFinite()) return false;
  }
  for (const Vec* b : bias_params()) {
    if (!b->allFinite()) return false;
  }
  return true;
}

void Adam::step(const std::vector<Mat*>& weights, const std::vector<Vec*>& biases,
                const std::vector<Mat>& weight_grads,
                const std::vector<Vec>& bias_grads) {
  if (mw_.empty()) {
    for (const Mat* w : weights) {
      mw_.push_back(Mat::Zero(w->rows(), w->cols()));
      vw_.push_back(Mat::Zero(w->rows(), w->cols()));
    }
    for (const Vec* b : biases) {
      mb_.push_back(Vec::Zero(b->size()));
      vb_.push_back(Vec::Zero(b->size()));
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < weights.size(); ++k) {
    mw_[k] = beta1_ * mw_[k] + (1.0 - beta1_) * weight_grads[k];
    vw_[k] = beta2_ * vw_[k].array().matrix() +
             (1.0 - beta2_) * weight_grads[k].cwiseProduct(weight_grads[k]);
    weights[k]->noalias() -=
        (lr_ * (mw_[k] / c1).array() / ((vw_[k] / c2).array().sqrt() + eps_))
            .matrix();
  }
  for (std::size_t k = 0; k < biases.size(); ++k) {
    mb_[k] = beta1_ * mb_[k] + (1.0 - beta1_) * bias_grads[k];
    vb_[k] = beta2_ * vb_[k].array().matrix() +
             (1.0 - beta2_) * bias_grads[k].cwiseProduct(bias_grads[k]);
    *biases[k] -=
        (lr_ * (mb_[k] / c1).array() / ((vb_[k] / c2).array().sqrt() + eps_))
            .matrix();
  }
}

}  // namespace eqlab
