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

#ifndef EQLAB_MLP_HPP_
#define EQLAB_MLP_HPP_

#include <cstdint>
#include <vector>

#include "eqlab/box.hpp"

namespace eqlab {

double selu(double x);
double selu_grad(double x);

// Fully connected input -> 64 -> 64 -> output network with SeLU activations
// on the hidden layers and a linear output, trained by plain backpropagation.
class Mlp {
 public:
  Mlp() = default;
  // `out_scale` shrinks the output layer's initial weights; policy heads use
  // a small scale so initial action means sit near zero inside the box.
  Mlp(int in_dim, int out_dim, std::uint64_t init_key, int hidden = 64,
      double out_scale = 1.0);

  int in_dim() const { return static_cast<int>(w1_.cols()); }
  int out_dim() const { return static_cast<int>(w3_.rows()); }

  // X is row-major observations: n x in_dim.
  Mat forward(const Mat& x) const;

  struct Cache {
    Mat x, z1, h1, z2, h2, out;
  };
  Cache forward_cached(const Mat& x) const;

  struct Grads {
    Mat w1, w2, w3;
    Vec b1, b2, b3;
  };
  // dL/dout is n x out_dim; returns parameter gradients (summed over rows).
  Grads backward(const Cache& cache, const Mat& d_out) const;

  // Parameter access as a flat list (weights and biases interleaved), used by
  // the optimizer and by checkpoint serialization.
  std::vector<Mat*> weight_params() { return {&w1_, &w2_, &w3_}; }
  std::vector<Vec*> bias_params() { return {&b1_, &b2_, &b3_}; }
  std::vector<const Mat*> weight_params() const { return {&w1_, &w2_, &w3_}; }
  std::vector<const Vec*> bias_params() const { return {&b1_, &b2_, &b3_}; }

  bool finite() const;

 private:
  Mat w1_, w2_, w3_;  // (hidden x in), (hidden x hidden), (out x hidden)
  Vec b1_, b2_, b3_;
};

// Adam with bias correction; moments are kept per parameter tensor.
class Adam {
 public:
  Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void set_learning_rate(double lr) { lr_ = lr; }
  double learning_rate() const { return lr_; }

  // Applies one ascent-by-negative-gradient step: p -= lr * mhat / (...).
  void step(const std::vector<Mat*>& weights, const std::vector<Vec*>& biases,
            const std::vector<Mat>& weight_grads, const std::vector<Vec>& bias_grads);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<Mat> mw_, vw_;
  std::vector<Vec> mb_, vb_;
};

}  // namespace eqlab

#endif  // EQLAB_MLP_HPP_
