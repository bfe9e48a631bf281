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

#ifndef EQLAB_BOX_HPP_
#define EQLAB_BOX_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace eqlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A product of closed bounded intervals. Signal and action spaces are boxes.
class Box {
 public:
  Box() = default;
  Box(Vec lows, Vec highs) : lows_(std::move(lows)), highs_(std::move(highs)) {
    if (lows_.size() != highs_.size()) {
      throw std::invalid_argument("Box: lows/highs dimension mismatch");
    }
    for (int d = 0; d < lows_.size(); ++d) {
      if (!std::isfinite(lows_[d]) || !std::isfinite(highs_[d]) ||
          lows_[d] > highs_[d]) {
        throw std::invalid_argument("Box: bounds must be finite with low <= high");
      }
    }
  }

  static Box interval(double lo, double hi) {
    Vec l(1), h(1);
    l[0] = lo;
    h[0] = hi;
    return Box(std::move(l), std::move(h));
  }

  // The empty-history signal space: a zero-dimensional box.
  static Box empty() { return Box(Vec(0), Vec(0)); }

  int dim() const { return static_cast<int>(lows_.size()); }
  double low(int d) const { return lows_[d]; }
  double high(int d) const { return highs_[d]; }
  double width(int d) const { return highs_[d] - lows_[d]; }
  const Vec& lows() const { return lows_; }
  const Vec& highs() const { return highs_; }

  bool contains(const Vec& x) const {
    if (x.size() != lows_.size()) return false;
    for (int d = 0; d < dim(); ++d) {
      if (x[d] < lows_[d] || x[d] > highs_[d]) return false;
    }
    return true;
  }

  Vec clamp(Vec x) const {
    for (int d = 0; d < dim(); ++d) {
      x[d] = std::clamp(x[d], lows_[d], highs_[d]);
    }
    return x;
  }

  Box concat(const Box& other) const {
    Vec l(dim() + other.dim()), h(dim() + other.dim());
    l << lows_, other.lows_;
    h << highs_, other.highs_;
    return Box(std::move(l), std::move(h));
  }

 private:
  Vec lows_;
  Vec highs_;
};

}  // namespace eqlab

#endif  // EQLAB_BOX_HPP_
