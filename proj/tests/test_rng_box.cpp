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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eqlab/box.hpp"
#include "eqlab/rng.hpp"

using namespace eqlab;

TEST_CASE("box validates bounds") {
  CHECK_THROWS_AS(Box::interval(1.0, 0.0), std::invalid_argument);
  Vec lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Box(lo, hi), std::invalid_argument);
}

TEST_CASE("box clamp and contains") {
  const Box b = Box::interval(0.0, 2.0).concat(Box::interval(-1.0, 1.0));
  Vec x(2);
  x << 3.0, -5.0;
  const Vec c = b.clamp(x);
  CHECK(c[0] == 2.0);
  CHECK(c[1] == -1.0);
  CHECK(b.contains(c));
  CHECK_FALSE(b.contains(x));
  CHECK(b.dim() == 2);
}

TEST_CASE("keyed streams are reproducible and distinct") {
  Prng a = stream_rng(42, RngStream::kTypes, 7);
  Prng b = stream_rng(42, RngStream::kTypes, 7);
  Prng c = stream_rng(42, RngStream::kTypes, 8);
  bool all_equal = true, any_equal_c = false;
  for (int k = 0; k < 64; ++k) {
    const auto x = a.next_u64();
    all_equal = all_equal && x == b.next_u64();
    any_equal_c = any_equal_c || x == c.next_u64();
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_c);
}

TEST_CASE("uniform and normal moments") {
  Prng rng(123);
  const int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sn / n == doctest::Approx(0.0).epsilon(0.02));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}
