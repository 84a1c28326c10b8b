// Copyright 2026 The aimbot Authors
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

#include <cmath>
#include <limits>
#include <random>

#include "aimbot/error.hpp"
#include "aimbot/visibility.hpp"
#include "doctest.h"

using namespace aimbot;

namespace {

// Literal decision table, written independently of the implementation.
bool expected_visible(int u, int v, double z, const DepthImage& d, double eps) {
  if (z <= 0.0) return false;
  if (u < 0 || v < 0 || u >= d.width() || v >= d.height()) return false;
  const double obs = d.at(u, v);
  if (std::isnan(obs) || std::isinf(obs) || obs <= 0.0) return true;
  return !(obs <= z + eps);
}

}  // namespace

TEST_CASE("check_visibility: reference cases") {
  DepthImage d(16, 16, 2.0);
  CHECK_FALSE(check_visibility({-1, 5, 1.0}, d, 0.01));
  CHECK_FALSE(check_visibility({3, 3, -0.5}, d, 0.01));
  CHECK(check_visibility({3, 3, 1.0}, d, 0.01));
  d.set(3, 3, 1.0);
  CHECK_FALSE(check_visibility({3, 3, 1.0}, d, 0.01));
}

TEST_CASE("check_visibility: bounds on every edge") {
  const DepthImage d(16, 8, 5.0);
  CHECK(check_visibility({0, 0, 1.0}, d));
  CHECK(check_visibility({15, 7, 1.0}, d));
  CHECK_FALSE(check_visibility({16, 0, 1.0}, d));
  CHECK_FALSE(check_visibility({0, 8, 1.0}, d));
  CHECK_FALSE(check_visibility({0, -1, 1.0}, d));
  CHECK_FALSE(check_visibility({0, 0, 0.0}, d));
}

TEST_CASE("check_visibility: the slack boundary is occluded") {
  DepthImage d(4, 4, 1.5);
  CHECK_FALSE(check_visibility({1, 1, 1.5}, d, 0.0001));
  CHECK_FALSE(check_visibility({1, 1, 1.25}, d, 0.25));  // D == z + eps exactly
  CHECK(check_visibility({1, 1, 1.25}, d, 0.125));
}

TEST_CASE("check_visibility: invalid depth is no occlusion evidence") {
  DepthImage d(4, 4, 0.0);
  d.set(1, 0, std::numeric_limits<double>::quiet_NaN());
  d.set(2, 0, std::numeric_limits<double>::infinity());
  d.set(3, 0, -1.0);
  for (int u = 0; u < 4; ++u) {
    CHECK(check_visibility({u, 0, 3.0}, d));
    CHECK_FALSE(check_visibility({u, 0, -3.0}, d));
  }
}

TEST_CASE("check_visibility matches the decision table on random inputs") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> pix(-3, 18);
  std::uniform_real_distribution<double> z(-1.0, 3.0);
  std::uniform_real_distribution<double> dv(-0.5, 3.0);
  DepthImage d(16, 16);
  for (auto& v : d.values()) v = dv(rng);
  for (int i = 0; i < 20000; ++i) {
    const int u = pix(rng), v = pix(rng);
    const double zz = z(rng);
    CHECK(check_visibility({u, v, zz}, d, 0.01) == expected_visible(u, v, zz, d, 0.01));
  }
}

TEST_CASE("monotonicity in depth") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dv(0.1, 3.0);
  std::uniform_real_distribution<double> z(0.01, 3.0);
  DepthImage d(8, 8);
  for (auto& v : d.values()) v = dv(rng);
  for (int i = 0; i < 5000; ++i) {
    const int u = i % 8, v = (i / 8) % 8;
    const double a = z(rng);
    const double b = z(rng) * a / 3.0;  // b < a
    if (check_visibility({u, v, a}, d)) CHECK(check_visibility({u, v, b}, d));
  }
}

TEST_CASE("raising epsilon never reveals a hidden point") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> dv(0.1, 3.0);
  std::uniform_real_distribution<double> e(0.0, 0.2);
  DepthImage d(8, 8);
  for (auto& v : d.values()) v = dv(rng);
  for (int i = 0; i < 5000; ++i) {
    const int u = i % 8, v = (i / 8) % 8;
    const double zz = dv(rng);
    const double e1 = e(rng), e2 = e1 + e(rng);
    if (!check_visibility({u, v, zz}, d, e1)) CHECK_FALSE(check_visibility({u, v, zz}, d, e2));
  }
}

TEST_CASE("all-invalid depth reduces to the frustum test") {
  const DepthImage d(10, 6, 0.0);
  for (int v = -2; v < 8; ++v) {
    for (int u = -2; u < 12; ++u) {
      for (double zz : {-1.0, 0.0, 1e-9, 0.5, 100.0}) {
        const bool frustum = zz > 0 && u >= 0 && v >= 0 && u < 10 && v < 6;
        CHECK(check_visibility({u, v, zz}, d) == frustum);
      }
    }
  }
}

TEST_CASE("require_matching_size") {
  CameraIntrinsics k;
  k.width = 10;
  k.height = 6;
  CHECK_NOTHROW(require_matching_size(DepthImage(10, 6), k));
  CHECK_THROWS_AS(require_matching_size(DepthImage(6, 10), k), ValidationError);
}
