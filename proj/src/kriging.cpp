// Copyright 2026 The Authors.
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

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "dbp/env_data.hpp"
#include "dbp/error.hpp"

namespace dbp {

double Variogram::operator()(double h) const {
  if (h <= 0.0) return 0.0;
  return nugget + (sill - nugget) * (1.0 - std::exp(-h / range));
}

namespace {

double Distance(const Coord& a, const Coord& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::vector<KrigingEstimate> Krige(const std::vector<KrigingSample>& samples,
                                   const std::vector<Coord>& targets, const Variogram& v) {
  const std::size_t k = samples.size();
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "kriging needs at least two samples");
  if (!(v.range > 0.0) || !(v.sill > 0.0) || v.nugget < 0.0 || v.sill < v.nugget) {
    throw Error(ErrorCode::kInvalidArgument, "variogram needs range > 0, sill > 0, 0 <= nugget <= sill");
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (samples[i].at == samples[j].at) {
        throw Error(ErrorCode::kSingularSystem, "duplicate kriging sample coordinates");
      }
    }
  }

  // [ Gamma 1 ] [w ]   [gamma0]
  // [ 1^T   0 ] [mu] = [  1   ]
  const Eigen::Index n = static_cast<Eigen::Index>(k) + 1;
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          v(Distance(samples[i].at, samples[j].at));
    }
    a(static_cast<Eigen::Index>(i), n - 1) = 1.0;
    a(n - 1, static_cast<Eigen::Index>(i)) = 1.0;
  }
  a(n - 1, n - 1) = 0.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw Error(ErrorCode::kSingularSystem, "kriging system is singular");

  std::vector<KrigingEstimate> out;
  out.reserve(targets.size());
  Eigen::VectorXd rhs(n);
  for (const Coord& t : targets) {
    KrigingEstimate est;
    est.weights.assign(k, 0.0);
    // Exact interpolator: a target on a sample returns that sample.
    std::size_t hit = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (samples[i].at == t) hit = i;
    }
    if (hit < k) {
      est.weights[hit] = 1.0;
      est.value = samples[hit].value;
      out.push_back(std::move(est));
      continue;
    }
    for (std::size_t i = 0; i < k; ++i) rhs[static_cast<Eigen::Index>(i)] = v(Distance(samples[i].at, t));
    rhs[n - 1] = 1.0;
    const Eigen::VectorXd sol = lu.solve(rhs);
    double value = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double w = sol[static_cast<Eigen::Index>(i)];
      est.weights[i] = w;
      value += w * samples[i].value;
      if (w < 0.0) est.negative_weights = true;
    }
    est.value = value;
    out.push_back(std::move(est));
  }
  return out;
}

Variogram DefaultVariogram(const std::vector<double>& values, const Network& net) {
  Variogram v;
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= values.empty() ? 1.0 : static_cast<double>(values.size());
  double var = 0.0;
  for (double x : values) var += (x - mean) * (x - mean);
  var /= values.empty() ? 1.0 : static_cast<double>(values.size());
  v.sill = var > 0.0 ? var : 1.0;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Node& node : net.nodes) {
    if (!node.coord) continue;
    xmin = std::min(xmin, node.coord->x);
    xmax = std::max(xmax, node.coord->x);
    ymin = std::min(ymin, node.coord->y);
    ymax = std::max(ymax, node.coord->y);
  }
  const double diag = xmax >= xmin ? std::hypot(xmax - xmin, ymax - ymin) : 0.0;
  v.range = diag > 0.0 ? diag / 3.0 : 1.0;
  return v;
}

}  // namespace dbp
