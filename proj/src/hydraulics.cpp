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

#include "dbp/hydraulics.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>

#include "dbp/error.hpp"
#include "dbp/strings.hpp"

namespace dbp {

namespace {

constexpr double kHwExponent = 1.852;
constexpr double kHwDiameterExponent = 4.871;
constexpr double kHwConstant = 10.667;  // SI: Q in m3/s, D and L in m
// Floor on dh/dQ (s/m^2) so near-zero flows keep the Jacobian finite.
constexpr double kMinGradient = 1e-6;

double ResistanceCoefficient(const Pipe& p) {
  const double d_m = p.diameter / 1000.0;
  return kHwConstant * p.length /
         (std::pow(p.roughness, kHwExponent) * std::pow(d_m, kHwDiameterExponent));
}

}  // namespace

double HazenWilliamsHeadloss(double length_m, double diameter_mm, double roughness,
                             double flow_lps) {
  Pipe p;
  p.length = length_m;
  p.diameter = diameter_mm;
  p.roughness = roughness;
  const double q = flow_lps / 1000.0;
  return ResistanceCoefficient(p) * std::copysign(std::pow(std::abs(q), kHwExponent), q);
}

double FlowSolution::flow(const Network& net, std::string_view pipe_id) const {
  auto k = net.FindPipe(pipe_id);
  if (!k) throw Error(ErrorCode::kInvalidArgument, "unknown pipe '" + std::string(pipe_id) + "'");
  return pipe_flows[*k];
}

double FlowSolution::head(const Network& net, std::string_view node_id) const {
  auto i = net.FindNode(node_id);
  if (!i) throw Error(ErrorCode::kUnknownNode, "unknown node '" + std::string(node_id) + "'");
  return node_heads[*i];
}

double MassBalanceResidual(const Network& net, const std::vector<double>& pipe_flows) {
  std::vector<double> balance(net.nodes.size(), 0.0);
  for (std::size_t k = 0; k < net.pipes.size(); ++k) {
    const Pipe& p = net.pipes[k];
    if (p.status == LinkStatus::kClosed) continue;
    balance[*net.FindNode(p.from)] -= pipe_flows[k];
    balance[*net.FindNode(p.to)] += pipe_flows[k];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const Node& n = net.nodes[i];
    if (n.kind != NodeKind::kJunction) continue;
    worst = std::max(worst, std::abs(balance[i] - n.base_demand));
  }
  return worst;
}

FlowSolution SolveFlows(const Network& net, const FlowOptions& options) {
  const std::size_t n_nodes = net.nodes.size();
  const auto diagnostics = ValidateNetwork(net);

  std::vector<char> excluded(n_nodes, 0);
  FlowSolution sol;
  for (const Diagnostic& d : diagnostics) {
    if (d.kind == DiagnosticKind::kZeroDemand) continue;
    const std::size_t i = *net.FindNode(d.subject);
    const Node& node = net.nodes[i];
    if (d.kind == DiagnosticKind::kRequiresUnsupportedLink) {
      throw Error(ErrorCode::kUnsupportedElement,
                  "node '" + node.id + "' is supplied only through a pump or valve; "
                  "pump and valve hydraulics are not simulated");
    }
    if (node.base_demand > 0.0) {
      throw Error(ErrorCode::kDisconnected,
                  "junction '" + node.id + "' has demand but no open path to a fixed-head node");
    }
    excluded[i] = 1;
    sol.isolated.push_back(node.id);
  }

  // Unknown heads: connected junctions only.
  std::vector<int> unknown(n_nodes, -1);
  int n_unknown = 0;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (net.nodes[i].kind == NodeKind::kJunction && !excluded[i]) unknown[i] = n_unknown++;
  }

  struct Link {
    std::size_t pipe;
    std::size_t from;
    std::size_t to;
    double r;
    double area;
  };
  std::vector<Link> links;
  for (std::size_t k = 0; k < net.pipes.size(); ++k) {
    const Pipe& p = net.pipes[k];
    if (p.status == LinkStatus::kClosed) continue;
    const std::size_t a = *net.FindNode(p.from);
    const std::size_t b = *net.FindNode(p.to);
    if (excluded[a] || excluded[b]) continue;
    const double d_m = p.diameter / 1000.0;
    links.push_back({k, a, b, ResistanceCoefficient(p), M_PI * d_m * d_m / 4.0});
  }

  std::vector<double> demand(n_nodes, 0.0);  // m3/s
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (net.nodes[i].kind == NodeKind::kJunction) {
      demand[i] = net.nodes[i].base_demand / 1000.0;
      sol.total_demand += net.nodes[i].base_demand;
    }
  }

  std::vector<double> q(links.size());
  for (std::size_t e = 0; e < links.size(); ++e) q[e] = 0.3 * links[e].area;  // 0.3 m/s

  std::vector<double> heads(n_nodes, 0.0);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    heads[i] = net.nodes[i].fixed_head() ? net.nodes[i].head : net.nodes[i].elevation;
  }

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  bool analyzed = false;
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs(n_unknown);
  std::vector<double> p_coef(links.size()), y_coef(links.size());

  bool converged = false;
  double prev_change = std::numeric_limits<double>::infinity();
  int it = 0;
  for (it = 1; it <= options.max_iterations; ++it) {
    triplets.clear();
    rhs.setZero();
    for (std::size_t e = 0; e < links.size(); ++e) {
      const Link& l = links[e];
      const double aq = std::abs(q[e]);
      const double h = l.r * std::copysign(std::pow(aq, kHwExponent), q[e]);
      const double g = std::max(kHwExponent * l.r * std::pow(aq, kHwExponent - 1.0), kMinGradient);
      const double p = 1.0 / g;
      p_coef[e] = p;
      y_coef[e] = p * h;
      const double carried = q[e] - y_coef[e];
      const int ua = unknown[l.from];
      const int ub = unknown[l.to];
      if (ua >= 0) {
        triplets.emplace_back(ua, ua, p);
        rhs[ua] -= carried;
        if (ub >= 0) {
          triplets.emplace_back(ua, ub, -p);
        } else {
          rhs[ua] += p * heads[l.to];
        }
      }
      if (ub >= 0) {
        triplets.emplace_back(ub, ub, p);
        rhs[ub] += carried;
        if (ua >= 0) {
          triplets.emplace_back(ub, ua, -p);
        } else {
          rhs[ub] += p * heads[l.from];
        }
      }
    }
    for (std::size_t i = 0; i < n_nodes; ++i) {
      if (unknown[i] >= 0) rhs[unknown[i]] -= demand[i];
    }

    Eigen::SparseMatrix<double> a(n_unknown, n_unknown);
    a.setFromTriplets(triplets.begin(), triplets.end());
    if (!analyzed) {
      solver.analyzePattern(a);
      analyzed = true;
    }
    solver.factorize(a);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::kNonConvergence, "singular head system at iteration " + std::to_string(it));
    }
    const Eigen::VectorXd h = solver.solve(rhs);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      if (unknown[i] >= 0) heads[i] = h[unknown[i]];
    }

    double change = 0.0, total = 0.0;
    for (std::size_t e = 0; e < links.size(); ++e) {
      const Link& l = links[e];
      const double next = q[e] - y_coef[e] + p_coef[e] * (heads[l.from] - heads[l.to]);
      change += std::abs(next - q[e]);
      total += std::abs(next);
      q[e] = next;
    }
    // Quadratic convergence ends in roundoff noise that grows with the pipe
    // count; stop once the step is tiny and no longer shrinking.
    const bool stalled = change <= 1e-8 * total && change >= 0.5 * prev_change;
    if (change <= 1e-12 * total + 1e-15 || stalled) {
      converged = true;
      break;
    }
    prev_change = change;
  }

  sol.pipe_flows.assign(net.pipes.size(), 0.0);
  for (std::size_t e = 0; e < links.size(); ++e) sol.pipe_flows[links[e].pipe] = q[e] * 1000.0;
  sol.node_heads = heads;
  sol.iterations = std::min(it, options.max_iterations);
  sol.residual = MassBalanceResidual(net, sol.pipe_flows);
  if (!converged || sol.residual > options.tolerance) {
    throw Error(ErrorCode::kNonConvergence,
                "hydraulic solution did not converge after " + std::to_string(sol.iterations) +
                    " iterations (residual " + FormatDouble(sol.residual) + " L/s)");
  }
  return sol;
}

}  // namespace dbp
