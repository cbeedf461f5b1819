// Copyright 2026 The sosdec Authors
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

#include "sosdec/threshold_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace sosdec {

namespace {

struct InnerFit {
  double a = 0.0, b = 0.0, c = 0.0;
  double chi2 = std::numeric_limits<double>::infinity();
};

// Closed-form weighted least squares for (a,b,c) at fixed (p_th, nu).
InnerFit inner_fit(const std::vector<FitPoint>& data, double p_th, double nu) {
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (const FitPoint& point : data) {
    const double x = std::pow(point.distance, 1.0 / nu) * (point.p - p_th);
    const double w = 1.0 / (point.stderr_p_l * point.stderr_p_l);
    const Eigen::Vector3d phi(1.0, x, x * x);
    normal += w * phi * phi.transpose();
    rhs += w * point.p_l * phi;
  }
  InnerFit fit;
  Eigen::LDLT<Eigen::Matrix3d> ldlt(normal);
  if (ldlt.info() != Eigen::Success) return fit;
  const Eigen::Vector3d coeff = ldlt.solve(rhs);
  fit.a = coeff(0);
  fit.b = coeff(1);
  fit.c = coeff(2);
  double chi2 = 0.0;
  for (const FitPoint& point : data) {
    const double x = std::pow(point.distance, 1.0 / nu) * (point.p - p_th);
    const double model = fit.a + fit.b * x + fit.c * x * x;
    const double r = (point.p_l - model) / point.stderr_p_l;
    chi2 += r * r;
  }
  fit.chi2 = chi2;
  return fit;
}

double objective(const std::vector<FitPoint>& data, double p_th, double nu) {
  if (!(nu > 0.05) || !(nu < 50.0)) return std::numeric_limits<double>::infinity();
  return inner_fit(data, p_th, nu).chi2;
}

struct NmPoint {
  std::array<double, 2> x;
  double f;
};

// Plain two-dimensional Nelder-Mead; deterministic.
NmPoint nelder_mead(const std::vector<FitPoint>& data, std::array<double, 2> start,
                    std::array<double, 2> step) {
  std::array<NmPoint, 3> simplex;
  for (int i = 0; i < 3; ++i) {
    std::array<double, 2> x = start;
    if (i > 0) x[i - 1] += step[i - 1];
    simplex[i] = {x, objective(data, x[0], x[1])};
  }
  const auto order = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [](const NmPoint& a, const NmPoint& b) { return a.f < b.f; });
  };
  order();
  for (int iter = 0; iter < 400; ++iter) {
    if (std::abs(simplex[2].f - simplex[0].f) <= 1e-14 * (1.0 + std::abs(simplex[0].f))) break;
    const std::array<double, 2> centroid{(simplex[0].x[0] + simplex[1].x[0]) / 2.0,
                                         (simplex[0].x[1] + simplex[1].x[1]) / 2.0};
    const auto at = [&](double t) {
      std::array<double, 2> x{centroid[0] + t * (centroid[0] - simplex[2].x[0]),
                              centroid[1] + t * (centroid[1] - simplex[2].x[1])};
      return NmPoint{x, objective(data, x[0], x[1])};
    };
    NmPoint reflected = at(1.0);
    if (reflected.f < simplex[0].f) {
      NmPoint expanded = at(2.0);
      simplex[2] = expanded.f < reflected.f ? expanded : reflected;
    } else if (reflected.f < simplex[1].f) {
      simplex[2] = reflected;
    } else {
      NmPoint contracted = at(reflected.f < simplex[2].f ? 0.5 : -0.5);
      if (contracted.f < std::min(reflected.f, simplex[2].f)) {
        simplex[2] = contracted;
      } else {
        for (int i = 1; i < 3; ++i) {
          simplex[i].x[0] = (simplex[i].x[0] + simplex[0].x[0]) / 2.0;
          simplex[i].x[1] = (simplex[i].x[1] + simplex[0].x[1]) / 2.0;
          simplex[i].f = objective(data, simplex[i].x[0], simplex[i].x[1]);
        }
      }
    }
    order();
  }
  return simplex[0];
}

}  // namespace

double threshold_model(const ThresholdFit& fit, int distance, double p) {
  const double x = std::pow(distance, 1.0 / fit.nu) * (p - fit.p_th);
  return fit.a + fit.b * x + fit.c * x * x;
}

ThresholdFit fit_threshold(const std::vector<FitPoint>& data) {
  std::map<int, int> points_per_distance;
  double p_min = std::numeric_limits<double>::infinity();
  double p_max = -std::numeric_limits<double>::infinity();
  for (const FitPoint& point : data) {
    if (!(point.stderr_p_l > 0.0))
      throw std::invalid_argument("every fit point needs a positive stderr");
    ++points_per_distance[point.distance];
    p_min = std::min(p_min, point.p);
    p_max = std::max(p_max, point.p);
  }
  if (points_per_distance.size() < 2)
    throw std::invalid_argument("threshold fit needs at least 2 distances");
  for (const auto& [d, count] : points_per_distance)
    if (count < 4) throw std::invalid_argument("threshold fit needs >= 4 p-points per distance");

  NmPoint best{{0.0, 0.0}, std::numeric_limits<double>::infinity()};
  for (int gp = 0; gp < 5; ++gp) {
    const double p0 = p_min + (p_max - p_min) * (gp + 0.5) / 5.0;
    for (double nu0 : {0.5, 1.0, 1.5, 2.0, 3.0}) {
      const NmPoint candidate =
          nelder_mead(data, {p0, nu0}, {(p_max - p_min) / 10.0 + 1e-4, 0.25});
      if (candidate.f < best.f) best = candidate;
    }
  }

  ThresholdFit fit;
  fit.p_th = best.x[0];
  fit.nu = best.x[1];
  const InnerFit inner = inner_fit(data, fit.p_th, fit.nu);
  fit.a = inner.a;
  fit.b = inner.b;
  fit.c = inner.c;
  fit.residual = inner.chi2;
  fit.converged =
      std::isfinite(fit.residual) && fit.p_th >= p_min && fit.p_th <= p_max && fit.nu > 0.05;

  // Gauss-Newton variance estimate over (p_th, nu) at the optimum.
  if (fit.converged) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    for (const FitPoint& point : data) {
      const double dpow = std::pow(point.distance, 1.0 / fit.nu);
      const double x = dpow * (point.p - fit.p_th);
      const double dfdx = fit.b + 2.0 * fit.c * x;
      const double dx_dpth = -dpow;
      const double dx_dnu = -x * std::log(point.distance) / (fit.nu * fit.nu);
      const Eigen::Vector2d grad(dfdx * dx_dpth / point.stderr_p_l,
                                 dfdx * dx_dnu / point.stderr_p_l);
      jtj += grad * grad.transpose();
    }
    const int dof = std::max<int>(1, static_cast<int>(data.size()) - 5);
    Eigen::Matrix2d cov = jtj.inverse() * (fit.residual / dof);
    fit.var_p_th = cov(0, 0);
    fit.var_nu = cov(1, 1);
  }
  return fit;
}

}  // namespace sosdec
