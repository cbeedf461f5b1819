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

#pragma once

#include <vector>

namespace sosdec {

struct FitPoint {
  int distance = 0;
  double p = 0.0;
  double p_l = 0.0;
  double stderr_p_l = 0.0;
};

// Finite-size scaling fit p_L(p,d) = f(d^{1/nu} (p - p_th)) with the
// quadratic ansatz f(x) = a + b x + c x^2.
struct ThresholdFit {
  double p_th = 0.0;
  double nu = 0.0;
  double a = 0.0, b = 0.0, c = 0.0;
  double residual = 0.0;  // weighted sum of squares at the optimum
  bool converged = false;
  // Gauss-Newton parameter variance estimates for (p_th, nu), diagnostics.
  double var_p_th = 0.0;
  double var_nu = 0.0;
};

// Weighted least squares: closed-form (a,b,c) at fixed (p_th,nu), outer
// Nelder-Mead over (p_th,nu) from a multi-start grid (p_th across the data
// range, nu in [0.5,3]). Needs >= 2 distances and >= 4 p-points each.
ThresholdFit fit_threshold(const std::vector<FitPoint>& data);

// Model prediction, exposed for refit-consistency checks.
double threshold_model(const ThresholdFit& fit, int distance, double p);

}  // namespace sosdec
