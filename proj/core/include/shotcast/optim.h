// Copyright 2026 the shotcast authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace shotcast {

// Objective with optional analytic gradient: fill `grad` when it is
// non-empty (it has the same length as `x`). Must return +inf rather than
// throw for out-of-domain points; the line search backs off.
using GradFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

// Objective only, for derivative-free search.
using ScalarFn = std::function<double(std::span<const double> x)>;

struct BfgsOptions {
    int max_iters = 200;
    double grad_tol = 1e-6;  // max-norm of the gradient, relative to max(1, |f|)
};

struct BfgsResult {
    std::vector<double> x;
    double f = 0.0;
    int iters = 0;
    bool converged = false;  // gradient tolerance met
};

/// Dense BFGS with Armijo backtracking. Deterministic; keeps the best point
/// seen, which is what gets returned if the line search stalls first.
BfgsResult bfgs_minimize(const GradFn& fn, std::vector<double> x0,
                         const BfgsOptions& opts = {});

struct NelderMeadOptions {
    int max_iters = 500;
    double diameter_tol = 1e-4;  // max pairwise vertex distance, inf-norm
    double init_step = 0.25;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int iters = 0;
    bool converged = false;
};

/// Nelder-Mead simplex (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5) with one restart around the incumbent at a smaller step.
NelderMeadResult nelder_mead(const ScalarFn& fn, std::vector<double> x0,
                             const NelderMeadOptions& opts = {});

/// Golden-section search for a unimodal f on [lo, hi]; stops at |hi-lo| < xtol.
double golden_section(const std::function<double(double)>& fn, double lo,
                      double hi, double xtol);

}  // namespace shotcast
