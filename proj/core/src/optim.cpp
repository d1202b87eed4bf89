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
#include "shotcast/optim.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace shotcast {

namespace {

double inf_norm(const Eigen::VectorXd& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

BfgsResult bfgs_minimize(const GradFn& fn, std::vector<double> x0,
                         const BfgsOptions& opts) {
    const int n = static_cast<int>(x0.size());
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), n);
    Eigen::VectorXd grad(n);
    std::vector<double> gbuf(n);

    auto eval = [&](const Eigen::VectorXd& p, Eigen::VectorXd& g) {
        std::vector<double> pv(p.data(), p.data() + n);
        const double f = fn(std::span<const double>(pv), std::span<double>(gbuf));
        g = Eigen::Map<const Eigen::VectorXd>(gbuf.data(), n);
        return f;
    };
    auto eval_f = [&](const Eigen::VectorXd& p) {
        std::vector<double> pv(p.data(), p.data() + n);
        return fn(std::span<const double>(pv), std::span<double>());
    };

    double f = eval(x, grad);
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);

    BfgsResult result;
    result.x.assign(x.data(), x.data() + n);
    result.f = f;

    Eigen::VectorXd best_x = x;
    double best_f = f;

    // The gradient scales with the objective (sums over observations), and
    // rounding caps resolvable decreases near |f| * eps, so the tolerance
    // must scale too or large fits can never satisfy it.
    auto grad_tol_at = [&](double fval) {
        return opts.grad_tol * std::max(1.0, std::fabs(fval));
    };

    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        if (inf_norm(grad) < grad_tol_at(f)) {
            result.converged = true;
            break;
        }
        Eigen::VectorXd dir = -(hinv * grad);
        double slope = grad.dot(dir);
        if (!(slope < 0.0)) {  // lost positive-definiteness; steepest descent
            hinv.setIdentity();
            dir = -grad;
            slope = grad.dot(dir);
        }

        // Armijo backtracking: f(x + a d) <= f + c1 a g.d, halving from 1.
        constexpr double c1 = 1e-4;
        double alpha = 1.0;
        double f_new = std::numeric_limits<double>::infinity();
        Eigen::VectorXd x_new;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = x + alpha * dir;
            f_new = eval_f(x_new);
            if (std::isfinite(f_new) && f_new <= f + c1 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;  // no decrease possible along this direction

        Eigen::VectorXd grad_new(n);
        const double f_checked = eval(x_new, grad_new);
        (void)f_checked;

        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = grad_new - grad;
        const double sy = s.dot(y);
        // Skip the update when curvature is too small to be trustworthy.
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
            const Eigen::MatrixXd left = eye - rho * s * y.transpose();
            hinv = left * hinv * left.transpose() + rho * s * s.transpose();
        }

        x = x_new;
        f = f_new;
        grad = grad_new;
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }

    if (f < best_f) {
        best_f = f;
        best_x = x;
    }
    result.x.assign(best_x.data(), best_x.data() + n);
    result.f = best_f;
    result.iters = iter;
    if (!result.converged) {
        // Converged flag may still be earned on the final point.
        Eigen::VectorXd g_final(n);
        eval(best_x, g_final);
        result.converged = inf_norm(g_final) < grad_tol_at(best_f);
    }
    return result;
}

NelderMeadResult nelder_mead(const ScalarFn& fn, std::vector<double> x0,
                             const NelderMeadOptions& opts) {
    const int n = static_cast<int>(x0.size());
    using Vec = std::vector<double>;

    auto value = [&](const Vec& p) { return fn(std::span<const double>(p)); };

    struct Vertex {
        Vec x;
        double f;
    };

    auto run = [&](const Vec& start, double step, int iter_budget, int& used) {
        std::vector<Vertex> simplex;
        simplex.reserve(n + 1);
        simplex.push_back({start, value(start)});
        for (int i = 0; i < n; ++i) {
            Vec v = start;
            v[i] += step;
            simplex.push_back({v, value(v)});
        }

        auto order = [&] {
            std::stable_sort(simplex.begin(), simplex.end(),
                             [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        };
        auto diameter = [&] {
            double d = 0.0;
            for (size_t i = 0; i + 1 < simplex.size(); ++i)
                for (size_t j = i + 1; j < simplex.size(); ++j)
                    for (int k = 0; k < n; ++k)
                        d = std::max(d, std::fabs(simplex[i].x[k] - simplex[j].x[k]));
            return d;
        };

        order();
        bool hit_tol = false;
        used = 0;
        for (; used < iter_budget; ++used) {
            if (diameter() < opts.diameter_tol) {
                hit_tol = true;
                break;
            }
            Vec centroid(n, 0.0);
            for (int i = 0; i < n; ++i) {
                for (int k = 0; k < n; ++k) centroid[k] += simplex[i].x[k];
            }
            for (int k = 0; k < n; ++k) centroid[k] /= n;

            auto blend = [&](double coef) {
                Vec p(n);
                for (int k = 0; k < n; ++k)
                    p[k] = centroid[k] + coef * (simplex[n].x[k] - centroid[k]);
                return p;
            };

            const Vec refl = blend(-1.0);
            const double f_refl = value(refl);
            if (f_refl < simplex[0].f) {
                const Vec expa = blend(-2.0);
                const double f_expa = value(expa);
                if (f_expa < f_refl)
                    simplex[n] = {expa, f_expa};
                else
                    simplex[n] = {refl, f_refl};
            } else if (f_refl < simplex[n - 1].f) {
                simplex[n] = {refl, f_refl};
            } else {
                const bool outside = f_refl < simplex[n].f;
                const Vec contr = blend(outside ? -0.5 : 0.5);
                const double f_contr = value(contr);
                if (f_contr < std::min(f_refl, simplex[n].f)) {
                    simplex[n] = {contr, f_contr};
                } else {
                    // Shrink toward the best vertex.
                    for (int i = 1; i <= n; ++i) {
                        for (int k = 0; k < n; ++k)
                            simplex[i].x[k] =
                                simplex[0].x[k] + 0.5 * (simplex[i].x[k] - simplex[0].x[k]);
                        simplex[i].f = value(simplex[i].x);
                    }
                }
            }
            order();
        }
        return std::pair<Vertex, bool>(simplex[0], hit_tol);
    };

    int used1 = 0;
    auto [best1, tol1] = run(x0, opts.init_step, opts.max_iters, used1);
    // One restart around the incumbent at a smaller step shakes off
    // premature collapse on a non-optimal face.
    int used2 = 0;
    const int budget2 = std::max(0, opts.max_iters - used1);
    auto [best2, tol2] =
        budget2 > 0 ? run(best1.x, opts.init_step * 0.25, budget2, used2)
                    : std::pair<Vertex, bool>(best1, tol1);

    const Vertex& best = best2.f <= best1.f ? best2 : best1;
    NelderMeadResult result;
    result.x = best.x;
    result.f = best.f;
    result.iters = used1 + used2;
    result.converged = tol1 || tol2;
    return result;
}

double golden_section(const std::function<double(double)>& fn, double lo,
                      double hi, double xtol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fn(c);
    double fd = fn(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = fn(d);
        }
    }
    return (a + b) / 2.0;
}

}  // namespace shotcast
