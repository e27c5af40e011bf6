/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "otfs/barrier.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace otfs::convex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum(const std::vector<LogTerm>& logs, const Eigen::VectorXd& x)
{
    double sum = 0.0;
    for (const auto& l : logs) {
        const double arg = 1.0 + l.gain * x[l.var];
        if (!(arg > 0.0)) {
            return -kInf;
        }
        sum += l.weight * std::log(arg);
    }
    return sum;
}

void add_sparse(Eigen::VectorXd& g, const std::vector<Term>& terms, double scale)
{
    for (const auto& t : terms) {
        g[t.var] += scale * t.coef;
    }
}

// Gradient of the log terms, and their (negative semidefinite) diagonal Hessian.
void log_derivatives(const std::vector<LogTerm>& logs, const Eigen::VectorXd& x, double scale, Eigen::VectorXd& g,
                     Eigen::MatrixXd& H)
{
    for (const auto& l : logs) {
        const double inv = 1.0 / (1.0 + l.gain * x[l.var]);
        g[l.var] += scale * l.weight * l.gain * inv;
        H(l.var, l.var) -= scale * l.weight * l.gain * l.gain * inv * inv;
    }
}

// Barrier function phi = -t F(x) - sum log(-f_i(x)), to be minimized.
double phi(const Problem& p, const Eigen::VectorXd& x, double t)
{
    const double logs = log_sum(p.objective_logs, x);
    if (logs == -kInf) {
        return kInf;
    }
    double value = -t * (logs + p.objective_linear.eval(x));
    for (const auto& c : p.inequalities) {
        const double f = c.eval(x);
        if (!(f < 0.0)) {
            return kInf;
        }
        value -= std::log(-f);
    }
    return value;
}

void phi_derivatives(const Problem& p, const Eigen::VectorXd& x, double t, Eigen::VectorXd& g, Eigen::MatrixXd& H)
{
    g.setZero(p.n);
    H.setZero(p.n, p.n);
    log_derivatives(p.objective_logs, x, -t, g, H);
    add_sparse(g, p.objective_linear.terms, -t);

    Eigen::VectorXd grad_f(p.n);
    std::vector<int> support;
    for (const auto& c : p.inequalities) {
        const double f = c.eval(x);
        const double inv = -1.0 / f; // positive inside the feasible set
        support.clear();
        grad_f.setZero();
        for (const auto& term : c.linear.terms) {
            grad_f[term.var] += term.coef;
            support.push_back(term.var);
        }
        if (c.square) {
            const double s = c.square->eval(x);
            for (const auto& term : c.square->terms) {
                grad_f[term.var] += 2.0 * s * term.coef;
                support.push_back(term.var);
            }
            // curvature of the square: 2 u u^T / (-f)
            for (const auto& a : c.square->terms) {
                for (const auto& b : c.square->terms) {
                    H(a.var, b.var) += 2.0 * inv * a.coef * b.coef;
                }
            }
        }
        for (const auto& l : c.logs) {
            const double d = 1.0 / (1.0 + l.gain * x[l.var]);
            grad_f[l.var] -= l.weight * l.gain * d;
            H(l.var, l.var) += inv * l.weight * l.gain * l.gain * d * d;
            support.push_back(l.var);
        }
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());
        for (int a : support) {
            g[a] += inv * grad_f[a];
            for (int b : support) {
                H(a, b) += inv * inv * grad_f[a] * grad_f[b];
            }
        }
    }
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& At)
{
    const Eigen::Index n = At.rows();
    if (At.cols() == 0) {
        return Eigen::MatrixXd::Identity(n, n);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(At);
    const Eigen::Index rank = qr.rank();
    const Eigen::MatrixXd Q = qr.householderQ();
    return Q.rightCols(n - rank);
}

// Equality rows as columns; the null-space basis is built only if a step needs it.
struct EqualityBlock {
    Eigen::MatrixXd At;
    Eigen::MatrixXd Z;

    explicit EqualityBlock(const Problem& p) : At(Eigen::MatrixXd::Zero(p.n, static_cast<Eigen::Index>(p.equalities.size())))
    {
        for (Eigen::Index j = 0; j < At.cols(); ++j) {
            for (const auto& t : p.equalities[static_cast<std::size_t>(j)].terms) {
                At(t.var, j) += t.coef;
            }
        }
    }

    const Eigen::MatrixXd& basis()
    {
        if (Z.size() == 0) {
            Z = null_space(At);
        }
        return Z;
    }
};

// Reduced solve on the null space, used when the full Hessian is not positive definite.
Eigen::VectorXd null_space_direction(const Eigen::MatrixXd& H, const Eigen::VectorXd& g, const Eigen::MatrixXd& Z)
{
    Eigen::MatrixXd Hr = Z.transpose() * H * Z;
    Eigen::VectorXd gr = Z.transpose() * g;
    const Eigen::Index m = Hr.rows();
    Eigen::VectorXd scale(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        scale[i] = 1.0 / std::sqrt(std::max(std::abs(Hr(i, i)), 1e-300));
    }
    Hr = scale.asDiagonal() * Hr * scale.asDiagonal();
    gr = scale.cwiseProduct(gr);
    Hr.diagonal().array() += 1e-13;
    const Eigen::VectorXd y = Hr.ldlt().solve(-gr);
    return Z * scale.cwiseProduct(y);
}

// Newton step of the equality-constrained model with symmetric diagonal scaling;
// the equalities are eliminated through their small Schur complement.
Eigen::VectorXd newton_direction(const Eigen::MatrixXd& H, const Eigen::VectorXd& g, EqualityBlock& eq)
{
    const Eigen::Index n = H.rows();
    Eigen::VectorXd scale(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        scale[i] = 1.0 / std::sqrt(std::max(std::abs(H(i, i)), 1e-300));
    }
    Eigen::MatrixXd Hs = scale.asDiagonal() * H * scale.asDiagonal();
    Hs.diagonal().array() += 1e-13;
    const Eigen::VectorXd gs = scale.cwiseProduct(g);
    Eigen::LLT<Eigen::MatrixXd> llt(Hs);
    if (llt.info() != Eigen::Success) {
        return null_space_direction(H, g, eq.basis());
    }
    Eigen::VectorXd y = -llt.solve(gs);
    if (eq.At.cols() > 0) {
        const Eigen::MatrixXd As = scale.asDiagonal() * eq.At;
        const Eigen::MatrixXd W = llt.solve(As);
        const Eigen::MatrixXd S = As.transpose() * W;
        const Eigen::VectorXd lambda = S.ldlt().solve(As.transpose() * y);
        y -= W * lambda;
    }
    return scale.cwiseProduct(y);
}

} // namespace

double Affine::eval(const Eigen::VectorXd& x) const
{
    double v = constant;
    for (const auto& t : terms) {
        v += t.coef * x[t.var];
    }
    return v;
}

double Inequality::eval(const Eigen::VectorXd& x) const
{
    const double logs_value = log_sum(logs, x);
    if (logs_value == -kInf) {
        return kInf;
    }
    double v = linear.eval(x) - logs_value;
    if (square) {
        const double s = square->eval(x);
        v += s * s;
    }
    return v;
}

double Problem::objective(const Eigen::VectorXd& x) const
{
    return log_sum(objective_logs, x) + objective_linear.eval(x);
}

double Problem::max_violation(const Eigen::VectorXd& x) const
{
    double worst = -kInf;
    for (const auto& c : inequalities) {
        worst = std::max(worst, c.eval(x));
    }
    return worst;
}

bool Problem::strictly_feasible(const Eigen::VectorXd& x) const
{
    return log_sum(objective_logs, x) > -kInf && (inequalities.empty() || max_violation(x) < 0.0);
}

BarrierResult maximize(const Problem& problem, const Eigen::VectorXd& x0, const BarrierOptions& options)
{
    BarrierResult out;
    out.x = x0;
    EqualityBlock eq(problem);
    const double m = static_cast<double>(problem.inequalities.size());
    double t = options.t0;
    Eigen::VectorXd g;
    Eigen::MatrixXd H;

    for (;;) {
        // centering
        for (;;) {
            if (out.newton_steps >= options.max_newton) {
                out.objective = problem.objective(out.x);
                return out;
            }
            phi_derivatives(problem, out.x, t, g, H);
            const Eigen::VectorXd dx = newton_direction(H, g, eq);
            const double decrement = -g.dot(dx);
            if (!(decrement > 2e-10)) {
                break;
            }
            ++out.newton_steps;
            const double f0 = phi(problem, out.x, t);
            double step = 1.0;
            double f1 = phi(problem, out.x + step * dx, t);
            while (!(f1 <= f0 - 0.01 * step * decrement) && step > 1e-20) {
                step *= 0.5;
                f1 = phi(problem, out.x + step * dx, t);
            }
            const double moved = step * dx.norm();
            if (step <= 1e-20) {
                break;
            }
            out.x += step * dx;
            if (moved <= 1e-15 * (1.0 + out.x.norm())) {
                break; // round-off floor
            }
            if (options.stop_early && options.stop_early(out.x)) {
                out.stopped_early = true;
                out.objective = problem.objective(out.x);
                return out;
            }
        }
        if (m == 0.0 || m / t < options.tol) {
            out.converged = true;
            break;
        }
        t *= options.mu;
    }
    out.objective = problem.objective(out.x);
    return out;
}

PhaseOneResult find_strictly_feasible(const Problem& problem, const Eigen::VectorXd& x0,
                                      const BarrierOptions& options)
{
    if (problem.strictly_feasible(x0)) {
        return {true, x0};
    }
    const double worst = problem.max_violation(x0);
    if (log_sum(problem.objective_logs, x0) == -kInf || !std::isfinite(worst)) {
        return {false, x0};
    }

    // every row gets a shared slack s; minimize s down to below zero
    Problem aux;
    aux.n = problem.n + 1;
    const int s = problem.n;
    aux.inequalities = problem.inequalities;
    for (auto& c : aux.inequalities) {
        c.linear.terms.push_back({s, -1.0});
    }
    Inequality floor;
    floor.linear.terms.push_back({s, -1.0});
    floor.linear.constant = -1.0;
    aux.inequalities.push_back(floor);
    aux.equalities = problem.equalities;
    aux.objective_linear.terms.push_back({s, -1.0});

    Eigen::VectorXd y(aux.n);
    y.head(problem.n) = x0;
    y[s] = std::max(worst, -0.5) + 1.0;

    BarrierOptions opts = options;
    opts.stop_early = [&](const Eigen::VectorXd& v) {
        return v[s] < 0.0 && problem.strictly_feasible(v.head(problem.n));
    };
    const auto res = maximize(aux, y, opts);
    Eigen::VectorXd x = res.x.head(problem.n);
    return {problem.strictly_feasible(x), x};
}

} // namespace otfs::convex
