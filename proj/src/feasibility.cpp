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
#include "otfs/feasibility.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace otfs {

namespace {

bool within_budget(double total, double budget) { return total <= budget * (1.0 + 1e-12) + 1e-300; }

void finish(FeasibilityResult& out, double budget)
{
    out.total = 0.0;
    for (double p : out.min_powers) {
        out.total += p;
    }
    out.slack = budget - out.total;
    out.feasible = within_budget(out.total, budget);
}

} // namespace

FeasibilityResult min_power_noma(std::span<const double> z, const EffectiveChannel& ch, const std::vector<int>& slot,
                                 int q, int i, double budget)
{
    if (z.size() != 2 * slot.size()) {
        throw std::invalid_argument("min_power_noma: expected two targets per bin");
    }
    FeasibilityResult out;
    out.min_powers.assign(z.size(), 0.0);
    for (std::size_t k = 0; k < slot.size(); ++k) {
        const int b = slot[k];
        const double cq = std::exp2(z[2 * k]) - 1.0;
        const double ci = std::exp2(z[2 * k + 1]) - 1.0;
        const double g_qq = ch.self(q, b);
        const double g_ii = ch.self(i, b);
        const double g_iq = ch.gain(i, q, b);
        const double g_qi = ch.gain(q, i, b);

        double pq = 0.0;
        if (cq > 0.0) {
            if (g_qq <= 0.0) {
                return out;
            }
            pq = cq / g_qq;
        }
        double pi = 0.0;
        if (ci > 0.0) {
            if (g_ii <= 0.0) {
                return out;
            }
            pi = ci * (g_iq * pq + 1.0) / g_ii;
        }
        const double own = g_qq * pq;
        if (own > 0.0) {
            if (g_qi <= 0.0) {
                return out;
            }
            pi = std::max(pi, own / g_qi);
        }
        out.min_powers[2 * k] = pq;
        out.min_powers[2 * k + 1] = pi;
    }
    finish(out, budget);
    return out;
}

FeasibilityResult min_power_sdma(std::span<const double> z, const EffectiveChannel& ch, const std::vector<int>& slot,
                                 double budget)
{
    const int Q = ch.users();
    if (z.size() != slot.size() * static_cast<std::size_t>(Q)) {
        throw std::invalid_argument("min_power_sdma: expected Q targets per bin");
    }
    FeasibilityResult out;
    out.min_powers.assign(z.size(), 0.0);
    std::vector<int> active;
    active.reserve(static_cast<std::size_t>(Q));
    for (std::size_t k = 0; k < slot.size(); ++k) {
        const int b = slot[k];
        active.clear();
        for (int u = 0; u < Q; ++u) {
            if (z[k * Q + u] > 0.0) {
                if (ch.self(u, b) <= 0.0) {
                    return out;
                }
                active.push_back(u);
            }
        }
        const int n = static_cast<int>(active.size());
        if (n == 0) {
            continue;
        }
        // (I - D F) p = D 1 with D = diag(c / gamma_self) and F the cross gains
        Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd rhs(n);
        for (int r = 0; r < n; ++r) {
            const int u = active[static_cast<std::size_t>(r)];
            const double scale = (std::exp2(z[k * Q + u]) - 1.0) / ch.self(u, b);
            rhs(r) = scale;
            for (int c = 0; c < n; ++c) {
                if (c != r) {
                    A(r, c) = -scale * ch.gain(u, active[static_cast<std::size_t>(c)], b);
                }
            }
        }
        Eigen::VectorXd p;
        if (n == 1) {
            p = rhs;
        } else {
            Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
            if (!lu.isInvertible()) {
                return out;
            }
            p = lu.solve(rhs);
        }
        for (int r = 0; r < n; ++r) {
            if (!(p(r) > 0.0) || !std::isfinite(p(r))) {
                return out;
            }
            out.min_powers[k * Q + active[static_cast<std::size_t>(r)]] = p(r);
        }
    }
    finish(out, budget);
    return out;
}

} // namespace otfs
