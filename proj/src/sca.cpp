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
#include "otfs/sca.hpp"

#include "otfs/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace otfs {

Demand Demand::from_config(const ScenarioConfig& config)
{
    Demand d;
    d.P = config.P;
    for (int q = 0; q < config.Q; ++q) {
        d.alpha.push_back(config.weight(q));
        d.c_min.push_back(config.c_min(q));
    }
    return d;
}

bool Demand::has_floors() const
{
    return std::any_of(c_min.begin(), c_min.end(), [](double c) { return c > 0.0; });
}

ScaOptions ScaOptions::from_config(const ScenarioConfig& config)
{
    ScaOptions o;
    o.eta = config.eta;
    o.max_iters = config.sca_max_iters;
    o.tol = config.tol_sca;
    o.tol_inner = config.tol_inner;
    o.dc_split = config.dc_split;
    return o;
}

namespace {

using convex::Affine;
using convex::Inequality;
using convex::Term;

constexpr double kTinyGain = 1e-12;
constexpr double kNuFloor = -0.5;
constexpr double kStartMargin = 1e-3;
constexpr double kEqualShare = 0.9; // fraction of the budget spread by the default start
constexpr double kTieWidth = 1e-3;
constexpr double kBalanceFloor = 1e-2;
constexpr double kWarmGap = 1e-1;

enum class Mode { Sdma, Relaxed, Fixed };

struct SlotSpec {
    Mode mode = Mode::Sdma;
    int q = -1;
    int i = -1;
};

struct PairVars {
    int q = 0;
    int i = 0;
    int a = -1;             // relaxed slots only
    std::vector<int> ps;    // per bin; -1 when the strong user is held at zero
    std::vector<int> pw;
    std::vector<int> nu;    // -1 when the weak user sees no interference
};

struct SlotVars {
    Mode mode = Mode::Sdma;
    std::vector<int> bins;
    std::vector<std::vector<int>> p;  // [k][user]: SDMA powers or shared user powers of a relaxed slot
    std::vector<std::vector<int>> nu; // [k][user]: SDMA only; -1 without interference
    std::vector<PairVars> pairs;
};

struct RateTerm {
    int user = 0;
    int var = 0;
    double gain = 1.0;
};

Inequality linear_row(std::vector<Term> terms, double constant)
{
    Inequality row;
    row.linear.terms = std::move(terms);
    row.linear.constant = constant;
    return row;
}

class Model {
public:
    Model(const std::vector<SlotSpec>& specs, const RsPartition& part, const EffectiveChannel& ch,
          const Demand& demand, double eta, DcSplit split)
        : ch_(ch), demand_(demand), eta_(eta), split_(split), Q_(ch.users())
    {
        rate_scale_ = 1.0 / (ch.bins() * std::numbers::ln2);
        for (std::size_t r = 0; r < specs.size(); ++r) {
            SlotVars s;
            s.mode = specs[r].mode;
            s.bins = part.slots[r];
            const std::size_t K = s.bins.size();
            if (s.mode == Mode::Sdma || s.mode == Mode::Relaxed) {
                s.p.assign(K, std::vector<int>(static_cast<std::size_t>(Q_)));
                for (auto& row : s.p) {
                    for (int& v : row) {
                        v = n_++;
                    }
                }
            }
            if (s.mode == Mode::Sdma) {
                s.nu.assign(K, std::vector<int>(static_cast<std::size_t>(Q_)));
                for (std::size_t k = 0; k < K; ++k) {
                    const int b = s.bins[k];
                    for (int u = 0; u < Q_; ++u) {
                        const auto uu = static_cast<std::size_t>(u);
                        bool clean = true;
                        for (int j = 0; j < Q_; ++j) {
                            clean = clean && (j == u || G(u, j, b) <= kTinyGain);
                        }
                        // an interference-free rate is concave in the power itself
                        if (clean) {
                            s.nu[k][uu] = -1;
                            rates_.push_back({u, s.p[k][uu], G(u, u, b)});
                        } else {
                            s.nu[k][uu] = n_++;
                            rates_.push_back({u, s.nu[k][uu], 1.0});
                        }
                    }
                }
            } else {
                std::vector<std::pair<int, int>> pairs;
                if (s.mode == Mode::Relaxed) {
                    pairs = user_pairs(Q_);
                } else {
                    pairs.emplace_back(specs[r].q, specs[r].i);
                }
                for (const auto& [q, i] : pairs) {
                    PairVars pv;
                    pv.q = q;
                    pv.i = i;
                    if (s.mode == Mode::Relaxed) {
                        pv.a = n_++;
                    }
                    for (int b : s.bins) {
                        const bool strong_free = G(q, i, b) > kTinyGain;
                        pv.ps.push_back(strong_free ? n_++ : -1);
                        pv.pw.push_back(n_++);
                        if (strong_free) {
                            rates_.push_back({q, pv.ps.back(), G(q, q, b)});
                        }
                        if (strong_free && G(i, q, b) > kTinyGain) {
                            pv.nu.push_back(n_++);
                            rates_.push_back({i, pv.nu.back(), 1.0});
                        } else {
                            pv.nu.push_back(-1);
                            rates_.push_back({i, pv.pw.back(), G(i, i, b)});
                        }
                    }
                    s.pairs.push_back(std::move(pv));
                }
            }
            slots_.push_back(std::move(s));
        }
    }

    int n() const { return n_; }
    const std::vector<SlotVars>& slots() const { return slots_; }

    Eigen::VectorXd initial_point() const
    {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
        const double e = kEqualShare / (Q_ * ch_.bins());
        for (const auto& s : slots_) {
            for (const auto& row : s.p) {
                for (int v : row) {
                    x[v] = e;
                }
            }
            const double share = s.mode == Mode::Relaxed ? 1.0 / static_cast<double>(s.pairs.size()) : 1.0;
            for (const auto& pv : s.pairs) {
                if (pv.a >= 0) {
                    x[pv.a] = share;
                }
                for (std::size_t k = 0; k < s.bins.size(); ++k) {
                    x[pv.pw[k]] = share * e;
                    if (pv.ps[k] >= 0) {
                        x[pv.ps[k]] = share * e;
                    }
                }
            }
        }
        enforce_sic(x);
        refresh_nu(x);
        return x;
    }

    /// Start for a model without relaxed slots, pulled slightly toward the equal split.
    Eigen::VectorXd from_powers(const PowerAllocation& watts) const
    {
        const Eigen::VectorXd equal = initial_point();
        Eigen::VectorXd x = equal;
        for (const auto& s : slots_) {
            for (std::size_t k = 0; k < s.bins.size(); ++k) {
                const int b = s.bins[k];
                const std::size_t users = s.p.empty() ? 0 : s.p[k].size();
                for (std::size_t u = 0; u < users; ++u) {
                    x[s.p[k][u]] = std::max(0.0, watts(static_cast<Eigen::Index>(u), b) / demand_.P);
                }
                for (const auto& pv : s.pairs) {
                    x[pv.pw[k]] = std::max(0.0, watts(pv.i, b) / demand_.P);
                    if (pv.ps[k] >= 0) {
                        x[pv.ps[k]] = std::max(0.0, watts(pv.q, b) / demand_.P);
                    }
                }
            }
        }
        x = 0.95 * x + 0.05 * equal;
        const double spent = budget_use(x);
        if (spent > 0.999) {
            scale_powers(x, 0.99 / spent);
        }
        enforce_sic(x);
        refresh_nu(x);
        return x;
    }

    /// Projects a phase-one iterate back to a usable linearization point.
    void sanitize(Eigen::VectorXd& x) const
    {
        for (const auto& s : slots_) {
            for (const auto& row : s.p) {
                for (int v : row) {
                    x[v] = std::clamp(x[v], 1e-9, 1.0);
                }
            }
            double a_sum = 0.0;
            for (const auto& pv : s.pairs) {
                if (pv.a >= 0) {
                    x[pv.a] = std::clamp(x[pv.a], 1e-6, 1.0);
                    a_sum += x[pv.a];
                }
                for (std::size_t k = 0; k < s.bins.size(); ++k) {
                    x[pv.pw[k]] = std::max(x[pv.pw[k]], 1e-9);
                    if (pv.ps[k] >= 0) {
                        x[pv.ps[k]] = std::max(x[pv.ps[k]], 1e-9);
                    }
                }
            }
            for (const auto& pv : s.pairs) {
                if (pv.a >= 0) {
                    x[pv.a] /= a_sum;
                }
            }
        }
        refresh_nu(x);
    }

    /// Point around which the binarity penalty is linearized. Any point gives a
    /// valid minorizer; when a slot's weights are still tied (where the penalty
    /// has no slope along the simplex) each weight is replaced by its pair's
    /// share of the slot's relaxed rate.
    Eigen::VectorXd penalty_anchor(const Eigen::VectorXd& x) const
    {
        Eigen::VectorXd anchor = x;
        for (std::size_t r = 0; r < slots_.size(); ++r) {
            const auto& s = slots_[r];
            if (s.mode != Mode::Relaxed) {
                continue;
            }
            double lo = 1.0;
            double hi = 0.0;
            for (const auto& pv : s.pairs) {
                lo = std::min(lo, x[pv.a]);
                hi = std::max(hi, x[pv.a]);
            }
            if (hi - lo > kTieWidth) {
                continue;
            }
            std::vector<double> share;
            double total = 0.0;
            for (const auto& pv : s.pairs) {
                double v = 0.0;
                for (std::size_t k = 0; k < s.bins.size(); ++k) {
                    const int b = s.bins[k];
                    if (pv.ps[k] >= 0) {
                        v += demand_.alpha[static_cast<std::size_t>(pv.q)] * std::log1p(G(pv.q, pv.q, b) * x[pv.ps[k]]);
                    }
                    const double weak = pv.nu[k] >= 0 ? x[pv.nu[k]] : G(pv.i, pv.i, b) * x[pv.pw[k]];
                    v += demand_.alpha[static_cast<std::size_t>(pv.i)] * std::log1p(std::max(weak, 0.0));
                }
                share.push_back(v);
                total += v;
            }
            if (!(total > 0.0)) {
                continue;
            }
            for (std::size_t j = 0; j < s.pairs.size(); ++j) {
                anchor[s.pairs[j].a] = share[j] / total;
            }
        }
        return anchor;
    }

    convex::Problem linearize(const Eigen::VectorXd& at) const { return linearize(at, at); }

    convex::Problem linearize(const Eigen::VectorXd& at, const Eigen::VectorXd& anchor) const
    {
        convex::Problem pr;
        pr.n = n_;
        for (const auto& t : rates_) {
            pr.objective_logs.push_back({t.var, t.gain, demand_.alpha[static_cast<std::size_t>(t.user)] * rate_scale_});
        }
        for (const auto& s : slots_) {
            for (const auto& pv : s.pairs) {
                if (pv.a >= 0) {
                    pr.objective_linear.terms.push_back({pv.a, eta_ * (2.0 * anchor[pv.a] - 1.0)});
                }
            }
        }

        Inequality budget;
        bool any_sdma = false;
        for (const auto& s : slots_) {
            any_sdma = any_sdma || s.mode == Mode::Sdma;
            if (s.mode == Mode::Sdma) {
                for (const auto& row : s.p) {
                    for (int v : row) {
                        budget.linear.terms.push_back({v, 1.0});
                    }
                }
            }
            for (const auto& pv : s.pairs) {
                for (std::size_t k = 0; k < s.bins.size(); ++k) {
                    budget.linear.terms.push_back({pv.pw[k], 1.0});
                    if (pv.ps[k] >= 0) {
                        budget.linear.terms.push_back({pv.ps[k], 1.0});
                    }
                }
            }
        }
        budget.linear.constant = -1.0;
        pr.inequalities.push_back(budget);

        for (int u = 0; u < Q_; ++u) {
            const double floor = demand_.c_min[static_cast<std::size_t>(u)];
            if (floor <= 0.0) {
                continue;
            }
            Inequality row;
            row.linear.constant = floor;
            for (const auto& t : rates_) {
                if (t.user == u) {
                    row.logs.push_back({t.var, t.gain, rate_scale_});
                }
            }
            pr.inequalities.push_back(row);

            if (!any_sdma) {
                // the user must hold at least one slot
                Inequality cover;
                cover.linear.constant = 1.0;
                for (const auto& s : slots_) {
                    for (const auto& pv : s.pairs) {
                        if (pv.q != u && pv.i != u) {
                            continue;
                        }
                        if (pv.a >= 0) {
                            cover.linear.terms.push_back({pv.a, -1.0});
                        } else {
                            cover.linear.constant -= 1.0;
                        }
                    }
                }
                if (!cover.linear.terms.empty() || cover.linear.constant > 0.0) {
                    pr.inequalities.push_back(cover);
                }
            }
        }

        for (const auto& s : slots_) {
            add_slot_rows(pr, s, at);
        }
        return pr;
    }

    double penalized(const Eigen::VectorXd& x) const
    {
        double v = rate(x);
        for (const auto& s : slots_) {
            for (const auto& pv : s.pairs) {
                if (pv.a >= 0) {
                    v += eta_ * (x[pv.a] * x[pv.a] - x[pv.a]);
                }
            }
        }
        return v;
    }

    double rate(const Eigen::VectorXd& x) const
    {
        double v = 0.0;
        for (const auto& t : rates_) {
            const double arg = 1.0 + t.gain * x[t.var];
            if (!(arg > 0.0)) {
                return -std::numeric_limits<double>::infinity();
            }
            v += demand_.alpha[static_cast<std::size_t>(t.user)] * rate_scale_ * std::log(arg);
        }
        return v;
    }

    double binarity(const Eigen::VectorXd& x) const
    {
        double v = 0.0;
        for (const auto& s : slots_) {
            for (const auto& pv : s.pairs) {
                if (pv.a >= 0) {
                    v += x[pv.a] * (1.0 - x[pv.a]);
                }
            }
        }
        return v;
    }

    double bigm_gap(const Eigen::VectorXd& x) const
    {
        double gap = 0.0;
        for (const auto& s : slots_) {
            if (s.mode != Mode::Relaxed) {
                continue;
            }
            for (const auto& pv : s.pairs) {
                for (std::size_t k = 0; k < s.bins.size(); ++k) {
                    const double a = x[pv.a];
                    gap = std::max(gap, std::abs(x[pv.pw[k]] - a * x[s.p[k][static_cast<std::size_t>(pv.i)]]));
                    const double strong = pv.ps[k] >= 0 ? x[pv.ps[k]] : 0.0;
                    const double expected = pv.ps[k] >= 0 ? a * x[s.p[k][static_cast<std::size_t>(pv.q)]] : 0.0;
                    gap = std::max(gap, std::abs(strong - expected));
                }
            }
        }
        return gap;
    }

    AccessPlan round(const Eigen::VectorXd& x) const
    {
        AccessPlan plan;
        for (const auto& s : slots_) {
            if (s.mode == Mode::Sdma) {
                plan.push_back(SlotChoice::sdma());
                continue;
            }
            std::size_t best = 0;
            for (std::size_t j = 1; j < s.pairs.size(); ++j) {
                if (x[s.pairs[j].a] > x[s.pairs[best].a]) {
                    best = j;
                }
            }
            plan.push_back(SlotChoice::noma(s.pairs[best].q, s.pairs[best].i));
        }
        return plan;
    }

    /// Watts per user and bin for the given plan; slots whose pair is absent stay at zero.
    PowerAllocation powers_of(const Eigen::VectorXd& x, const AccessPlan& plan) const
    {
        PowerAllocation p = PowerAllocation::Zero(Q_, ch_.bins());
        for (std::size_t r = 0; r < slots_.size(); ++r) {
            const auto& s = slots_[r];
            const SlotChoice& choice = plan[r];
            for (std::size_t k = 0; k < s.bins.size(); ++k) {
                const int b = s.bins[k];
                if (s.mode == Mode::Sdma) {
                    for (int u = 0; u < Q_; ++u) {
                        p(u, b) = std::max(0.0, x[s.p[k][static_cast<std::size_t>(u)]]) * demand_.P;
                    }
                    continue;
                }
                for (const auto& pv : s.pairs) {
                    if (!choice.is_noma() || pv.q != choice.strong || pv.i != choice.weak) {
                        continue;
                    }
                    p(pv.i, b) = std::max(0.0, x[pv.pw[k]]) * demand_.P;
                    p(pv.q, b) = pv.ps[k] >= 0 ? std::max(0.0, x[pv.ps[k]]) * demand_.P : 0.0;
                }
            }
        }
        return p;
    }

private:
    double G(int q, int i, int b) const { return ch_.gain(q, i, b) * demand_.P; }

    double budget_use(const Eigen::VectorXd& x) const
    {
        double total = 0.0;
        for (const auto& s : slots_) {
            if (s.mode == Mode::Sdma) {
                for (const auto& row : s.p) {
                    for (int v : row) {
                        total += x[v];
                    }
                }
            }
            for (const auto& pv : s.pairs) {
                for (std::size_t k = 0; k < s.bins.size(); ++k) {
                    total += x[pv.pw[k]] + (pv.ps[k] >= 0 ? x[pv.ps[k]] : 0.0);
                }
            }
        }
        return total;
    }

    void scale_powers(Eigen::VectorXd& x, double factor) const
    {
        for (const auto& s : slots_) {
            if (s.mode == Mode::Sdma) {
                for (const auto& row : s.p) {
                    for (int v : row) {
                        x[v] *= factor;
                    }
                }
            }
            for (const auto& pv : s.pairs) {
                for (std::size_t k = 0; k < s.bins.size(); ++k) {
                    x[pv.pw[k]] *= factor;
                    if (pv.ps[k] >= 0) {
                        x[pv.ps[k]] *= factor;
                    }
                }
            }
        }
    }

    // Pulls each strong power strictly under the SIC bound set by the weak power.
    void enforce_sic(Eigen::VectorXd& x) const
    {
        for (const auto& s : slots_) {
            for (const auto& pv : s.pairs) {
                for (std::size_t k = 0; k < s.bins.size(); ++k) {
                    if (pv.ps[k] < 0) {
                        continue;
                    }
                    const int b = s.bins[k];
                    const double own = G(pv.q, pv.q, b);
                    if (own > 0.0) {
                        x[pv.ps[k]] = std::min(x[pv.ps[k]], 0.5 * G(pv.q, pv.i, b) * x[pv.pw[k]] / own);
                    }
                }
            }
        }
    }

    void refresh_nu(Eigen::VectorXd& x) const
    {
        auto set = [&](int var, double sinr) {
            if (var < 0) {
                return;
            }
            x[var] = std::max(sinr * (1.0 - kStartMargin) - kStartMargin, 0.5 * kNuFloor);
        };
        for (const auto& s : slots_) {
            for (std::size_t k = 0; k < s.bins.size(); ++k) {
                const int b = s.bins[k];
                if (s.mode == Mode::Sdma) {
                    for (int u = 0; u < Q_; ++u) {
                        double interference = 1.0;
                        for (int j = 0; j < Q_; ++j) {
                            if (j != u) {
                                interference += G(u, j, b) * std::max(0.0, x[s.p[k][static_cast<std::size_t>(j)]]);
                            }
                        }
                        const double own = G(u, u, b) * std::max(0.0, x[s.p[k][static_cast<std::size_t>(u)]]);
                        set(s.nu[k][static_cast<std::size_t>(u)], own / interference);
                    }
                    continue;
                }
                for (const auto& pv : s.pairs) {
                    const double strong = pv.ps[k] >= 0 ? std::max(0.0, x[pv.ps[k]]) : 0.0;
                    const double own = G(pv.i, pv.i, b) * std::max(0.0, x[pv.pw[k]]);
                    set(pv.nu[k], own / (G(pv.i, pv.q, b) * strong + 1.0));
                }
            }
        }
    }

    // Convex inner approximation of nu (I + 1) <= own_gain * p, written as
    // (s nu + (I + 1) / s)^2 - (s nu - (I + 1) / s)^2 <= 4 own_gain p with the
    // subtracted square linearized at 'at'. Under the balanced split, s is
    // picked at 'at' so both halves match there; otherwise s = 1. The row is
    // normalized by its scale at 'at'.
    Inequality dc_row(int nu, int own, double own_gain, const std::vector<Term>& interferers,
                      const Eigen::VectorXd& at) const
    {
        double I = 1.0;
        for (const auto& t : interferers) {
            I += t.coef * at[t.var];
        }
        const double v = at[nu];
        const double s =
            split_ == DcSplit::Balanced ? std::sqrt(std::max(I, 1e-12) / std::max(v, kBalanceFloor)) : 1.0;
        const double w = s * v - I / s;
        const double S = std::max((s * v + I / s) * (s * v + I / s), 1e-12);
        const double r = 1.0 / std::sqrt(S);

        Inequality row;
        Affine square;
        square.terms.push_back({nu, s * r});
        square.constant = r / s;
        row.linear.terms.push_back({nu, -2.0 * w * s / S});
        for (const auto& t : interferers) {
            square.terms.push_back({t.var, t.coef * r / s});
            row.linear.terms.push_back({t.var, 2.0 * w * t.coef / (s * S)});
        }
        row.linear.terms.push_back({own, -4.0 * own_gain / S});
        row.linear.constant = (2.0 * w / s + w * w) / S;
        row.square = std::move(square);
        return row;
    }

    void add_slot_rows(convex::Problem& pr, const SlotVars& s, const Eigen::VectorXd& at) const
    {
        const std::size_t K = s.bins.size();
        if (s.mode == Mode::Sdma) {
            for (std::size_t k = 0; k < K; ++k) {
                const int b = s.bins[k];
                for (int u = 0; u < Q_; ++u) {
                    const int own = s.p[k][static_cast<std::size_t>(u)];
                    const int nu = s.nu[k][static_cast<std::size_t>(u)];
                    pr.inequalities.push_back(linear_row({{own, -1.0}}, 0.0));
                    if (nu < 0) {
                        continue;
                    }
                    pr.inequalities.push_back(linear_row({{nu, -1.0}}, kNuFloor));
                    std::vector<Term> interferers;
                    for (int j = 0; j < Q_; ++j) {
                        if (j != u) {
                            interferers.push_back({s.p[k][static_cast<std::size_t>(j)], G(u, j, b)});
                        }
                    }
                    pr.inequalities.push_back(dc_row(nu, own, G(u, u, b), interferers, at));
                }
            }
            return;
        }

        if (s.mode == Mode::Relaxed) {
            Affine sum;
            sum.constant = -1.0;
            for (const auto& pv : s.pairs) {
                sum.terms.push_back({pv.a, 1.0});
                pr.inequalities.push_back(linear_row({{pv.a, -1.0}}, 0.0));
                pr.inequalities.push_back(linear_row({{pv.a, 1.0}}, -1.0));
            }
            pr.equalities.push_back(sum);
            for (const auto& row : s.p) {
                for (int v : row) {
                    pr.inequalities.push_back(linear_row({{v, -1.0}}, 0.0));
                    pr.inequalities.push_back(linear_row({{v, 1.0}}, -1.0));
                }
            }
        }

        for (const auto& pv : s.pairs) {
            for (std::size_t k = 0; k < K; ++k) {
                const int b = s.bins[k];
                // big-M rows tying each pair power to a * (user power)
                auto tie = [&](int share, int user) {
                    pr.inequalities.push_back(linear_row({{share, -1.0}}, 0.0));
                    if (s.mode != Mode::Relaxed) {
                        return;
                    }
                    const int p = s.p[k][static_cast<std::size_t>(user)];
                    pr.inequalities.push_back(linear_row({{share, 1.0}, {p, -1.0}}, 0.0));
                    pr.inequalities.push_back(linear_row({{p, 1.0}, {pv.a, 1.0}, {share, -1.0}}, -1.0));
                    pr.inequalities.push_back(linear_row({{share, 1.0}, {pv.a, -1.0}}, 0.0));
                };
                tie(pv.pw[k], pv.i);
                std::vector<Term> interferers;
                if (pv.ps[k] >= 0) {
                    tie(pv.ps[k], pv.q);
                    const double own = G(pv.q, pv.q, b);
                    const double cross = G(pv.q, pv.i, b);
                    const double scale = 1.0 / std::max(own, cross);
                    pr.inequalities.push_back(linear_row({{pv.ps[k], own * scale}, {pv.pw[k], -cross * scale}}, 0.0));
                    interferers.push_back({pv.ps[k], G(pv.i, pv.q, b)});
                }
                if (pv.nu[k] < 0) {
                    continue;
                }
                pr.inequalities.push_back(linear_row({{pv.nu[k], -1.0}}, kNuFloor));
                pr.inequalities.push_back(dc_row(pv.nu[k], pv.pw[k], G(pv.i, pv.i, b), interferers, at));
            }
        }
    }

    const EffectiveChannel& ch_;
    const Demand& demand_;
    double eta_ = 0.0;
    DcSplit split_ = DcSplit::Literal;
    int Q_ = 0;
    int n_ = 0;
    double rate_scale_ = 0.0;
    std::vector<SlotVars> slots_;
    std::vector<RateTerm> rates_;
};

struct LoopOutcome {
    bool feasible = false;
    Eigen::VectorXd x;
    int iterations = 0;
    int newton_steps = 0;
    std::vector<double> trace;
};

LoopOutcome run_sca(const Model& model, Eigen::VectorXd x, const ScaOptions& options, ScaTraceRow::Stage stage)
{
    LoopOutcome out;
    convex::BarrierOptions bopt;
    bopt.tol = options.tol_inner;

    auto problem = model.linearize(x);
    if (!problem.strictly_feasible(x)) {
        bool found = false;
        for (int attempt = 0; attempt <= options.phase_one_retries && !found; ++attempt) {
            const auto phase = convex::find_strictly_feasible(problem, x, bopt);
            if (phase.feasible) {
                x = phase.x;
                found = true;
                break;
            }
            // re-linearize where phase one stalled and try again
            x = phase.x;
            model.sanitize(x);
            problem = model.linearize(x);
            found = problem.strictly_feasible(x);
        }
        if (!found) {
            out.x = x;
            return out;
        }
    }
    out.feasible = true;

    auto report = [&](double value) {
        out.trace.push_back(value);
        if (options.observer) {
            options.observer({stage, static_cast<int>(out.trace.size()) - 1, value});
        }
    };
    double current = model.penalized(x);
    report(current);
    for (int it = 0; it < options.max_iters; ++it) {
        problem = model.linearize(x, model.penalty_anchor(x));
        if (!problem.strictly_feasible(x)) {
            break;
        }
        // later iterates start close to the previous optimum, deeper along the central path
        convex::BarrierOptions warm = bopt;
        if (it > 0) {
            warm.t0 = static_cast<double>(problem.inequalities.size()) / (kWarmGap * (1.0 + std::abs(current)));
        }
        const auto res = convex::maximize(problem, x, warm);
        out.newton_steps += res.newton_steps;
        ++out.iterations;
        const double candidate = model.penalized(res.x);
        if (!(candidate >= current)) {
            break; // keep the better incumbent
        }
        const double change = (candidate - current) / std::max(std::abs(current), 1e-12);
        x = res.x;
        current = candidate;
        report(current);
        if (change < options.tol) {
            break;
        }
    }
    out.x = x;
    return out;
}

ScaResult zero_budget_result(AccessPlan plan, const RsPartition& part, const EffectiveChannel& ch,
                             const Demand& demand)
{
    ScaResult r;
    r.plan = std::move(plan);
    r.powers = PowerAllocation::Zero(ch.users(), ch.bins());
    r.feasible = true;
    evaluate_allocation(r, part, ch, demand);
    return r;
}

void check_plan(const AccessPlan& plan, const RsPartition& part, int Q)
{
    if (plan.size() != static_cast<std::size_t>(part.R)) {
        throw std::invalid_argument("access plan needs one entry per slot");
    }
    for (const auto& c : plan) {
        if (c.is_noma() && !(0 <= c.strong && c.strong < c.weak && c.weak < Q)) {
            throw std::invalid_argument("NOMA pair must be two distinct users, strong index first");
        }
    }
}

void repair_coverage(AccessPlan& plan, const std::vector<double>& slot_value, const RsPartition& part,
                     const EffectiveChannel& ch, const Demand& demand, bool& repaired)
{
    std::vector<int> order(plan.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return slot_value[static_cast<std::size_t>(a)] < slot_value[static_cast<std::size_t>(b)];
    });
    auto served_elsewhere = [&](int user, int skip) {
        if (demand.c_min[static_cast<std::size_t>(user)] <= 0.0) {
            return true;
        }
        for (std::size_t r = 0; r < plan.size(); ++r) {
            if (static_cast<int>(r) != skip && plan[r].serves(user)) {
                return true;
            }
        }
        return false;
    };
    for (;;) {
        const auto missing = uncovered_users(plan, demand);
        if (missing.empty()) {
            return;
        }
        const int u = missing.front();
        bool moved = false;
        for (int r : order) {
            const SlotChoice& c = plan[static_cast<std::size_t>(r)];
            if (!c.is_noma() || !served_elsewhere(c.strong, r) || !served_elsewhere(c.weak, r)) {
                continue;
            }
            // partner with the strongest own channel on this slot
            int partner = -1;
            double best = -1.0;
            for (int j = 0; j < ch.users(); ++j) {
                if (j == u) {
                    continue;
                }
                double g = 0.0;
                for (int b : part.slots[static_cast<std::size_t>(r)]) {
                    g += ch.self(j, b);
                }
                if (g > best) {
                    best = g;
                    partner = j;
                }
            }
            plan[static_cast<std::size_t>(r)] = SlotChoice::noma(std::min(u, partner), std::max(u, partner));
            repaired = true;
            moved = true;
            break;
        }
        if (!moved) {
            return;
        }
    }
}

} // namespace

std::vector<int> uncovered_users(const AccessPlan& plan, const Demand& demand)
{
    std::vector<int> out;
    for (std::size_t q = 0; q < demand.c_min.size(); ++q) {
        if (demand.c_min[q] <= 0.0) {
            continue;
        }
        const int user = static_cast<int>(q);
        if (std::none_of(plan.begin(), plan.end(), [&](const SlotChoice& c) { return c.serves(user); })) {
            out.push_back(user);
        }
    }
    return out;
}

void evaluate_allocation(ScaResult& result, const RsPartition& part, const EffectiveChannel& ch,
                         const Demand& demand)
{
    result.value = weighted_sum_rate(result.plan, ch, result.powers, part, demand.alpha);
    result.user_rates.clear();
    bool ok = uncovered_users(result.plan, demand).empty();
    for (int q = 0; q < ch.users(); ++q) {
        const double rate = user_total_rate(result.plan, result.powers, ch, part, q);
        result.user_rates.push_back(rate);
        ok = ok && rate >= demand.c_min[static_cast<std::size_t>(q)] - kRateFloorTolerance;
    }
    ok = ok && spent_power(result.plan, result.powers, part) <= demand.P * (1.0 + 1e-9);
    result.feasible = ok;
}

ScaResult sca_power_only(const AccessPlan& plan, const RsPartition& part, const EffectiveChannel& ch,
                         const Demand& demand, const ScaOptions& options, const PowerAllocation& start)
{
    check_plan(plan, part, ch.users());
    if (demand.P <= 0.0) {
        return zero_budget_result(plan, part, ch, demand);
    }
    std::vector<SlotSpec> specs;
    for (const auto& c : plan) {
        specs.push_back(c.is_noma() ? SlotSpec{Mode::Fixed, c.strong, c.weak} : SlotSpec{});
    }
    const Model model(specs, part, ch, demand, options.eta, options.dc_split);
    const Eigen::VectorXd x0 = start.size() > 0 ? model.from_powers(start) : model.initial_point();
    const auto loop = run_sca(model, x0, options, ScaTraceRow::Stage::FixedPlan);

    ScaResult out;
    out.plan = plan;
    out.powers = model.powers_of(loop.feasible ? loop.x : x0, plan);
    out.iterations = loop.iterations;
    out.newton_steps = loop.newton_steps;
    out.fixed_trace = loop.trace;
    evaluate_allocation(out, part, ch, demand);
    out.feasible = out.feasible && loop.feasible;
    return out;
}

ScaResult sca_solve_p3(const SdmaMask& mask, const RsPartition& part, const EffectiveChannel& ch,
                       const Demand& demand, const ScaOptions& options)
{
    if (mask.size() != static_cast<std::size_t>(part.R)) {
        throw std::invalid_argument("SDMA mask needs one entry per slot");
    }
    const int Q = ch.users();
    const bool any_noma = std::any_of(mask.begin(), mask.end(), [](int v) { return v == 0; });
    if (Q < 2 && any_noma) {
        // a NOMA slot needs two users
        ScaResult out;
        out.plan.assign(mask.size(), SlotChoice::sdma());
        out.powers = PowerAllocation::Zero(Q, ch.bins());
        return out;
    }
    if (Q == 2 || !any_noma) {
        AccessPlan plan;
        for (int v : mask) {
            plan.push_back(v != 0 ? SlotChoice::sdma() : SlotChoice::noma(0, 1));
        }
        return sca_power_only(plan, part, ch, demand, options);
    }
    if (demand.P <= 0.0) {
        AccessPlan plan;
        for (int v : mask) {
            plan.push_back(v != 0 ? SlotChoice::sdma() : SlotChoice::noma(0, 1));
        }
        return zero_budget_result(plan, part, ch, demand);
    }

    std::vector<SlotSpec> specs;
    for (int v : mask) {
        specs.push_back(v != 0 ? SlotSpec{} : SlotSpec{Mode::Relaxed});
    }
    const Model model(specs, part, ch, demand, options.eta, options.dc_split);
    const auto relaxed = run_sca(model, model.initial_point(), options, ScaTraceRow::Stage::Relaxed);

    AccessPlan plan = model.round(relaxed.x);
    if (!relaxed.feasible) {
        ScaResult out;
        out.plan = plan;
        out.powers = PowerAllocation::Zero(Q, ch.bins());
        out.iterations = relaxed.iterations;
        out.newton_steps = relaxed.newton_steps;
        evaluate_allocation(out, part, ch, demand);
        out.feasible = false;
        return out;
    }

    const PowerAllocation rounded = model.powers_of(relaxed.x, plan);
    bool repaired = false;
    if (demand.has_floors()) {
        std::vector<double> slot_value;
        for (int r = 0; r < part.R; ++r) {
            slot_value.push_back(rs_weighted_sum(plan, ch, rounded, part, demand.alpha, r));
        }
        repair_coverage(plan, slot_value, part, ch, demand, repaired);
    }

    ScaResult out = sca_power_only(plan, part, ch, demand, options, rounded);
    out.relaxed_trace = relaxed.trace;
    out.iterations += relaxed.iterations;
    out.newton_steps += relaxed.newton_steps;
    out.binarity = model.binarity(relaxed.x);
    out.bigm_gap = model.bigm_gap(relaxed.x) * demand.P;
    out.repaired = repaired;
    return out;
}

} // namespace otfs
