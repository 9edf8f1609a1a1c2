#pragma once

#include "mmct/instance.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <optional>
#include <vector>

namespace mmct {

/// m(i) per activity, 1-based positions into the mode lists.
using ModeVector = std::vector<int>;

/// True iff the chosen modes fit every non-renewable budget.
inline bool ma_feasible(const Instance& inst, const ModeVector& modes) {
    if (static_cast<int>(modes.size()) != inst.activity_count())
        throw StructuralError("mode vector must cover every activity");
    for (int k = 1; k <= inst.nonrenewable_count(); ++k) {
        Rat usage(0);
        for (int i = 1; i <= inst.activity_count(); ++i)
            usage += inst.nonrenewable_demand(i, modes[i - 1], k);
        if (usage > inst.nonrenewable_capacity(k)) return false;
    }
    return true;
}

enum class OracleStatus { Optimal, Infeasible, LimitReached };

struct OracleLimits {
    long long node_cap = 10'000'000;
    double time_cap_s = 0; ///< 0 = unlimited
    bool force = false;    ///< lift the small-instance guard
};

struct OracleResult {
    OracleStatus status = OracleStatus::LimitReached;
    std::optional<Schedule> schedule; ///< best found; proven optimal iff status says so
    long long nodes = 0;
    double wall_s = 0;
};

namespace detail {

/// Exhaustive search state for one mode vector: depth-first over activity
/// orderings; each activity is placed at its earliest capacity- and
/// precedence-feasible start (left shift), so only active schedules are
/// enumerated and the first optimum found is the lexicographically smallest.
class OracleSearch {
public:
    OracleSearch(const Instance& inst, const OracleLimits& limits)
        : inst_(inst), limits_(limits), a_(inst.activity_count()),
          started_(std::chrono::steady_clock::now()) {
        preds_.assign(a_ + 1, {});
        succs_.assign(a_ + 1, {});
        for (auto [u, v] : inst.precedence()) {
            preds_[v].push_back(u);
            succs_[u].push_back(v);
        }
        caps_.assign(inst.renewable_count() + 1, 0);
        for (int k = 1; k <= inst.renewable_count(); ++k) caps_[k] = to_integer(inst.renewable_capacity(k));
    }

    OracleResult run() {
        OracleResult result;
        ModeVector modes(a_, 1);
        bool any_ma_feasible = false;
        while (true) {
            if (ma_feasible(inst_, modes)) {
                any_ma_feasible = true;
                load_modes(modes);
                if (cpm_bound() < best_) {
                    if (inst_.renewable_count() == 0)
                        accept_cpm_schedule(modes);
                    else
                        dfs(modes, 0);
                }
            }
            if (aborted_) break;
            // odometer step, activity 1 most significant
            int pos = a_ - 1;
            while (pos >= 0 && modes[pos] == inst_.mode_count(pos + 1)) modes[pos--] = 1;
            if (pos < 0) break;
            ++modes[pos];
        }

        result.nodes = nodes_;
        result.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
        if (aborted_) {
            result.status = OracleStatus::LimitReached;
            if (best_schedule_) result.schedule = best_schedule_;
        } else if (!any_ma_feasible) {
            result.status = OracleStatus::Infeasible;
        } else {
            result.status = OracleStatus::Optimal;
            result.schedule = best_schedule_;
        }
        return result;
    }

private:
    void load_modes(const ModeVector& modes) {
        dur_.assign(a_ + 1, 0);
        demand_.assign(a_ + 1, std::vector<long long>(inst_.renewable_count() + 1, 0));
        tail_.assign(a_ + 1, 0);
        for (int i = 1; i <= a_; ++i) {
            dur_[i] = to_integer(inst_.duration(i, modes[i - 1]));
            for (int k = 1; k <= inst_.renewable_count(); ++k)
                demand_[i][k] = to_integer(inst_.renewable_demand(i, modes[i - 1], k));
        }
        // longest chain starting at i, including i itself; activities are
        // numbered so that predecessors may have any index, so iterate to a
        // fixed point in reverse topological fashion via repeated relaxation
        std::vector<int> order = topo_order();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int i = *it;
            long long best = 0;
            for (int j : succs_[i]) best = std::max(best, tail_[j]);
            tail_[i] = dur_[i] + best;
        }
    }

    std::vector<int> topo_order() const {
        std::vector<int> indeg(a_ + 1, 0), order;
        for (int v = 1; v <= a_; ++v) indeg[v] = static_cast<int>(preds_[v].size());
        std::vector<int> stack;
        for (int v = a_; v >= 1; --v)
            if (indeg[v] == 0) stack.push_back(v);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int w : succs_[v])
                if (--indeg[w] == 0) stack.push_back(w);
        }
        return order;
    }

    long long cpm_bound() {
        std::vector<long long> est(a_ + 1, 0);
        long long bound = 0;
        for (int i : topo_order()) {
            for (int j : preds_[i]) est[i] = std::max(est[i], est[j] + dur_[j]);
            bound = std::max(bound, est[i] + dur_[i]);
        }
        cpm_est_ = std::move(est);
        return bound;
    }

    void accept_cpm_schedule(const ModeVector& modes) {
        long long makespan = 0;
        for (int i = 1; i <= a_; ++i) makespan = std::max(makespan, cpm_est_[i] + dur_[i]);
        if (makespan >= best_) return;
        best_ = makespan;
        std::vector<Rat> start;
        for (int i = 1; i <= a_; ++i) start.emplace_back(cpm_est_[i]);
        best_schedule_ = make_schedule(inst_, std::move(start), modes);
    }

    bool tick() {
        ++nodes_;
        if (limits_.node_cap > 0 && nodes_ > limits_.node_cap) aborted_ = true;
        if (!aborted_ && limits_.time_cap_s > 0 && (nodes_ & 1023) == 0) {
            double w = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
            if (w > limits_.time_cap_s) aborted_ = true;
        }
        return !aborted_;
    }

    long long usage_at(int k, long long t, unsigned scheduled) const {
        long long u = 0;
        for (int j = 1; j <= a_; ++j)
            if ((scheduled >> j) & 1u)
                if (start_[j] <= t && t < start_[j] + dur_[j]) u += demand_[j][k];
        return u;
    }

    bool fits_at(int i, long long t, unsigned scheduled) const {
        // capacity is piecewise constant; probe t and every event inside [t, t+d)
        std::vector<long long> probes{t};
        for (int j = 1; j <= a_; ++j)
            if ((scheduled >> j) & 1u) {
                if (start_[j] > t && start_[j] < t + dur_[i]) probes.push_back(start_[j]);
                long long fin = start_[j] + dur_[j];
                if (fin > t && fin < t + dur_[i]) probes.push_back(fin);
            }
        for (long long tau : probes)
            for (int k = 1; k <= inst_.renewable_count(); ++k)
                if (usage_at(k, tau, scheduled) + demand_[i][k] > caps_[k]) return false;
        return true;
    }

    long long lower_bound(unsigned scheduled, long long makespan_so_far) const {
        // earliest precedence-feasible completion of the remaining work
        std::vector<long long> est(a_ + 1, 0);
        long long lb = makespan_so_far;
        for (int i : topo_order_cache_) {
            if ((scheduled >> i) & 1u) {
                est[i] = start_[i];
            } else {
                for (int j : preds_[i]) est[i] = std::max(est[i], est[j] + dur_[j]);
                lb = std::max(lb, est[i] + tail_[i]);
            }
        }
        return lb;
    }

    void dfs(const ModeVector& modes, int depth) {
        if (aborted_) return;
        if (depth == 0) {
            start_.assign(a_ + 1, 0);
            topo_order_cache_ = topo_order();
        }
        if (depth == a_) {
            long long makespan = 0;
            for (int i = 1; i <= a_; ++i) makespan = std::max(makespan, start_[i] + dur_[i]);
            if (makespan < best_) {
                best_ = makespan;
                std::vector<Rat> start;
                for (int i = 1; i <= a_; ++i) start.emplace_back(start_[i]);
                best_schedule_ = make_schedule(inst_, std::move(start), modes);
            }
            return;
        }
        const unsigned scheduled = scheduled_;
        long long makespan_so_far = 0;
        for (int i = 1; i <= a_; ++i)
            if ((scheduled >> i) & 1u) makespan_so_far = std::max(makespan_so_far, start_[i] + dur_[i]);

        for (int i = 1; i <= a_ && !aborted_; ++i) {
            if ((scheduled >> i) & 1u) continue;
            bool eligible = true;
            long long t0 = 0;
            for (int j : preds_[i]) {
                if (!((scheduled >> j) & 1u)) {
                    eligible = false;
                    break;
                }
                t0 = std::max(t0, start_[j] + dur_[j]);
            }
            if (!eligible) continue;
            if (!tick()) return;

            // candidate starts: the precedence release plus later finish times
            std::vector<long long> candidates{t0};
            for (int j = 1; j <= a_; ++j)
                if ((scheduled >> j) & 1u) {
                    long long fin = start_[j] + dur_[j];
                    if (fin > t0) candidates.push_back(fin);
                }
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
            long long chosen = -1;
            for (long long t : candidates)
                if (fits_at(i, t, scheduled)) {
                    chosen = t;
                    break;
                }
            if (chosen < 0) continue; // cannot happen with per-mode demands within capacity

            start_[i] = chosen;
            scheduled_ = scheduled | (1u << i);
            if (lower_bound(scheduled_, std::max(makespan_so_far, chosen + dur_[i])) < best_)
                dfs(modes, depth + 1);
            scheduled_ = scheduled;
        }
    }

    const Instance& inst_;
    OracleLimits limits_;
    int a_;
    std::chrono::steady_clock::time_point started_;

    std::vector<std::vector<int>> preds_, succs_;
    std::vector<long long> caps_;

    std::vector<long long> dur_, tail_, cpm_est_;
    std::vector<std::vector<long long>> demand_;
    std::vector<long long> start_;
    std::vector<int> topo_order_cache_;
    unsigned scheduled_ = 0;

    long long best_ = std::numeric_limits<long long>::max();
    std::optional<Schedule> best_schedule_;
    long long nodes_ = 0;
    bool aborted_ = false;
};

} // namespace detail

/// Exact minimum makespan by enumerating mode vectors (pruned by the
/// non-renewable budgets and a critical-path bound) and, per vector, a
/// depth-first branch-and-bound over left-shifted schedules. Intended for
/// desk-scale inputs; refuses A > 10 or more than 5 modes unless forced.
/// Ties are broken toward the lexicographically smallest (mode vector,
/// ordering); results are deterministic.
inline OracleResult solve_exact(const Instance& inst, const OracleLimits& limits = {}) {
    if (!inst.integral())
        throw std::invalid_argument("exact search requires integral durations, demands and capacities");
    if (!limits.force && (inst.activity_count() > 10))
        throw std::invalid_argument("instance too large for exhaustive search (A > 10); pass force to override");
    if (!limits.force)
        for (int i = 1; i <= inst.activity_count(); ++i)
            if (inst.mode_count(i) > 5)
                throw std::invalid_argument("instance too large for exhaustive search (>5 modes); pass force to override");

    detail::OracleSearch search(inst, limits);
    return search.run();
}

} // namespace mmct
