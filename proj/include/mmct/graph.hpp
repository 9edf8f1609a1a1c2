#pragma once

#include "mmct/instance.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace mmct {

/// Activity-on-node precedence graph over V = {0, 1..A, A+1} with a dummy
/// source/sink. Arcs are the given precedence pairs plus source arcs to
/// activities without predecessors and sink arcs from activities without
/// successors. The transitive hull covers V; ancestor/descendant counts are
/// taken on the non-dummy subgraph.
struct AonGraph {
    int activity_count = 0;
    int source = 0;
    int sink = 0; ///< A + 1

    std::vector<std::vector<int>> succ; ///< per node, sorted
    std::vector<std::vector<int>> pred;
    std::vector<std::vector<bool>> reach; ///< strict reachability over V
    std::vector<int> ancestors;           ///< anc(i) for i in 1..A (index 0 unused)
    std::vector<int> descendants;

    int node_count() const { return activity_count + 2; }
    bool hull_contains(int i, int j) const { return i != j && reach[i][j]; }

    /// Hull pairs restricted to real activities.
    std::vector<std::pair<int, int>> hull_pairs_activities() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 1; i <= activity_count; ++i)
            for (int j = 1; j <= activity_count; ++j)
                if (i != j && reach[i][j]) out.emplace_back(i, j);
        return out;
    }

    std::vector<int> topological_order() const {
        std::vector<int> indeg(node_count(), 0), order;
        for (int v = 0; v < node_count(); ++v)
            for (int w : succ[v]) ++indeg[w];
        std::vector<int> stack;
        for (int v = node_count() - 1; v >= 0; --v)
            if (indeg[v] == 0) stack.push_back(v);
        while (!stack.empty()) {
            // pop the smallest ready node for a deterministic order
            auto it = std::min_element(stack.begin(), stack.end());
            int v = *it;
            stack.erase(it);
            order.push_back(v);
            for (int w : succ[v])
                if (--indeg[w] == 0) stack.push_back(w);
        }
        return order;
    }
};

inline AonGraph build_aon(const Instance& inst) {
    const int a = inst.activity_count();
    AonGraph g;
    g.activity_count = a;
    g.sink = a + 1;
    g.succ.assign(a + 2, {});
    g.pred.assign(a + 2, {});

    for (auto [u, v] : inst.precedence()) {
        g.succ[u].push_back(v);
        g.pred[v].push_back(u);
    }
    for (int i = 1; i <= a; ++i) {
        if (g.pred[i].empty()) {
            g.succ[0].push_back(i);
            g.pred[i].push_back(0);
        }
        if (g.succ[i].empty()) {
            g.succ[i].push_back(g.sink);
            g.pred[g.sink].push_back(i);
        }
    }
    for (auto& v : g.succ) std::sort(v.begin(), v.end());
    for (auto& v : g.pred) std::sort(v.begin(), v.end());

    // cycle check with an explicit witness
    {
        std::vector<int> state(g.node_count(), 0); // 0 new, 1 on stack, 2 done
        std::vector<int> parent(g.node_count(), -1);
        std::vector<std::pair<int, size_t>> stack;
        for (int s = 0; s < g.node_count(); ++s) {
            if (state[s] != 0) continue;
            stack.push_back({s, 0});
            state[s] = 1;
            while (!stack.empty()) {
                auto& [v, idx] = stack.back();
                if (idx < g.succ[v].size()) {
                    int w = g.succ[v][idx++];
                    if (state[w] == 0) {
                        state[w] = 1;
                        parent[w] = v;
                        stack.push_back({w, 0});
                    } else if (state[w] == 1) {
                        std::string cycle = std::to_string(w);
                        for (int x = v; x != -1 && x != w; x = parent[x]) cycle = std::to_string(x) + " -> " + cycle;
                        cycle = std::to_string(w) + " -> " + cycle;
                        throw std::invalid_argument("precedence graph has a cycle: " + cycle);
                    }
                } else {
                    state[v] = 2;
                    stack.pop_back();
                }
            }
        }
    }

    // strict transitive closure via DFS from each node
    const int n = g.node_count();
    g.reach.assign(n, std::vector<bool>(n, false));
    for (int s = 0; s < n; ++s) {
        std::vector<int> stack(g.succ[s]);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (g.reach[s][v]) continue;
            g.reach[s][v] = true;
            for (int w : g.succ[v])
                if (!g.reach[s][w]) stack.push_back(w);
        }
    }

    g.ancestors.assign(a + 1, 0);
    g.descendants.assign(a + 1, 0);
    for (int i = 1; i <= a; ++i)
        for (int j = 1; j <= a; ++j)
            if (i != j && g.reach[i][j]) {
                ++g.descendants[i];
                ++g.ancestors[j];
            }
    return g;
}

/// Earliest/latest start per node from the multi-mode critical path method:
/// both passes use the minimum duration of each activity. The horizon is the
/// sum of maximum durations, a makespan upper bound valid for any mode choice.
struct TimeWindows {
    std::vector<Rat> earliest; ///< per node 0..A+1
    std::vector<Rat> latest;
    Rat horizon; ///< latest[sink]
};

inline TimeWindows time_windows(const Instance& inst, const AonGraph& g) {
    const int n = g.node_count();
    auto pmin = [&](int v) { return (v == 0 || v == g.sink) ? Rat(0) : inst.min_duration(v); };

    TimeWindows tw;
    tw.earliest.assign(n, Rat(0));
    tw.latest.assign(n, Rat(0));

    const auto order = g.topological_order();
    for (int v : order)
        for (int u : g.pred[v])
            tw.earliest[v] = std::max(tw.earliest[v], tw.earliest[u] + pmin(u));

    Rat horizon(0);
    for (int i = 1; i <= g.activity_count; ++i) horizon += inst.max_duration(i);
    tw.horizon = horizon;

    tw.latest.assign(n, horizon);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (v == g.sink) continue;
        Rat best = horizon;
        for (int w : g.succ[v]) best = std::min(best, tw.latest[w]);
        tw.latest[v] = best - pmin(v);
    }
    tw.latest[0] = Rat(0); // project start is pinned
    return tw;
}

/// One activity-mode combination (both 1-based).
struct ActivityMode {
    int activity = 0;
    int mode = 0;
    bool operator==(const ActivityMode&) const = default;
    auto operator<=>(const ActivityMode&) const = default;
};

/// Unordered pair of activity-mode combinations on distinct activities whose
/// joint demand exceeds some renewable capacity. Stored with u < v.
struct IncompatiblePair {
    ActivityMode u, v;
    bool operator==(const IncompatiblePair&) const = default;
};

/// All incompatible pairs. Pairs whose activities are related in the
/// transitive hull can never run concurrently anyway and are excluded by
/// default; include_hull_related keeps them for comparison runs.
inline std::vector<IncompatiblePair> incompatible_pairs(const Instance& inst, const AonGraph& g,
                                                        bool include_hull_related = false) {
    std::vector<IncompatiblePair> out;
    const int a = inst.activity_count();
    for (int i = 1; i <= a; ++i)
        for (int j = i + 1; j <= a; ++j) {
            if (!include_hull_related && (g.hull_contains(i, j) || g.hull_contains(j, i))) continue;
            for (int mi = 1; mi <= inst.mode_count(i); ++mi)
                for (int mj = 1; mj <= inst.mode_count(j); ++mj) {
                    bool clash = false;
                    for (int k = 1; k <= inst.renewable_count() && !clash; ++k)
                        clash = inst.renewable_demand(i, mi, k) + inst.renewable_demand(j, mj, k) >
                                inst.renewable_capacity(k);
                    if (clash) out.push_back({{i, mi}, {j, mj}});
                }
        }
    return out;
}

/// Resource strength of renewable resource k:
///   RS_k = (B_k - bmin_k) / (bmax_k - bmin_k)
/// with bmin_k the largest per-activity minimum demand and bmax_k the peak
/// usage of the earliest-start schedule that runs every activity in its mode
/// of maximal demand on k. Undefined (nullopt) when bmax_k == bmin_k. The
/// value is invariant under uniform scaling of all b_imk and B_k.
inline std::optional<Rat> resource_strength(const Instance& inst, int k) {
    const int a = inst.activity_count();
    if (k < 1 || k > inst.renewable_count()) throw StructuralError("renewable resource index out of range");

    Rat bmin(0);
    std::vector<int> peak_mode(a + 1, 1);
    for (int i = 1; i <= a; ++i) {
        Rat lo = inst.renewable_demand(i, 1, k), hi = lo;
        for (int m = 2; m <= inst.mode_count(i); ++m) {
            const Rat& d = inst.renewable_demand(i, m, k);
            lo = std::min(lo, d);
            if (d > hi) {
                hi = d;
                peak_mode[i] = m;
            }
        }
        bmin = std::max(bmin, lo);
    }

    // earliest starts under the chosen max-demand modes
    AonGraph g = build_aon(inst);
    std::vector<Rat> start(a + 2, Rat(0));
    auto dur = [&](int v) { return (v == 0 || v == g.sink) ? Rat(0) : inst.duration(v, peak_mode[v]); };
    for (int v : g.topological_order())
        for (int u : g.pred[v]) start[v] = std::max(start[v], start[u] + dur(u));

    Rat bmax(0);
    for (int i = 1; i <= a; ++i) {
        const Rat t = start[i];
        Rat usage(0);
        for (int j = 1; j <= a; ++j)
            if (start[j] <= t && t < start[j] + dur(j)) usage += inst.renewable_demand(j, peak_mode[j], k);
        bmax = std::max(bmax, usage);
    }

    if (bmax == bmin) return std::nullopt;
    return (inst.renewable_capacity(k) - bmin) / (bmax - bmin);
}

} // namespace mmct
