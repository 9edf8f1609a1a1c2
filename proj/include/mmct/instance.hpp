#pragma once

#include "mmct/errors.hpp"
#include "mmct/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mmct {

/// One execution variant of an activity: a duration plus per-resource demands.
struct Mode {
    std::string label;            ///< original mode number as text, for display
    Rat duration;                 ///< p >= 0, time units
    std::vector<Rat> renewable;   ///< demand per time unit, one entry per renewable resource
    std::vector<Rat> nonrenewable;///< total demand per project, one entry per non-renewable resource
};

struct Activity {
    std::vector<Mode> modes;
};

/// Where an instance came from (format tag, path, raw header metadata).
struct SourceInfo {
    std::string format;                 ///< "psplib-mm" | "mmlib" | "canonical" | "builtin" | "derived"
    std::string origin;                 ///< path or identifier
    std::optional<long long> horizon;   ///< header value when the format carries one
};

/// A multi-mode project scheduling instance. Immutable after construction and
/// safe to share across threads.
///
/// Construction validates:
///  - every demand fits its capacity (modes that do not are dropped with a
///    warning; an activity losing all its modes is a hard error),
///  - the precedence relation stays within 1..A, has no self-loops, and is
///    acyclic,
///  - durations and demands are nonnegative.
class Instance {
public:
    Instance(std::string name,
             std::vector<Activity> activities,
             std::vector<Rat> renewable_capacity,
             std::vector<Rat> nonrenewable_capacity,
             std::vector<std::pair<int, int>> precedence,
             SourceInfo source = {})
        : name_(std::move(name)),
          activities_(std::move(activities)),
          renewable_capacity_(std::move(renewable_capacity)),
          nonrenewable_capacity_(std::move(nonrenewable_capacity)),
          source_(std::move(source)) {
        const int a = static_cast<int>(activities_.size());
        if (a <= 0) throw std::invalid_argument("instance needs at least one activity");

        filter_modes();
        for (int i = 1; i <= a; ++i)
            if (activities_[i - 1].modes.empty())
                throw std::invalid_argument("activity " + std::to_string(i) + " has no feasible mode");

        std::set<std::pair<int, int>> seen;
        for (auto [u, v] : precedence) {
            if (u < 1 || u > a || v < 1 || v > a)
                throw std::invalid_argument("precedence pair (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
            if (u == v) throw std::invalid_argument("self-precedence on activity " + std::to_string(u));
            seen.insert({u, v});
        }
        precedence_.assign(seen.begin(), seen.end());
        check_acyclic();
    }

    const std::string& name() const { return name_; }
    const SourceInfo& source() const { return source_; }

    int activity_count() const { return static_cast<int>(activities_.size()); }
    int renewable_count() const { return static_cast<int>(renewable_capacity_.size()); }
    int nonrenewable_count() const { return static_cast<int>(nonrenewable_capacity_.size()); }

    /// Modes of activity i (1-based).
    const std::vector<Mode>& modes(int i) const { return act(i).modes; }
    int mode_count(int i) const { return static_cast<int>(act(i).modes.size()); }

    /// p_{im}; i in 1..A, m in 1..|M_i|.
    const Rat& duration(int i, int m) const { return mode(i, m).duration; }
    /// b_{imk}; k in 1..R.
    const Rat& renewable_demand(int i, int m, int k) const {
        check_resource(k, renewable_count(), "renewable");
        return mode(i, m).renewable[k - 1];
    }
    /// w_{imk}; k in 1..N.
    const Rat& nonrenewable_demand(int i, int m, int k) const {
        check_resource(k, nonrenewable_count(), "non-renewable");
        return mode(i, m).nonrenewable[k - 1];
    }
    const Rat& renewable_capacity(int k) const {
        check_resource(k, renewable_count(), "renewable");
        return renewable_capacity_[k - 1];
    }
    const Rat& nonrenewable_capacity(int k) const {
        check_resource(k, nonrenewable_count(), "non-renewable");
        return nonrenewable_capacity_[k - 1];
    }

    const std::vector<std::pair<int, int>>& precedence() const { return precedence_; }
    bool has_precedence(int i, int j) const {
        return std::binary_search(precedence_.begin(), precedence_.end(), std::make_pair(i, j));
    }

    Rat min_duration(int i) const {
        const auto& ms = act(i).modes;
        Rat best = ms.front().duration;
        for (const auto& m : ms) best = std::min(best, m.duration);
        return best;
    }
    Rat max_duration(int i) const {
        const auto& ms = act(i).modes;
        Rat best = ms.front().duration;
        for (const auto& m : ms) best = std::max(best, m.duration);
        return best;
    }

    /// True when every duration, demand and capacity is an integer.
    bool integral() const {
        for (const auto& c : renewable_capacity_)
            if (!is_integer(c)) return false;
        for (const auto& c : nonrenewable_capacity_)
            if (!is_integer(c)) return false;
        for (const auto& a : activities_)
            for (const auto& m : a.modes) {
                if (!is_integer(m.duration)) return false;
                for (const auto& b : m.renewable)
                    if (!is_integer(b)) return false;
                for (const auto& w : m.nonrenewable)
                    if (!is_integer(w)) return false;
            }
        return true;
    }

    /// Messages about modes dropped during construction.
    const std::vector<std::string>& warnings() const { return warnings_; }

    bool operator==(const Instance& other) const {
        if (activity_count() != other.activity_count() || renewable_capacity_ != other.renewable_capacity_ ||
            nonrenewable_capacity_ != other.nonrenewable_capacity_ || precedence_ != other.precedence_)
            return false;
        for (int i = 0; i < activity_count(); ++i) {
            const auto& ma = activities_[i].modes;
            const auto& mb = other.activities_[i].modes;
            if (ma.size() != mb.size()) return false;
            for (size_t m = 0; m < ma.size(); ++m)
                if (ma[m].duration != mb[m].duration || ma[m].renewable != mb[m].renewable ||
                    ma[m].nonrenewable != mb[m].nonrenewable)
                    return false;
        }
        return true;
    }

private:
    const Activity& act(int i) const {
        if (i < 1 || i > activity_count()) throw StructuralError("activity index " + std::to_string(i) + " out of range");
        return activities_[i - 1];
    }
    const Mode& mode(int i, int m) const {
        const auto& a = act(i);
        if (m < 1 || m > static_cast<int>(a.modes.size()))
            throw StructuralError("mode index " + std::to_string(m) + " out of range for activity " + std::to_string(i));
        return a.modes[m - 1];
    }
    static void check_resource(int k, int count, const char* what) {
        if (k < 1 || k > count) throw StructuralError(std::string(what) + " resource index " + std::to_string(k) + " out of range");
    }

    void filter_modes() {
        const int r = renewable_count(), n = nonrenewable_count();
        for (size_t ai = 0; ai < activities_.size(); ++ai) {
            auto& ms = activities_[ai].modes;
            std::vector<Mode> kept;
            for (auto& m : ms) {
                if (static_cast<int>(m.renewable.size()) != r || static_cast<int>(m.nonrenewable.size()) != n)
                    throw std::invalid_argument("demand vector size mismatch on activity " + std::to_string(ai + 1));
                if (m.duration < Rat(0)) throw std::invalid_argument("negative duration on activity " + std::to_string(ai + 1));
                bool fits = true;
                for (int k = 0; k < r; ++k) {
                    if (m.renewable[k] < Rat(0)) throw std::invalid_argument("negative demand on activity " + std::to_string(ai + 1));
                    if (m.renewable[k] > renewable_capacity_[k]) fits = false;
                }
                for (int k = 0; k < n; ++k) {
                    if (m.nonrenewable[k] < Rat(0)) throw std::invalid_argument("negative demand on activity " + std::to_string(ai + 1));
                    if (m.nonrenewable[k] > nonrenewable_capacity_[k]) fits = false;
                }
                if (fits) {
                    kept.push_back(std::move(m));
                } else {
                    warnings_.push_back("activity " + std::to_string(ai + 1) + " mode " +
                                        (m.label.empty() ? std::to_string(&m - ms.data() + 1) : m.label) +
                                        " exceeds a capacity; dropped");
                }
            }
            ms = std::move(kept);
        }
    }

    void check_acyclic() const {
        const int a = activity_count();
        std::vector<int> indeg(a + 1, 0);
        std::vector<std::vector<int>> succ(a + 1);
        for (auto [u, v] : precedence_) {
            succ[u].push_back(v);
            ++indeg[v];
        }
        std::vector<int> queue;
        for (int i = 1; i <= a; ++i)
            if (indeg[i] == 0) queue.push_back(i);
        int removed = 0;
        while (!queue.empty()) {
            int u = queue.back();
            queue.pop_back();
            ++removed;
            for (int v : succ[u])
                if (--indeg[v] == 0) queue.push_back(v);
        }
        if (removed != a) {
            for (int i = 1; i <= a; ++i)
                if (indeg[i] > 0)
                    throw std::invalid_argument("precedence relation is cyclic (activity " + std::to_string(i) + " is on a cycle)");
        }
    }

    std::string name_;
    std::vector<Activity> activities_;
    std::vector<Rat> renewable_capacity_;
    std::vector<Rat> nonrenewable_capacity_;
    std::vector<std::pair<int, int>> precedence_;
    SourceInfo source_;
    std::vector<std::string> warnings_;
};

/// Start time and chosen mode per activity plus the resulting makespan.
struct Schedule {
    std::vector<Rat> start; ///< index 0 holds activity 1
    std::vector<int> mode;  ///< 1-based mode positions
    Rat makespan;
};

/// Builds a schedule and fills in the makespan from starts and durations.
inline Schedule make_schedule(const Instance& inst, std::vector<Rat> start, std::vector<int> mode) {
    if (static_cast<int>(start.size()) != inst.activity_count() || start.size() != mode.size())
        throw StructuralError("schedule vectors must have one entry per activity");
    Rat makespan(0);
    for (int i = 1; i <= inst.activity_count(); ++i)
        makespan = std::max(makespan, start[i - 1] + inst.duration(i, mode[i - 1]));
    return Schedule{std::move(start), std::move(mode), makespan};
}

enum class CheckKind { Wellformed, Precedence, Renewable, Nonrenewable, Makespan };

inline const char* to_string(CheckKind k) {
    switch (k) {
        case CheckKind::Wellformed: return "wellformed";
        case CheckKind::Precedence: return "precedence";
        case CheckKind::Renewable: return "renewable";
        case CheckKind::Nonrenewable: return "non-renewable";
        case CheckKind::Makespan: return "makespan";
    }
    return "?";
}

struct ScheduleViolation {
    CheckKind kind;
    std::string what;
    Rat excess; ///< amount by which the check fails, beyond the tolerance
};

struct ValidationReport {
    bool wellformed_ok = true;
    bool precedence_ok = true;
    bool renewable_ok = true;
    bool nonrenewable_ok = true;
    bool makespan_ok = true;
    std::vector<ScheduleViolation> violations;
    Rat tolerance;

    bool feasible() const { return violations.empty(); }
};

/// Checks a schedule against an instance:
///  (a) precedence: S_i + p_{i,m(i)} <= S_j + tol for each pair,
///  (b) renewable capacity at every start-time event (usage is piecewise
///      constant, so checking at start times is sufficient),
///  (c) non-renewable budgets over the whole project,
///  (d) the reported makespan against the recomputed one.
/// Index errors are structural and throw; infeasibility is reported.
inline ValidationReport validate_schedule(const Instance& inst, const Schedule& sched,
                                          const Rat& tol = Rat(1, 1000000)) {
    const int a = inst.activity_count();
    if (static_cast<int>(sched.start.size()) != a || static_cast<int>(sched.mode.size()) != a)
        throw StructuralError("schedule does not cover every activity");
    for (int i = 1; i <= a; ++i)
        inst.duration(i, sched.mode[i - 1]); // throws on a bad mode index

    ValidationReport report;
    report.tolerance = tol;
    auto flag = [&](CheckKind kind, bool& ok, std::string what, Rat excess) {
        ok = false;
        report.violations.push_back({kind, std::move(what), std::move(excess)});
    };

    for (int i = 1; i <= a; ++i)
        if (sched.start[i - 1] < -tol)
            flag(CheckKind::Wellformed, report.wellformed_ok,
                 "activity " + std::to_string(i) + " starts before time 0", -sched.start[i - 1]);

    for (auto [i, j] : inst.precedence()) {
        Rat finish = sched.start[i - 1] + inst.duration(i, sched.mode[i - 1]);
        if (finish > sched.start[j - 1] + tol)
            flag(CheckKind::Precedence, report.precedence_ok,
                 "activity " + std::to_string(i) + " finishes at " + to_decimal(finish) + " after the start of activity " +
                     std::to_string(j) + " at " + to_decimal(sched.start[j - 1]),
                 finish - sched.start[j - 1]);
    }

    for (int k = 1; k <= inst.renewable_count(); ++k) {
        const Rat cap = inst.renewable_capacity(k);
        for (int ei = 0; ei < a; ++ei) {
            const Rat t = sched.start[ei];
            Rat usage(0);
            for (int i = 1; i <= a; ++i) {
                const Rat s = sched.start[i - 1];
                const Rat p = inst.duration(i, sched.mode[i - 1]);
                if (s <= t && t < s + p) usage += inst.renewable_demand(i, sched.mode[i - 1], k);
            }
            if (usage > cap + tol)
                flag(CheckKind::Renewable, report.renewable_ok,
                     "renewable resource " + std::to_string(k) + " over capacity at t=" + to_decimal(t) + " (usage " +
                         to_decimal(usage) + " > " + to_decimal(cap) + ")",
                     usage - cap);
        }
    }

    for (int k = 1; k <= inst.nonrenewable_count(); ++k) {
        Rat usage(0);
        for (int i = 1; i <= a; ++i) usage += inst.nonrenewable_demand(i, sched.mode[i - 1], k);
        if (usage > inst.nonrenewable_capacity(k) + tol)
            flag(CheckKind::Nonrenewable, report.nonrenewable_ok,
                 "non-renewable resource " + std::to_string(k) + " over budget (usage " + to_decimal(usage) + " > " +
                     to_decimal(inst.nonrenewable_capacity(k)) + ")",
                 usage - inst.nonrenewable_capacity(k));
    }

    Rat recomputed(0);
    for (int i = 1; i <= a; ++i)
        recomputed = std::max(recomputed, sched.start[i - 1] + inst.duration(i, sched.mode[i - 1]));
    if (rat_abs(recomputed - sched.makespan) > tol)
        flag(CheckKind::Makespan, report.makespan_ok,
             "reported makespan " + to_decimal(sched.makespan) + " differs from recomputed " + to_decimal(recomputed),
             rat_abs(recomputed - sched.makespan));

    return report;
}

namespace detail {

/// Chain instances used by the counterexample machinery: pairs of two-mode
/// activities, unit demands on one renewable resource of capacity one.
inline Instance chain_pairs_instance(std::string name, int pairs) {
    std::vector<Activity> acts;
    std::vector<std::pair<int, int>> prec;
    for (int p = 0; p < pairs; ++p) {
        for (int j = 0; j < 2; ++j) {
            Activity act;
            act.modes.push_back({"1", Rat(1), {Rat(1)}, {}});
            act.modes.push_back({"2", Rat(2), {Rat(1)}, {}});
            acts.push_back(std::move(act));
        }
        prec.emplace_back(2 * p + 1, 2 * p + 2);
    }
    SourceInfo source{"builtin", name, std::nullopt};
    return Instance(std::move(name), std::move(acts), {Rat(1)}, {}, std::move(prec), std::move(source));
}

} // namespace detail

/// Two activities, two modes each (durations 1 and 2), one renewable resource
/// of capacity 1, unit demands, activity 1 before activity 2.
inline Instance example1_instance() { return detail::chain_pairs_instance("example1", 1); }

/// Same pattern with four activities in two independent chains.
inline Instance remark_instance() { return detail::chain_pairs_instance("remark", 2); }

} // namespace mmct
