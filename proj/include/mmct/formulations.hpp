#pragma once

#include "mmct/graph.hpp"
#include "mmct/milp.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace mmct {

enum class ModeConsistency { None, Full, Aggregate };
enum class ModelKind { See, SeeA, Rsee, Ooe, OoeA, FctW, FctS };

struct FormulationOptions {
    ModeConsistency mode_consistency = ModeConsistency::None;
    bool time_windows = false;
    bool variable_fixing = false;
    bool incompatible_pairs = false; ///< weak flow model only
    bool strong_event_time = false;  ///< on-off models only
};

inline const char* kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::See: return "see";
        case ModelKind::SeeA: return "see-a";
        case ModelKind::Rsee: return "rsee";
        case ModelKind::Ooe: return "ooe";
        case ModelKind::OoeA: return "ooe-a";
        case ModelKind::FctW: return "fct-w";
        case ModelKind::FctS: return "fct-s";
    }
    return "?";
}

inline ModelKind parse_kind(const std::string& s) {
    if (s == "see") return ModelKind::See;
    if (s == "see-a") return ModelKind::SeeA;
    if (s == "rsee") return ModelKind::Rsee;
    if (s == "ooe") return ModelKind::Ooe;
    if (s == "ooe-a") return ModelKind::OoeA;
    if (s == "fct-w") return ModelKind::FctW;
    if (s == "fct-s") return ModelKind::FctS;
    throw UnsupportedOptionError("unknown model kind '" + s + "'");
}

/// Stable label such as "see+mc+tw+vf", used for model names and file names.
inline std::string model_label(ModelKind kind, const FormulationOptions& o) {
    std::string s = kind_name(kind);
    if (o.mode_consistency == ModeConsistency::Full) s += "+mc";
    if (o.mode_consistency == ModeConsistency::Aggregate) s += "+mca";
    if (o.strong_event_time) s += "+set";
    if (o.time_windows) s += "+tw";
    if (o.variable_fixing) s += "+vf";
    if (o.incompatible_pairs) s += "+rc";
    return s;
}

namespace detail {

inline std::string nm(const char* tag, std::initializer_list<int> idx) {
    std::string s = tag;
    for (int v : idx) {
        s += '_';
        s += std::to_string(v);
    }
    return s;
}

inline void reject(bool condition, const char* what) {
    if (condition) throw UnsupportedOptionError(what);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Start/end-event model. Events 0..A; an activity picks one start event
// (< A) and one end event (> 0) per mode. Without mode-consistency rows the
// model is the flawed literature variant: start and end mode may differ,
// which defuses every event-time row.
// ---------------------------------------------------------------------------
inline MilpModel build_see(const Instance& inst, const AonGraph& g, const TimeWindows& tw,
                           const FormulationOptions& opts) {
    detail::reject(opts.incompatible_pairs, "incompatible-pair constraints apply to flow models only");
    detail::reject(opts.strong_event_time, "strong event-time rows apply to on-off models only");
    using detail::nm;

    const int a = inst.activity_count();
    const int R = inst.renewable_count(), N = inst.nonrenewable_count();
    MilpModel m(model_label(opts.mode_consistency == ModeConsistency::Aggregate ? ModelKind::SeeA : ModelKind::See,
                            opts) +
                "." + inst.name());

    // x_ime: start (e < A); y_ime: end (e > 0); start-at-A / end-at-0 are
    // eliminated up front rather than fixed.
    std::vector<std::vector<std::vector<int>>> x(a + 1), y(a + 1);
    for (int i = 1; i <= a; ++i) {
        x[i].assign(inst.mode_count(i) + 1, std::vector<int>(a + 1, -1));
        y[i].assign(inst.mode_count(i) + 1, std::vector<int>(a + 1, -1));
        for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
            for (int e = 0; e < a; ++e) x[i][mo][e] = m.add_binary(nm("x", {i, mo, e}), {"x", {i, mo, e}});
            for (int e = 1; e <= a; ++e) y[i][mo][e] = m.add_binary(nm("y", {i, mo, e}), {"y", {i, mo, e}});
        }
    }
    std::vector<int> s(a + 1);
    for (int e = 0; e <= a; ++e) {
        std::optional<Rat> lb = Rat(0), ub;
        if (opts.time_windows && e == a) {
            lb = tw.earliest[g.sink];
            ub = tw.latest[g.sink];
        }
        s[e] = m.add_continuous(nm("s", {e}), lb, ub, {"s", {e}});
    }
    std::vector<std::vector<int>> r(a, std::vector<int>(R + 1, -1));
    for (int e = 0; e < a; ++e)
        for (int k = 1; k <= R; ++k)
            r[e][k] = m.add_continuous(nm("r", {e, k}), Rat(0), inst.renewable_capacity(k), {"r", {e, k}});

    m.set_objective({{s[a], Rat(1)}});
    m.add_constraint("s0", {{s[0], Rat(1)}}, Sense::EQ, Rat(0));
    for (int e = 0; e < a; ++e)
        m.add_constraint(nm("order", {e}), {{s[e], Rat(1)}, {s[e + 1], Rat(-1)}}, Sense::LE, Rat(0));

    // event-time: s_f >= s_e + p (x_ime + y_imf - 1)
    for (int i = 1; i <= a; ++i)
        for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
            const Rat& p = inst.duration(i, mo);
            for (int e = 0; e <= a; ++e)
                for (int f = e + 1; f <= a; ++f)
                    m.add_constraint(nm("evt", {i, mo, e, f}),
                                     {{s[f], Rat(1)}, {s[e], Rat(-1)}, {x[i][mo][e], -p}, {y[i][mo][f], -p}},
                                     Sense::GE, -p);
        }

    for (int i = 1; i <= a; ++i) {
        std::vector<Term> ts;
        for (int mo = 1; mo <= inst.mode_count(i); ++mo)
            for (int e = 0; e < a; ++e) ts.push_back({x[i][mo][e], Rat(1)});
        m.add_constraint(nm("one_start", {i}), ts, Sense::EQ, Rat(1));
        ts.clear();
        for (int mo = 1; mo <= inst.mode_count(i); ++mo)
            for (int e = 1; e <= a; ++e) ts.push_back({y[i][mo][e], Rat(1)});
        m.add_constraint(nm("one_end", {i}), ts, Sense::EQ, Rat(1));
    }

    // no activity may end at or before its start event
    for (int i = 1; i <= a; ++i)
        for (int e = 1; e <= a - 1; ++e) {
            std::vector<Term> ts;
            for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                for (int e2 = 1; e2 <= e; ++e2) ts.push_back({y[i][mo][e2], Rat(1)});
                for (int e2 = e; e2 <= a - 1; ++e2) ts.push_back({x[i][mo][e2], Rat(1)});
            }
            m.add_constraint(nm("span", {i, e}), ts, Sense::LE, Rat(1));
        }

    for (auto [i, j] : inst.precedence())
        for (int e = 1; e <= a; ++e) {
            std::vector<Term> ts;
            for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                for (int e2 = e; e2 <= a; ++e2) ts.push_back({y[i][mo][e2], Rat(1)});
            for (int mo = 1; mo <= inst.mode_count(j); ++mo)
                for (int e2 = 0; e2 <= e - 1; ++e2) ts.push_back({x[j][mo][e2], Rat(1)});
            m.add_constraint(nm("prec", {i, j, e}), ts, Sense::LE, Rat(1));
        }

    // recursive resource usage; the caps live on the r bounds
    for (int k = 1; k <= R; ++k) {
        std::vector<Term> ts{{r[0][k], Rat(1)}};
        for (int i = 1; i <= a; ++i)
            for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                ts.push_back({x[i][mo][0], -inst.renewable_demand(i, mo, k)});
        m.add_constraint(nm("rinit", {k}), ts, Sense::EQ, Rat(0));
    }
    for (int e = 1; e <= a - 1; ++e)
        for (int k = 1; k <= R; ++k) {
            std::vector<Term> ts{{r[e][k], Rat(1)}, {r[e - 1][k], Rat(-1)}};
            for (int i = 1; i <= a; ++i)
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                    const Rat& b = inst.renewable_demand(i, mo, k);
                    ts.push_back({x[i][mo][e], -b});
                    ts.push_back({y[i][mo][e], b});
                }
            m.add_constraint(nm("rrec", {e, k}), ts, Sense::EQ, Rat(0));
        }

    for (int k = 1; k <= N; ++k) {
        std::vector<Term> ts;
        for (int i = 1; i <= a; ++i)
            for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                for (int e = 0; e < a; ++e) ts.push_back({x[i][mo][e], inst.nonrenewable_demand(i, mo, k)});
        m.add_constraint(nm("nonren", {k}), ts, Sense::LE, inst.nonrenewable_capacity(k));
    }

    if (opts.mode_consistency == ModeConsistency::Full) {
        // if i starts in mode m it must not end in any other mode
        for (int i = 1; i <= a; ++i)
            for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                for (int e = 0; e < a; ++e) {
                    std::vector<Term> ts{{x[i][mo][e], Rat(1)}};
                    for (int m2 = 1; m2 <= inst.mode_count(i); ++m2) {
                        if (m2 == mo) continue;
                        for (int f = 1; f <= a; ++f) ts.push_back({y[i][m2][f], Rat(1)});
                    }
                    m.add_constraint(nm("mc", {i, mo, e}), ts, Sense::LE, Rat(1));
                }
    } else if (opts.mode_consistency == ModeConsistency::Aggregate) {
        for (int i = 1; i <= a; ++i)
            for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                std::vector<Term> ts;
                for (int e = 0; e < a; ++e) ts.push_back({x[i][mo][e], Rat(1)});
                for (int m2 = 1; m2 <= inst.mode_count(i); ++m2) {
                    if (m2 == mo) continue;
                    for (int f = 1; f <= a; ++f) ts.push_back({y[i][m2][f], Rat(1)});
                }
                m.add_constraint(nm("mca", {i, mo}), ts, Sense::LE, Rat(1));
            }
    }

    if (opts.time_windows) {
        const Rat L_bar = tw.latest[g.sink];
        for (int i = 1; i <= a; ++i) {
            const Rat& E_i = tw.earliest[i];
            const Rat& L_i = tw.latest[i];
            for (int e = 1; e <= a - 1; ++e) {
                std::vector<Term> lo{{s[e], Rat(1)}};
                for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                    for (int e2 = 0; e2 <= e; ++e2) lo.push_back({x[i][mo][e2], -E_i});
                m.add_constraint(nm("twx_lo", {i, e}), lo, Sense::GE, Rat(0));
                std::vector<Term> hi{{s[e], Rat(1)}};
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) hi.push_back({x[i][mo][e], L_bar - L_i});
                m.add_constraint(nm("twx_hi", {i, e}), hi, Sense::LE, L_bar);
            }
            for (int e = 1; e <= a; ++e) {
                std::vector<Term> lo{{s[e], Rat(1)}};
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                    const Rat c = E_i + inst.duration(i, mo);
                    for (int e2 = 1; e2 <= e; ++e2) lo.push_back({y[i][mo][e2], -c});
                }
                m.add_constraint(nm("twy_lo", {i, e}), lo, Sense::GE, Rat(0));
                std::vector<Term> hi{{s[e], Rat(1)}};
                for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                    hi.push_back({y[i][mo][e], L_bar - L_i - inst.duration(i, mo)});
                m.add_constraint(nm("twy_hi", {i, e}), hi, Sense::LE, L_bar);
            }
        }
    }

    if (opts.variable_fixing) {
        for (int i = 1; i <= a; ++i) {
            const int anc = g.ancestors[i], desc = g.descendants[i];
            for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                for (int e = 0; e < a; ++e)
                    if (e < anc || e >= a - desc) m.fix_variable(x[i][mo][e], Rat(0));
                for (int e = 1; e <= a; ++e)
                    if (e <= anc || e > a - desc) m.fix_variable(y[i][mo][e], Rat(0));
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Revised start/end-event model: cumulative "started until e" / "ended until
// e" variables give the same LP polyhedron with a sparser matrix. Mode
// consistency is built in; time windows and variable fixing are not defined
// for this variant and are rejected.
// ---------------------------------------------------------------------------
inline MilpModel build_rsee(const Instance& inst, const AonGraph& /*g*/, const FormulationOptions& opts) {
    detail::reject(opts.time_windows, "time windows are not defined for the revised start/end model");
    detail::reject(opts.variable_fixing, "variable fixing is not defined for the revised start/end model");
    detail::reject(opts.incompatible_pairs, "incompatible-pair constraints apply to flow models only");
    detail::reject(opts.strong_event_time, "strong event-time rows apply to on-off models only");
    using detail::nm;

    const int a = inst.activity_count();
    MilpModel m(std::string("rsee.") + inst.name());

    std::vector<std::vector<std::vector<int>>> xt(a + 1), yt(a + 1);
    for (int i = 1; i <= a; ++i) {
        xt[i].assign(inst.mode_count(i) + 1, std::vector<int>(a + 1, -1));
        yt[i].assign(inst.mode_count(i) + 1, std::vector<int>(a + 1, -1));
        for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
            for (int e = 0; e < a; ++e) xt[i][mo][e] = m.add_binary(nm("xt", {i, mo, e}), {"xt", {i, mo, e}});
            for (int e = 1; e <= a; ++e) yt[i][mo][e] = m.add_binary(nm("yt", {i, mo, e}), {"yt", {i, mo, e}});
        }
    }
    std::vector<int> s(a + 1);
    for (int e = 0; e <= a; ++e) s[e] = m.add_continuous(nm("s", {e}), Rat(0), std::nullopt, {"s", {e}});

    m.set_objective({{s[a], Rat(1)}});
    m.add_constraint("s0", {{s[0], Rat(1)}}, Sense::EQ, Rat(0));
    for (int e = 0; e < a; ++e)
        m.add_constraint(nm("order", {e}), {{s[e], Rat(1)}, {s[e + 1], Rat(-1)}}, Sense::LE, Rat(0));

    // s_f >= s_e + p (yt_imf - xt_im,e-1); xt_im,-1 is the constant 0
    for (int i = 1; i <= a; ++i)
        for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
            const Rat& p = inst.duration(i, mo);
            for (int e = 0; e <= a; ++e)
                for (int f = e + 1; f <= a; ++f) {
                    std::vector<Term> ts{{s[f], Rat(1)}, {s[e], Rat(-1)}, {yt[i][mo][f], -p}};
                    if (e >= 1) ts.push_back({xt[i][mo][e - 1], p});
                    m.add_constraint(nm("evt", {i, mo, e, f}), ts, Sense::GE, Rat(0));
                }
        }

    for (int i = 1; i <= a; ++i) {
        std::vector<Term> ts;
        for (int mo = 1; mo <= inst.mode_count(i); ++mo) ts.push_back({xt[i][mo][a - 1], Rat(1)});
        m.add_constraint(nm("start_by", {i}), ts, Sense::EQ, Rat(1));
        ts.clear();
        for (int mo = 1; mo <= inst.mode_count(i); ++mo) ts.push_back({yt[i][mo][a], Rat(1)});
        m.add_constraint(nm("end_by", {i}), ts, Sense::EQ, Rat(1));
    }

    for (int i = 1; i <= a; ++i)
        for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
            for (int e = 0; e < a - 1; ++e)
                m.add_constraint(nm("monox", {i, mo, e}), {{xt[i][mo][e], Rat(1)}, {xt[i][mo][e + 1], Rat(-1)}},
                                 Sense::LE, Rat(0));
            for (int e = 1; e < a; ++e)
                m.add_constraint(nm("monoy", {i, mo, e}), {{yt[i][mo][e], Rat(1)}, {yt[i][mo][e + 1], Rat(-1)}},
                                 Sense::LE, Rat(0));
            for (int e = 1; e <= a; ++e)
                m.add_constraint(nm("end_after_start", {i, mo, e}),
                                 {{yt[i][mo][e], Rat(1)}, {xt[i][mo][e - 1], Rat(-1)}}, Sense::LE, Rat(0));
        }

    for (auto [i, j] : inst.precedence())
        for (int e = 0; e < a; ++e) {
            std::vector<Term> ts;
            for (int mo = 1; mo <= inst.mode_count(j); ++mo) ts.push_back({xt[j][mo][e], Rat(1)});
            if (e >= 1)
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) ts.push_back({yt[i][mo][e], Rat(-1)});
            m.add_constraint(nm("prec", {i, j, e}), ts, Sense::LE, Rat(0));
        }

    for (int e = 0; e < a; ++e)
        for (int k = 1; k <= inst.renewable_count(); ++k) {
            std::vector<Term> ts;
            for (int i = 1; i <= a; ++i)
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                    const Rat& b = inst.renewable_demand(i, mo, k);
                    ts.push_back({xt[i][mo][e], b});
                    if (e >= 1) ts.push_back({yt[i][mo][e], -b});
                }
            m.add_constraint(nm("ren", {e, k}), ts, Sense::LE, inst.renewable_capacity(k));
        }

    for (int k = 1; k <= inst.nonrenewable_count(); ++k) {
        std::vector<Term> ts;
        for (int i = 1; i <= a; ++i)
            for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                ts.push_back({xt[i][mo][a - 1], inst.nonrenewable_demand(i, mo, k)});
        m.add_constraint(nm("nonren", {k}), ts, Sense::LE, inst.nonrenewable_capacity(k));
    }

    for (int i = 1; i <= a; ++i)
        for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
            std::vector<Term> ts{{xt[i][mo][a - 1], Rat(1)}};
            for (int m2 = 1; m2 <= inst.mode_count(i); ++m2)
                if (m2 != mo) ts.push_back({yt[i][m2][a], Rat(1)});
            m.add_constraint(nm("mc", {i, mo}), ts, Sense::LE, Rat(1));
        }
    return m;
}

// ---------------------------------------------------------------------------
// On-off event models. Events 0..A-1 plus the makespan slot s_A. z_ime is 1
// iff (i,m) is active at event e; dummy z at events -1 and A are constants.
// build_ooe emits per-mode contiguity/precedence, build_ooe_a the aggregate
// rows (whose split-sequence loophole is closed by the mode-consistency rows,
// included unless the caller explicitly asks for the bare variant).
// ---------------------------------------------------------------------------
namespace detail {

inline MilpModel build_ooe_impl(const Instance& inst, const AonGraph& g, const TimeWindows& tw,
                                const FormulationOptions& opts, bool aggregate) {
    reject(opts.incompatible_pairs, "incompatible-pair constraints apply to flow models only");
    reject(opts.mode_consistency == ModeConsistency::Aggregate,
           "aggregate mode consistency is a start/end-event notion");

    const int a = inst.activity_count();
    const int R = inst.renewable_count(), N = inst.nonrenewable_count();
    MilpModel m(model_label(aggregate ? ModelKind::OoeA : ModelKind::Ooe, opts) + "." + inst.name());

    std::vector<std::vector<std::vector<int>>> z(a + 1);
    for (int i = 1; i <= a; ++i) {
        z[i].assign(inst.mode_count(i) + 1, std::vector<int>(a, -1));
        for (int mo = 1; mo <= inst.mode_count(i); ++mo)
            for (int e = 0; e < a; ++e) z[i][mo][e] = m.add_binary(nm("z", {i, mo, e}), {"z", {i, mo, e}});
    }
    std::vector<int> s(a + 1);
    for (int e = 0; e <= a; ++e) {
        std::optional<Rat> lb = Rat(0), ub;
        if (opts.time_windows && e == a) {
            lb = tw.earliest[g.sink];
            ub = tw.latest[g.sink];
        }
        s[e] = m.add_continuous(nm("s", {e}), lb, ub, {"s", {e}});
    }
    std::vector<std::vector<int>> rn(a + 1, std::vector<int>(N + 1, -1));
    for (int i = 1; i <= a; ++i)
        for (int k = 1; k <= N; ++k)
            rn[i][k] = m.add_continuous(nm("r", {i, k}), Rat(0), std::nullopt, {"r", {i, k}});

    m.set_objective({{s[a], Rat(1)}});
    m.add_constraint("s0", {{s[0], Rat(1)}}, Sense::EQ, Rat(0));
    for (int e = 0; e < a; ++e)
        m.add_constraint(nm("order", {e}), {{s[e], Rat(1)}, {s[e + 1], Rat(-1)}}, Sense::LE, Rat(0));

    if (!opts.strong_event_time) {
        // s_f >= s_e + p (z_ime - z_im,e-1 + z_im,f-1 - z_imf - 1)
        for (int i = 1; i <= a; ++i)
            for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                const Rat& p = inst.duration(i, mo);
                for (int e = 0; e < a; ++e)
                    for (int f = e + 1; f <= a; ++f) {
                        std::vector<Term> ts{{s[f], Rat(1)}, {s[e], Rat(-1)}, {z[i][mo][e], -p}};
                        if (e >= 1) ts.push_back({z[i][mo][e - 1], p});
                        ts.push_back({z[i][mo][f - 1], -p});
                        if (f < a) ts.push_back({z[i][mo][f], p});
                        m.add_constraint(nm("evt", {i, mo, e, f}), ts, Sense::GE, -p);
                    }
            }
    } else {
        // s_g >= s_e + p (z_imf - z_ime - z_img), e < f < g
        for (int i = 1; i <= a; ++i)
            for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                const Rat& p = inst.duration(i, mo);
                for (int e = 0; e <= a; ++e)
                    for (int f = e + 1; f <= a; ++f)
                        for (int gg = f + 1; gg <= a; ++gg) {
                            std::vector<Term> ts{{s[gg], Rat(1)}, {s[e], Rat(-1)}, {z[i][mo][f], -p}};
                            if (e < a) ts.push_back({z[i][mo][e], p});
                            if (gg < a) ts.push_back({z[i][mo][gg], p});
                            m.add_constraint(nm("evt", {i, mo, e, f, gg}), ts, Sense::GE, Rat(0));
                        }
            }
    }

    for (int i = 1; i <= a; ++i) {
        std::vector<Term> ts;
        for (int mo = 1; mo <= inst.mode_count(i); ++mo)
            for (int e = 0; e < a; ++e) ts.push_back({z[i][mo][e], Rat(1)});
        m.add_constraint(nm("active", {i}), ts, Sense::GE, Rat(1));
    }

    if (!aggregate) {
        for (int i = 1; i <= a; ++i)
            for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                for (int e = 1; e <= a - 1; ++e) {
                    std::vector<Term> bw;
                    for (int m2 = 1; m2 <= inst.mode_count(i); ++m2)
                        for (int e2 = 0; e2 < e; ++e2) bw.push_back({z[i][m2][e2], Rat(1)});
                    bw.push_back({z[i][mo][e], Rat(e)});
                    bw.push_back({z[i][mo][e - 1], Rat(-e)});
                    m.add_constraint(nm("cbw", {i, mo, e}), bw, Sense::LE, Rat(e));

                    std::vector<Term> fw;
                    for (int m2 = 1; m2 <= inst.mode_count(i); ++m2)
                        for (int e2 = e; e2 < a; ++e2) fw.push_back({z[i][m2][e2], Rat(1)});
                    fw.push_back({z[i][mo][e - 1], Rat(a - e)});
                    fw.push_back({z[i][mo][e], Rat(-(a - e))});
                    m.add_constraint(nm("cfw", {i, mo, e}), fw, Sense::LE, Rat(a - e));
                }

        for (auto [i, j] : inst.precedence())
            for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                for (int e = 0; e < a; ++e) {
                    std::vector<Term> ts;
                    for (int m2 = 1; m2 <= inst.mode_count(j); ++m2)
                        for (int e2 = 0; e2 <= e; ++e2) ts.push_back({z[j][m2][e2], Rat(1)});
                    ts.push_back({z[i][mo][e], Rat(e + 1)});
                    m.add_constraint(nm("prec", {i, j, mo, e}), ts, Sense::LE, Rat(e + 1));
                }
    } else {
        for (int i = 1; i <= a; ++i) {
            for (int e = 1; e <= a - 1; ++e) {
                std::vector<Term> bw;
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                    for (int e2 = 0; e2 < e; ++e2) bw.push_back({z[i][mo][e2], Rat(1)});
                    bw.push_back({z[i][mo][e], Rat(e)});
                    bw.push_back({z[i][mo][e - 1], Rat(-e)});
                }
                m.add_constraint(nm("cbwa", {i, e}), bw, Sense::LE, Rat(e));
            }
            for (int e = 0; e <= a - 1; ++e) {
                std::vector<Term> fw;
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                    for (int e2 = e; e2 < a; ++e2) fw.push_back({z[i][mo][e2], Rat(1)});
                    if (e >= 1) fw.push_back({z[i][mo][e - 1], Rat(a - e)});
                    fw.push_back({z[i][mo][e], Rat(-(a - e))});
                }
                m.add_constraint(nm("cfwa", {i, e}), fw, Sense::LE, Rat(a - e));
            }
        }
        for (auto [i, j] : inst.precedence())
            for (int e = 0; e < a; ++e) {
                std::vector<Term> ts;
                for (int m2 = 1; m2 <= inst.mode_count(j); ++m2)
                    for (int e2 = 0; e2 <= e; ++e2) ts.push_back({z[j][m2][e2], Rat(1)});
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) ts.push_back({z[i][mo][e], Rat(e + 1)});
                m.add_constraint(nm("preca", {i, j, e}), ts, Sense::LE, Rat(e + 1));
            }
    }

    for (int e = 0; e < a; ++e)
        for (int k = 1; k <= R; ++k) {
            std::vector<Term> ts;
            for (int i = 1; i <= a; ++i)
                for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                    ts.push_back({z[i][mo][e], inst.renewable_demand(i, mo, k)});
            m.add_constraint(nm("ren", {e, k}), ts, Sense::LE, inst.renewable_capacity(k));
        }

    for (int i = 1; i <= a; ++i)
        for (int e = 0; e < a; ++e)
            for (int k = 1; k <= N; ++k) {
                std::vector<Term> ts{{rn[i][k], Rat(-1)}};
                for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                    ts.push_back({z[i][mo][e], inst.nonrenewable_demand(i, mo, k)});
                m.add_constraint(nm("nrlink", {i, e, k}), ts, Sense::LE, Rat(0));
            }
    for (int k = 1; k <= N; ++k) {
        std::vector<Term> ts;
        for (int i = 1; i <= a; ++i) ts.push_back({rn[i][k], Rat(1)});
        m.add_constraint(nm("nrcap", {k}), ts, Sense::LE, inst.nonrenewable_capacity(k));
    }

    if (opts.mode_consistency == ModeConsistency::Full) {
        for (int i = 1; i <= a; ++i)
            for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                for (int e = 0; e < a; ++e) {
                    std::vector<Term> ts{{z[i][mo][e], Rat(a)}};
                    for (int m2 = 1; m2 <= inst.mode_count(i); ++m2) {
                        if (m2 == mo) continue;
                        for (int f = 0; f < a; ++f) ts.push_back({z[i][m2][f], Rat(1)});
                    }
                    m.add_constraint(nm("mc", {i, mo, e}), ts, Sense::LE, Rat(a));
                }
    }

    if (opts.time_windows) {
        const Rat L_bar = tw.latest[g.sink];
        for (int i = 1; i <= a; ++i) {
            const Rat& E_i = tw.earliest[i];
            const Rat& L_i = tw.latest[i];
            for (int e = 1; e <= a - 1; ++e) {
                std::vector<Term> lo{{s[e], Rat(1)}};
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) lo.push_back({z[i][mo][e], -E_i});
                m.add_constraint(nm("twz_lo", {i, e}), lo, Sense::GE, Rat(0));
                std::vector<Term> hi{{s[e], Rat(1)}};
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) hi.push_back({z[i][mo][e], L_bar - L_i});
                m.add_constraint(nm("twz_hi", {i, e}), hi, Sense::LE, L_bar);
            }
            for (int e = 2; e <= a - 1; ++e) {
                std::vector<Term> lo{{s[e], Rat(1)}};
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                    const Rat c = E_i + inst.duration(i, mo);
                    lo.push_back({z[i][mo][e - 1], -c});
                    lo.push_back({z[i][mo][e], c});
                }
                m.add_constraint(nm("twend_lo", {i, e}), lo, Sense::GE, Rat(0));
                std::vector<Term> hi{{s[e], Rat(1)}};
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                    const Rat c = L_bar - L_i - inst.duration(i, mo);
                    hi.push_back({z[i][mo][e - 1], c});
                    hi.push_back({z[i][mo][e], -c});
                }
                m.add_constraint(nm("twend_hi", {i, e}), hi, Sense::LE, L_bar);
            }
        }
    }

    if (opts.variable_fixing) {
        for (int i = 1; i <= a; ++i) {
            const int anc = g.ancestors[i], desc = g.descendants[i];
            for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                for (int e = 0; e < a; ++e)
                    if (e < anc || e >= a - desc) m.fix_variable(z[i][mo][e], Rat(0));
        }
    }
    return m;
}

} // namespace detail

inline MilpModel build_ooe(const Instance& inst, const AonGraph& g, const TimeWindows& tw,
                           const FormulationOptions& opts) {
    return detail::build_ooe_impl(inst, g, tw, opts, false);
}

/// Aggregate on-off model. Pass mode_consistency = None only to study the
/// split-sequence loophole; the model as defined always carries the rows.
inline MilpModel build_ooe_a(const Instance& inst, const AonGraph& g, const TimeWindows& tw,
                             const FormulationOptions& opts) {
    return detail::build_ooe_impl(inst, g, tw, opts, true);
}

// ---------------------------------------------------------------------------
// Flow-based models over V = activities + dummy source/sink (dummy mode 0,
// zero time, border capacity B_k). Weak variant bounds arc flows by
// min-capacity big-Ms; strong variant adds both mode-dependent bounds, which
// matches the nonlinear min-bound at binary points.
// ---------------------------------------------------------------------------
inline MilpModel build_fct(const Instance& inst, const AonGraph& g, const TimeWindows& tw,
                           const FormulationOptions& opts, bool strong) {
    detail::reject(opts.mode_consistency != ModeConsistency::None,
                   "flow models need no mode-consistency option");
    detail::reject(opts.variable_fixing, "event variable fixing does not apply to flow models");
    detail::reject(opts.strong_event_time, "strong event-time rows apply to on-off models only");
    detail::reject(strong && opts.incompatible_pairs,
                   "incompatible-pair constraints are only combined with the weak flow bound");
    using detail::nm;

    const int a = inst.activity_count();
    const int R = inst.renewable_count(), N = inst.nonrenewable_count();
    const int source = 0, sink = a + 1, nv = a + 2;
    MilpModel m(model_label(strong ? ModelKind::FctS : ModelKind::FctW, opts) + "." + inst.name());

    auto mode_count = [&](int v) { return (v == source || v == sink) ? 1 : inst.mode_count(v); };
    auto mode_index = [&](int v, int mo) { return (v == source || v == sink) ? 0 : mo; };
    auto duration = [&](int v, int mo) { return (v == source || v == sink) ? Rat(0) : inst.duration(v, mo); };
    auto demand = [&](int v, int mo, int k) {
        return (v == source || v == sink) ? inst.renewable_capacity(k) : inst.renewable_demand(v, mo, k);
    };
    auto max_demand = [&](int v, int k) {
        Rat best = demand(v, 1, k);
        for (int mo = 2; mo <= mode_count(v); ++mo) best = std::max(best, demand(v, mo, k));
        return best;
    };
    auto pmax = [&](int v) { return (v == source || v == sink) ? Rat(0) : inst.max_duration(v); };

    std::vector<std::vector<int>> x(nv);
    for (int v = 0; v < nv; ++v)
        for (int mo = 1; mo <= mode_count(v); ++mo) {
            int label = mode_index(v, mo);
            x[v].push_back(m.add_binary(nm("x", {v, label}), {"x", {v, label}}));
        }
    std::vector<std::vector<int>> y(nv, std::vector<int>(nv, -1));
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j) y[i][j] = m.add_binary(nm("y", {i, j}), {"y", {i, j}});
    std::vector<std::vector<std::vector<int>>> f(nv, std::vector<std::vector<int>>(nv, std::vector<int>(R + 1, -1)));
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j)
            for (int k = 1; k <= R; ++k)
                f[i][j][k] = m.add_continuous(nm("f", {i, j, k}), Rat(0), std::nullopt, {"f", {i, j, k}});
    std::vector<int> s(nv);
    for (int v = 0; v < nv; ++v) {
        std::optional<Rat> lb = Rat(0), ub;
        if (opts.time_windows) {
            lb = tw.earliest[v];
            ub = tw.latest[v];
        }
        s[v] = m.add_continuous(nm("s", {v}), lb, ub, {"s", {v}});
    }

    m.set_objective({{s[sink], Rat(1)}});

    for (int v = 0; v < nv; ++v) {
        std::vector<Term> ts;
        for (int id : x[v]) ts.push_back({id, Rat(1)});
        m.add_constraint(nm("onemode", {v}), ts, Sense::EQ, Rat(1));
    }

    // s_i + sum_m p_im x_im <= s_j + M^s_ij (1 - y_ij)
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j) {
            if (i == j) continue;
            const Rat big = tw.latest[i] + pmax(i) - tw.earliest[j];
            std::vector<Term> ts{{s[i], Rat(1)}, {s[j], Rat(-1)}, {y[i][j], big}};
            for (int mo = 1; mo <= mode_count(i); ++mo)
                if (duration(i, mo) != Rat(0)) ts.push_back({x[i][mo - 1], duration(i, mo)});
            m.add_constraint(nm("seq", {i, j}), ts, Sense::LE, big);
        }

    for (int i = 0; i < nv; ++i)
        for (int j = i + 1; j < nv; ++j)
            m.add_constraint(nm("noboth", {i, j}), {{y[i][j], Rat(1)}, {y[j][i], Rat(1)}}, Sense::LE, Rat(1));

    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j)
            for (int v = 0; v < nv; ++v) {
                if (i == j || i == v || j == v) continue;
                m.add_constraint(nm("trans", {i, j, v}),
                                 {{y[i][j], Rat(1)}, {y[j][v], Rat(1)}, {y[i][v], Rat(-1)}}, Sense::LE, Rat(1));
            }

    // arc-flow bounds on i in A+source, j in A+sink
    for (int i = 0; i <= a; ++i)
        for (int j = 1; j <= a + 1; ++j) {
            if (i == j) continue;
            for (int k = 1; k <= R; ++k) {
                const Rat big = std::min(max_demand(i, k), max_demand(j, k));
                m.add_constraint(nm("fbnd", {i, j, k}), {{f[i][j][k], Rat(1)}, {y[i][j], -big}}, Sense::LE, Rat(0));
                if (strong) {
                    std::vector<Term> ti{{f[i][j][k], Rat(1)}};
                    for (int mo = 1; mo <= mode_count(i); ++mo) ti.push_back({x[i][mo - 1], -demand(i, mo, k)});
                    m.add_constraint(nm("fbnd_tail", {i, j, k}), ti, Sense::LE, Rat(0));
                    std::vector<Term> tj{{f[i][j][k], Rat(1)}};
                    for (int mo = 1; mo <= mode_count(j); ++mo) tj.push_back({x[j][mo - 1], -demand(j, mo, k)});
                    m.add_constraint(nm("fbnd_head", {i, j, k}), tj, Sense::LE, Rat(0));
                }
            }
        }

    for (int i = 0; i < nv; ++i)
        for (int k = 1; k <= R; ++k) {
            std::vector<Term> ts;
            for (int j = 0; j < nv; ++j) ts.push_back({f[i][j][k], Rat(1)});
            for (int mo = 1; mo <= mode_count(i); ++mo) ts.push_back({x[i][mo - 1], -demand(i, mo, k)});
            m.add_constraint(nm("fout", {i, k}), ts, Sense::EQ, Rat(0));
        }
    for (int j = 0; j < nv; ++j)
        for (int k = 1; k <= R; ++k) {
            std::vector<Term> ts;
            for (int i = 0; i < nv; ++i) ts.push_back({f[i][j][k], Rat(1)});
            for (int mo = 1; mo <= mode_count(j); ++mo) ts.push_back({x[j][mo - 1], -demand(j, mo, k)});
            m.add_constraint(nm("fin", {j, k}), ts, Sense::EQ, Rat(0));
        }

    for (int k = 1; k <= N; ++k) {
        std::vector<Term> ts;
        for (int i = 1; i <= a; ++i)
            for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                ts.push_back({x[i][mo - 1], inst.nonrenewable_demand(i, mo, k)});
        m.add_constraint(nm("nonren", {k}), ts, Sense::LE, inst.nonrenewable_capacity(k));
    }

    if (opts.incompatible_pairs) {
        const auto pairs = incompatible_pairs(inst, g);
        int idx = 0;
        for (const IncompatiblePair& pr : pairs) {
            m.add_constraint(nm("rc", {idx++}),
                             {{x[pr.u.activity][pr.u.mode - 1], Rat(1)},
                              {x[pr.v.activity][pr.v.mode - 1], Rat(1)},
                              {y[pr.u.activity][pr.v.activity], Rat(-1)},
                              {y[pr.v.activity][pr.u.activity], Rat(-1)}},
                             Sense::LE, Rat(1));
        }
    }

    if (!opts.time_windows) m.add_constraint("s0", {{s[source], Rat(1)}}, Sense::EQ, Rat(0));

    // fixings: self arcs, hull-implied orderings, border flows out of the sink
    for (int i = 0; i < nv; ++i) m.fix_variable(y[i][i], Rat(0));
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j)
            if (g.hull_contains(i, j)) {
                m.fix_variable(y[i][j], Rat(1));
                m.fix_variable(y[j][i], Rat(0));
            }
    for (int j = 0; j <= a; ++j)
        for (int k = 1; k <= R; ++k)
            m.fix_variable(f[sink][j][k], j == source ? inst.renewable_capacity(k) : Rat(0));
    for (int i = 0; i < nv; ++i)
        for (int k = 1; k <= R; ++k) m.fix_variable(f[i][i][k], Rat(0));

    return m;
}

/// Builds any formulation after normalizing kind-specific options.
inline MilpModel build_model(ModelKind kind, const Instance& inst, const AonGraph& g, const TimeWindows& tw,
                             FormulationOptions opts) {
    switch (kind) {
        case ModelKind::See:
            return build_see(inst, g, tw, opts);
        case ModelKind::SeeA:
            opts.mode_consistency = ModeConsistency::Aggregate;
            return build_see(inst, g, tw, opts);
        case ModelKind::Rsee:
            return build_rsee(inst, g, opts);
        case ModelKind::Ooe:
            return build_ooe(inst, g, tw, opts);
        case ModelKind::OoeA:
            if (opts.mode_consistency == ModeConsistency::None) opts.mode_consistency = ModeConsistency::Full;
            return build_ooe_a(inst, g, tw, opts);
        case ModelKind::FctW:
            return build_fct(inst, g, tw, opts, false);
        case ModelKind::FctS:
            return build_fct(inst, g, tw, opts, true);
    }
    throw UnsupportedOptionError("unknown model kind");
}

// ---------------------------------------------------------------------------
// Decoding solver points back into schedules
// ---------------------------------------------------------------------------

class DecodeError : public std::runtime_error {
public:
    enum class Reason { ModeInconsistent, Fractional, BadPoint };
    DecodeError(Reason reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
    Reason reason() const { return reason_; }

private:
    Reason reason_;
};

namespace detail {

inline bool binary_value(const MilpModel& model, const PointAssignment& point, int id, const Rat& tol) {
    const Rat& v = point.at(model.variable(id).name);
    if (rat_abs(v) <= tol) return false;
    if (rat_abs(v - Rat(1)) <= tol) return true;
    throw DecodeError(DecodeError::Reason::Fractional,
                      "variable " + model.variable(id).name + " = " + to_decimal(v) + " is not integral");
}

/// Solver noise on an integral instance is snapped to the nearest integer.
inline Rat snap_time(const Rat& v, bool integral, const Rat& tol) {
    if (!integral) return v;
    long long r = rat_round(v);
    return rat_abs(v - Rat(r)) <= tol ? Rat(r) : v;
}

} // namespace detail

/// Reads the schedule out of an integer-feasible point. Ambiguous mode
/// choices (possible only in variants without mode-consistency safeguards)
/// raise DecodeError instead of guessing.
inline Schedule decode(ModelKind kind, const Instance& inst, const MilpModel& model, const PointAssignment& point,
                       const Rat& tol = Rat(1, 1000000)) {
    const int a = inst.activity_count();
    const bool integral = inst.integral();
    std::vector<Rat> start(a);
    std::vector<int> mode(a);

    auto s_value = [&](int e) { return point.at(model.variable(model.require("s", {e})).name); };

    switch (kind) {
        case ModelKind::See:
        case ModelKind::SeeA: {
            for (int i = 1; i <= a; ++i) {
                int start_mode = 0, start_event = -1, end_mode = 0;
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                    for (int e = 0; e < a; ++e)
                        if (detail::binary_value(model, point, model.require("x", {i, mo, e}), tol)) {
                            if (start_event >= 0)
                                throw DecodeError(DecodeError::Reason::BadPoint,
                                                  "activity " + std::to_string(i) + " has two start events");
                            start_mode = mo;
                            start_event = e;
                        }
                    for (int e = 1; e <= a; ++e)
                        if (detail::binary_value(model, point, model.require("y", {i, mo, e}), tol)) end_mode = mo;
                }
                if (start_event < 0 || end_mode == 0)
                    throw DecodeError(DecodeError::Reason::BadPoint,
                                      "activity " + std::to_string(i) + " lacks a start or end event");
                if (start_mode != end_mode)
                    throw DecodeError(DecodeError::Reason::ModeInconsistent,
                                      "activity " + std::to_string(i) + " starts in mode " +
                                          std::to_string(start_mode) + " but ends in mode " + std::to_string(end_mode));
                mode[i - 1] = start_mode;
                start[i - 1] = detail::snap_time(s_value(start_event), integral, tol);
            }
            break;
        }
        case ModelKind::Rsee: {
            for (int i = 1; i <= a; ++i) {
                int chosen = 0, end_mode = 0;
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                    if (detail::binary_value(model, point, model.require("xt", {i, mo, a - 1}), tol)) chosen = mo;
                    if (detail::binary_value(model, point, model.require("yt", {i, mo, a}), tol)) end_mode = mo;
                }
                if (chosen == 0 || end_mode == 0)
                    throw DecodeError(DecodeError::Reason::BadPoint,
                                      "activity " + std::to_string(i) + " was never started or never finished");
                if (chosen != end_mode)
                    throw DecodeError(DecodeError::Reason::ModeInconsistent,
                                      "activity " + std::to_string(i) + " starts in mode " + std::to_string(chosen) +
                                          " but ends in mode " + std::to_string(end_mode));
                int first = -1;
                for (int e = 0; e < a && first < 0; ++e)
                    if (detail::binary_value(model, point, model.require("xt", {i, chosen, e}), tol)) first = e;
                if (first < 0)
                    throw DecodeError(DecodeError::Reason::BadPoint,
                                      "activity " + std::to_string(i) + " has no start event");
                mode[i - 1] = chosen;
                start[i - 1] = detail::snap_time(s_value(first), integral, tol);
            }
            break;
        }
        case ModelKind::Ooe:
        case ModelKind::OoeA: {
            for (int i = 1; i <= a; ++i) {
                int chosen = 0, first = -1;
                for (int mo = 1; mo <= inst.mode_count(i); ++mo) {
                    int first_mo = -1;
                    for (int e = 0; e < a && first_mo < 0; ++e)
                        if (detail::binary_value(model, point, model.require("z", {i, mo, e}), tol)) first_mo = e;
                    if (first_mo >= 0) {
                        if (chosen != 0)
                            throw DecodeError(DecodeError::Reason::ModeInconsistent,
                                              "activity " + std::to_string(i) + " is active in modes " +
                                                  std::to_string(chosen) + " and " + std::to_string(mo));
                        chosen = mo;
                        first = first_mo;
                    }
                }
                if (chosen == 0)
                    throw DecodeError(DecodeError::Reason::BadPoint,
                                      "activity " + std::to_string(i) + " is never active");
                mode[i - 1] = chosen;
                start[i - 1] = detail::snap_time(s_value(first), integral, tol);
            }
            break;
        }
        case ModelKind::FctW:
        case ModelKind::FctS: {
            for (int i = 1; i <= a; ++i) {
                int chosen = 0;
                for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                    if (detail::binary_value(model, point, model.require("x", {i, mo}), tol)) {
                        if (chosen != 0)
                            throw DecodeError(DecodeError::Reason::BadPoint,
                                              "activity " + std::to_string(i) + " is assigned two modes");
                        chosen = mo;
                    }
                if (chosen == 0)
                    throw DecodeError(DecodeError::Reason::BadPoint,
                                      "activity " + std::to_string(i) + " is assigned no mode");
                mode[i - 1] = chosen;
                start[i - 1] = detail::snap_time(point.at(model.variable(model.require("s", {i})).name), integral, tol);
            }
            break;
        }
    }
    return make_schedule(inst, std::move(start), std::move(mode));
}

// ---------------------------------------------------------------------------
// Certificate points
// ---------------------------------------------------------------------------

namespace detail {

inline PointAssignment all_zero_point(const MilpModel& model) {
    PointAssignment p;
    for (const Variable& v : model.variables()) p.set(v.name, Rat(0));
    return p;
}

} // namespace detail

/// The zero-makespan point that a start/end-event model without
/// mode-consistency rows accepts: every activity starts in one mode and ends
/// in another, so no event-time row ever binds and all event times collapse
/// to zero. Requires per activity two distinct modes with identical renewable
/// demands (start mode = the later of the pair, matching the published
/// counterexample layout) and start modes that fit the non-renewable budgets.
inline PointAssignment mode_switch_zero_point(const Instance& inst, const AonGraph& g, const MilpModel& see_model) {
    const int a = inst.activity_count();
    std::vector<int> start_mode(a + 1, 0), end_mode(a + 1, 0);
    for (int i = 1; i <= a; ++i) {
        for (int m1 = 1; m1 <= inst.mode_count(i) && start_mode[i] == 0; ++m1)
            for (int m2 = m1 + 1; m2 <= inst.mode_count(i) && start_mode[i] == 0; ++m2) {
                bool equal = true;
                for (int k = 1; k <= inst.renewable_count() && equal; ++k)
                    equal = inst.renewable_demand(i, m1, k) == inst.renewable_demand(i, m2, k);
                if (equal) {
                    end_mode[i] = m1;
                    start_mode[i] = m2;
                }
            }
        if (start_mode[i] == 0)
            throw StructuralError("activity " + std::to_string(i) +
                                  " has no two modes with equal renewable demands; no mode-switch certificate");
    }
    for (int k = 1; k <= inst.nonrenewable_count(); ++k) {
        Rat usage(0);
        for (int i = 1; i <= a; ++i) usage += inst.nonrenewable_demand(i, start_mode[i], k);
        if (usage > inst.nonrenewable_capacity(k))
            throw StructuralError("start modes exceed a non-renewable budget; no mode-switch certificate");
    }

    // position activities along a topological order: slot t starts at event t
    // and ends at event t+1
    std::vector<int> order;
    for (int v : g.topological_order())
        if (v != 0 && v != g.sink) order.push_back(v);

    PointAssignment p = detail::all_zero_point(see_model);
    auto set1 = [&](const char* tag, std::initializer_list<int> idx) {
        p.set(see_model.variable(see_model.require(tag, idx)).name, Rat(1));
    };
    for (int t = 0; t < a; ++t) {
        int i = order[t];
        set1("x", {i, start_mode[i], t});
        set1("y", {i, end_mode[i], t + 1});
    }
    // event usage: exactly the slot-t start mode is running at event t
    for (int k = 1; k <= inst.renewable_count(); ++k)
        for (int e = 0; e < a; ++e)
            p.set(see_model.variable(see_model.require("r", {e, k})).name,
                  inst.renewable_demand(order[e], start_mode[order[e]], k));
    return p;
}

/// The published two-activity optimum: both activities in their unit-duration
/// mode, back to back, event times 0/1/2.
inline PointAssignment example1_optimal_point(const MilpModel& see_model) {
    PointAssignment p = detail::all_zero_point(see_model);
    auto set = [&](const char* tag, std::initializer_list<int> idx, Rat v) {
        p.set(see_model.variable(see_model.require(tag, idx)).name, std::move(v));
    };
    set("x", {1, 1, 0}, Rat(1));
    set("y", {1, 1, 1}, Rat(1));
    set("x", {2, 1, 1}, Rat(1));
    set("y", {2, 1, 2}, Rat(1));
    set("s", {1}, Rat(1));
    set("s", {2}, Rat(2));
    set("r", {0, 1}, Rat(1));
    set("r", {1, 1}, Rat(1));
    return p;
}

/// Uniform fractional point for the relaxed on-off model: z_ime = 1/(|M_i| A),
/// every event at time zero, r_ik carrying the implied non-renewable usage.
/// Feasible in the relaxation with objective zero (with or without
/// mode-consistency rows) whenever A >= 2; works only for the plain model
/// (no time windows, no variable fixing).
inline PointAssignment ooe_uniform_point(const Instance& inst, const MilpModel& ooe_model) {
    const int a = inst.activity_count();
    PointAssignment p = detail::all_zero_point(ooe_model);
    for (int i = 1; i <= a; ++i) {
        const Rat share(1, static_cast<long long>(inst.mode_count(i)) * a);
        for (int mo = 1; mo <= inst.mode_count(i); ++mo)
            for (int e = 0; e < a; ++e)
                p.set(ooe_model.variable(ooe_model.require("z", {i, mo, e})).name, share);
        for (int k = 1; k <= inst.nonrenewable_count(); ++k) {
            Rat usage(0);
            for (int mo = 1; mo <= inst.mode_count(i); ++mo)
                usage += inst.nonrenewable_demand(i, mo, k) * share;
            p.set(ooe_model.variable(ooe_model.require("r", {i, k})).name, usage);
        }
    }
    return p;
}

} // namespace mmct
