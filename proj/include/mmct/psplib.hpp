#pragma once

#include "mmct/errors.hpp"
#include "mmct/instance.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace mmct {

namespace detail {

struct Lines {
    std::vector<std::string> text;
    size_t pos = 0;

    static Lines read(std::istream& in) {
        Lines l;
        std::string s;
        while (std::getline(in, s)) {
            if (!s.empty() && s.back() == '\r') s.pop_back();
            l.text.push_back(s);
        }
        return l;
    }
    bool done() const { return pos >= text.size(); }
    int lineno() const { return static_cast<int>(pos) + 1; }
    const std::string& current() const { return text[pos]; }
    void next() { ++pos; }

    /// Advances to the first line containing the marker; throws when absent.
    void seek(const std::string& marker) {
        while (!done()) {
            if (current().find(marker) != std::string::npos) return;
            next();
        }
        throw ParseError("missing section '" + marker + "'");
    }
    bool contains_ahead(const std::string& marker) const {
        for (size_t i = pos; i < text.size(); ++i)
            if (text[i].find(marker) != std::string::npos) return true;
        return false;
    }
};

inline std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

inline bool is_star_separator(const std::string& line) {
    if (line.find('*') == std::string::npos) return false;
    for (char c : line)
        if (c != '*' && c != ' ') return false;
    return true;
}

inline bool is_dash_line(const std::string& line) {
    if (line.find('-') == std::string::npos) return false;
    for (char c : line)
        if (c != '-' && c != ' ') return false;
    return true;
}

inline long long to_count(const std::string& tok, int line) {
    try {
        size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + tok + "'", line);
    }
}

inline Rat to_value(const std::string& tok, int line) {
    try {
        return parse_rat(tok);
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + tok + "'", line);
    }
}

/// Last integer on a header line like "jobs (incl. supersource/sink ):  17".
inline long long trailing_count(Lines& lines, const std::string& marker) {
    lines.seek(marker);
    auto toks = tokens_of(lines.current());
    if (toks.empty()) throw ParseError("empty header line", lines.lineno());
    for (auto it = toks.rbegin(); it != toks.rend(); ++it) {
        try {
            return to_count(*it, lines.lineno());
        } catch (const ParseError&) {
            continue;
        }
    }
    throw ParseError("no number on header line '" + marker + "'", lines.lineno());
}

/// Resource column letters (R/N) from a header such as
/// "jobnr. mode duration  R 1  R 2  N 1  N 2"; accepts joined "R1" too.
inline std::vector<char> resource_columns(const std::string& header, int line) {
    std::vector<char> cols;
    auto toks = tokens_of(header);
    for (size_t i = 0; i < toks.size(); ++i) {
        const std::string& t = toks[i];
        if ((t == "R" || t == "N") && i + 1 < toks.size()) {
            cols.push_back(t[0]);
            ++i; // skip the index token
        } else if (t.size() >= 2 && (t[0] == 'R' || t[0] == 'N') &&
                   std::isdigit(static_cast<unsigned char>(t[1]))) {
            cols.push_back(t[0]);
        }
    }
    if (cols.empty()) throw ParseError("no resource columns in header '" + header + "'", line);
    return cols;
}

inline Instance parse_psplib_core(std::istream& in, std::string origin, std::string format_tag) {
    Lines lines = Lines::read(in);

    const long long jobs = trailing_count(lines, "jobs");
    if (jobs < 3) throw ParseError("need at least 3 jobs (two dummies plus one activity)", lines.lineno());
    const long long horizon = lines.contains_ahead("horizon") ? trailing_count(lines, "horizon") : -1;
    const long long renewable = trailing_count(lines, "renewable");
    const long long nonrenewable = trailing_count(lines, "nonrenewable");
    if (lines.contains_ahead("doubly constrained")) {
        long long doubly = trailing_count(lines, "doubly constrained");
        if (doubly != 0) throw ParseError("doubly constrained resources are not supported", lines.lineno());
    }

    // PRECEDENCE RELATIONS: jobnr #modes #successors successors...
    lines.seek("PRECEDENCE RELATIONS");
    lines.next();
    std::vector<int> mode_count(jobs + 1, 0);
    std::vector<std::vector<int>> successors(jobs + 1);
    std::vector<bool> seen_job(jobs + 1, false);
    while (!lines.done() && !is_star_separator(lines.current())) {
        auto toks = tokens_of(lines.current());
        if (toks.empty() || toks[0] == "jobnr." || is_dash_line(lines.current())) {
            lines.next();
            continue;
        }
        if (toks.size() < 3) throw ParseError("precedence row needs jobnr, #modes, #successors", lines.lineno());
        long long job = to_count(toks[0], lines.lineno());
        if (job < 1 || job > jobs) throw ParseError("job number " + std::to_string(job) + " out of range", lines.lineno());
        if (seen_job[job]) throw ParseError("duplicate precedence row for job " + std::to_string(job), lines.lineno());
        seen_job[job] = true;
        mode_count[job] = static_cast<int>(to_count(toks[1], lines.lineno()));
        long long nsucc = to_count(toks[2], lines.lineno());
        if (static_cast<long long>(toks.size()) != 3 + nsucc)
            throw ParseError("successor count does not match row length", lines.lineno());
        for (long long s = 0; s < nsucc; ++s) {
            long long v = to_count(toks[3 + s], lines.lineno());
            if (v < 1 || v > jobs) throw ParseError("successor " + std::to_string(v) + " out of range", lines.lineno());
            successors[job].push_back(static_cast<int>(v));
        }
        lines.next();
    }
    for (long long j = 1; j <= jobs; ++j)
        if (!seen_job[j]) throw ParseError("no precedence row for job " + std::to_string(j));

    // REQUESTS/DURATIONS: per job, one row per mode
    lines.seek("REQUESTS/DURATIONS");
    lines.next();
    const int header_line = lines.lineno();
    auto cols = resource_columns(lines.current(), header_line);
    {
        long long r = std::count(cols.begin(), cols.end(), 'R');
        long long n = std::count(cols.begin(), cols.end(), 'N');
        if (r != renewable || n != nonrenewable)
            throw ParseError("resource columns disagree with the RESOURCES header", header_line);
    }
    lines.next();
    const size_t ncols = cols.size();
    struct ModeRow {
        std::string label;
        Rat duration;
        std::vector<Rat> demand;
    };
    std::vector<std::vector<ModeRow>> rows(jobs + 1);
    long long current_job = 0;
    while (!lines.done() && !is_star_separator(lines.current())) {
        auto toks = tokens_of(lines.current());
        if (toks.empty() || is_dash_line(lines.current())) {
            lines.next();
            continue;
        }
        size_t base = 0;
        if (toks.size() == 3 + ncols) {
            current_job = to_count(toks[0], lines.lineno());
            if (current_job < 1 || current_job > jobs)
                throw ParseError("job number " + std::to_string(current_job) + " out of range", lines.lineno());
            base = 1;
        } else if (toks.size() == 2 + ncols) {
            if (current_job == 0) throw ParseError("mode row before any job row", lines.lineno());
        } else {
            throw ParseError("request/duration row has " + std::to_string(toks.size()) + " fields, expected " +
                                 std::to_string(2 + ncols) + " or " + std::to_string(3 + ncols),
                             lines.lineno());
        }
        ModeRow row;
        row.label = toks[base];
        row.duration = to_value(toks[base + 1], lines.lineno());
        for (size_t c = 0; c < ncols; ++c) row.demand.push_back(to_value(toks[base + 2 + c], lines.lineno()));
        rows[current_job].push_back(std::move(row));
        lines.next();
    }
    for (long long j = 1; j <= jobs; ++j)
        if (static_cast<int>(rows[j].size()) != mode_count[j])
            throw ParseError("job " + std::to_string(j) + " announces " + std::to_string(mode_count[j]) +
                             " modes but lists " + std::to_string(rows[j].size()));

    // RESOURCEAVAILABILITIES (some layouts spell it with a blank)
    if (lines.contains_ahead("RESOURCEAVAILABILITIES"))
        lines.seek("RESOURCEAVAILABILITIES");
    else
        lines.seek("RESOURCE AVAILABILITIES");
    lines.next();
    auto avail_cols = resource_columns(lines.current(), lines.lineno());
    if (avail_cols != cols) throw ParseError("availability columns disagree with request columns", lines.lineno());
    lines.next();
    while (!lines.done() && tokens_of(lines.current()).empty()) lines.next();
    if (lines.done()) throw ParseError("missing availability values");
    auto avail_toks = tokens_of(lines.current());
    if (avail_toks.size() != ncols) throw ParseError("expected " + std::to_string(ncols) + " availabilities", lines.lineno());
    std::vector<Rat> ren_cap, non_cap;
    for (size_t c = 0; c < ncols; ++c)
        (cols[c] == 'R' ? ren_cap : non_cap).push_back(to_value(avail_toks[c], lines.lineno()));

    // dummies: first and last job must be a single zero mode
    auto check_dummy = [&](long long j) {
        if (rows[j].size() != 1 || rows[j][0].duration != Rat(0))
            throw ParseError("job " + std::to_string(j) + " is not a zero-duration dummy");
        for (const Rat& d : rows[j][0].demand)
            if (d != Rat(0)) throw ParseError("dummy job " + std::to_string(j) + " has nonzero demand");
    };
    check_dummy(1);
    check_dummy(jobs);

    const int a = static_cast<int>(jobs) - 2;
    std::vector<Activity> acts(a);
    for (int i = 1; i <= a; ++i) {
        for (const ModeRow& row : rows[i + 1]) {
            Mode m;
            m.label = row.label;
            m.duration = row.duration;
            for (size_t c = 0; c < ncols; ++c)
                (cols[c] == 'R' ? m.renewable : m.nonrenewable).push_back(row.demand[c]);
            acts[i - 1].modes.push_back(std::move(m));
        }
    }

    std::vector<std::pair<int, int>> prec;
    for (long long u = 2; u < jobs; ++u)
        for (int v : successors[u]) {
            if (v == 1) throw ParseError("job " + std::to_string(u) + " lists the source as successor");
            if (v == static_cast<int>(jobs)) continue; // sink arc, rebuilt from the graph
            prec.emplace_back(static_cast<int>(u) - 1, v - 1);
        }

    std::string name = origin;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
    if (auto dot = name.find_last_of('.'); dot != std::string::npos) name = name.substr(0, dot);
    if (name.empty()) name = "instance";

    SourceInfo src{std::move(format_tag), std::move(origin),
                   horizon >= 0 ? std::optional<long long>(horizon) : std::nullopt};
    return Instance(std::move(name), std::move(acts), std::move(ren_cap), std::move(non_cap), std::move(prec),
                    std::move(src));
}

} // namespace detail

/// Parses a PSPLIB multi-mode (.mm) file. The dummy first/last jobs are
/// stripped; activities are renumbered 1..(jobs-2).
inline Instance parse_psplib_mm(std::istream& in, std::string origin = "") {
    return detail::parse_psplib_core(in, std::move(origin), "psplib-mm");
}

/// Parses an MMLIB instance (same section layout as PSPLIB).
inline Instance parse_mmlib(std::istream& in, std::string origin = "") {
    return detail::parse_psplib_core(in, std::move(origin), "mmlib");
}

/// Canonical line-oriented text format. parse(serialize(x)) == x, and
/// serialize(parse(text)) == text for text produced by this serializer.
inline std::string serialize(const Instance& inst) {
    std::ostringstream out;
    out << "mmct-instance 1\n";
    out << "name " << inst.name() << "\n";
    out << "activities " << inst.activity_count() << "\n";
    out << "renewable " << inst.renewable_count();
    for (int k = 1; k <= inst.renewable_count(); ++k) out << " " << to_decimal(inst.renewable_capacity(k));
    out << "\n";
    out << "nonrenewable " << inst.nonrenewable_count();
    for (int k = 1; k <= inst.nonrenewable_count(); ++k) out << " " << to_decimal(inst.nonrenewable_capacity(k));
    out << "\n";
    for (int i = 1; i <= inst.activity_count(); ++i) {
        out << "activity " << i << " " << inst.mode_count(i) << "\n";
        for (const Mode& m : inst.modes(i)) {
            out << "mode " << (m.label.empty() ? "-" : m.label) << " " << to_decimal(m.duration);
            for (const Rat& b : m.renewable) out << " " << to_decimal(b);
            for (const Rat& w : m.nonrenewable) out << " " << to_decimal(w);
            out << "\n";
        }
    }
    out << "precedence " << inst.precedence().size() << "\n";
    for (auto [u, v] : inst.precedence()) out << u << " " << v << "\n";
    out << "end\n";
    return out.str();
}

inline Instance parse_canonical(std::istream& in, std::string origin = "") {
    using detail::to_count;
    using detail::to_value;
    using detail::tokens_of;
    detail::Lines lines = detail::Lines::read(in);

    auto next_tokens = [&]() {
        while (!lines.done()) {
            auto toks = tokens_of(lines.current());
            if (!toks.empty() && toks[0][0] != '#') return toks;
            lines.next();
        }
        throw ParseError("unexpected end of input", lines.lineno());
    };
    auto expect = [&](const std::string& keyword, size_t min_fields) {
        auto toks = next_tokens();
        if (toks[0] != keyword)
            throw ParseError("expected '" + keyword + "', got '" + toks[0] + "'", lines.lineno());
        if (toks.size() < min_fields) throw ParseError("'" + keyword + "' line is too short", lines.lineno());
        lines.next();
        return toks;
    };

    auto head = expect("mmct-instance", 2);
    if (head[1] != "1") throw ParseError("unsupported format version " + head[1]);
    auto name_toks = expect("name", 2);
    std::string name = name_toks[1];

    int a = static_cast<int>(to_count(expect("activities", 2)[1], lines.lineno()));

    auto ren_toks = expect("renewable", 2);
    int r = static_cast<int>(to_count(ren_toks[1], lines.lineno()));
    if (static_cast<int>(ren_toks.size()) != 2 + r) throw ParseError("renewable line lists wrong capacity count");
    std::vector<Rat> ren_cap;
    for (int k = 0; k < r; ++k) ren_cap.push_back(to_value(ren_toks[2 + k], lines.lineno()));

    auto non_toks = expect("nonrenewable", 2);
    int n = static_cast<int>(to_count(non_toks[1], lines.lineno()));
    if (static_cast<int>(non_toks.size()) != 2 + n) throw ParseError("nonrenewable line lists wrong budget count");
    std::vector<Rat> non_cap;
    for (int k = 0; k < n; ++k) non_cap.push_back(to_value(non_toks[2 + k], lines.lineno()));

    std::vector<Activity> acts(a);
    for (int i = 1; i <= a; ++i) {
        auto act_toks = expect("activity", 3);
        if (to_count(act_toks[1], lines.lineno()) != i) throw ParseError("activities out of order", lines.lineno());
        int mc = static_cast<int>(to_count(act_toks[2], lines.lineno()));
        for (int m = 0; m < mc; ++m) {
            auto mt = expect("mode", 3);
            if (static_cast<int>(mt.size()) != 3 + r + n)
                throw ParseError("mode line lists wrong demand count", lines.lineno());
            Mode mode;
            mode.label = mt[1] == "-" ? "" : mt[1];
            mode.duration = to_value(mt[2], lines.lineno());
            for (int k = 0; k < r; ++k) mode.renewable.push_back(to_value(mt[3 + k], lines.lineno()));
            for (int k = 0; k < n; ++k) mode.nonrenewable.push_back(to_value(mt[3 + r + k], lines.lineno()));
            acts[i - 1].modes.push_back(std::move(mode));
        }
    }

    auto prec_toks = expect("precedence", 2);
    long long pc = to_count(prec_toks[1], lines.lineno());
    std::vector<std::pair<int, int>> prec;
    for (long long p = 0; p < pc; ++p) {
        auto toks = next_tokens();
        if (toks.size() != 2) throw ParseError("precedence pair needs two fields", lines.lineno());
        prec.emplace_back(static_cast<int>(to_count(toks[0], lines.lineno())),
                          static_cast<int>(to_count(toks[1], lines.lineno())));
        lines.next();
    }
    expect("end", 1);

    SourceInfo src{"canonical", std::move(origin), std::nullopt};
    return Instance(std::move(name), std::move(acts), std::move(ren_cap), std::move(non_cap), std::move(prec),
                    std::move(src));
}

/// Reads an instance file, sniffing the format (canonical vs PSPLIB layout;
/// a "basedata" header mentioning MMLIB selects the mmlib tag).
inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string head(512, '\0');
    in.read(head.data(), static_cast<std::streamsize>(head.size()));
    head.resize(static_cast<size_t>(in.gcount()));
    in.clear();
    in.seekg(0);
    if (head.find("mmct-instance") != std::string::npos) return parse_canonical(in, path);
    if (head.find("MMLIB") != std::string::npos) return parse_mmlib(in, path);
    return parse_psplib_mm(in, path);
}

namespace detail {

inline std::vector<Activity> copy_activities(const Instance& inst) {
    std::vector<Activity> acts(inst.activity_count());
    for (int i = 1; i <= inst.activity_count(); ++i)
        for (const Mode& m : inst.modes(i)) acts[i - 1].modes.push_back(m);
    return acts;
}

} // namespace detail

/// Multiplies every renewable demand and capacity by delta (>= 1). Durations,
/// non-renewable data and precedence are untouched; the instance name gets a
/// "_d<delta>" suffix unless delta is 1.
inline Instance scale_renewables(const Instance& inst, long long delta) {
    if (delta < 1) throw std::invalid_argument("scale factor must be >= 1");
    auto acts = detail::copy_activities(inst);
    for (auto& a : acts)
        for (auto& m : a.modes)
            for (auto& b : m.renewable) b *= Rat(delta);
    std::vector<Rat> ren_cap;
    for (int k = 1; k <= inst.renewable_count(); ++k) ren_cap.push_back(inst.renewable_capacity(k) * Rat(delta));
    std::vector<Rat> non_cap;
    for (int k = 1; k <= inst.nonrenewable_count(); ++k) non_cap.push_back(inst.nonrenewable_capacity(k));
    std::string name = delta == 1 ? inst.name() : inst.name() + "_d" + std::to_string(delta);
    SourceInfo src{"derived", "scale(" + inst.name() + "," + std::to_string(delta) + ")", inst.source().horizon};
    return Instance(std::move(name), std::move(acts), std::move(ren_cap), std::move(non_cap), inst.precedence(),
                    std::move(src));
}

/// Removes every renewable resource (produces the purely non-renewable
/// special case). Idempotent.
inline Instance strip_renewables(const Instance& inst) {
    auto acts = detail::copy_activities(inst);
    for (auto& a : acts)
        for (auto& m : a.modes) m.renewable.clear();
    std::vector<Rat> non_cap;
    for (int k = 1; k <= inst.nonrenewable_count(); ++k) non_cap.push_back(inst.nonrenewable_capacity(k));
    std::string name = inst.renewable_count() == 0 ? inst.name() : inst.name() + "N";
    SourceInfo src{"derived", "strip(" + inst.name() + ")", inst.source().horizon};
    return Instance(std::move(name), std::move(acts), {}, std::move(non_cap), inst.precedence(), std::move(src));
}

} // namespace mmct
