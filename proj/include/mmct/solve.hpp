#pragma once

#include "mmct/milp.hpp"
#include "mmct/mps.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <unistd.h>

namespace mmct {

/// External solver invocation: a command template with {model}, {solution}
/// and {timelimit} placeholders. The process reads the MPS file and writes
/// the neutral solution format ("#status", "#objective", "#bound" headers
/// plus one "<name> <value>" pair per line).
struct BackendConfig {
    std::string command_template;
    std::string id = "custom";
};

#ifndef MMCT_DEFAULT_BACKEND_SCRIPT
#define MMCT_DEFAULT_BACKEND_SCRIPT ""
#endif

/// The MMCT_BACKEND environment variable overrides the compiled-in default
/// (the scipy shim shipped under scripts/).
inline BackendConfig default_backend() {
    if (const char* env = std::getenv("MMCT_BACKEND"); env && *env) return {env, "env"};
    std::string script = MMCT_DEFAULT_BACKEND_SCRIPT;
    if (script.empty()) return {"", "none"};
    return {"python3 " + script + " {model} {solution} {timelimit}", "scipy-highs"};
}

enum class SolveStatus { Optimal, Feasible, Infeasible, Unknown, Error };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unknown: return "unknown";
        case SolveStatus::Error: return "error";
    }
    return "?";
}

struct SolveOutcome {
    SolveStatus status = SolveStatus::Error;
    std::optional<Rat> objective; ///< exact value of the verified point when present
    std::optional<Rat> bound;     ///< best dual bound reported by the backend
    std::optional<PointAssignment> point;
    double wall_s = 0;
    std::string message;
    std::optional<long long> backend_vars, backend_cons; ///< backend's recount of the model file
};

struct SolveRequest {
    const MilpModel* model = nullptr;
    double time_limit_s = 300;
    bool relax_first = false;
    BackendConfig backend = default_backend();
    std::string work_dir; ///< empty = fresh directory under the system temp dir
    std::string tag;      ///< file-name stem; empty = model name
};

namespace detail {

inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

inline std::string fresh_work_dir() {
    static std::atomic<unsigned> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("mmct-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir.string();
}

struct SolutionFile {
    std::string status;
    std::optional<Rat> objective, bound;
    std::optional<long long> vars, cons;
    PointAssignment point;
};

inline SolutionFile parse_solution_text(std::istream& in) {
    SolutionFile sol;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream row(line);
        std::string head;
        if (!(row >> head)) continue;
        if (head == "#status") {
            if (!(row >> sol.status)) throw ParseError("missing status value", lineno);
        } else if (head == "#objective" || head == "#bound") {
            std::string v;
            if (!(row >> v)) throw ParseError("missing value after " + head, lineno);
            (head == "#objective" ? sol.objective : sol.bound) = parse_rat(v);
        } else if (head == "#vars" || head == "#cons") {
            long long v;
            if (!(row >> v)) throw ParseError("missing count after " + head, lineno);
            (head == "#vars" ? sol.vars : sol.cons) = v;
        } else if (head[0] == '#') {
            continue; // comment
        } else {
            std::string v;
            if (!(row >> v)) throw ParseError("variable line without value", lineno);
            sol.point.set(head, parse_rat(v));
        }
    }
    if (sol.status.empty()) throw ParseError("solution file has no #status line");
    return sol;
}

} // namespace detail

/// Writes the model, runs the backend process, parses the neutral solution
/// file and verifies any claimed point with eval_point before reporting it.
/// A point that fails verification downgrades the outcome to Error; the
/// adapter never passes a solver claim through unchecked.
inline SolveOutcome solve(const SolveRequest& request) {
    SolveOutcome out;
    if (!request.model) {
        out.message = "no model";
        return out;
    }
    if (request.backend.command_template.empty()) {
        out.message = "no backend configured (set MMCT_BACKEND)";
        return out;
    }

    const MilpModel* model = request.model;
    std::optional<MilpModel> relaxed;
    if (request.relax_first) {
        relaxed = relax(*model);
        model = &*relaxed;
    }

    namespace fs = std::filesystem;
    const std::string dir = request.work_dir.empty() ? detail::fresh_work_dir() : request.work_dir;
    fs::create_directories(dir);
    std::string stem = request.tag.empty() ? detail::sanitize_name(model->name(), 100) : request.tag;
    const std::string model_path = (fs::path(dir) / (stem + ".mps")).string();
    const std::string sol_path = (fs::path(dir) / (stem + ".sol")).string();
    const std::string log_path = (fs::path(dir) / (stem + ".log")).string();

    {
        std::ofstream f(model_path);
        f << write_mps(*model);
        if (!f) {
            out.message = "cannot write " + model_path;
            return out;
        }
    }
    std::error_code ec;
    fs::remove(sol_path, ec);

    std::ostringstream tl;
    tl << request.time_limit_s;
    std::string cmd = request.backend.command_template;
    cmd = detail::replace_all(cmd, "{model}", model_path);
    cmd = detail::replace_all(cmd, "{solution}", sol_path);
    cmd = detail::replace_all(cmd, "{timelimit}", tl.str());
    cmd += " > " + log_path + " 2>&1";

    const auto t0 = std::chrono::steady_clock::now();
    int rc = std::system(cmd.c_str());
    out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ifstream sol_in(sol_path);
    if (!sol_in) {
        out.message = "backend produced no solution file (exit " + std::to_string(rc) + ")";
        return out;
    }
    detail::SolutionFile sol;
    try {
        sol = detail::parse_solution_text(sol_in);
    } catch (const std::exception& e) {
        out.message = std::string("unparseable solution file: ") + e.what();
        return out;
    }
    out.bound = sol.bound;
    out.backend_vars = sol.vars;
    out.backend_cons = sol.cons;

    SolveStatus claimed;
    if (sol.status == "optimal") claimed = SolveStatus::Optimal;
    else if (sol.status == "feasible") claimed = SolveStatus::Feasible;
    else if (sol.status == "infeasible") claimed = SolveStatus::Infeasible;
    else if (sol.status == "unknown" || sol.status == "timeout") claimed = SolveStatus::Unknown;
    else {
        out.message = "backend status: " + sol.status;
        return out;
    }

    if (claimed == SolveStatus::Optimal || claimed == SolveStatus::Feasible) {
        if (sol.point.size() == 0) {
            out.message = "backend claimed a solution but sent no point";
            return out;
        }
        try {
            EvalReport check = eval_point(*model, sol.point, Rat(1, 1000000));
            if (!check.feasible()) {
                out.message = "backend point fails verification (" + std::to_string(check.violations.size()) +
                              " violations, first: " + check.violations.front().name + ")";
                return out;
            }
            out.objective = check.objective;
        } catch (const std::exception& e) {
            out.message = std::string("backend point incomplete: ") + e.what();
            return out;
        }
        out.point = std::move(sol.point);
    }
    out.status = claimed;
    return out;
}

} // namespace mmct
