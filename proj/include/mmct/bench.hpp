#pragma once

#include "mmct/formulations.hpp"
#include "mmct/oracle.hpp"
#include "mmct/psplib.hpp"
#include "mmct/solve.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <tuple>
#include <atomic>
#include <cctype>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

namespace mmct {

struct BenchModelSpec {
    std::string label; ///< as written in the config, e.g. "see+mc+tw+vf"
    ModelKind kind = ModelKind::See;
    FormulationOptions opts;
};

/// Parses "kind[+flag...]" with flags mc, mca, set, tw, vf, rc.
inline BenchModelSpec parse_model_spec(const std::string& spec) {
    BenchModelSpec out;
    out.label = spec;
    std::string head = spec;
    std::vector<std::string> flags;
    size_t pos;
    while ((pos = head.rfind('+')) != std::string::npos) {
        flags.push_back(head.substr(pos + 1));
        head.erase(pos);
    }
    out.kind = parse_kind(head);
    for (const std::string& f : flags) {
        if (f == "mc") out.opts.mode_consistency = ModeConsistency::Full;
        else if (f == "mca") out.opts.mode_consistency = ModeConsistency::Aggregate;
        else if (f == "set") out.opts.strong_event_time = true;
        else if (f == "tw") out.opts.time_windows = true;
        else if (f == "vf") out.opts.variable_fixing = true;
        else if (f == "rc") out.opts.incompatible_pairs = true;
        else throw UnsupportedOptionError("unknown model flag '+" + f + "' in '" + spec + "'");
    }
    return out;
}

struct BenchConfig {
    struct Item {
        std::string dataset;
        std::string path;
    };
    std::vector<Item> instances;
    std::vector<BenchModelSpec> models;
    double time_limit_s = 300;
    int parallelism = 1;
    BackendConfig backend = default_backend();
    std::string output_dir = "bench-out";
    bool oracle_crosscheck = false;
    std::string seed; ///< provenance only, copied into the aggregate CSV
};

namespace detail {

/// "c15like_03" -> "c15like"; stems without a numeric suffix stay whole.
inline std::string dataset_of_stem(const std::string& stem) {
    size_t end = stem.size();
    while (end > 0 && std::isdigit(static_cast<unsigned char>(stem[end - 1]))) --end;
    if (end > 1 && end < stem.size() && stem[end - 1] == '_') return stem.substr(0, end - 1);
    return stem;
}

inline std::string stem_of_path(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

inline std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = '_';
    return s;
}

} // namespace detail

inline BenchConfig load_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad config JSON: ") + e.what());
    }

    BenchConfig cfg;
    if (!j.contains("instances") || !j.contains("models"))
        throw ParseError("config needs 'instances' and 'models' arrays");
    for (const auto& item : j.at("instances")) {
        BenchConfig::Item it;
        if (item.is_string()) {
            it.path = item.get<std::string>();
            it.dataset = detail::dataset_of_stem(detail::stem_of_path(it.path));
        } else {
            it.path = item.at("path").get<std::string>();
            it.dataset = item.value("dataset", detail::dataset_of_stem(detail::stem_of_path(it.path)));
        }
        cfg.instances.push_back(std::move(it));
    }
    for (const auto& m : j.at("models")) cfg.models.push_back(parse_model_spec(m.get<std::string>()));
    cfg.time_limit_s = j.value("time_limit_s", 300.0);
    cfg.parallelism = j.value("parallelism", 1);
    cfg.output_dir = j.value("output_dir", std::string("bench-out"));
    cfg.oracle_crosscheck = j.value("oracle_crosscheck", false);
    cfg.seed = j.value("seed", std::string());
    if (j.contains("backend")) cfg.backend = {j.at("backend").get<std::string>(), j.value("backend_id", "config")};
    return cfg;
}

/// One solved (instance, model) pair; these rows are the resumable unit.
struct RunRow {
    std::string dataset, instance, model;
    std::string status; ///< optimal|feasible|infeasible|unknown|error
    std::optional<Rat> objective, bound;
    double build_s = 0, solve_s = 0;
    long long vars = 0, cons = 0;
    bool valid = true; ///< decoded schedule validated (and matched the oracle in cross-check mode)
};

/// One aggregate line per (data set, model), following the usual reporting
/// scheme: solved/optimal/best counts, mean percentage gap to the best
/// makespan over feasible-but-unproven runs, mean solver wall time and mean
/// model size.
struct BenchmarkRecord {
    std::string dataset, model;
    int instances = 0;
    int feas = 0, opt = 0, best = 0;
    std::optional<double> mean_dz_pct;
    double mean_cpu_s = 0, mean_build_s = 0;
    double mean_vars = 0, mean_cons = 0;
};

namespace detail {

inline std::string row_to_csv(const RunRow& r) {
    std::ostringstream out;
    out << csv_safe(r.dataset) << ',' << csv_safe(r.instance) << ',' << csv_safe(r.model) << ',' << r.status << ','
        << (r.objective ? to_decimal(*r.objective) : "") << ',' << (r.bound ? to_decimal(*r.bound) : "") << ','
        << r.build_s << ',' << r.solve_s << ',' << r.vars << ',' << r.cons << ',' << (r.valid ? 1 : 0);
    return out.str();
}

inline const char* run_log_header() {
    return "dataset,instance,model,status,objective,bound,build_s,solve_s,vars,cons,valid";
}

inline std::vector<RunRow> read_run_log(const std::string& path) {
    std::vector<RunRow> rows;
    std::ifstream in(path);
    if (!in) return rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            if (line == run_log_header()) continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        while (f.size() < 11) f.push_back("");
        RunRow r;
        r.dataset = f[0];
        r.instance = f[1];
        r.model = f[2];
        r.status = f[3];
        if (!f[4].empty()) r.objective = parse_rat(f[4]);
        if (!f[5].empty()) r.bound = parse_rat(f[5]);
        r.build_s = f[6].empty() ? 0 : std::stod(f[6]);
        r.solve_s = f[7].empty() ? 0 : std::stod(f[7]);
        r.vars = f[8].empty() ? 0 : std::stoll(f[8]);
        r.cons = f[9].empty() ? 0 : std::stoll(f[9]);
        r.valid = f[10] != "0";
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace detail

/// Reduces run rows to per-(dataset, model) records, ranked by feasible,
/// optimal and best counts. "Best" counts runs whose makespan equals the
/// least one found across all models on that instance (all tying models
/// count). The gap column averages only feasible-but-not-proven runs and is
/// empty when there are none; instances where a model found nothing are
/// excluded from that model's mean.
inline std::vector<BenchmarkRecord> aggregate_runs(std::vector<RunRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const RunRow& x, const RunRow& y) {
        return std::tie(x.dataset, x.instance, x.model) < std::tie(y.dataset, y.instance, y.model);
    });

    std::map<std::pair<std::string, std::string>, std::optional<Rat>> best_makespan;
    for (const RunRow& r : rows) {
        if (!r.objective || (r.status != "optimal" && r.status != "feasible")) continue;
        auto& slot = best_makespan[{r.dataset, r.instance}];
        if (!slot || *r.objective < *slot) slot = r.objective;
    }

    struct Acc {
        int instances = 0, feas = 0, opt = 0, best = 0, dz_n = 0;
        double dz_sum = 0, cpu = 0, build = 0, vars = 0, cons = 0;
    };
    std::map<std::pair<std::string, std::string>, Acc> by_key;
    for (const RunRow& r : rows) {
        Acc& a = by_key[{r.dataset, r.model}];
        ++a.instances;
        a.cpu += r.solve_s;
        a.build += r.build_s;
        a.vars += static_cast<double>(r.vars);
        a.cons += static_cast<double>(r.cons);
        const bool has_solution = r.objective && (r.status == "optimal" || r.status == "feasible");
        if (has_solution) ++a.feas;
        if (r.status == "optimal") ++a.opt;
        if (has_solution) {
            const auto& zbest = best_makespan[{r.dataset, r.instance}];
            if (zbest && *r.objective == *zbest) ++a.best;
            if (r.status == "feasible" && zbest && *zbest != Rat(0)) {
                a.dz_sum += 100.0 * to_double((*r.objective - *zbest) / *zbest);
                ++a.dz_n;
            }
        }
    }

    std::vector<BenchmarkRecord> records;
    for (const auto& [key, a] : by_key) {
        BenchmarkRecord rec;
        rec.dataset = key.first;
        rec.model = key.second;
        rec.instances = a.instances;
        rec.feas = a.feas;
        rec.opt = a.opt;
        rec.best = a.best;
        if (a.dz_n > 0) rec.mean_dz_pct = a.dz_sum / a.dz_n;
        rec.mean_cpu_s = a.cpu / a.instances;
        rec.mean_build_s = a.build / a.instances;
        rec.mean_vars = a.vars / a.instances;
        rec.mean_cons = a.cons / a.instances;
        records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end(), [](const BenchmarkRecord& x, const BenchmarkRecord& y) {
        if (x.dataset != y.dataset) return x.dataset < y.dataset;
        if (x.feas != y.feas) return x.feas > y.feas;
        if (x.opt != y.opt) return x.opt > y.opt;
        if (x.best != y.best) return x.best > y.best;
        return x.model < y.model;
    });
    return records;
}

inline std::string records_to_csv(const std::vector<BenchmarkRecord>& records, const BenchConfig& cfg) {
    std::ostringstream out;
    out << "data_set,model,feas,opt,best,delta_z_pct,cpu_s,vars,cons,"
           "instances,build_s,time_limit_s,backend,seed\n";
    char buf[64];
    for (const BenchmarkRecord& r : records) {
        out << detail::csv_safe(r.dataset) << ',' << detail::csv_safe(r.model) << ',' << r.feas << ',' << r.opt << ','
            << r.best << ',';
        if (r.mean_dz_pct) {
            std::snprintf(buf, sizeof(buf), "%.2f", *r.mean_dz_pct);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.3f", r.mean_cpu_s);
        out << ',' << buf;
        std::snprintf(buf, sizeof(buf), "%.1f", r.mean_vars);
        out << ',' << buf;
        std::snprintf(buf, sizeof(buf), "%.1f", r.mean_cons);
        out << ',' << buf << ',' << r.instances;
        std::snprintf(buf, sizeof(buf), "%.3f", r.mean_build_s);
        out << ',' << buf << ',' << cfg.time_limit_s << ',' << detail::csv_safe(cfg.backend.id) << ','
            << detail::csv_safe(cfg.seed) << '\n';
    }
    return out.str();
}

/// Runs every (instance, model) pair not yet present in the per-run log,
/// instance-level parallel, then reduces the full log. Backend failures are
/// logged per pair and never abort the batch. Rerunning a finished or
/// partially finished batch reuses the log and reproduces the aggregates.
inline std::vector<BenchmarkRecord> run_benchmark(const BenchConfig& cfg, std::ostream* progress = nullptr) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const std::string log_path = (fs::path(cfg.output_dir) / "runs.csv").string();

    std::vector<RunRow> rows = detail::read_run_log(log_path);
    std::set<std::tuple<std::string, std::string, std::string>> done;
    for (const RunRow& r : rows) done.insert({r.dataset, r.instance, r.model});

    struct Job {
        const BenchConfig::Item* item;
        const BenchModelSpec* model;
        const Instance* instance;
    };
    // parse each instance once up front; a broken file fails its jobs only
    std::vector<std::optional<Instance>> parsed(cfg.instances.size());
    std::vector<std::string> parse_errors(cfg.instances.size());
    for (size_t i = 0; i < cfg.instances.size(); ++i) {
        try {
            parsed[i] = load_instance(cfg.instances[i].path);
        } catch (const std::exception& e) {
            parse_errors[i] = e.what();
        }
    }

    std::vector<Job> jobs;
    std::vector<std::pair<size_t, const BenchModelSpec*>> broken;
    for (size_t i = 0; i < cfg.instances.size(); ++i)
        for (const BenchModelSpec& spec : cfg.models) {
            const std::string stem = detail::stem_of_path(cfg.instances[i].path);
            if (done.count({cfg.instances[i].dataset, stem, spec.label})) continue;
            if (parsed[i])
                jobs.push_back({&cfg.instances[i], &spec, &*parsed[i]});
            else
                broken.push_back({i, &spec});
        }

    std::ofstream log(log_path, std::ios::app);
    if (rows.empty()) log << detail::run_log_header() << "\n";
    std::mutex mu;
    auto emit = [&](RunRow row) {
        std::lock_guard<std::mutex> lock(mu);
        log << detail::row_to_csv(row) << "\n";
        log.flush();
        if (progress)
            *progress << row.dataset << "/" << row.instance << " " << row.model << ": " << row.status
                      << (row.objective ? " " + to_decimal(*row.objective) : "") << "\n";
        rows.push_back(std::move(row));
    };

    for (auto [i, spec] : broken) {
        RunRow row;
        row.dataset = cfg.instances[i].dataset;
        row.instance = detail::stem_of_path(cfg.instances[i].path);
        row.model = spec->label;
        row.status = "error";
        row.valid = false;
        emit(std::move(row));
    }

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const Job& job = jobs[j];
            RunRow row;
            row.dataset = job.item->dataset;
            row.instance = detail::stem_of_path(job.item->path);
            row.model = job.model->label;
            try {
                const Instance& inst = *job.instance;
                auto t0 = std::chrono::steady_clock::now();
                AonGraph g = build_aon(inst);
                TimeWindows tw = time_windows(inst, g);
                MilpModel model = build_model(job.model->kind, inst, g, tw, job.model->opts);
                row.build_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                ModelStats st = stats(model);
                row.vars = st.variables;
                row.cons = st.constraints;

                SolveRequest req;
                req.model = &model;
                req.time_limit_s = cfg.time_limit_s;
                req.backend = cfg.backend;
                req.work_dir = (fs::path(cfg.output_dir) / "work").string();
                req.tag = detail::sanitize_name(row.dataset + "_" + row.instance + "_" + row.model, 120);
                SolveOutcome outcome = solve(req);
                row.status = to_string(outcome.status);
                row.objective = outcome.objective;
                row.bound = outcome.bound;
                row.solve_s = outcome.wall_s;

                if (outcome.point &&
                    (outcome.status == SolveStatus::Optimal || outcome.status == SolveStatus::Feasible)) {
                    try {
                        Schedule sched = decode(job.model->kind, inst, model, *outcome.point);
                        row.valid = validate_schedule(inst, sched).feasible();
                    } catch (const std::exception&) {
                        row.valid = false;
                    }
                }
                if (cfg.oracle_crosscheck && outcome.status == SolveStatus::Optimal &&
                    inst.activity_count() <= 10) {
                    OracleResult oracle = solve_exact(inst);
                    if (oracle.status == OracleStatus::Optimal &&
                        (!outcome.objective || oracle.schedule->makespan != *outcome.objective))
                        row.valid = false;
                }
            } catch (const std::exception& e) {
                row.status = "error";
                row.valid = false;
                (void)e;
            }
            emit(std::move(row));
        }
    };

    const int workers = std::max(1, std::min<int>(cfg.parallelism, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    auto records = aggregate_runs(rows);
    std::ofstream agg((fs::path(cfg.output_dir) / "records.csv").string());
    agg << records_to_csv(records, cfg);
    return records;
}

} // namespace mmct
