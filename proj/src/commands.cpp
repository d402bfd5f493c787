#include "pyro/commands.hpp"

#include "pyro/bifidelity.hpp"
#include "pyro/csv.hpp"
#include "pyro/interpolate.hpp"
#include "pyro/model_store.hpp"
#include "pyro/snapshot_io.hpp"
#include "pyro/solver.hpp"
#include "pyro/uq.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace pyro {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

std::string snapshot_file(const fs::path& dir, Fidelity f, int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%06d.bin", f == Fidelity::LF ? "lf" : "hf", index);
    return (dir / buf).string();
}

void apply_env_overrides(RunConfig& cfg) {
    if (const char* dir = std::getenv("PYRO_OUTPUT_DIR"); dir && *dir) cfg.output_dir = dir;
    if (const char* par = std::getenv("PYRO_PARALLELISM"); par && *par) {
        const int width = std::atoi(par);
        if (width >= 1) cfg.parallelism = width;
    }
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

std::vector<std::string> split_csv_line(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

ParamVector parse_z_literal(const std::string& text, const std::vector<std::string>& names,
                            const std::string& context) {
    const auto cells = split_csv_line(text);
    if (cells.size() != names.size())
        throw Error(ErrorCode::InvalidArgument,
                    context + ": expected " + std::to_string(names.size()) + " values (" +
                        std::to_string(cells.size()) + " given)");
    ParamVector z;
    z.names = names;
    for (const auto& c : cells) z.values.push_back(parse_double(c, context));
    return z;
}

}  // namespace

int report_error(const std::exception& e, std::ostream& log) {
    log << "error: " << e.what() << "\n";
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        switch (err->code()) {
            case ErrorCode::Config:
            case ErrorCode::Parse:
            case ErrorCode::Io:
            case ErrorCode::InvalidArgument:
                return 2;
            default:
                return 3;
        }
    }
    return 3;
}

int cmd_offline(const std::string& config_path, std::ostream& log) {
    try {
        RunConfig cfg = RunConfig::from_json_file(config_path);
        apply_env_overrides(cfg);
        if (cfg.output_dir.empty())
            throw Error(ErrorCode::Config, "config: output_dir is required for offline training");

        const fs::path out_dir(cfg.output_dir);
        const fs::path snap_dir = out_dir / "snapshots";
        fs::create_directories(snap_dir);

        if (model_exists(cfg.output_dir)) {
            log << "model already trained in " << cfg.output_dir << "; nothing to do\n";
            return 0;
        }

        // Unit sim costs, measured on the runs actually performed.
        std::mutex stats_mutex;
        double lf_seconds = 0.0, hf_seconds = 0.0;
        long lf_runs = 0, hf_runs = 0;

        TrainHooks hooks;
        hooks.log = [&](const std::string& msg) { log << msg << "\n"; };
        hooks.load_snapshot = [&](Fidelity f, int index) {
            return try_read_snapshot(snapshot_file(snap_dir, f, index));
        };
        hooks.store_snapshot = [&](Fidelity f, int index, const Snapshot& s) {
            write_snapshot(snapshot_file(snap_dir, f, index), s,
                           "offline training sample " + std::to_string(index));
        };

        // Wrap load/store to time fresh simulations: a load miss followed by a
        // store brackets exactly one simulate call.
        auto load_base = hooks.load_snapshot;
        auto store_base = hooks.store_snapshot;
        std::mutex time_mutex;
        std::map<std::pair<int, int>, Clock::time_point> started;
        hooks.load_snapshot = [&, load_base](Fidelity f, int index) {
            auto snap = load_base(f, index);
            if (!snap) {
                std::lock_guard<std::mutex> lock(time_mutex);
                started[{int(f), index}] = Clock::now();
            }
            return snap;
        };
        hooks.store_snapshot = [&, store_base](Fidelity f, int index, const Snapshot& s) {
            double sec = 0.0;
            {
                std::lock_guard<std::mutex> lock(time_mutex);
                const auto it = started.find({int(f), index});
                if (it != started.end()) {
                    sec = std::chrono::duration<double>(Clock::now() - it->second).count();
                    started.erase(it);
                }
            }
            {
                std::lock_guard<std::mutex> lock(stats_mutex);
                if (f == Fidelity::LF) {
                    lf_seconds += sec;
                    ++lf_runs;
                } else {
                    hf_seconds += sec;
                    ++hf_runs;
                }
            }
            store_base(f, index, s);
        };

        const auto t0 = Clock::now();
        BiFiModel model = offline_train(cfg, hooks);
        const double total = std::chrono::duration<double>(Clock::now() - t0).count();

        save_model(cfg.output_dir, model);
        for (const auto& line : model.condition_log) log << "note: " << line << "\n";

        if (lf_runs > 0 || hf_runs > 0) {
            json t;
            t["lf_seconds_total"] = lf_seconds;
            t["lf_runs"] = lf_runs;
            t["hf_seconds_total"] = hf_seconds;
            t["hf_runs"] = hf_runs;
            t["offline_seconds_total"] = total;
            write_json_file(out_dir / "timings_offline.json", t);
        }

        log << "trained model written to " << cfg.output_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        return report_error(e, log);
    }
}

int cmd_predict(const PredictOptions& opts, std::ostream& log) {
    try {
        const BiFiModel model = load_model(opts.model_dir);
        const std::vector<std::string> names = model.config.box.names();

        std::vector<ParamVector> queries;
        for (size_t i = 0; i < opts.z_literals.size(); ++i)
            queries.push_back(parse_z_literal(opts.z_literals[i], names,
                                              "query " + std::to_string(i)));
        if (!opts.z_csv.empty()) {
            const CsvTable t = read_csv(opts.z_csv);
            if (t.header != names)
                throw Error(ErrorCode::InvalidArgument,
                            opts.z_csv + ": header must match model parameters");
            for (size_t r = 0; r < t.rows.size(); ++r) {
                ParamVector z;
                z.names = names;
                for (const auto& cell : t.rows[r])
                    z.values.push_back(
                        parse_double(cell, opts.z_csv + ":" + std::to_string(r + 2)));
                queries.push_back(std::move(z));
            }
        }
        if (queries.empty())
            throw Error(ErrorCode::InvalidArgument, "predict: no query points given");

        for (const auto& method : opts.methods)
            if (method != "mf" && method != "cf" && method != "lf")
                throw Error(ErrorCode::InvalidArgument,
                            "predict: unknown method '" + method + "'");

        const fs::path out_dir = fs::path(opts.model_dir) / "predict";
        fs::create_directories(out_dir);

        std::optional<Snapshot> fixed_reference;
        if (!opts.hf_reference.empty()) fixed_reference = read_snapshot(opts.hf_reference);

        CsvTable errors;
        errors.header = {"query", "method", "variable", "relative_error"};
        CsvTable timings;
        timings.header = {"query", "method", "online_seconds", "lf_seconds"};

        for (size_t qi = 0; qi < queries.size(); ++qi) {
            const ParamVector& z = queries[qi];
            std::optional<Snapshot> reference = fixed_reference;
            if (opts.run_hf) {
                log << "running HF reference for query " << qi << "\n";
                reference = simulate(model.config.hf.grid, model.config.hf.phys, z,
                                     model.config.ignition);
                reference->fidelity = Fidelity::HF;
            }

            for (const auto& method : opts.methods) {
                Prediction pred;
                if (method == "mf")
                    pred = online_predict(model, z);
                else if (method == "cf")
                    pred = conventional_predict(model, z);
                else
                    pred = lf_predict(model, z);

                if (pred.out_of_box)
                    log << "warning: query " << qi << " lies outside the parameter box\n";
                if (pred.mapping_fallback)
                    log << "warning: query " << qi
                        << " had a degenerate LF front; used the unmapped path\n";

                char stem[48];
                std::snprintf(stem, sizeof(stem), "pred_%03zu_%s", qi, method.c_str());
                const std::string base = (out_dir / stem).string();
                write_snapshot(base + ".bin", pred.snapshot, "prediction " + method);
                export_snapshot_csv(base + ".csv", pred.snapshot);
                timings.rows.push_back({std::to_string(qi), method, fmt17(pred.online_seconds),
                                        fmt17(pred.lf_seconds)});

                if (reference) {
                    // Compare on the reference (HF) grid.
                    Snapshot cmp = pred.snapshot;
                    if (!cmp.grid.same_layout(reference->grid)) {
                        Snapshot re(reference->grid, cmp.fidelity);
                        re.z = cmp.z;
                        re.scale = cmp.scale;
                        re.T = resample(cmp.T, cmp.grid, reference->grid);
                        re.S_e = resample(cmp.S_e, cmp.grid, reference->grid);
                        re.S_x = resample(cmp.S_x, cmp.grid, reference->grid);
                        cmp = std::move(re);
                    }
                    errors.rows.push_back({std::to_string(qi), method, "T",
                                           fmt17(relative_error(reference->T, cmp.T))});
                    errors.rows.push_back({std::to_string(qi), method, "S_e",
                                           fmt17(relative_error(reference->S_e, cmp.S_e))});
                    errors.rows.push_back({std::to_string(qi), method, "S_x",
                                           fmt17(relative_error(reference->S_x, cmp.S_x))});
                }
            }
        }

        if (!errors.rows.empty()) write_csv((out_dir / "errors.csv").string(), errors);
        write_csv((out_dir / "timings_predict.csv").string(), timings);
        log << "predictions written to " << out_dir.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        return report_error(e, log);
    }
}

int cmd_uq(const std::string& model_dir, int count, uint64_t seed, bool with_hf,
           std::ostream& log) {
    try {
        const BiFiModel model = load_model(model_dir);

        char sub[64];
        std::snprintf(sub, sizeof(sub), "uq_n%d_seed%llu%s", count,
                      static_cast<unsigned long long>(seed), with_hf ? "_hf" : "");
        const fs::path out_dir = fs::path(model_dir) / sub;
        if (fs::exists(out_dir / "qois.csv")) {
            log << "uq outputs already present in " << out_dir.string() << "; nothing to do\n";
            return 0;
        }
        fs::create_directories(out_dir);

        if (count == 1)
            log << "warning: single-sample study; densities degenerate to the bandwidth floor\n";

        const auto t0 = Clock::now();
        const TierQois result =
            propagate(model, model.config.box, count, seed, with_hf, model.config.parallelism);
        const double total = std::chrono::duration<double>(Clock::now() - t0).count();

        // QoI table: one row per (sample, tier).
        CsvTable qois;
        qois.header = {"sample"};
        for (const auto& n : result.test_set.names) qois.header.push_back("param:" + n);
        for (const auto& col : {"tier", "t_max", "em", "ba", "failed"}) qois.header.push_back(col);
        for (const auto& [tier, rows] : result.by_tier) {
            for (size_t i = 0; i < rows.size(); ++i) {
                std::vector<std::string> row;
                row.push_back(std::to_string(i));
                for (size_t j = 0; j < result.test_set.names.size(); ++j)
                    row.push_back(fmt17(result.test_set.value(int(i), j)));
                row.push_back(tier);
                row.push_back(fmt17(rows[i].t_max));
                row.push_back(fmt17(rows[i].em));
                row.push_back(fmt17(rows[i].ba));
                row.push_back(rows[i].failed ? "1" : "0");
                qois.rows.push_back(std::move(row));
            }
        }
        write_csv((out_dir / "qois.csv").string(), qois);

        for (const auto& [key, density] : result.densities) {
            CsvTable t;
            t.header = {"grid", "density"};
            for (size_t i = 0; i < density.grid.size(); ++i)
                t.rows.push_back({fmt17(density.grid[i]), fmt17(density.density[i])});
            write_csv((out_dir / ("density_" + key.first + "_" + key.second + ".csv")).string(),
                      t);
        }

        json t;
        t["samples"] = count;
        t["with_hf"] = with_hf;
        t["uq_seconds_total"] = total;
        write_json_file(out_dir / "timings_uq.json", t);

        log << "uq outputs written to " << out_dir.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        return report_error(e, log);
    }
}

int cmd_uq_with_default_seed(const std::string& model_dir, int count,
                             std::optional<uint64_t> seed, bool with_hf, std::ostream& log) {
    try {
        uint64_t effective = 0;
        if (seed) {
            effective = *seed;
        } else {
            const BiFiModel model = load_model(model_dir);
            effective = model.config.uq_seed;
        }
        return cmd_uq(model_dir, count, effective, with_hf, log);
    } catch (const std::exception& e) {
        return report_error(e, log);
    }
}

int cmd_report(const std::string& output_dir, std::ostream& log) {
    try {
        if (!fs::exists(output_dir))
            throw Error(ErrorCode::Io, "output directory '" + output_dir + "' does not exist");

        json offline;
        std::vector<json> uq_blocks;
        std::vector<fs::path> predict_timings;
        for (const auto& entry : fs::recursive_directory_iterator(output_dir)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (name == "timings_offline.json") {
                std::ifstream in(entry.path());
                in >> offline;
            } else if (name == "timings_uq.json") {
                json j;
                std::ifstream in(entry.path());
                in >> j;
                uq_blocks.push_back(j);
            } else if (name == "timings_predict.csv") {
                predict_timings.push_back(entry.path());
            }
        }
        if (offline.is_null() && uq_blocks.empty() && predict_timings.empty())
            throw Error(ErrorCode::Io,
                        "no timing records found under '" + output_dir + "'");

        double lf_unit = 0.0, hf_unit = 0.0, offline_total = 0.0;
        log << "cost report for " << output_dir << "\n";
        if (!offline.is_null()) {
            const double lf_total = offline.value("lf_seconds_total", 0.0);
            const long lf_runs = offline.value("lf_runs", 0L);
            const double hf_total = offline.value("hf_seconds_total", 0.0);
            const long hf_runs = offline.value("hf_runs", 0L);
            offline_total = offline.value("offline_seconds_total", 0.0);
            lf_unit = lf_runs > 0 ? lf_total / double(lf_runs) : 0.0;
            hf_unit = hf_runs > 0 ? hf_total / double(hf_runs) : 0.0;
            log << "  offline: total " << offline_total << " s (" << lf_runs << " LF runs, "
                << lf_total << " s; " << hf_runs << " HF runs, " << hf_total << " s)\n";
            if (lf_unit > 0.0) log << "  LF unit cost:  " << lf_unit << " s\n";
            if (hf_unit > 0.0) log << "  HF unit cost:  " << hf_unit << " s\n";
        }

        double online_unit = 0.0;
        long online_count = 0;
        for (const auto& path : predict_timings) {
            const CsvTable t = read_csv(path.string());
            for (const auto& row : t.rows) {
                if (row[1] == "lf") continue;
                online_unit += parse_double(row[2], path.string());
                ++online_count;
            }
        }
        if (online_count > 0) {
            online_unit /= double(online_count);
            log << "  online unit cost (surrogate query): " << online_unit << " s over "
                << online_count << " queries\n";
        } else if (lf_unit > 0.0) {
            online_unit = lf_unit;  // dominated by the single LF run
            log << "  online unit cost estimated from LF unit cost: " << online_unit << " s\n";
        }

        for (const auto& j : uq_blocks)
            log << "  uq study: " << j.value("samples", 0) << " samples in "
                << j.value("uq_seconds_total", 0.0) << " s (with_hf="
                << (j.value("with_hf", false) ? "yes" : "no") << ")\n";

        if (hf_unit > 0.0 && online_unit > 0.0 && hf_unit > online_unit) {
            log << "  speedup per query vs HF: " << hf_unit / online_unit << "x\n";
            const double break_even = offline_total / (hf_unit - online_unit);
            log << "  break-even query count: " << break_even << "\n";
        } else if (hf_unit > 0.0) {
            log << "  no break-even: online cost does not undercut HF\n";
        }
        return 0;
    } catch (const std::exception& e) {
        return report_error(e, log);
    }
}

}  // namespace pyro
