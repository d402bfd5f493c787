#include "pyro/commands.hpp"

#include "pyro/bifidelity.hpp"
#include "pyro/csv.hpp"
#include "pyro/model_store.hpp"
#include "pyro/snapshot_io.hpp"
#include "pyro/solver.hpp"
#include "pyro/uq.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace pyro;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Small, fast 1D configuration as a JSON document.
std::string mini_config_json(const std::string& out_dir, int M = 12, int m = 3) {
    std::ostringstream ss;
    ss << R"({
  "case": "1d",
  "output_dir": ")" << out_dir << R"(",
  "seed": 42,
  "uq_seed": 7,
  "parallelism": 2,
  "training": {"M": )" << M << R"(, "m": )" << m << R"(, "beta": 1.0, "lambda": 1e-6},
  "normalization": {"t_scale": 1600.0},
  "ignition": {"amplitude": 900.0, "sigma": 20.0, "center_x": 0.0},
  "physics": {
    "c_e": 1e11, "b_e": 13000.0, "c_x": 4.85e7, "b_x": 14000.0, "r_o": 0.015,
    "kappa1": 1.0, "kappa2": 300.0, "kappa3": 900.0, "kappa4": 2.5e-4,
    "t_ambient": 300.0, "u_loss": 10.0, "d_b": 0.5, "a_d": 0.1, "gamma_d": 0.1,
    "fire_depth": 2.0, "fire_width": 10.0, "k_d": 2.0, "rho_g": 1.2, "c_pg": 1005.0,
    "c_w": 0.011, "s_x0": 1.0, "alpha_ref": 0.005, "radiation_enabled": true
  },
  "parameters": [
    {"name": "u_w", "lower": 2.0, "upper": 12.0},
    {"name": "S_e0", "lower": 0.04, "upper": 0.16}
  ],
  "lf": {"grid": {"nx": 50, "dx": 10.0, "dt": 0.5, "t_final": 600.0},
         "physics_overrides": {"radiation_enabled": false}},
  "hf": {"grid": {"nx": 250, "dx": 2.0, "dt": 0.1, "t_final": 600.0}}
})";
    return ss.str();
}

std::string write_config(const fs::path& dir, const std::string& text) {
    const fs::path path = dir / "config.json";
    std::ofstream out(path);
    out << text;
    return path.string();
}

std::vector<char> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("snapshot io: bitwise round trip with sidecar") {
    Grid g = Grid::make_2d(6, 4, 2.0, 3.0, 0.5, 10.0);
    Snapshot s(g, Fidelity::HF);
    s.z = ParamVector({"u_wx", "S_e0"}, {3.25, 0.1});
    s.scale = FieldScale::Unit;
    for (int i = 0; i < g.size(); ++i) {
        s.T[i] = 0.1 * i;
        s.S_e[i] = 0.01 * i;
        s.S_x[i] = 1.0 - 0.02 * i;
    }
    const fs::path dir = fresh_dir("pyro_snap_io");
    const std::string path = (dir / "snap.bin").string();
    write_snapshot(path, s, "unit test");

    const Snapshot r = read_snapshot(path);
    CHECK(r.grid.same_layout(g));
    CHECK(r.fidelity == Fidelity::HF);
    CHECK(r.scale == FieldScale::Unit);
    CHECK(r.z.names == s.z.names);
    CHECK(r.z.values == s.z.values);
    CHECK(r.T.v == s.T.v);
    CHECK(r.S_e.v == s.S_e.v);
    CHECK(r.S_x.v == s.S_x.v);

    SUBCASE("corrupted magic is rejected") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("XXXX", 4);
        f.close();
        CHECK_THROWS_AS(read_snapshot(path), Error);
        CHECK_FALSE(try_read_snapshot(path).has_value());
    }

    SUBCASE("missing sidecar is rejected") {
        fs::remove(path + ".json");
        CHECK_THROWS_AS(read_snapshot(path), Error);
    }
}

TEST_CASE("snapshot csv export uses 17 significant digits") {
    Grid g = Grid::make_1d(3, 1.0, 0.1, 1.0);
    Snapshot s(g, Fidelity::LF);
    s.T[0] = 300.12345678901234;
    const fs::path dir = fresh_dir("pyro_snap_csv");
    const std::string path = (dir / "snap.csv").string();
    export_snapshot_csv(path, s);
    const CsvTable t = read_csv(path);
    CHECK(t.header == std::vector<std::string>{"x", "T", "S_e", "S_x"});
    CHECK(parse_double(t.rows[0][1], "test") == 300.12345678901234);
}

TEST_CASE("config: strict parsing") {
    const fs::path dir = fresh_dir("pyro_cfg");
    SUBCASE("valid config parses and validates") {
        RunConfig cfg = RunConfig::from_json_text(mini_config_json(dir.string()), "test");
        CHECK(cfg.dim == 1);
        CHECK(cfg.sample_count == 12);
        CHECK(cfg.lf.phys.radiation_enabled == false);
        CHECK(cfg.hf.phys.radiation_enabled == true);
    }
    SUBCASE("unknown keys are rejected") {
        std::string text = mini_config_json(dir.string());
        text.insert(text.find("\"seed\""), "\"unknown_key\": 1,\n  ");
        CHECK_THROWS_AS(RunConfig::from_json_text(text, "test"), Error);
    }
    SUBCASE("m > M is a validation error") {
        CHECK_THROWS_AS(RunConfig::from_json_text(mini_config_json(dir.string(), 4, 9), "test"),
                        Error);
    }
    SUBCASE("unknown parameter names are rejected") {
        std::string text = mini_config_json(dir.string());
        const auto pos = text.find("u_w");
        text.replace(pos, 3, "wxz");
        CHECK_THROWS_AS(RunConfig::from_json_text(text, "test"), Error);
    }
    SUBCASE("indicator bounds are enforced") {
        std::string text = mini_config_json(dir.string());
        text.insert(text.find("\"ignition\""), "\"indicator\": {\"omega\": 1.5},\n  ");
        CHECK_THROWS_AS(RunConfig::from_json_text(text, "test"), Error);
    }
}

TEST_CASE("model store: save/load round trip preserves predictions bitwise") {
    const fs::path dir = fresh_dir("pyro_model_store");
    RunConfig cfg =
        RunConfig::from_json_text(mini_config_json((dir / "run").string(), 10, 3), "test");
    const BiFiModel model = offline_train(cfg);
    save_model((dir / "run").string(), model);

    const BiFiModel loaded = load_model((dir / "run").string());
    CHECK(loaded.mapped.gamma == model.mapped.gamma);
    CHECK(loaded.mapped.lf_T == model.mapped.lf_T);
    CHECK(loaded.norm.s_e0_max == model.norm.s_e0_max);

    const ParamVector z({"u_w", "S_e0"}, {7.0, 0.1});
    const Prediction a = online_predict(model, z);
    const Prediction b = online_predict(loaded, z);
    CHECK(a.snapshot.T.v == b.snapshot.T.v);
    CHECK(a.snapshot.S_e.v == b.snapshot.S_e.v);
}

TEST_CASE("model store: manifest is byte-identical across retrains") {
    const fs::path dir = fresh_dir("pyro_manifest_det");
    RunConfig cfg =
        RunConfig::from_json_text(mini_config_json((dir / "run").string(), 10, 3), "test");
    const BiFiModel m1 = offline_train(cfg);
    const BiFiModel m2 = offline_train(cfg);
    save_model((dir / "a").string(), m1);
    save_model((dir / "b").string(), m2);
    CHECK(slurp(dir / "a" / "manifest.json") == slurp(dir / "b" / "manifest.json"));
}

TEST_CASE("cmd_offline: missing config file names the path") {
    std::ostringstream log;
    const int rc = cmd_offline("/nonexistent/config.json", log);
    CHECK(rc == 2);
    CHECK(log.str().find("/nonexistent/config.json") != std::string::npos);
}

TEST_CASE("cmd_offline: validation failures precede any simulation") {
    const fs::path dir = fresh_dir("pyro_cmd_badcfg");
    const std::string cfg_path = write_config(dir, mini_config_json((dir / "out").string(), 4, 9));
    std::ostringstream log;
    const int rc = cmd_offline(cfg_path, log);
    CHECK(rc == 2);
    CHECK_FALSE(fs::exists(dir / "out" / "snapshots"));
}

TEST_CASE("cmd_offline: trains, persists the expected file counts, and resumes") {
    const fs::path dir = fresh_dir("pyro_cmd_offline");
    const int M = 10, m = 3;
    const std::string cfg_path =
        write_config(dir, mini_config_json((dir / "out").string(), M, m));
    std::ostringstream log;
    REQUIRE(cmd_offline(cfg_path, log) == 0);

    // One snapshot file (3 field records each) per LF sample, plus one per
    // distinct HF node; the HF count is the union of both methods' nodes.
    int lf_files = 0, hf_files = 0;
    for (const auto& e : fs::directory_iterator(dir / "out" / "snapshots")) {
        const std::string name = e.path().filename().string();
        if (name.ends_with(".bin")) {
            if (name.starts_with("lf_")) ++lf_files;
            if (name.starts_with("hf_")) ++hf_files;
        }
    }
    CHECK(lf_files == M);
    const BiFiModel model = load_model((dir / "out").string());
    std::set<int> uni(model.mapped.gamma.begin(), model.mapped.gamma.end());
    uni.insert(model.conventional.gamma.begin(), model.conventional.gamma.end());
    CHECK(hf_files == int(uni.size()));
    CHECK(hf_files >= m);

    SUBCASE("rerun is idempotent and touches nothing") {
        const auto stamp = fs::last_write_time(dir / "out" / "manifest.json");
        std::ostringstream log2;
        REQUIRE(cmd_offline(cfg_path, log2) == 0);
        CHECK(log2.str().find("nothing to do") != std::string::npos);
        CHECK(fs::last_write_time(dir / "out" / "manifest.json") == stamp);
    }

    SUBCASE("deleting one snapshot regenerates only that file") {
        fs::remove(dir / "out" / "manifest.json");
        const fs::path victim = dir / "out" / "snapshots" / "lf_000004.bin";
        fs::remove(victim);
        const auto stamp = fs::last_write_time(dir / "out" / "snapshots" / "lf_000002.bin");
        std::ostringstream log2;
        REQUIRE(cmd_offline(cfg_path, log2) == 0);
        CHECK(fs::exists(victim));
        CHECK(fs::last_write_time(dir / "out" / "snapshots" / "lf_000002.bin") == stamp);
    }
}

TEST_CASE("cmd_predict: queries, methods, and the error report") {
    const fs::path dir = fresh_dir("pyro_cmd_predict");
    const std::string cfg_path = write_config(dir, mini_config_json((dir / "out").string(), 8, 3));
    std::ostringstream log;
    REQUIRE(cmd_offline(cfg_path, log) == 0);

    PredictOptions opts;
    opts.model_dir = (dir / "out").string();
    opts.z_literals = {"7.0,0.1"};
    opts.methods = {"mf", "cf", "lf"};
    opts.run_hf = true;
    REQUIRE(cmd_predict(opts, log) == 0);

    CHECK(fs::exists(dir / "out" / "predict" / "pred_000_mf.bin"));
    CHECK(fs::exists(dir / "out" / "predict" / "pred_000_cf.csv"));
    const CsvTable errors = read_csv((dir / "out" / "predict" / "errors.csv").string());
    CHECK(errors.rows.size() == 9);  // 3 methods x 3 variables

    SUBCASE("malformed z literal fails with a diagnostic") {
        PredictOptions bad = opts;
        bad.z_literals = {"7.0"};
        bad.run_hf = false;
        std::ostringstream log2;
        CHECK(cmd_predict(bad, log2) == 2);
    }

    SUBCASE("malformed z CSV reports the line number") {
        const fs::path zcsv = dir / "z.csv";
        std::ofstream out(zcsv);
        out << "u_w,S_e0\n7.0,0.1\nnot_a_number,0.1\n";
        out.close();
        PredictOptions bad = opts;
        bad.z_literals.clear();
        bad.z_csv = zcsv.string();
        bad.run_hf = false;
        std::ostringstream log2;
        CHECK(cmd_predict(bad, log2) == 2);
        CHECK(log2.str().find(":3") != std::string::npos);
    }
}

TEST_CASE("cmd_uq: emits qoi and density tables; single sample is rejected") {
    const fs::path dir = fresh_dir("pyro_cmd_uq");
    const std::string cfg_path = write_config(dir, mini_config_json((dir / "out").string(), 8, 3));
    std::ostringstream log;
    REQUIRE(cmd_offline(cfg_path, log) == 0);

    REQUIRE(cmd_uq((dir / "out").string(), 6, 99, false, log) == 0);
    const fs::path uq_dir = dir / "out" / "uq_n6_seed99";
    CHECK(fs::exists(uq_dir / "qois.csv"));
    CHECK(fs::exists(uq_dir / "density_t_max_mf.csv"));
    CHECK(fs::exists(uq_dir / "density_ba_lf.csv"));
    const CsvTable qois = read_csv((uq_dir / "qois.csv").string());
    CHECK(qois.rows.size() == 6 * 3);  // lf, cf, mf tiers

    SUBCASE("rerun skips completed outputs") {
        std::ostringstream log2;
        REQUIRE(cmd_uq((dir / "out").string(), 6, 99, false, log2) == 0);
        CHECK(log2.str().find("nothing to do") != std::string::npos);
    }

    SUBCASE("N=1 is rejected as a propagation argument error") {
        std::ostringstream log2;
        CHECK(cmd_uq((dir / "out").string(), 1, 99, false, log2) != 0);
    }
}

TEST_CASE("cmd_report: empty directory errors, trained directory reports") {
    std::ostringstream log;
    CHECK(cmd_report("/nonexistent/dir", log) == 2);

    const fs::path dir = fresh_dir("pyro_cmd_report");
    const std::string cfg_path = write_config(dir, mini_config_json((dir / "out").string(), 8, 3));
    REQUIRE(cmd_offline(cfg_path, log) == 0);
    std::ostringstream rep;
    CHECK(cmd_report((dir / "out").string(), rep) == 0);
    CHECK(rep.str().find("HF unit cost") != std::string::npos);
    CHECK(rep.str().find("break-even") != std::string::npos);
}

TEST_CASE("cmd_report: break-even arithmetic on a synthetic fixture") {
    const fs::path dir = fresh_dir("pyro_report_fixture");
    std::ofstream out(dir / "timings_offline.json");
    // 10 LF at 0.5 s, 2 HF at 100 s, offline total 250 s.
    out << R"({"lf_seconds_total": 5.0, "lf_runs": 10,
               "hf_seconds_total": 200.0, "hf_runs": 2,
               "offline_seconds_total": 250.0})";
    out.close();
    std::ostringstream rep;
    REQUIRE(cmd_report(dir.string(), rep) == 0);
    // online unit defaults to the LF unit cost (0.5 s):
    // break-even = 250 / (100 - 0.5) = 2.51256...
    CHECK(rep.str().find("2.512") != std::string::npos);
}

TEST_CASE("evaluate_tiers: identical realizations give identical rows") {
    const fs::path dir = fresh_dir("pyro_tiers");
    RunConfig cfg =
        RunConfig::from_json_text(mini_config_json((dir / "out").string(), 8, 3), "test");
    const BiFiModel model = offline_train(cfg);
    const ParamVector z({"u_w", "S_e0"}, {6.5, 0.09});
    auto a = evaluate_tiers(model, z, false);
    auto b = evaluate_tiers(model, z, false);
    for (const auto& tier : {"lf", "cf", "mf"}) {
        CHECK(a[tier].t_max == b[tier].t_max);
        CHECK(a[tier].em == b[tier].em);
        CHECK(a[tier].ba == b[tier].ba);
    }
}
