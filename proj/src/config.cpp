#include "pyro/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pyro {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw Error(ErrorCode::Config, "config: unknown key '" + it.key() + "' in " + where);
}

double need_num(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key))
        throw Error(ErrorCode::Config, "config: missing key '" + key + "' in " + where);
    if (!obj[key].is_number())
        throw Error(ErrorCode::Config, "config: '" + key + "' in " + where + " must be a number");
    return obj[key].get<double>();
}

double num_or(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    return obj[key].get<double>();
}

Grid parse_grid(const json& j, int dim, const std::string& where) {
    reject_unknown(j, {"nx", "ny", "dx", "dy", "dt", "t_final"}, where);
    const int nx = int(need_num(j, "nx", where));
    const double dx = need_num(j, "dx", where);
    const double dt = need_num(j, "dt", where);
    const double tf = need_num(j, "t_final", where);
    if (dim == 1) {
        if (j.contains("ny") || j.contains("dy"))
            throw Error(ErrorCode::Config, "config: ny/dy not allowed for a 1d case in " + where);
        return Grid::make_1d(nx, dx, dt, tf);
    }
    const int ny = int(need_num(j, "ny", where));
    const double dy = need_num(j, "dy", where);
    return Grid::make_2d(nx, ny, dx, dy, dt, tf);
}

const std::set<std::string> kPhysicsKeys = {
    "c_e",       "b_e",     "c_x",        "b_x",       "r_o",       "kappa1",
    "kappa2",    "kappa3",  "kappa4",     "t_ambient", "u_loss",    "d_b",
    "a_d",       "gamma_d", "fire_depth", "fire_width", "sigma_b",  "k_d",
    "rho_g",     "c_pg",    "radiation_enabled",        "c_w",      "s_x0",
    "alpha_ref"};

void apply_physics(PhysicalParams& p, const json& j, const std::string& where) {
    reject_unknown(j, kPhysicsKeys, where);
    auto set = [&](const char* key, double& field) {
        if (j.contains(key)) field = j[key].get<double>();
    };
    set("c_e", p.c_e);
    set("b_e", p.b_e);
    set("c_x", p.c_x);
    set("b_x", p.b_x);
    set("r_o", p.r_o);
    set("kappa1", p.kappa1);
    set("kappa2", p.kappa2);
    set("kappa3", p.kappa3);
    set("kappa4", p.kappa4);
    set("t_ambient", p.t_ambient);
    set("u_loss", p.u_loss);
    set("d_b", p.d_b);
    set("a_d", p.a_d);
    set("gamma_d", p.gamma_d);
    set("fire_depth", p.fire_depth);
    set("fire_width", p.fire_width);
    set("sigma_b", p.sigma_b);
    set("k_d", p.k_d);
    set("rho_g", p.rho_g);
    set("c_pg", p.c_pg);
    set("c_w", p.c_w);
    set("s_x0", p.s_x0);
    set("alpha_ref", p.alpha_ref);
    if (j.contains("radiation_enabled")) {
        if (!j["radiation_enabled"].is_boolean())
            throw Error(ErrorCode::Config, "config: radiation_enabled must be a boolean");
        p.radiation_enabled = j["radiation_enabled"].get<bool>();
    }
}

json physics_to_json(const PhysicalParams& p) {
    json j;
    j["c_e"] = p.c_e;
    j["b_e"] = p.b_e;
    j["c_x"] = p.c_x;
    j["b_x"] = p.b_x;
    j["r_o"] = p.r_o;
    j["kappa1"] = p.kappa1;
    j["kappa2"] = p.kappa2;
    j["kappa3"] = p.kappa3;
    j["kappa4"] = p.kappa4;
    j["t_ambient"] = p.t_ambient;
    j["u_loss"] = p.u_loss;
    j["d_b"] = p.d_b;
    j["a_d"] = p.a_d;
    j["gamma_d"] = p.gamma_d;
    j["fire_depth"] = p.fire_depth;
    j["fire_width"] = p.fire_width;
    j["sigma_b"] = p.sigma_b;
    j["k_d"] = p.k_d;
    j["rho_g"] = p.rho_g;
    j["c_pg"] = p.c_pg;
    j["radiation_enabled"] = p.radiation_enabled;
    j["c_w"] = p.c_w;
    j["s_x0"] = p.s_x0;
    j["alpha_ref"] = p.alpha_ref;
    return j;
}

json grid_to_json(const Grid& g) {
    json j;
    j["nx"] = g.nx;
    j["dx"] = g.dx;
    j["dt"] = g.dt;
    j["t_final"] = g.t_final;
    if (g.dim == 2) {
        j["ny"] = g.ny;
        j["dy"] = g.dy;
    }
    return j;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, origin + ": " + e.what());
    }

    reject_unknown(root,
                   {"case", "output_dir", "seed", "uq_seed", "parallelism", "training",
                    "normalization", "indicator", "ignition", "physics", "parameters", "lf", "hf"},
                   "top level");

    RunConfig cfg;
    if (!root.contains("case"))
        throw Error(ErrorCode::Config, "config: missing 'case'");
    const std::string case_name = root["case"].get<std::string>();
    if (case_name == "1d")
        cfg.dim = 1;
    else if (case_name == "2d")
        cfg.dim = 2;
    else
        throw Error(ErrorCode::Config, "config: case must be '1d' or '2d'");

    cfg.output_dir = root.value("output_dir", std::string());
    cfg.seed = root.value("seed", uint64_t(0));
    cfg.uq_seed = root.value("uq_seed", uint64_t(0));
    cfg.parallelism = root.value("parallelism", 1);

    if (!root.contains("training"))
        throw Error(ErrorCode::Config, "config: missing 'training' block");
    const json& tr = root["training"];
    reject_unknown(tr, {"M", "m", "beta", "lambda"}, "training");
    cfg.sample_count = int(need_num(tr, "M", "training"));
    cfg.node_count = int(need_num(tr, "m", "training"));
    cfg.beta = num_or(tr, "beta", 1.0);
    cfg.lambda = num_or(tr, "lambda", 1e-6);

    if (root.contains("normalization")) {
        const json& nm = root["normalization"];
        reject_unknown(nm, {"t_scale"}, "normalization");
        cfg.t_scale = need_num(nm, "t_scale", "normalization");
    }

    if (root.contains("indicator")) {
        const json& ind = root["indicator"];
        reject_unknown(ind, {"omega", "p", "q"}, "indicator");
        cfg.indicator.omega = num_or(ind, "omega", cfg.indicator.omega);
        cfg.indicator.p = num_or(ind, "p", cfg.indicator.p);
        cfg.indicator.q = num_or(ind, "q", cfg.indicator.q);
    }

    if (!root.contains("ignition"))
        throw Error(ErrorCode::Config, "config: missing 'ignition' block");
    const json& ig = root["ignition"];
    reject_unknown(ig, {"amplitude", "sigma", "center_x", "center_y"}, "ignition");
    cfg.ignition.amplitude = need_num(ig, "amplitude", "ignition");
    cfg.ignition.sigma = need_num(ig, "sigma", "ignition");
    cfg.ignition.center_x = need_num(ig, "center_x", "ignition");
    cfg.ignition.center_y = num_or(ig, "center_y", 0.0);

    if (!root.contains("physics"))
        throw Error(ErrorCode::Config, "config: missing 'physics' block");
    PhysicalParams base;
    apply_physics(base, root["physics"], "physics");

    if (!root.contains("parameters") || !root["parameters"].is_array())
        throw Error(ErrorCode::Config, "config: missing 'parameters' array");
    for (const auto& pj : root["parameters"]) {
        reject_unknown(pj, {"name", "lower", "upper"}, "parameters[]");
        ParamDim d;
        if (!pj.contains("name")) throw Error(ErrorCode::Config, "config: parameter without name");
        d.name = pj["name"].get<std::string>();
        d.lower = need_num(pj, "lower", "parameters['" + d.name + "']");
        d.upper = need_num(pj, "upper", "parameters['" + d.name + "']");
        cfg.box.dims.push_back(d);
    }

    auto parse_fidelity = [&](const char* key) {
        if (!root.contains(key))
            throw Error(ErrorCode::Config, std::string("config: missing '") + key + "' block");
        const json& fj = root[key];
        reject_unknown(fj, {"grid", "physics_overrides"}, key);
        FidelitySetup f;
        if (!fj.contains("grid"))
            throw Error(ErrorCode::Config, std::string("config: missing grid in '") + key + "'");
        f.grid = parse_grid(fj["grid"], cfg.dim, std::string(key) + ".grid");
        f.phys = base;
        if (fj.contains("physics_overrides"))
            apply_physics(f.phys, fj["physics_overrides"],
                          std::string(key) + ".physics_overrides");
        return f;
    };
    cfg.lf = parse_fidelity("lf");
    cfg.hf = parse_fidelity("hf");

    cfg.validate();
    return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str(), path);
}

std::string RunConfig::to_json_text() const {
    json root;
    root["case"] = dim == 1 ? "1d" : "2d";
    root["output_dir"] = output_dir;
    root["seed"] = seed;
    root["uq_seed"] = uq_seed;
    root["parallelism"] = parallelism;
    root["training"] = {{"M", sample_count}, {"m", node_count}, {"beta", beta}, {"lambda", lambda}};
    root["normalization"] = {{"t_scale", t_scale}};
    root["indicator"] = {{"omega", indicator.omega}, {"p", indicator.p}, {"q", indicator.q}};
    root["ignition"] = {{"amplitude", ignition.amplitude},
                        {"sigma", ignition.sigma},
                        {"center_x", ignition.center_x},
                        {"center_y", ignition.center_y}};
    json params = json::array();
    for (const auto& d : box.dims)
        params.push_back({{"name", d.name}, {"lower", d.lower}, {"upper", d.upper}});
    root["parameters"] = params;
    // The LF profile is the base; the HF block overrides every physics key so
    // the document round-trips through the strict parser exactly.
    root["physics"] = physics_to_json(lf.phys);
    root["lf"] = {{"grid", grid_to_json(lf.grid)}};
    root["hf"] = {{"grid", grid_to_json(hf.grid)},
                  {"physics_overrides", physics_to_json(hf.phys)}};
    return root.dump(2);
}

void RunConfig::validate() const {
    lf.grid.validate();
    hf.grid.validate();
    lf.phys.validate();
    hf.phys.validate();
    box.validate();
    indicator.validate();
    ignition.validate();

    if (lf.grid.dim != dim || hf.grid.dim != dim)
        throw Error(ErrorCode::Config, "config: grid dimensionality does not match case");
    if (std::abs(lf.grid.lx - hf.grid.lx) > 1e-9 * hf.grid.lx ||
        (dim == 2 && std::abs(lf.grid.ly - hf.grid.ly) > 1e-9 * hf.grid.ly))
        throw Error(ErrorCode::Config, "config: LF and HF grids must cover the same domain");
    if (lf.phys.t_ambient != hf.phys.t_ambient)
        throw Error(ErrorCode::Config, "config: LF and HF must share t_ambient");
    if (lf.phys.s_x0 != hf.phys.s_x0)
        throw Error(ErrorCode::Config, "config: LF and HF must share s_x0");

    if (sample_count < 1) throw Error(ErrorCode::Config, "config: training.M must be >= 1");
    if (node_count < 1) throw Error(ErrorCode::Config, "config: training.m must be >= 1");
    if (node_count > sample_count)
        throw Error(ErrorCode::Config, "config: training.m cannot exceed training.M");
    if (beta < 0.0) throw Error(ErrorCode::Config, "config: training.beta must be >= 0");
    if (lambda < 0.0) throw Error(ErrorCode::Config, "config: training.lambda must be >= 0");
    if (!(t_scale > hf.phys.t_ambient))
        throw Error(ErrorCode::Config, "config: normalization.t_scale must exceed t_ambient");
    if (parallelism < 1) throw Error(ErrorCode::Config, "config: parallelism must be >= 1");

    if (ignition.center_x < 0.0 || ignition.center_x > hf.grid.lx)
        throw Error(ErrorCode::Config, "config: ignition center_x outside domain");
    if (dim == 2 && (ignition.center_y < 0.0 || ignition.center_y > hf.grid.ly))
        throw Error(ErrorCode::Config, "config: ignition center_y outside domain");

    // Parameter names the scenario layer understands, per case.
    const std::set<std::string> allowed =
        dim == 1 ? std::set<std::string>{"u_w", "S_e0"}
                 : std::set<std::string>{"u_wx", "u_wy", "S_e0", "alpha"};
    bool has_se0 = false;
    std::set<std::string> seen;
    for (const auto& d : box.dims) {
        if (!allowed.count(d.name))
            throw Error(ErrorCode::Config,
                        "config: unknown uncertain parameter '" + d.name + "' for this case");
        if (!seen.insert(d.name).second)
            throw Error(ErrorCode::Config, "config: duplicate parameter '" + d.name + "'");
        if (d.name == "S_e0") has_se0 = true;
    }
    if (!has_se0)
        throw Error(ErrorCode::Config, "config: parameters must include S_e0");
}

}  // namespace pyro
