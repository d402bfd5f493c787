#include "pyro/model_store.hpp"

#include "pyro/snapshot_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace pyro {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string node_name(const char* method, const char* fidelity, int k) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%s_%03d.bin", method, fidelity, k);
    return buf;
}

Snapshot column_snapshot(const Eigen::MatrixXd& T, const Eigen::MatrixXd& Se,
                         const Eigen::MatrixXd& Sx, int k, const Grid& g, const ParamVector& z,
                         Fidelity fid) {
    Snapshot s(g, fid);
    s.z = z;
    s.scale = FieldScale::Unit;
    for (int i = 0; i < g.size(); ++i) {
        s.T[i] = T(i, k);
        s.S_e[i] = Se(i, k);
        s.S_x[i] = Sx(i, k);
    }
    return s;
}

void save_bases(const fs::path& dir, const char* method, const MethodBases& b,
                const SampleSet& training, const Grid& g) {
    for (size_t k = 0; k < b.gamma.size(); ++k) {
        const ParamVector z = training.row(b.gamma[k]);
        write_snapshot((dir / node_name(method, "lf", int(k))).string(),
                       column_snapshot(b.lf_T, b.lf_Se, b.lf_Sx, int(k), g, z, Fidelity::LF),
                       "basis column");
        write_snapshot((dir / node_name(method, "hf", int(k))).string(),
                       column_snapshot(b.hf_T, b.hf_Se, b.hf_Sx, int(k), g, z, Fidelity::HF),
                       "basis column");
    }
}

void load_bases(const fs::path& dir, const char* method, MethodBases& b, const Grid& g) {
    const int m = int(b.gamma.size());
    const int n = g.size();
    b.lf_T.resize(n, m);
    b.lf_Se.resize(n, m);
    b.lf_Sx.resize(n, m);
    b.hf_T.resize(n, m);
    b.hf_Se.resize(n, m);
    b.hf_Sx.resize(n, m);
    for (int k = 0; k < m; ++k) {
        const Snapshot lf = read_snapshot((dir / node_name(method, "lf", k)).string());
        const Snapshot hf = read_snapshot((dir / node_name(method, "hf", k)).string());
        if (!lf.grid.same_layout(g) || !hf.grid.same_layout(g))
            throw Error(ErrorCode::Io, "basis snapshot grid mismatch in model directory");
        for (int i = 0; i < n; ++i) {
            b.lf_T(i, k) = lf.T[i];
            b.lf_Se(i, k) = lf.S_e[i];
            b.lf_Sx(i, k) = lf.S_x[i];
            b.hf_T(i, k) = hf.T[i];
            b.hf_Se(i, k) = hf.S_e[i];
            b.hf_Sx(i, k) = hf.S_x[i];
        }
    }
}

json fit_to_json(const PolyFit& f) {
    return {{"coeffs", f.coeffs},
            {"log_space", f.log_space},
            {"clamp_lo", f.clamp_lo},
            {"clamp_hi", f.clamp_hi},
            {"degree_reduced", f.degree_reduced}};
}

PolyFit fit_from_json(const json& j) {
    PolyFit f;
    f.coeffs = j.at("coeffs").get<std::vector<double>>();
    f.log_space = j.at("log_space").get<bool>();
    f.clamp_lo = j.at("clamp_lo").get<double>();
    f.clamp_hi = j.at("clamp_hi").get<double>();
    f.degree_reduced = j.at("degree_reduced").get<bool>();
    return f;
}

json desc1_to_json(const GeomDescriptors1D& d) {
    return {{"s_T", d.s_T},
            {"s_Se", d.s_Se},
            {"s_Sx", d.s_Sx},
            {"kappa_Se", d.kappa_Se},
            {"kappa_Sx", d.kappa_Sx},
            {"degenerate_Se", d.degenerate_Se},
            {"degenerate_Sx", d.degenerate_Sx}};
}

GeomDescriptors1D desc1_from_json(const json& j) {
    GeomDescriptors1D d;
    d.s_T = j.at("s_T").get<double>();
    d.s_Se = j.at("s_Se").get<double>();
    d.s_Sx = j.at("s_Sx").get<double>();
    d.kappa_Se = j.at("kappa_Se").get<double>();
    d.kappa_Sx = j.at("kappa_Sx").get<double>();
    d.degenerate_Se = j.at("degenerate_Se").get<bool>();
    d.degenerate_Sx = j.at("degenerate_Sx").get<bool>();
    return d;
}

json desc2_to_json(const GeomDescriptors2D& d) {
    return {{"mu_x", d.mu_x}, {"mu_y", d.mu_y}, {"sigma_x", d.sigma_x}, {"sigma_y", d.sigma_y}};
}

GeomDescriptors2D desc2_from_json(const json& j) {
    GeomDescriptors2D d;
    d.mu_x = j.at("mu_x").get<double>();
    d.mu_y = j.at("mu_y").get<double>();
    d.sigma_x = j.at("sigma_x").get<double>();
    d.sigma_y = j.at("sigma_y").get<double>();
    return d;
}

}  // namespace

bool model_exists(const std::string& dir) {
    return fs::exists(fs::path(dir) / "manifest.json");
}

void save_model(const std::string& dir, const BiFiModel& model) {
    const fs::path root(dir);
    fs::create_directories(root / "basis");

    json man;
    man["config"] = json::parse(model.config.to_json_text());
    man["normalization"] = {{"t_ambient", model.norm.t_ambient},
                            {"t_scale", model.norm.t_scale},
                            {"s_e0_max", model.norm.s_e0_max},
                            {"s_x0", model.norm.s_x0}};
    man["training"] = {{"names", model.training.names},
                       {"rows", model.training.rows},
                       {"seed", model.training.seed},
                       {"method", model.training.method},
                       {"data", model.training.data}};

    json ref;
    ref["dim"] = model.ref.dim;
    ref["edge_band"] = model.ref.edge_band;
    if (model.ref.dim == 1) {
        ref["x_ref"] = model.ref.x_ref;
        ref["w_ref_Se"] = model.ref.w_ref_Se;
        ref["w_ref_Sx"] = model.ref.w_ref_Sx;
    } else {
        ref["mu_x_ref"] = model.ref.mu_x_ref;
        ref["mu_y_ref"] = model.ref.mu_y_ref;
        ref["sigma_x_ref"] = model.ref.sigma_x_ref;
        ref["sigma_y_ref"] = model.ref.sigma_y_ref;
    }
    man["reference"] = ref;

    man["mapped"] = {{"gamma", model.mapped.gamma},
                     {"condition_number", model.mapped.condition_number}};
    man["conventional"] = {{"gamma", model.conventional.gamma},
                           {"condition_number", model.conventional.condition_number}};

    json reg;
    reg["dim"] = model.regression.dim;
    reg["names"] = model.regression.names;
    json fits = json::array();
    for (const auto& f : model.regression.fits) fits.push_back(fit_to_json(f));
    reg["fits"] = fits;
    man["regression"] = reg;

    json lf_desc = json::array(), hf_desc = json::array();
    if (model.ref.dim == 1) {
        for (const auto& d : model.lf_desc_1d) lf_desc.push_back(desc1_to_json(d));
        for (const auto& d : model.hf_desc_1d) hf_desc.push_back(desc1_to_json(d));
    } else {
        for (const auto& d : model.lf_desc_2d) lf_desc.push_back(desc2_to_json(d));
        for (const auto& d : model.hf_desc_2d) hf_desc.push_back(desc2_to_json(d));
    }
    man["lf_descriptors"] = lf_desc;
    man["hf_descriptors"] = hf_desc;
    man["condition_log"] = model.condition_log;
    man["clamped_cells"] = model.clamped_cells;

    std::ofstream out(root / "manifest.json", std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write manifest in '" + dir + "'");
    out << man.dump(2) << '\n';
    out.close();

    save_bases(root / "basis", "mf", model.mapped, model.training, model.config.hf.grid);
    save_bases(root / "basis", "cf", model.conventional, model.training, model.config.hf.grid);
}

BiFiModel load_model(const std::string& dir) {
    const fs::path root(dir);
    std::ifstream in(root / "manifest.json");
    if (!in) throw Error(ErrorCode::Io, "no manifest.json in '" + dir + "'");
    json man;
    try {
        in >> man;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, dir + "/manifest.json: " + e.what());
    }

    BiFiModel model;
    model.config = RunConfig::from_json_text(man.at("config").dump(), dir + "/manifest.json");

    const json& nm = man.at("normalization");
    model.norm.t_ambient = nm.at("t_ambient").get<double>();
    model.norm.t_scale = nm.at("t_scale").get<double>();
    model.norm.s_e0_max = nm.at("s_e0_max").get<double>();
    model.norm.s_x0 = nm.at("s_x0").get<double>();

    const json& tj = man.at("training");
    model.training.names = tj.at("names").get<std::vector<std::string>>();
    model.training.rows = tj.at("rows").get<int>();
    model.training.seed = tj.at("seed").get<uint64_t>();
    model.training.method = tj.at("method").get<std::string>();
    model.training.data = tj.at("data").get<std::vector<double>>();

    const json& ref = man.at("reference");
    model.ref.dim = ref.at("dim").get<int>();
    model.ref.edge_band = ref.at("edge_band").get<double>();
    model.ref.ref_grid = model.config.hf.grid;
    model.ref.indicator = model.config.indicator;
    if (model.ref.dim == 1) {
        model.ref.x_ref = ref.at("x_ref").get<double>();
        model.ref.w_ref_Se = ref.at("w_ref_Se").get<double>();
        model.ref.w_ref_Sx = ref.at("w_ref_Sx").get<double>();
    } else {
        model.ref.mu_x_ref = ref.at("mu_x_ref").get<double>();
        model.ref.mu_y_ref = ref.at("mu_y_ref").get<double>();
        model.ref.sigma_x_ref = ref.at("sigma_x_ref").get<double>();
        model.ref.sigma_y_ref = ref.at("sigma_y_ref").get<double>();
    }

    model.mapped.gamma = man.at("mapped").at("gamma").get<std::vector<int>>();
    model.mapped.condition_number = man.at("mapped").at("condition_number").get<double>();
    model.conventional.gamma = man.at("conventional").at("gamma").get<std::vector<int>>();
    model.conventional.condition_number =
        man.at("conventional").at("condition_number").get<double>();

    const json& reg = man.at("regression");
    model.regression.dim = reg.at("dim").get<int>();
    model.regression.names = reg.at("names").get<std::vector<std::string>>();
    for (const auto& fj : reg.at("fits")) model.regression.fits.push_back(fit_from_json(fj));

    if (model.ref.dim == 1) {
        for (const auto& dj : man.at("lf_descriptors")) model.lf_desc_1d.push_back(desc1_from_json(dj));
        for (const auto& dj : man.at("hf_descriptors")) model.hf_desc_1d.push_back(desc1_from_json(dj));
    } else {
        for (const auto& dj : man.at("lf_descriptors")) model.lf_desc_2d.push_back(desc2_from_json(dj));
        for (const auto& dj : man.at("hf_descriptors")) model.hf_desc_2d.push_back(desc2_from_json(dj));
    }
    model.condition_log = man.at("condition_log").get<std::vector<std::string>>();
    model.clamped_cells = man.at("clamped_cells").get<long>();

    load_bases(root / "basis", "mf", model.mapped, model.config.hf.grid);
    load_bases(root / "basis", "cf", model.conventional, model.config.hf.grid);
    return model;
}

}  // namespace pyro
