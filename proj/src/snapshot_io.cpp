#include "pyro/snapshot_io.hpp"

#include "pyro/csv.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; this build targets LE hosts");

namespace pyro {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'P', 'Y', 'R', 'O'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& out, uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void put_f64(std::ostream& out, double v) { out.write(reinterpret_cast<const char*>(&v), 8); }

uint32_t get_u32(std::istream& in, const std::string& path) {
    uint32_t v;
    in.read(reinterpret_cast<char*>(&v), 4);
    if (!in) throw Error(ErrorCode::Io, "truncated snapshot file '" + path + "'");
    return v;
}

double get_f64(std::istream& in, const std::string& path) {
    double v;
    in.read(reinterpret_cast<char*>(&v), 8);
    if (!in) throw Error(ErrorCode::Io, "truncated snapshot file '" + path + "'");
    return v;
}

void write_field(std::ostream& out, const Field& f) {
    out.write(reinterpret_cast<const char*>(f.v.data()), std::streamsize(f.v.size() * 8));
}

void read_field(std::istream& in, Field& f, const std::string& path) {
    in.read(reinterpret_cast<char*>(f.v.data()), std::streamsize(f.v.size() * 8));
    if (!in) throw Error(ErrorCode::Io, "truncated snapshot file '" + path + "'");
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& s, const std::string& provenance) {
    if (!s.shapes_consistent())
        throw Error(ErrorCode::InvalidState, "write_snapshot: inconsistent shapes");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, uint32_t(s.grid.dim));
    put_u32(out, uint32_t(s.grid.nx));
    put_u32(out, uint32_t(s.grid.ny));
    put_u32(out, 3);
    put_u32(out, uint32_t(s.z.size()));
    for (size_t i = 0; i < s.z.size(); ++i) {
        put_u32(out, uint32_t(s.z.names[i].size()));
        out.write(s.z.names[i].data(), std::streamsize(s.z.names[i].size()));
        put_f64(out, s.z.values[i]);
    }
    write_field(out, s.T);
    write_field(out, s.S_e);
    write_field(out, s.S_x);
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
    out.close();

    json side;
    side["grid"] = {{"dim", s.grid.dim}, {"nx", s.grid.nx},       {"ny", s.grid.ny},
                    {"dx", s.grid.dx},   {"dy", s.grid.dy},       {"lx", s.grid.lx},
                    {"ly", s.grid.ly},   {"dt", s.grid.dt},       {"t_final", s.grid.t_final}};
    json params = json::object();
    for (size_t i = 0; i < s.z.size(); ++i) params[s.z.names[i]] = s.z.values[i];
    side["params"] = params;
    side["fidelity"] = to_string(s.fidelity);
    side["scale"] = s.scale == FieldScale::Physical ? "physical" : "unit";
    side["provenance"] = provenance;
    side["format_version"] = kVersion;

    std::ofstream sj(path + ".json", std::ios::binary);
    if (!sj) throw Error(ErrorCode::Io, "cannot open '" + path + ".json' for writing");
    sj << side.dump(2) << '\n';
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open snapshot '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw Error(ErrorCode::Io, "'" + path + "' is not a snapshot file (bad magic)");
    const uint32_t version = get_u32(in, path);
    if (version != kVersion)
        throw Error(ErrorCode::Io, "unsupported snapshot version in '" + path + "'");
    const uint32_t dim = get_u32(in, path);
    const uint32_t nx = get_u32(in, path);
    const uint32_t ny = get_u32(in, path);
    const uint32_t nfields = get_u32(in, path);
    if (nfields != 3)
        throw Error(ErrorCode::Io, "unexpected field count in '" + path + "'");
    const uint32_t nparams = get_u32(in, path);

    ParamVector z;
    for (uint32_t i = 0; i < nparams; ++i) {
        const uint32_t len = get_u32(in, path);
        std::string name(len, '\0');
        in.read(name.data(), len);
        if (!in) throw Error(ErrorCode::Io, "truncated snapshot file '" + path + "'");
        z.names.push_back(std::move(name));
        z.values.push_back(get_f64(in, path));
    }

    std::ifstream sj(path + ".json");
    if (!sj) throw Error(ErrorCode::Io, "missing snapshot sidecar '" + path + ".json'");
    json side;
    try {
        sj >> side;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, path + ".json: " + e.what());
    }
    const json& gj = side.at("grid");

    Grid g;
    if (dim == 1)
        g = Grid::make_1d(int(nx), gj.at("dx").get<double>(), gj.at("dt").get<double>(),
                          gj.at("t_final").get<double>());
    else
        g = Grid::make_2d(int(nx), int(ny), gj.at("dx").get<double>(), gj.at("dy").get<double>(),
                          gj.at("dt").get<double>(), gj.at("t_final").get<double>());
    if (gj.at("dim").get<int>() != int(dim) || gj.at("nx").get<int>() != int(nx) ||
        gj.at("ny").get<int>() != int(ny))
        throw Error(ErrorCode::Io, "sidecar grid disagrees with binary header for '" + path + "'");

    Snapshot s(g, side.at("fidelity").get<std::string>() == "HF" ? Fidelity::HF : Fidelity::LF);
    s.z = z;
    s.scale = side.at("scale").get<std::string>() == "unit" ? FieldScale::Unit
                                                            : FieldScale::Physical;
    read_field(in, s.T, path);
    read_field(in, s.S_e, path);
    read_field(in, s.S_x, path);
    return s;
}

std::optional<Snapshot> try_read_snapshot(const std::string& path) {
    try {
        return read_snapshot(path);
    } catch (const Error&) {
        return std::nullopt;
    }
}

void export_snapshot_csv(const std::string& path, const Snapshot& s) {
    CsvTable t;
    if (s.grid.dim == 1) {
        t.header = {"x", "T", "S_e", "S_x"};
        for (int i = 0; i < s.grid.nx; ++i)
            t.rows.push_back({fmt17(s.grid.x(i)), fmt17(s.T[i]), fmt17(s.S_e[i]), fmt17(s.S_x[i])});
    } else {
        t.header = {"x", "y", "T", "S_e", "S_x"};
        for (int j = 0; j < s.grid.ny; ++j)
            for (int i = 0; i < s.grid.nx; ++i)
                t.rows.push_back({fmt17(s.grid.x(i)), fmt17(s.grid.y(j)), fmt17(s.T.at(i, j)),
                                  fmt17(s.S_e.at(i, j)), fmt17(s.S_x.at(i, j))});
    }
    write_csv(path, t);
}

}  // namespace pyro
