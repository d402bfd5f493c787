#pragma once

#include "pyro/errors.hpp"

#include <string>
#include <vector>

namespace pyro {

/// Physical coefficients of the fire model plus ambient/ignition configuration.
/// Values ship as named config profiles; the defaults below are placeholders
/// overwritten by every profile (see configs/).
struct PhysicalParams {
    // Endothermic (moisture) kinetics
    double c_e = 0.0;   // 1/s
    double b_e = 0.0;   // K
    // Exothermic (combustibles) kinetics
    double c_x = 0.0;   // 1/s
    double b_x = 0.0;   // K
    double r_o = 1.0;   // 1/s, effective oxygen availability
    // Energy-balance coefficients
    double kappa1 = 1.0;
    double kappa2 = 0.0;  // K
    double kappa3 = 0.0;  // K
    double kappa4 = 0.0;  // m^2 K / W / s units folded with U below
    double t_ambient = 300.0;  // K
    double u_loss = 0.0;       // W/m^2/K
    // Diffusivity model
    double d_b = 0.0;      // m^2/s buoyancy
    double a_d = 0.0;      // dispersion constant
    double gamma_d = 0.0;  // 1/m
    double fire_depth = 1.0;  // L, m
    double fire_width = 1.0;  // w, m
    double sigma_b = 5.670374419e-8;  // W/m^2/K^4
    double k_d = 1.0;   // 1/m absorption
    double rho_g = 1.2;    // kg/m^3
    double c_pg = 1005.0;  // J/kg/K
    bool radiation_enabled = true;
    // Wind-to-flow heuristic factor: flow velocity = c_w * u_w
    double c_w = 1.0;
    // Initial combustible fraction and the nominal packing ratio the profile
    // was calibrated at (uncertain alpha scales fuel-coupled coefficients
    // about this value).
    double s_x0 = 1.0;
    double alpha_ref = 0.005;

    void validate() const {
        auto nonneg = [](double v, const char* name) {
            if (v < 0.0) throw Error(ErrorCode::Config, std::string("physics: ") + name + " must be >= 0");
        };
        nonneg(c_e, "c_e");
        nonneg(b_e, "b_e");
        nonneg(c_x, "c_x");
        nonneg(b_x, "b_x");
        nonneg(kappa1, "kappa1");
        nonneg(kappa2, "kappa2");
        nonneg(kappa3, "kappa3");
        nonneg(kappa4, "kappa4");
        nonneg(u_loss, "u_loss");
        nonneg(d_b, "d_b");
        nonneg(a_d, "a_d");
        nonneg(gamma_d, "gamma_d");
        nonneg(k_d, "k_d");
        if (t_ambient <= 0.0) throw Error(ErrorCode::Config, "physics: t_ambient must be > 0");
        if (r_o <= 0.0) throw Error(ErrorCode::Config, "physics: r_o must be > 0");
        if (fire_depth <= 0.0) throw Error(ErrorCode::Config, "physics: fire_depth must be > 0");
        if (fire_width <= 0.0) throw Error(ErrorCode::Config, "physics: fire_width must be > 0");
        if (rho_g <= 0.0 || c_pg <= 0.0)
            throw Error(ErrorCode::Config, "physics: rho_g and c_pg must be > 0");
        if (s_x0 <= 0.0) throw Error(ErrorCode::Config, "physics: s_x0 must be > 0");
        if (alpha_ref <= 0.0) throw Error(ErrorCode::Config, "physics: alpha_ref must be > 0");
    }
};

/// Named uncertain inputs for one realization.
struct ParamVector {
    std::vector<std::string> names;
    std::vector<double> values;

    ParamVector() = default;
    ParamVector(std::vector<std::string> n, std::vector<double> v)
        : names(std::move(n)), values(std::move(v)) {}

    size_t size() const { return values.size(); }

    bool has(const std::string& name) const {
        for (const auto& n : names)
            if (n == name) return true;
        return false;
    }

    double get(const std::string& name) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return values[i];
        throw Error(ErrorCode::InvalidArgument, "param vector has no component '" + name + "'");
    }

    double get_or(const std::string& name, double fallback) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return values[i];
        return fallback;
    }
};

/// Gaussian temperature bump placed at t = 0.
struct IgnitionSpec {
    double amplitude = 0.0;  // K above ambient at the bump center
    double sigma = 1.0;      // m
    double center_x = 0.0;   // m
    double center_y = 0.0;   // m, ignored in 1D
    bool absent = false;

    void validate() const {
        if (amplitude < 0.0) throw Error(ErrorCode::Config, "ignition: amplitude must be >= 0");
        if (sigma <= 0.0) throw Error(ErrorCode::Config, "ignition: sigma must be > 0");
    }
};

/// Flow velocity, uniform in space.
struct Velocity {
    double x = 0.0;
    double y = 0.0;
};

/// Effective inputs for one simulation after applying a parameter realization:
/// wind mapped to flow through c_w, initial moisture from the sample, and the
/// packing ratio scaling the fuel-mass-coupled coefficients (kappa2, kappa3,
/// k_d) linearly about alpha_ref.
struct Scenario {
    PhysicalParams phys;
    Velocity flow;
    double s_e0 = 0.0;
    double s_x0 = 0.0;
};

Scenario resolve_scenario(const PhysicalParams& base, const ParamVector& z, int dim);

}  // namespace pyro
