#include "pyro/params.hpp"

namespace pyro {

Scenario resolve_scenario(const PhysicalParams& base, const ParamVector& z, int dim) {
    Scenario sc;
    sc.phys = base;

    if (dim == 1) {
        sc.flow.x = base.c_w * z.get_or("u_w", 0.0);
        sc.flow.y = 0.0;
    } else {
        sc.flow.x = base.c_w * z.get_or("u_wx", 0.0);
        sc.flow.y = base.c_w * z.get_or("u_wy", 0.0);
    }

    sc.s_e0 = z.get_or("S_e0", 0.0);
    sc.s_x0 = base.s_x0;

    // Packing ratio couples into the fuel-mass-driven coefficients about the
    // profile's calibration point. Absorption scales linearly with fuel
    // density; the source coefficients use an affine local sensitivity
    // (reaction intensity responds sublinearly to packing near the optimum).
    if (z.has("alpha")) {
        const double f = z.get("alpha") / base.alpha_ref;
        if (f <= 0.0)
            throw Error(ErrorCode::InvalidArgument, "alpha must be > 0");
        const double source = 0.85 + 0.15 * f;
        sc.phys.kappa2 *= source;
        sc.phys.kappa3 *= source;
        sc.phys.k_d *= f;
    }

    return sc;
}

}  // namespace pyro
