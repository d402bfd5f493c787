#pragma once

#include "pyro/grid.hpp"
#include "pyro/params.hpp"

#include <string>

namespace pyro {

enum class Fidelity { LF, HF };
enum class FieldScale { Physical, Unit };

inline const char* to_string(Fidelity f) { return f == Fidelity::LF ? "LF" : "HF"; }

/// Discretized final-time state for one parameter realization.
struct Snapshot {
    Grid grid;
    Field T;
    Field S_e;
    Field S_x;
    ParamVector z;
    Fidelity fidelity = Fidelity::LF;
    FieldScale scale = FieldScale::Physical;

    Snapshot() = default;
    Snapshot(const Grid& g, Fidelity f)
        : grid(g), T(g), S_e(g), S_x(g), fidelity(f) {}

    bool shapes_consistent() const {
        return T.nx == grid.nx && T.ny == grid.ny && T.same_shape(S_e) && T.same_shape(S_x);
    }
};

/// Physical-scale sanity bounds. The temperature floor carries a small
/// tolerance: ambient-level evaporation relaxes T a few hundredths of a
/// kelvin below t_ambient at equilibrium with the loss term, which the
/// shipped profiles keep under the tolerance used here.
inline void validate_snapshot(const Snapshot& s, double s_e0, double s_x0,
                              double t_floor, double tol = 5e-2) {
    if (!s.shapes_consistent())
        throw Error(ErrorCode::InvalidState, "snapshot: field shapes do not match grid");
    for (int i = 0; i < s.T.size(); ++i) {
        if (s.T[i] < t_floor - tol)
            throw Error(ErrorCode::InvalidState, "snapshot: temperature below floor");
        if (s.S_e[i] < -1e-12 || s.S_e[i] > s_e0 * (1.0 + 1e-12))
            throw Error(ErrorCode::InvalidState, "snapshot: moisture outside [0, S_e0]");
        if (s.S_x[i] < -1e-12 || s.S_x[i] > s_x0 * (1.0 + 1e-12))
            throw Error(ErrorCode::InvalidState, "snapshot: combustibles outside [0, S_x0]");
    }
}

}  // namespace pyro
