#include "pyro/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pyro {

namespace {

void require_positive_temperature(const Field& T) {
    for (double t : T.v)
        if (!(t > 0.0))
            throw Error(ErrorCode::InvalidState, "temperature field must be positive everywhere");
}

// Shared state-advance kernel. Writes the updated fields into `out`, reusing
// the caller's scratch buffers. Returns the sum of the updated temperature
// field so callers can detect non-finite blowup cheaply.
struct StepScratch {
    Field Dx, Dy;
    Field rhs;  // kappa1 * (diffusion - advection) accumulated per cell

    void ensure(const Grid& g) {
        if (Dx.nx != g.nx || Dx.ny != g.ny) {
            Dx = Field(g);
            Dy = Field(g);
            rhs = Field(g);
        }
    }
};

double advance(const Snapshot& in, Snapshot& out, const PhysicalParams& p, const Velocity& u,
               double dt, BoundaryMode boundary, StepScratch& scratch) {
    const Grid& g = in.grid;
    const int nx = g.nx, ny = g.ny;
    const bool periodic = boundary == BoundaryMode::Periodic;

    scratch.ensure(g);
    diffusion_coefficient(in.T, u, p, g, scratch.Dx, scratch.Dy);

    // Stability guards for the explicit update, using the effective transport
    // coefficients kappa1*|u| and kappa1*D and the relaxation rate kappa4*U.
    {
        const double adv_x = p.kappa1 * std::abs(u.x) * dt / g.dx;
        const double dif_x = 2.0 * p.kappa1 * scratch.Dx.max() * dt / (g.dx * g.dx);
        double worst = std::max(adv_x, dif_x);
        std::string which = adv_x >= dif_x ? "advection-x" : "diffusion-x";
        if (g.dim == 2) {
            const double adv_y = p.kappa1 * std::abs(u.y) * dt / g.dy;
            const double dif_y = 2.0 * p.kappa1 * scratch.Dy.max() * dt / (g.dy * g.dy);
            if (adv_y > worst) { worst = adv_y; which = "advection-y"; }
            if (dif_y > worst) { worst = dif_y; which = "diffusion-y"; }
        }
        const double relax = p.kappa4 * p.u_loss * dt;
        if (relax > worst) { worst = relax; which = "relaxation"; }
        if (worst > 1.0)
            throw StabilityError("explicit step unstable: " + which + " ratio " +
                                     std::to_string(worst) + " exceeds 1",
                                 worst);
    }

    // Transport along x: flux-form upwind advection and central diffusion with
    // face-averaged diffusivity. Open outflow copies the edge cell into the
    // ghost, so boundary advective flux is u*T_edge and diffusive flux is zero.
    Field& rhs = scratch.rhs;
    std::fill(rhs.v.begin(), rhs.v.end(), 0.0);

    const Field& T = in.T;
    for (int j = 0; j < ny; ++j) {
        const double* t = &T.v[size_t(j) * nx];
        const double* dx_ = &scratch.Dx.v[size_t(j) * nx];
        double* r = &rhs.v[size_t(j) * nx];
        const double ux = u.x;
        double f_left, g_left;  // fluxes through the left face of cell i
        if (periodic) {
            f_left = ux > 0.0 ? ux * t[nx - 1] : ux * t[0];
            g_left = 0.5 * (dx_[nx - 1] + dx_[0]) * (t[0] - t[nx - 1]) / g.dx;
        } else {
            f_left = ux * t[0];
            g_left = 0.0;
        }
        for (int i = 0; i < nx; ++i) {
            double f_right, g_right;
            if (i + 1 < nx) {
                f_right = ux > 0.0 ? ux * t[i] : ux * t[i + 1];
                g_right = 0.5 * (dx_[i] + dx_[i + 1]) * (t[i + 1] - t[i]) / g.dx;
            } else if (periodic) {
                f_right = ux > 0.0 ? ux * t[nx - 1] : ux * t[0];
                g_right = 0.5 * (dx_[nx - 1] + dx_[0]) * (t[0] - t[nx - 1]) / g.dx;
            } else {
                f_right = ux * t[nx - 1];
                g_right = 0.0;
            }
            r[i] += p.kappa1 * ((g_right - g_left) - (f_right - f_left)) / g.dx;
            f_left = f_right;
            g_left = g_right;
        }
    }

    if (g.dim == 2) {
        const double uy = u.y;
        for (int i = 0; i < nx; ++i) {
            double f_low, g_low;
            if (periodic) {
                f_low = uy > 0.0 ? uy * T.at(i, ny - 1) : uy * T.at(i, 0);
                g_low = 0.5 * (scratch.Dy.at(i, ny - 1) + scratch.Dy.at(i, 0)) *
                        (T.at(i, 0) - T.at(i, ny - 1)) / g.dy;
            } else {
                f_low = uy * T.at(i, 0);
                g_low = 0.0;
            }
            for (int j = 0; j < ny; ++j) {
                double f_high, g_high;
                if (j + 1 < ny) {
                    f_high = uy > 0.0 ? uy * T.at(i, j) : uy * T.at(i, j + 1);
                    g_high = 0.5 * (scratch.Dy.at(i, j) + scratch.Dy.at(i, j + 1)) *
                             (T.at(i, j + 1) - T.at(i, j)) / g.dy;
                } else if (periodic) {
                    f_high = uy > 0.0 ? uy * T.at(i, ny - 1) : uy * T.at(i, 0);
                    g_high = 0.5 * (scratch.Dy.at(i, ny - 1) + scratch.Dy.at(i, 0)) *
                             (T.at(i, 0) - T.at(i, ny - 1)) / g.dy;
                } else {
                    f_high = uy * T.at(i, ny - 1);
                    g_high = 0.0;
                }
                rhs.at(i, j) += p.kappa1 * ((g_high - g_low) - (f_high - f_low)) / g.dy;
                f_low = f_high;
                g_low = g_high;
            }
        }
    }

    // Reaction and relaxation. The fuel updates are multiplicative decays with
    // the per-step conversion clamped to the available mass; the temperature
    // source/sink uses that same converted amount.
    const double k4u = p.kappa4 * p.u_loss;
    double t_sum = 0.0;
    for (int i = 0; i < in.T.size(); ++i) {
        const double t = in.T[i];
        const double re = p.c_e * std::exp(-p.b_e / t);
        const double kx = p.c_x * std::exp(-p.b_x / t);
        const double rx = kx > 0.0 ? kx * p.r_o / (kx + p.r_o) : 0.0;

        const double d_se = in.S_e[i] * std::min(re * dt, 1.0);
        const double d_sx = in.S_x[i] * std::min(rx * dt, 1.0);

        out.S_e[i] = in.S_e[i] - d_se;
        out.S_x[i] = in.S_x[i] - d_sx;

        const double t_new = t + dt * rhs[i] - p.kappa2 * d_se + p.kappa3 * d_sx -
                             dt * k4u * (t - p.t_ambient);
        out.T[i] = t_new;
        t_sum += t_new;
    }
    return t_sum;
}

}  // namespace

Field endothermic_rate(const Field& T, const PhysicalParams& p) {
    require_positive_temperature(T);
    Field r(T.nx, T.ny);
    for (int i = 0; i < T.size(); ++i) r[i] = p.c_e * std::exp(-p.b_e / T[i]);
    return r;
}

Field exothermic_rate(const Field& T, const PhysicalParams& p) {
    require_positive_temperature(T);
    if (!(p.r_o > 0.0))
        throw Error(ErrorCode::InvalidState, "exothermic rate requires r_o > 0");
    Field r(T.nx, T.ny);
    for (int i = 0; i < T.size(); ++i) {
        const double k = p.c_x * std::exp(-p.b_x / T[i]);
        r[i] = k > 0.0 ? k * p.r_o / (k + p.r_o) : 0.0;
    }
    return r;
}

void diffusion_coefficient(const Field& T, const Velocity& u, const PhysicalParams& p,
                           const Grid& g, Field& Dx, Field& Dy) {
    require_positive_temperature(T);
    double rad_denom = 0.0;
    if (p.radiation_enabled) {
        const double kdl = p.k_d * p.fire_depth;
        rad_denom = 1.0 - std::exp(-kdl);
        if (!(rad_denom > 0.0))
            throw Error(ErrorCode::SingularConfig,
                        "radiation enabled but k_d * fire_depth is zero");
    }
    const double shear = p.fire_depth * (1.0 - std::exp(-p.gamma_d * p.fire_width));
    const double shear_x = p.a_d * std::abs(u.x) * shear;
    const double shear_y = p.a_d * std::abs(u.y) * shear;
    const double rad_scale =
        p.radiation_enabled ? 5.33 * p.sigma_b / (rad_denom * p.rho_g * p.c_pg) : 0.0;

    for (int i = 0; i < T.size(); ++i) {
        const double rad = rad_scale * T[i] * T[i] * T[i];
        Dx[i] = p.d_b + shear_x + rad;
        if (g.dim == 2) Dy[i] = p.d_b + shear_y + rad;
    }
}

Snapshot step(const Snapshot& state, const PhysicalParams& p, const Velocity& u, double dt,
              const StepOptions& opts) {
    if (!state.shapes_consistent())
        throw Error(ErrorCode::InvalidState, "step: snapshot shapes inconsistent");
    require_positive_temperature(state.T);
    Snapshot out = state;
    StepScratch scratch;
    advance(state, out, p, u, dt, opts.boundary, scratch);
    return out;
}

Snapshot initial_state(const Grid& grid, const Scenario& sc, const IgnitionSpec& ignition,
                       const ParamVector& z) {
    Snapshot s(grid, Fidelity::LF);
    s.z = z;
    const double ta = sc.phys.t_ambient;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            double bump = 0.0;
            if (!ignition.absent) {
                const double dx = grid.x(i) - ignition.center_x;
                double r2 = dx * dx;
                if (grid.dim == 2) {
                    const double dy = grid.y(j) - ignition.center_y;
                    r2 += dy * dy;
                }
                bump = ignition.amplitude * std::exp(-r2 / (2.0 * ignition.sigma * ignition.sigma));
            }
            s.T.at(i, j) = ta + bump;
            s.S_e.at(i, j) = sc.s_e0;
            s.S_x.at(i, j) = sc.s_x0;
        }
    }
    return s;
}

Snapshot simulate(const Grid& grid, const PhysicalParams& p, const ParamVector& z,
                  const IgnitionSpec& ignition, BoundaryMode boundary,
                  const StepObserver& observer) {
    grid.validate();
    p.validate();
    ignition.validate();
    if (!ignition.absent) {
        if (ignition.center_x < 0.0 || ignition.center_x > grid.lx ||
            (grid.dim == 2 && (ignition.center_y < 0.0 || ignition.center_y > grid.ly)))
            throw Error(ErrorCode::Config, "ignition center outside domain");
    }

    const Scenario sc = resolve_scenario(p, z, grid.dim);

    Snapshot cur = initial_state(grid, sc, ignition, z);
    Snapshot next = cur;
    StepScratch scratch;

    const long n_steps = std::lround(grid.t_final / grid.dt);
    for (long n = 0; n < n_steps; ++n) {
        const double t_sum = advance(cur, next, sc.phys, sc.flow, grid.dt, boundary, scratch);
        if (!std::isfinite(t_sum))
            throw DivergenceError("non-finite state at step " + std::to_string(n + 1), n + 1);
        std::swap(cur, next);
        if (observer) observer(n + 1, cur);
    }
    return cur;
}

}  // namespace pyro
