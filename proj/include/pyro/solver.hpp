#pragma once

#include "pyro/snapshot.hpp"

#include <functional>

namespace pyro {

enum class BoundaryMode { Outflow, Periodic };

struct StepOptions {
    BoundaryMode boundary = BoundaryMode::Outflow;
};

/// First-order Arrhenius evaporation rate, elementwise.
Field endothermic_rate(const Field& T, const PhysicalParams& p);

/// Combustion rate limited by kinetics and oxygen availability, elementwise.
Field exothermic_rate(const Field& T, const PhysicalParams& p);

/// Directional diffusivity: buoyancy + wind shear + optional Rosseland
/// radiative part evaluated at the local cell temperature.
void diffusion_coefficient(const Field& T, const Velocity& u, const PhysicalParams& p,
                           const Grid& g, Field& Dx, Field& Dy);

/// One explicit step: upwind advection, central diffusion, clamped source
/// coupling. Fuel fields decay multiplicatively (never negative, never
/// increasing); the temperature source/sink uses the fuel actually converted
/// in the step so the energy budget stays consistent when r*dt is clamped.
Snapshot step(const Snapshot& state, const PhysicalParams& p, const Velocity& u, double dt,
              const StepOptions& opts = {});

using StepObserver = std::function<void(long step_index, const Snapshot& state)>;

/// Run a full simulation from the ignition initial condition to t_final and
/// return the final snapshot. Deterministic for fixed inputs; the optional
/// observer sees the state after every step.
Snapshot simulate(const Grid& grid, const PhysicalParams& p, const ParamVector& z,
                  const IgnitionSpec& ignition, BoundaryMode boundary = BoundaryMode::Outflow,
                  const StepObserver& observer = nullptr);

/// Initial condition used by simulate: ambient + Gaussian ignition bump,
/// uniform fuel fractions.
Snapshot initial_state(const Grid& grid, const Scenario& sc, const IgnitionSpec& ignition,
                       const ParamVector& z);

}  // namespace pyro
