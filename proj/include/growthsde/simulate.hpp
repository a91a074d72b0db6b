#pragma once

#include <string_view>

#include "growthsde/model.hpp"
#include "growthsde/path.hpp"
#include "growthsde/rng.hpp"

namespace growthsde {

/// Clamped states are moved this far inside the state-space boundary.
inline constexpr double kClampEpsilon = 1e-12;
/// Milstein runs with more clamped steps than this fraction are rejected.
inline constexpr double kMaxClampRate = 0.01;

enum class Simulator { Milstein, Exact, Solution };

std::string_view to_string(Simulator sim);
Simulator parse_simulator(std::string_view name);
/// Exact transitions where they exist (Gompertz, Von Bertalanffy), Milstein
/// for the Logistic model.
Simulator default_simulator(ModelKind kind);

/// x + a(x) dt + b(x) dw + 1/2 b(x) b'(x) (dw^2 - dt), without clamping.
double milstein_step(ModelSpec const& spec, double x, double dt, double dw);

/// Milstein scheme on the grid. Steps leaving the state space are clamped to
/// kClampEpsilon inside it and counted in Path::clamp_count; throws
/// NumericalError when more than kMaxClampRate of the steps were clamped.
///
/// Von Bertalanffy is iterated in the gap coordinate l_infinity - L (the
/// scheme is affine-invariant, so this is the same recursion) and the gap is
/// kept in Path::linear.
Path milstein_simulate(ModelSpec const& spec, double x0, TimeGrid const& grid,
                       RngStream& stream);

/// Exact Gaussian transitions: OU in ln X for Gompertz, Brownian motion with
/// drift in ln(l_infinity - L) for Von Bertalanffy. Throws
/// UnsupportedModelError for the Logistic model.
Path exact_simulate(ModelSpec const& spec, double x0, TimeGrid const& grid,
                    RngStream& stream);

/// Strong solution P_t = f_t / (1/p0 + r int_0^t f_s ds) with
/// f_t = exp(t (r - sigma^2/2) + sigma W_t), the integral by the trapezoid
/// rule on the grid. Logistic only, p0 in (0, 1).
Path logistic_solution_simulate(ModelSpec const& spec, double x0,
                                TimeGrid const& grid, RngStream& stream);

Path simulate(Simulator sim, ModelSpec const& spec, double x0,
              TimeGrid const& grid, RngStream& stream);

/// Beta(alpha, beta) draw in (0, 1) from two gamma variates.
double sample_beta_init(double alpha, double beta, RngStream& stream);

}  // namespace growthsde
