#include "growthsde/bridge.hpp"

#include <cmath>
#include <string>

#include "growthsde/errors.hpp"
#include "growthsde/simulate.hpp"

namespace growthsde {
namespace {

BridgePath pinned_skeleton(BridgeRequest const& req) {
  BridgePath out;
  std::size_t const n = req.substeps;
  out.times.resize(n + 1);
  out.values.resize(n + 1);
  double const h = req.step();
  for (std::size_t j = 0; j <= n; ++j) {
    out.times[j] = std::fma(static_cast<double>(j), h, req.t1);
  }
  out.times[n] = req.t2;
  out.values[0] = req.a;
  out.values[n] = req.b;
  return out;
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("bridge: sigma must be finite and > 0");
  }
}

}  // namespace

void BridgeRequest::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("bridge: endpoints must be finite");
  }
  if (!(t2 > t1) || !std::isfinite(t1) || !std::isfinite(t2)) {
    throw ValidationError("bridge: need t2 > t1");
  }
  if (substeps < 1) throw ValidationError("bridge: substeps must be >= 1");
}

BridgePath ou_bridge(double b_param, double sigma, BridgeRequest const& req,
                     RngStream& stream) {
  req.validate();
  check_sigma(sigma);
  if (!(b_param > 0.0) || !std::isfinite(b_param)) {
    throw ValidationError("ou_bridge: b must be finite and > 0");
  }
  BridgePath out = pinned_skeleton(req);
  std::size_t const n = req.substeps;
  // Work in u = Y - mu, which is a zero-mean OU process.
  double const mu = -sigma * sigma / (2.0 * b_param);
  double const h = req.step();
  double const phi = std::exp(-b_param * h);
  double const v_step = sigma * sigma * -std::expm1(-2.0 * b_param * h) / (2.0 * b_param);
  double const u_end = req.b - mu;
  double u = req.a - mu;
  for (std::size_t j = 1; j < n; ++j) {
    double const rest = req.t2 - out.times[j];
    double const phi_rest = std::exp(-b_param * rest);
    double const v_rest =
        sigma * sigma * -std::expm1(-2.0 * b_param * rest) / (2.0 * b_param);
    double const m_step = u * phi;
    double const denom = v_rest + phi_rest * phi_rest * v_step;
    double const mean = (v_rest * m_step + phi_rest * v_step * u_end) / denom;
    double const var = v_step * v_rest / denom;
    u = mean + std::sqrt(var) * stream.normal();
    out.values[j] = u + mu;
  }
  return out;
}

BridgePath bm_bridge(double sigma, BridgeRequest const& req, RngStream& stream) {
  req.validate();
  check_sigma(sigma);
  BridgePath out = pinned_skeleton(req);
  std::size_t const n = req.substeps;
  double const h = req.step();
  double x = req.a;
  for (std::size_t j = 1; j < n; ++j) {
    double const rest = req.t2 - out.times[j - 1];
    double const mean = x + (req.b - x) * h / rest;
    double const var = sigma * sigma * h * (rest - h) / rest;
    x = mean + std::sqrt(std::max(var, 0.0)) * stream.normal();
    out.values[j] = x;
  }
  return out;
}

BridgePath bs_bridge(ModelSpec const& spec, BridgeRequest const& req,
                     RngStream& stream, std::size_t max_attempts) {
  req.validate();
  spec.validate();
  if (max_attempts < 1) throw ValidationError("bs_bridge: max_attempts must be >= 1");
  BridgePath out = pinned_skeleton(req);
  std::size_t const n = req.substeps;
  if (n == 1) return out;

  TimeGrid const grid{req.t1, req.t2, n};
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    Path const fwd = milstein_simulate(spec, req.a, grid, stream);
    Path const bwd = milstein_simulate(spec, req.b, grid, stream);
    auto const reversed = [&](std::size_t l) { return bwd.values[n - l]; };
    double const d0 = fwd.values[0] - reversed(0);
    std::size_t cross = n + 1;
    if (d0 == 0.0) {
      cross = 0;
    } else {
      for (std::size_t l = 1; l <= n; ++l) {
        double const d = fwd.values[l] - reversed(l);
        if (d == 0.0 || std::signbit(d) != std::signbit(d0)) {
          cross = l;
          break;
        }
      }
    }
    if (cross > n) continue;
    for (std::size_t l = 1; l < n; ++l) {
      out.values[l] = l < cross ? fwd.values[l] : reversed(l);
    }
    out.attempts_used = attempt;
    return out;
  }
  throw NoCrossingError("bs_bridge: no crossing in " +
                            std::to_string(max_attempts) + " attempts",
                        max_attempts);
}

BridgePath log_brownian_bridge(ModelSpec const& spec, BridgeRequest const& req,
                               RngStream& stream) {
  spec.validate();
  req.validate();
  bool const gap = spec.kind == ModelKind::VonBertalanffy;
  auto to_log = [&](double x) {
    double const v = gap ? spec.l_infinity - x : x;
    if (!(v > 0.0)) throw DomainError("log bridge: endpoint outside the state space");
    return std::log(v);
  };
  BridgeRequest logreq = req;
  logreq.a = to_log(req.a);
  logreq.b = to_log(req.b);
  BridgePath out = bm_bridge(spec.sigma, logreq, stream);
  for (double& v : out.values) v = gap ? spec.l_infinity - std::exp(v) : std::exp(v);
  out.values.front() = req.a;
  out.values.back() = req.b;
  return out;
}

Path impute(ModelSpec const& spec, ObservationSet const& obs,
            double delta_target, RngStream& stream, ImputeOptions const& opts) {
  spec.validate();
  obs.validate();
  if (!(delta_target > 0.0) || !std::isfinite(delta_target)) {
    throw ValidationError("impute: delta_target must be finite and > 0");
  }
  double const gap = obs.uniform_step();
  double const ratio = std::round(gap / delta_target);
  auto const per_gap = static_cast<std::size_t>(std::max(1.0, ratio));
  std::size_t const intervals = obs.size() - 1;

  Path path;
  path.grid = TimeGrid{obs.times.front(), obs.times.back(), intervals * per_gap};
  path.values.resize(path.grid.n + 1);

  bool const linearized = spec.kind != ModelKind::Logistic;
  std::vector<double> ends;
  std::vector<double> lin;
  if (linearized) {
    ends = linear_coordinates(spec.kind, spec.l_infinity, obs.values, obs.linear);
    lin.resize(path.grid.n + 1);
  }
  // Bridges of the Von Bertalanffy gap run in its logarithm.
  auto to_bridge = [&](double v) {
    if (spec.kind != ModelKind::VonBertalanffy) return v;
    if (!(v > 0.0)) throw DomainError("impute: observation at l_infinity");
    return std::log(v);
  };

  for (std::size_t i = 0; i < intervals; ++i) {
    BridgeRequest req;
    req.t1 = obs.times[i];
    req.t2 = obs.times[i + 1];
    req.substeps = per_gap;
    RngStream sub = stream.child(i);
    BridgePath bridge;
    try {
      switch (spec.kind) {
        case ModelKind::Gompertz:
          req.a = ends[i];
          req.b = ends[i + 1];
          bridge = ou_bridge(spec.drift, spec.sigma, req, sub);
          break;
        case ModelKind::VonBertalanffy:
          req.a = to_bridge(ends[i]);
          req.b = to_bridge(ends[i + 1]);
          bridge = bm_bridge(spec.sigma, req, sub);
          break;
        case ModelKind::Logistic:
          req.a = obs.values[i];
          req.b = obs.values[i + 1];
          try {
            bridge = bs_bridge(spec, req, sub);
          } catch (NoCrossingError const&) {
            if (!opts.crossing_fallback) throw;
            bridge = log_brownian_bridge(spec, req, sub);
            ++path.fallback_count;
          }
          break;
      }
    } catch (NoCrossingError const& e) {
      throw NoCrossingError(std::string(e.what()) + " (interval " +
                                std::to_string(i) + ")",
                            e.attempts(), i);
    }
    std::size_t const base = i * per_gap;
    for (std::size_t j = 0; j < per_gap; ++j) {
      double const v = bridge.values[j];
      if (j == 0) {
        path.values[base] = obs.values[i];
        if (linearized) lin[base] = ends[i];
        continue;
      }
      switch (spec.kind) {
        case ModelKind::Gompertz:
          lin[base + j] = v;
          path.values[base + j] = std::exp(v);
          break;
        case ModelKind::VonBertalanffy:
          lin[base + j] = std::exp(v);
          path.values[base + j] = spec.l_infinity - lin[base + j];
          break;
        case ModelKind::Logistic:
          path.values[base + j] = v;
          break;
      }
    }
  }
  path.values.back() = obs.values.back();
  if (linearized) {
    lin.back() = ends.back();
    path.linear = LinearChannel{spec.kind, spec.l_infinity, std::move(lin)};
  }
  return path;
}

}  // namespace growthsde
