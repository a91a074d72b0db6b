#include "growthsde/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "growthsde/errors.hpp"

namespace growthsde {
namespace {

void require_finite(double x, char const* what) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(what) + ": state is not finite");
  }
}

// Gompertz and Logistic live on (0, inf); Von Bertalanffy on (-inf, Linf],
// where the closure point Linf is the fixed point with zero drift and noise.
void require_state(ModelSpec const& spec, double x, char const* what) {
  require_finite(x, what);
  switch (spec.kind) {
    case ModelKind::Gompertz:
    case ModelKind::Logistic:
      if (x <= 0.0) {
        throw DomainError(std::string(what) + ": state must be > 0, got " +
                          std::to_string(x));
      }
      return;
    case ModelKind::VonBertalanffy:
      if (x > spec.l_infinity) {
        throw DomainError(std::string(what) +
                          ": state must be <= l_infinity, got " +
                          std::to_string(x));
      }
      return;
  }
  throw UnsupportedModelError("unknown model kind");
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Gompertz:
      return "gompertz";
    case ModelKind::VonBertalanffy:
      return "vonbertalanffy";
    case ModelKind::Logistic:
      return "logistic";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "gompertz") return ModelKind::Gompertz;
  if (lower == "vonbertalanffy" || lower == "von-bertalanffy" ||
      lower == "von_bertalanffy" || lower == "vb") {
    return ModelKind::VonBertalanffy;
  }
  if (lower == "logistic") return ModelKind::Logistic;
  throw ValidationError("unknown model '" + std::string(name) +
                        "' (expected gompertz|vonbertalanffy|logistic)");
}

ModelSpec ModelSpec::make(ModelKind kind, double drift, double sigma,
                          double l_infinity) {
  ModelSpec spec{kind, drift, sigma, l_infinity};
  spec.validate();
  return spec;
}

void ModelSpec::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(drift)) {
    throw ValidationError("drift parameter must be finite and > 0");
  }
  if (!positive(sigma)) {
    throw ValidationError("sigma must be finite and > 0");
  }
  if (!positive(l_infinity)) {
    throw ValidationError("l_infinity must be finite and > 0");
  }
}

bool in_interior(ModelSpec const& spec, double x) {
  if (!std::isfinite(x)) return false;
  switch (spec.kind) {
    case ModelKind::Gompertz:
    case ModelKind::Logistic:
      return x > 0.0;
    case ModelKind::VonBertalanffy:
      return x < spec.l_infinity;
  }
  return false;
}

double drift(ModelSpec const& spec, double x) {
  require_state(spec, x, "drift");
  switch (spec.kind) {
    case ModelKind::Gompertz:
      return -spec.drift * x * std::log(x);
    case ModelKind::VonBertalanffy:
      return spec.drift * (spec.l_infinity - x);
    case ModelKind::Logistic:
      return spec.drift * x * (1.0 - x);
  }
  throw UnsupportedModelError("unknown model kind");
}

double diffusion(ModelSpec const& spec, double x) {
  require_state(spec, x, "diffusion");
  switch (spec.kind) {
    case ModelKind::Gompertz:
    case ModelKind::Logistic:
      return spec.sigma * x;
    case ModelKind::VonBertalanffy:
      return spec.sigma * (spec.l_infinity - x);
  }
  throw UnsupportedModelError("unknown model kind");
}

double diffusion_deriv(ModelSpec const& spec, double /*x*/) {
  switch (spec.kind) {
    case ModelKind::Gompertz:
    case ModelKind::Logistic:
      return spec.sigma;
    case ModelKind::VonBertalanffy:
      return -spec.sigma;
  }
  throw UnsupportedModelError("unknown model kind");
}

double to_linear(ModelSpec const& spec, double x) {
  switch (spec.kind) {
    case ModelKind::Gompertz:
      require_state(spec, x, "to_linear");
      return std::log(x);
    case ModelKind::VonBertalanffy:
      require_state(spec, x, "to_linear");
      return spec.l_infinity - x;
    case ModelKind::Logistic:
      require_finite(x, "to_linear");
      return x;
  }
  throw UnsupportedModelError("unknown model kind");
}

double from_linear(ModelSpec const& spec, double y) {
  require_finite(y, "from_linear");
  switch (spec.kind) {
    case ModelKind::Gompertz:
      return std::exp(y);
    case ModelKind::VonBertalanffy:
      if (y < 0.0) {
        throw DomainError("from_linear: Von Bertalanffy gap must be >= 0");
      }
      return spec.l_infinity - y;
    case ModelKind::Logistic:
      return y;
  }
  throw UnsupportedModelError("unknown model kind");
}

double analytic_mean(ModelSpec const& spec, double t, double x0) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ValidationError("analytic_mean: t must be finite and >= 0");
  }
  require_state(spec, x0, "analytic_mean");
  double const s2 = spec.sigma * spec.sigma;
  switch (spec.kind) {
    case ModelKind::Gompertz: {
      double const b = spec.drift;
      double const decay = std::exp(-b * t);
      double const one_minus = -std::expm1(-b * t);
      double const one_minus_2 = -std::expm1(-2.0 * b * t);
      return std::exp(std::log(x0) * decay - s2 / (2.0 * b) * one_minus +
                      s2 / (4.0 * b) * one_minus_2);
    }
    case ModelKind::VonBertalanffy:
      return spec.l_infinity -
             (spec.l_infinity - x0) * std::exp(-spec.drift * t);
    case ModelKind::Logistic:
      break;
  }
  throw UnsupportedModelError(
      "analytic_mean: no closed-form mean for the Logistic model");
}

double analytic_mean_limit(ModelSpec const& spec) {
  switch (spec.kind) {
    case ModelKind::Gompertz:
      return std::exp(-spec.sigma * spec.sigma / (4.0 * spec.drift));
    case ModelKind::VonBertalanffy:
      return spec.l_infinity;
    case ModelKind::Logistic:
      break;
  }
  throw UnsupportedModelError(
      "analytic_mean_limit: no closed-form mean for the Logistic model");
}

GirsanovShape::GirsanovShape(ModelKind kind, double l_infinity)
    : kind_(kind), l_infinity_(l_infinity) {
  if (!(l_infinity > 0.0) || !std::isfinite(l_infinity)) {
    throw ValidationError("GirsanovShape: l_infinity must be > 0");
  }
}

double GirsanovShape::f(double x) const {
  switch (kind_) {
    case ModelKind::Gompertz:
      return -x * std::log(x);
    case ModelKind::VonBertalanffy:
      return l_infinity_ - x;
    case ModelKind::Logistic:
      return x * (1.0 - x);
  }
  throw UnsupportedModelError("unknown model kind");
}

double GirsanovShape::g(double x) const {
  switch (kind_) {
    case ModelKind::Gompertz:
    case ModelKind::Logistic:
      return x;
    case ModelKind::VonBertalanffy:
      return l_infinity_ - x;
  }
  throw UnsupportedModelError("unknown model kind");
}

}  // namespace growthsde
