#pragma once

#include <array>
#include <string>
#include <string_view>

namespace growthsde {

enum class ModelKind { Gompertz, VonBertalanffy, Logistic };

inline constexpr std::array<ModelKind, 3> kAllModels = {
    ModelKind::Gompertz, ModelKind::VonBertalanffy, ModelKind::Logistic};

std::string_view to_string(ModelKind kind);
/// Accepts "gompertz", "vonbertalanffy" (also "von-bertalanffy", "vb") and
/// "logistic", case-insensitively. Throws ValidationError otherwise.
ModelKind parse_model_kind(std::string_view name);

/// One of the three growth SDEs with its parameters.
///
///   Gompertz:        dX = -b X ln X dt + sigma X dW
///   Von Bertalanffy: dL = k (Linf - L) dt + sigma (Linf - L) dW
///   Logistic:        dP = r P (1 - P) dt + sigma P dW
///
/// `drift` holds b, k or r. `l_infinity` only enters Von Bertalanffy; the
/// other two models have carrying capacity 1.
struct ModelSpec {
  ModelKind kind = ModelKind::Gompertz;
  double drift = 0.6;
  double sigma = 0.1;
  double l_infinity = 1.0;

  /// Builds a spec after checking drift, sigma, l_infinity > 0 and finite.
  static ModelSpec make(ModelKind kind, double drift, double sigma,
                        double l_infinity = 1.0);
  void validate() const;
};

/// True when x is in the interior of the state space: x > 0 for Gompertz and
/// Logistic, x < l_infinity for Von Bertalanffy.
bool in_interior(ModelSpec const& spec, double x);

double drift(ModelSpec const& spec, double x);
double diffusion(ModelSpec const& spec, double x);
double diffusion_deriv(ModelSpec const& spec, double x);

/// Coordinate in which the model is Gaussian: ln x (Gompertz, an OU process),
/// l_infinity - x (Von Bertalanffy, a geometric Brownian motion). Identity for
/// the Logistic model.
double to_linear(ModelSpec const& spec, double x);
double from_linear(ModelSpec const& spec, double y);

/// E[X_t | X_0 = x0]. Not available for the Logistic model.
double analytic_mean(ModelSpec const& spec, double t, double x0);
/// lim_{t->inf} E[X_t]: exp(-sigma^2/4b) for Gompertz, l_infinity for VB.
double analytic_mean_limit(ModelSpec const& spec);

/// Drift and diffusion shapes F, G with drift = alpha F and diffusion =
/// sigma G. The Gompertz F carries the minus sign (F = -x ln x) so that the
/// drift parameter is positive for all three models.
class GirsanovShape {
 public:
  GirsanovShape(ModelKind kind, double l_infinity = 1.0);
  explicit GirsanovShape(ModelSpec const& spec)
      : GirsanovShape(spec.kind, spec.l_infinity) {}

  ModelKind kind() const noexcept { return kind_; }
  double l_infinity() const noexcept { return l_infinity_; }

  double f(double x) const;
  double g(double x) const;

 private:
  ModelKind kind_;
  double l_infinity_;
};

}  // namespace growthsde
