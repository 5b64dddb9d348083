#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>

namespace mlmcfv {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// A flux f(k, u) depending on a scalar spatial coefficient k.
class FluxFunction {
 public:
  virtual ~FluxFunction() = default;

  virtual double eval(double k, double u) const = 0;
  virtual double derivative(double k, double u) const = 0;
  virtual std::string name() const = 0;

  /// out[j] = f(k, u[j]). Hot path of the solver; override for a tight loop.
  virtual void eval_many(double k, std::span<const double> u,
                         std::span<double> out) const;
};

/// f(k,u) = u^2 / (u^2 + (1-u)^2) * (1 - k (1-u)^2), i.e. oil mobility
/// u^2 and water mobility (1-u)^2.
class BuckleyLeverettFlux final : public FluxFunction {
 public:
  double eval(double k, double u) const override {
    const double lo = u * u;
    const double lw = (1.0 - u) * (1.0 - u);
    return lo / (lo + lw) * (1.0 - k * lw);
  }
  double derivative(double k, double u) const override;
  std::string name() const override { return "buckley_leverett"; }
  void eval_many(double k, std::span<const double> u,
                 std::span<double> out) const override;
};

/// f(k,u) = speed * u, or speed * k * u when scaled by the coefficient.
class LinearFlux final : public FluxFunction {
 public:
  explicit LinearFlux(double speed = 1.0, bool scale_by_coefficient = false)
      : speed_(speed), scaled_(scale_by_coefficient) {}

  double eval(double k, double u) const override {
    return (scaled_ ? k * speed_ : speed_) * u;
  }
  double derivative(double k, double /*u*/) const override {
    return scaled_ ? k * speed_ : speed_;
  }
  std::string name() const override {
    return scaled_ ? "linear_scaled" : "linear";
  }

 private:
  double speed_;
  bool scaled_;
};

/// Build a flux by name ("buckley_leverett", "linear", "linear_scaled").
std::shared_ptr<const FluxFunction> make_flux(const std::string& name);

struct MonotoneBounds {
  double alpha = 0.0;  // min of df/du over the sample grid
  double lip = 0.0;    // max of |df/du| over the sample grid
};

/// Samples df/du on an n_check x n_check tensor grid over k_range x bracket.
/// Throws MonotonicityViolation when the minimum derivative is <= 0 or when
/// f(k,.) fails to increase between consecutive samples.
MonotoneBounds validate_monotone_bracket(const FluxFunction& flux,
                                         Interval k_range, Interval bracket,
                                         std::size_t n_check = 512);

/// A flux restricted to a state bracket on which it has been checked to be
/// strictly increasing for every coefficient in k_range. Immutable.
class FluxModel {
 public:
  static constexpr std::size_t kDefaultCheckPoints = 512;
  static constexpr double kDefaultFluxTolerance = 1e-12;

  FluxModel(std::shared_ptr<const FluxFunction> flux, Interval k_range,
            Interval bracket, std::size_t n_check = kDefaultCheckPoints,
            double tol_f = kDefaultFluxTolerance);

  /// Skips the alpha > 0 requirement. Bounds are still sampled. Intended for
  /// brackets whose endpoint is a critical point of f (e.g. u = 1 for
  /// Buckley-Leverett) where inversion still makes sense.
  static FluxModel unchecked(std::shared_ptr<const FluxFunction> flux,
                             Interval k_range, Interval bracket,
                             double tol_f = kDefaultFluxTolerance);

  double eval(double k, double u) const { return flux_->eval(k, u); }
  double derivative(double k, double u) const {
    return flux_->derivative(k, u);
  }
  void eval_many(double k, std::span<const double> u,
                 std::span<double> out) const {
    flux_->eval_many(k, u, out);
  }

  /// Solves f(k,u) = p for u in the bracket. Throws OutOfMonotoneRange if p
  /// lies outside [f(k,lo), f(k,hi)] by more than tol_f.
  double invert(double k, double p) const;

  const FluxFunction& function() const noexcept { return *flux_; }
  Interval k_range() const noexcept { return k_range_; }
  Interval bracket() const noexcept { return bracket_; }
  double alpha() const noexcept { return bounds_.alpha; }
  double lip() const noexcept { return bounds_.lip; }
  double tol_f() const noexcept { return tol_f_; }

 private:
  FluxModel(std::shared_ptr<const FluxFunction> flux, Interval k_range,
            Interval bracket, MonotoneBounds bounds, double tol_f);

  std::shared_ptr<const FluxFunction> flux_;
  Interval k_range_;
  Interval bracket_;
  MonotoneBounds bounds_;
  double tol_f_;
};

inline double eval_flux(const FluxModel& model, double k, double u) {
  return model.eval(k, u);
}

inline double invert_flux(const FluxModel& model, double k, double p) {
  return model.invert(k, p);
}

}  // namespace mlmcfv
