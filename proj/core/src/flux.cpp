#include "mlmcfv/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mlmcfv/errors.hpp"

namespace mlmcfv {

void FluxFunction::eval_many(double k, std::span<const double> u,
                             std::span<double> out) const {
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = eval(k, u[j]);
}

double BuckleyLeverettFlux::derivative(double k, double u) const {
  const double lo = u * u;
  const double lw = (1.0 - u) * (1.0 - u);
  const double denom = lo + lw;
  const double ratio = lo / denom;
  const double ratio_du = 2.0 * u * (1.0 - u) / (denom * denom);
  const double scale = 1.0 - k * lw;
  const double scale_du = 2.0 * k * (1.0 - u);
  return ratio_du * scale + ratio * scale_du;
}

void BuckleyLeverettFlux::eval_many(double k, std::span<const double> u,
                                    std::span<double> out) const {
  const std::size_t n = u.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double v = u[j];
    const double lo = v * v;
    const double lw = (1.0 - v) * (1.0 - v);
    out[j] = lo / (lo + lw) * (1.0 - k * lw);
  }
}

std::shared_ptr<const FluxFunction> make_flux(const std::string& name) {
  if (name == "buckley_leverett") return std::make_shared<BuckleyLeverettFlux>();
  if (name == "linear") return std::make_shared<LinearFlux>(1.0, false);
  if (name == "linear_scaled") return std::make_shared<LinearFlux>(1.0, true);
  throw ConfigError("unknown flux '" + name +
                    "' (expected buckley_leverett, linear or linear_scaled)");
}

namespace {

double sample_point(Interval iv, std::size_t i, std::size_t n) {
  if (n == 1) return iv.lo;
  if (i + 1 == n) return iv.hi;
  return iv.lo + iv.width() * static_cast<double>(i) / static_cast<double>(n - 1);
}

MonotoneBounds sample_bounds(const FluxFunction& flux, Interval k_range,
                             Interval bracket, std::size_t n_check,
                             bool require_increasing) {
  MonotoneBounds b{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t a = 0; a < n_check; ++a) {
    const double k = sample_point(k_range, a, n_check);
    double prev = 0.0;
    for (std::size_t i = 0; i < n_check; ++i) {
      const double u = sample_point(bracket, i, n_check);
      const double d = flux.derivative(k, u);
      b.alpha = std::min(b.alpha, d);
      b.lip = std::max(b.lip, std::abs(d));
      const double f = flux.eval(k, u);
      if (require_increasing && i > 0 && !(f > prev)) {
        std::ostringstream os;
        os << "flux " << flux.name() << " is not increasing at k=" << k
           << ", u=" << u << " (f=" << f << ", previous " << prev << ")";
        throw MonotonicityViolation(os.str());
      }
      prev = f;
    }
  }
  return b;
}

}  // namespace

MonotoneBounds validate_monotone_bracket(const FluxFunction& flux,
                                         Interval k_range, Interval bracket,
                                         std::size_t n_check) {
  if (n_check < 2) throw ConfigError("monotonicity check needs n_check >= 2");
  if (!(bracket.hi > bracket.lo) || k_range.hi < k_range.lo)
    throw ConfigError("empty bracket or coefficient range");
  // Derivative sign first so the error names the real problem.
  const MonotoneBounds b =
      sample_bounds(flux, k_range, bracket, n_check, /*require_increasing=*/false);
  if (!(b.alpha > 0.0)) {
    std::ostringstream os;
    os << "flux " << flux.name() << ": min df/du = " << b.alpha
       << " <= 0 on bracket [" << bracket.lo << ", " << bracket.hi
       << "] for k in [" << k_range.lo << ", " << k_range.hi << "]";
    throw MonotonicityViolation(os.str());
  }
  sample_bounds(flux, k_range, bracket, n_check, /*require_increasing=*/true);
  return b;
}

FluxModel::FluxModel(std::shared_ptr<const FluxFunction> flux, Interval k_range,
                     Interval bracket, std::size_t n_check, double tol_f)
    : FluxModel(flux, k_range, bracket,
                validate_monotone_bracket(*flux, k_range, bracket, n_check),
                tol_f) {}

FluxModel::FluxModel(std::shared_ptr<const FluxFunction> flux, Interval k_range,
                     Interval bracket, MonotoneBounds bounds, double tol_f)
    : flux_(std::move(flux)),
      k_range_(k_range),
      bracket_(bracket),
      bounds_(bounds),
      tol_f_(tol_f) {
  if (!(tol_f_ > 0.0)) throw ConfigError("flux inversion tolerance must be > 0");
}

FluxModel FluxModel::unchecked(std::shared_ptr<const FluxFunction> flux,
                               Interval k_range, Interval bracket,
                               double tol_f) {
  const MonotoneBounds b = sample_bounds(*flux, k_range, bracket,
                                         kDefaultCheckPoints, false);
  return FluxModel(std::move(flux), k_range, bracket, b, tol_f);
}

double FluxModel::invert(double k, double p) const {
  double a = bracket_.lo;
  double b = bracket_.hi;
  const double fa = flux_->eval(k, a);
  const double fb = flux_->eval(k, b);
  if (p < fa - tol_f_ || p > fb + tol_f_ || !std::isfinite(p)) {
    std::ostringstream os;
    os.precision(17);
    os << "flux value " << p << " at k=" << k << " outside monotone image ["
       << fa << ", " << fb << "] of bracket [" << a << ", " << b << "]";
    throw OutOfMonotoneRange(os.str());
  }
  if (p <= fa) return a;
  if (p >= fb) return b;

  // Bisection down to 1e-8, keeping f(a) < p < f(b).
  constexpr double kBisectWidth = 1e-8;
  while (b - a > kBisectWidth) {
    const double m = 0.5 * (a + b);
    const double fm = flux_->eval(k, m);
    if (fm == p) return m;
    if (fm < p)
      a = m;
    else
      b = m;
  }

  // Safeguarded Newton polish; falls back to bisection when a step leaves
  // the bracket or the derivative vanishes.
  double u = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const double r = flux_->eval(k, u) - p;
    if (std::abs(r) <= tol_f_) return u;
    if (r < 0.0)
      a = u;
    else
      b = u;
    const double d = flux_->derivative(k, u);
    double next = (d > 0.0) ? u - r / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (next == u) break;
    u = next;
  }
  return u;
}

}  // namespace mlmcfv
