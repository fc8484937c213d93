#include "pttunnel/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pttunnel/errors.hpp"

namespace pttunnel {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void require_finite(double x) {
  if (!std::isfinite(x)) {
    throw NumericError(ErrorCode::NonFinite, "Chebyshev argument is not finite");
  }
}

double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// log cosh(y) for y >= 0.
double log_cosh(double y) { return y + std::log1p(std::exp(-2.0 * y)) - kLn2; }

// |x| reflected onto [0, inf) with its own distances to 1:
// below = |x| - 1, above = |x| + 1.
struct Reflected {
  double ax;
  double below;
  double above;
  bool negative;
};

Reflected reflect(const ChebPoint& p) {
  require_finite(p.x);
  if (p.x < 0.0) return {-p.x, -p.x_plus_one, -p.x_minus_one, true};
  return {p.x, p.x_minus_one, p.x_plus_one, false};
}

// arccos |x| for |x| <= 1, from the distance 1 - |x|.
double trig_angle(const Reflected& r) { return 2.0 * std::asin(std::sqrt(-r.below * 0.5)); }

// arccosh |x| for |x| > 1.
double hyp_angle(const Reflected& r) {
  return std::log1p(r.below + std::sqrt(r.below * r.above));
}

// sqrt(x^2 - 1) for |x| > 1 without overflowing x^2.
double hyp_sinh(const Reflected& r) {
  if (r.ax > 1e150) {
    const double inv = 1.0 / r.ax;
    return r.ax * std::sqrt((1.0 - inv) * (1.0 + inv));
  }
  return std::sqrt(r.below * r.above);
}

// dq/dx at x = +1; dq/dx is even so the value also holds at x = -1.
double endpoint_dq(int n) {
  const double nn = n;
  return -nn * (2.0 * nn * nn + 1.0) / 3.0;
}

ChebRatio plain_ratio(int n, const ChebPoint& p) {
  const Reflected r = reflect(p);
  const double x2m1 = r.below * r.above;
  ChebRatio out{};

  if (r.below == 0.0) {
    out.q = n;
    out.t_sign = 1;
    out.log_abs_t = 0.0;
  } else if (r.below < 0.0) {
    const double theta = trig_angle(r);
    const double c = std::cos(n * theta);
    // Within rounding of n theta from a root, the sign of T_N is undetermined.
    if (std::abs(c) <= 4.0 * n * theta * std::numeric_limits<double>::epsilon()) {
      throw NumericError(ErrorCode::ZeroOfT, "x = " + std::to_string(p.x) + " is a root of T_" +
                                                 std::to_string(n));
    }
    out.q = std::sin(n * theta) / (std::sin(theta) * c);
    out.t_sign = c > 0.0 ? 1 : -1;
    out.log_abs_t = std::log(std::abs(c));
    out.dq_dx = n / (x2m1 * c * c) - out.q * r.ax / x2m1;
  } else {
    const double u = hyp_angle(r);
    const double sh = hyp_sinh(r);
    out.q = std::tanh(n * u) / sh;
    out.t_sign = 1;
    out.log_abs_t = log_cosh(n * u);
    const double inv_t2 = std::exp(-2.0 * out.log_abs_t);
    out.dq_dx = (n * inv_t2 / sh) / sh - (out.q * r.ax / sh) / sh;
  }

  const double nn = n;
  if (r.below == 0.0 || nn * nn * std::abs(x2m1) < kUnityWindow) {
    out.dq_dx = endpoint_dq(n);
    out.endpoint = true;
  }

  if (r.negative) {
    out.q = -out.q;
    if (n % 2 != 0) out.t_sign = -out.t_sign;
  }
  return out;
}

}  // namespace

ChebArg ChebArg::classify(double x) {
  if (std::abs(x) <= 1.0) return {x, ChebRegime::Trigonometric};
  return {x, x > 0.0 ? ChebRegime::Hyperbolic : ChebRegime::HyperbolicParity};
}

double cheb_T(int n, const ChebPoint& p) {
  if (n < 0) throw NumericError(ErrorCode::InvalidInput, "cheb_T requires n >= 0");
  const Reflected r = reflect(p);
  const double sign = r.negative ? parity(n) : 1.0;
  if (r.below == 0.0) return sign;
  if (r.below < 0.0) return sign * std::cos(n * trig_angle(r));
  return sign * std::cosh(n * hyp_angle(r));
}

double cheb_T(int n, double x) { return cheb_T(n, ChebPoint::from(x)); }

double cheb_U(int n, const ChebPoint& p) {
  if (n < -2) throw NumericError(ErrorCode::InvalidInput, "cheb_U requires n >= -2");
  require_finite(p.x);
  if (n == -1) return 0.0;
  if (n == -2) return -1.0;
  const Reflected r = reflect(p);
  const double sign = r.negative ? parity(n) : 1.0;
  if (r.below == 0.0) return sign * (n + 1.0);
  if (r.below < 0.0) {
    const double theta = trig_angle(r);
    return sign * std::sin((n + 1.0) * theta) / std::sin(theta);
  }
  return sign * std::sinh((n + 1.0) * hyp_angle(r)) / hyp_sinh(r);
}

double cheb_U(int n, double x) { return cheb_U(n, ChebPoint::from(x)); }

double cheb_ratio_q(int n, double x) { return cheb_ratio(n, ScaledArg{x}).q; }

double ScaledArg::value() const { return mantissa * std::exp(log_scale); }

ChebRatio cheb_ratio(int n, const ScaledArg& x) {
  if (n < 1) throw NumericError(ErrorCode::InvalidInput, "cheb_ratio requires N >= 1");
  require_finite(x.mantissa);
  if (!(x.log_scale >= 0.0) || !std::isfinite(x.log_scale)) {
    throw NumericError(ErrorCode::InvalidInput, "log_scale must be finite and >= 0");
  }

  const double s = x.log_scale;
  const double value = x.value();
  const bool moderate = std::isfinite(value) &&
                        (std::abs(value) <= 1.0 || (s <= 300.0 && std::abs(value) < 1e150));

  if (moderate) {
    const double e = std::exp(s);
    ChebPoint p = ChebPoint::from(value);
    if (x.minus_one) p.x_minus_one = *x.minus_one * e;
    if (x.plus_one) p.x_plus_one = *x.plus_one * e;
    ChebRatio r = plain_ratio(n, p);
    r.q *= e;
    r.dq_dx = (r.dq_dx * e) * e;
    return r;
  }

  // |x| >> 1: work with rr = sqrt(x^2 - 1) e^{-s} and u = arccosh|x| in log form.
  const double am = std::abs(x.mantissa);
  const double inv_scale = std::exp(-s);
  const double rr = am * std::sqrt((1.0 - inv_scale / am) * (1.0 + inv_scale / am));
  const double u = s + std::log(am + rr);

  ChebRatio r{};
  r.q = std::tanh(n * u) / rr;
  r.t_sign = 1;
  r.log_abs_t = log_cosh(n * u);
  const double inv_t2 = std::exp(-2.0 * r.log_abs_t);
  r.dq_dx = (n * inv_t2 / rr) / rr - (r.q * am / rr) / rr;
  if (x.mantissa < 0.0) {
    r.q = -r.q;
    if (n % 2 != 0) r.t_sign = -r.t_sign;
  }
  return r;
}

}  // namespace pttunnel
