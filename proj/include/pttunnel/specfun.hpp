#pragma once

// Chebyshev polynomials of the first and second kind on the whole real line.
//
// Values are produced from trigonometric (|x| <= 1) or hyperbolic (|x| > 1)
// closed forms rather than the three-term recurrence, and the ratio
// q = U_{N-1}/T_N is available in a scaled form that never builds the
// (possibly astronomically large) polynomial values themselves.

#include <optional>

namespace pttunnel {

enum class ChebRegime { Trigonometric, Hyperbolic, HyperbolicParity };

struct ChebArg {
  double x;
  ChebRegime regime;

  /// Ties at |x| = 1 go to the trigonometric regime.
  static ChebArg classify(double x);
};

/// Argument x with x - 1 and x + 1 carried separately. Near |x| = 1 the
/// angle arccos x (or arccosh |x|) is only as accurate as the distance to the
/// endpoint, so callers that know it better than `x - 1` should supply it.
struct ChebPoint {
  double x;
  double x_minus_one;
  double x_plus_one;

  static ChebPoint from(double x) { return {x, x - 1.0, x + 1.0}; }
};

/// Band around |x| = 1, measured as N^2 |x^2 - 1|, inside which the removable
/// (x^2 - 1) singularity of dq/dx is replaced by the exact endpoint value.
/// Endpoint error grows like N^2 |x^2 - 1| and cancellation error like
/// eps / (N^2 |x^2 - 1|); the two balance near sqrt(eps).
inline constexpr double kUnityWindow = 1e-8;

/// T_n(x), n >= 0.
double cheb_T(int n, double x);
double cheb_T(int n, const ChebPoint& x);

/// U_n(x), n >= -2, with U_{-1} = 0 and U_{-2} = -1.
double cheb_U(int n, double x);
double cheb_U(int n, const ChebPoint& x);

/// q = U_{N-1}(x) / T_N(x) for N >= 1. Throws ZeroOfT at roots of T_N.
double cheb_ratio_q(int n, double x);

/// Real number stored as mantissa * exp(log_scale), log_scale >= 0, with
/// optional (x - 1) e^{-s} and (x + 1) e^{-s} known to full accuracy.
struct ScaledArg {
  double mantissa;
  double log_scale = 0.0;
  std::optional<double> minus_one{};
  std::optional<double> plus_one{};

  double value() const;
};

/// Ratio q and its x-derivative for a scaled argument x = m * e^s.
///
/// `q` holds q * e^s and `dq_dx` holds (dq/dx) * e^{2s}, so that products
/// with quantities carrying a factor e^s stay O(1) deep in the hyperbolic
/// regime. With s = 0 they are the plain values.
struct ChebRatio {
  double q;
  double dq_dx;
  int t_sign;        // sign of T_N(x)
  double log_abs_t;  // log |T_N(x)|
  bool endpoint;     // dq_dx taken from the exact endpoint derivative
};

ChebRatio cheb_ratio(int n, const ScaledArg& x);

}  // namespace pttunnel
