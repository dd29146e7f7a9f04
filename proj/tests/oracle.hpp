#pragma once

// Reference values computed independently of the library: Boost tanh-sinh
// quadrature on the defining integrals and 50-digit Gamma.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <functional>

namespace oracle {

using Fn = std::function<double(double)>;

inline double gamma(double z) {
  using boost::multiprecision::cpp_bin_float_50;
  return static_cast<double>(boost::math::tgamma(cpp_bin_float_50(z)));
}

// Integral of w(d) * f(t) over (lo, hi) where d = x - t (left) or t - x
// (right) is the distance to the kernel's singular endpoint.
inline double kernel_integral(const Fn &f, double lo, double hi, double x,
                              double power, bool left) {
  if (hi <= lo)
    return 0.0;
  boost::math::quadrature::tanh_sinh<double> q;
  auto integrand = [&](double t, double tc) {
    // tc is the signed distance to the nearer endpoint.
    double d;
    if (left)
      d = tc > 0 ? tc : x - t;
    else
      d = tc < 0 ? -tc : t - x;
    return std::pow(d, power) * f(t);
  };
  return q.integrate(integrand, lo, hi);
}

// (1/Gamma(a)) int_lo^x (x - t)^{a-1} f(t) dt
inline double left_rl_integral(const Fn &f, double lo, double x, double a) {
  return kernel_integral(f, lo, x, x, a - 1.0, true) / gamma(a);
}

// (1/Gamma(a)) int_x^hi (t - x)^{a-1} f(t) dt
inline double right_rl_integral(const Fn &f, double x, double hi, double a) {
  return kernel_integral(f, x, hi, x, a - 1.0, false) / gamma(a);
}

// Caputo of order a in (0, 1) from the derivative df.
inline double left_caputo(const Fn &df, double lo, double x, double a) {
  return kernel_integral(df, lo, x, x, -a, true) / gamma(1.0 - a);
}

inline double right_caputo(const Fn &df, double x, double hi, double a) {
  return -kernel_integral(df, x, hi, x, -a, false) / gamma(1.0 - a);
}

// Plain definite integral.
inline double integral(const Fn &f, double lo, double hi) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, lo, hi);
}

} // namespace oracle
