#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace dampedmodes {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Axis-aligned rectangle in the complex frequency plane.
struct Rect {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  bool contains(cplx w) const {
    return w.real() >= re_min && w.real() <= re_max && w.imag() >= im_min && w.imag() <= im_max;
  }
  /// Euclidean distance from w to the rectangle (0 inside).
  double distance_to(cplx w) const {
    const double dx = std::max({re_min - w.real(), 0.0, w.real() - re_max});
    const double dy = std::max({im_min - w.imag(), 0.0, w.imag() - im_max});
    return std::hypot(dx, dy);
  }
};

struct Circle {
  cplx center{};
  double radius = 0.0;

  bool contains(cplx w) const { return std::abs(w - center) < radius; }
};

/// Closed real interval.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

}  // namespace dampedmodes
