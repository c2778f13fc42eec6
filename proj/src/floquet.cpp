#include "dampedmodes/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "dampedmodes/errors.hpp"

namespace dampedmodes {

double TransferMatrix::max_abs() const {
  return std::max({std::abs(t11), std::abs(t12), std::abs(t21), std::abs(t22)});
}

double TransferMatrix::max_abs_diff(const TransferMatrix& o) const {
  return std::max({std::abs(t11 - o.t11), std::abs(t12 - o.t12), std::abs(t21 - o.t21), std::abs(t22 - o.t22)});
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
  return {a.t11 * b.t11 + a.t12 * b.t21, a.t11 * b.t12 + a.t12 * b.t22, a.t21 * b.t11 + a.t22 * b.t21,
          a.t21 * b.t12 + a.t22 * b.t22};
}

TransferMatrix layer_matrix(cplx eps, double width, cplx omega, double mu0) {
  if (width == 0.0) return TransferMatrix::identity();
  const cplx k = omega * std::sqrt(mu0 * eps);
  const cplx kd = k * width;
  const cplx c = std::cos(kd);
  cplx sin_over_k;  // sin(kd)/k
  cplx k_sin;       // k sin(kd)
  if (std::abs(kd) < 1e-4) {
    const cplx kd2 = kd * kd;
    const cplx series = 1.0 - kd2 / 6.0 + kd2 * kd2 / 120.0;
    sin_over_k = width * series;
    k_sin = k * kd * series;
  } else {
    const cplx s = std::sin(kd);
    sin_over_k = s / k;
    k_sin = k * s;
  }
  return {c, eps * sin_over_k, -k_sin / eps, c};
}

TransferMatrix cell_matrix(const DampedCell& cell, cplx omega, double mu0) {
  TransferMatrix t;
  for (const auto& layer : cell.layers) t = layer_matrix(layer, omega, mu0) * t;
  return t;
}

CellState propagate_within_cell(const DampedCell& cell, const CellState& start, double local_x, cplx omega,
                                double mu0) {
  CellState s = start;
  double pos = 0.0;
  for (const auto& layer : cell.layers) {
    if (local_x <= pos + layer.width) {
      return layer_matrix(layer.eps, std::max(0.0, local_x - pos), omega, mu0)(s);
    }
    s = layer_matrix(layer, omega, mu0)(s);
    pos += layer.width;
  }
  return s;
}

cplx discriminant(const DampedCell& cell, cplx omega, double mu0) {
  return cell_matrix(cell, omega, mu0).trace();
}

Classification classify_point(const DampedCell& cell, cplx omega, double mu0, double tol_im, double tol_mag) {
  Classification c;
  c.f = discriminant(cell, omega, mu0);
  c.tol_im = tol_im;
  c.tol_mag = tol_mag;
  const bool band = std::abs(c.f.imag()) <= tol_im && std::abs(c.f) <= 2.0 - tol_mag;
  c.kind = band ? SpectralClass::Band : SpectralClass::Gap;
  return c;
}

CellState normalized(const CellState& v) {
  const double n = v.norm();
  if (n == 0.0) return v;
  CellState out = (1.0 / n) * v;
  const cplx lead = std::abs(out.u) > 1e-14 ? out.u : out.flux;
  if (std::abs(lead) > 0.0) out = (std::abs(lead) / lead) * out;
  return out;
}

CellState eigenvector(const TransferMatrix& t, cplx lambda) {
  const cplx a = t.t11 - lambda, b = t.t12;
  const cplx c = t.t21, d = t.t22 - lambda;
  const double row1 = std::hypot(std::abs(a), std::abs(b));
  const double row2 = std::hypot(std::abs(c), std::abs(d));
  if (row1 == 0.0 && row2 == 0.0) return {1.0, 0.0};
  if (row1 >= row2) return normalized({-b, a});
  return normalized({-d, c});
}

EigenSplit stable_eigenpair(const TransferMatrix& t, double margin) {
  const cplx tr = t.trace();
  cplx s = std::sqrt(tr * tr - 4.0);
  // Pick the root of larger magnitude first; the small one follows from det = 1.
  if (std::real(std::conj(tr) * s) < 0.0) s = -s;
  const cplx big = 0.5 * (tr + s);
  const cplx small = 1.0 / big;
  if (std::abs(small) > 1.0 - margin) {
    throw BandCollision("eigenvalues within margin of the unit circle (|lambda_in| = " +
                        std::to_string(std::abs(small)) + ")");
  }
  EigenSplit e;
  e.lambda_in = small;
  e.lambda_out = big;
  e.v_in = eigenvector(t, small);
  e.v_out = eigenvector(t, big);
  return e;
}

std::vector<Interval> real_gaps(const DampedCell& cell, double mu0, double omega_max, double scan_step) {
  for (const auto& l : cell.layers) {
    if (l.eps.imag() != 0.0) throw std::invalid_argument("real_gaps: cell must be undamped");
  }
  if (!(scan_step > 0.0) || !(omega_max > 0.0)) throw std::invalid_argument("real_gaps: bad scan range");

  auto excess = [&](double w) { return std::abs(discriminant(cell, w, mu0).real()) - 2.0; };
  auto refine = [&](double lo, double hi) {
    const bool lo_gap = excess(lo) >= 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
      const double mid = 0.5 * (lo + hi);
      if ((excess(mid) >= 0.0) == lo_gap) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  std::vector<Interval> gaps;
  const auto n = static_cast<long>(std::ceil(omega_max / scan_step));
  double prev_w = 0.0;
  bool in_gap = false;  // f(0) = 2 and |f| < 2 just above zero
  double gap_start = 0.0;
  for (long i = 1; i <= n; ++i) {
    const double w = std::min(static_cast<double>(i) * scan_step, omega_max);
    const bool gap = excess(w) >= 0.0;
    if (gap && !in_gap) {
      gap_start = refine(prev_w, w);
      in_gap = true;
    } else if (!gap && in_gap) {
      gaps.push_back({gap_start, refine(prev_w, w)});
      in_gap = false;
    }
    prev_w = w;
  }
  if (in_gap) gaps.push_back({gap_start, omega_max});
  return gaps;
}

std::vector<Interval> intersect_gaps(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      const double lo = std::max(x.lo, y.lo);
      const double hi = std::min(x.hi, y.hi);
      if (hi > lo) out.push_back({lo, hi});
    }
  }
  std::sort(out.begin(), out.end(), [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
  return out;
}

namespace {

/// Newton solve of f(omega) = target. Returns nullopt if the residual does not
/// reach kBandResidualTol or the iterate moves farther than max_jump.
std::optional<cplx> solve_discriminant(const DampedCell& cell, double mu0, cplx target, cplx guess,
                                       double max_jump) {
  cplx w = guess;
  cplx g = discriminant(cell, w, mu0) - target;
  for (int it = 0; it < 80; ++it) {
    if (std::abs(g) < 1e-14) break;
    const double h = 1e-6 * std::max(1.0, std::abs(w));
    const cplx dg = (discriminant(cell, w + h, mu0) - discriminant(cell, w - h, mu0)) / (2.0 * h);
    if (dg == 0.0) break;
    const cplx step = g / dg;
    w -= step;
    g = discriminant(cell, w, mu0) - target;
    if (std::abs(w - guess) > max_jump) return std::nullopt;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(w))) break;
  }
  if (!(std::abs(g) < kBandResidualTol)) return std::nullopt;
  return w;
}

/// Walks omega along kappa from (k0, w0) to k1 on an undamped cell.
cplx track_kappa(const DampedCell& cell, double mu0, double k0, cplx w0, double k1) {
  constexpr double kMaxStep = 0.05;
  double k = k0;
  cplx w = w0;
  double step = kMaxStep;
  while (k != k1) {
    const double dir = k1 > k ? 1.0 : -1.0;
    const double next = std::abs(k1 - k) <= step ? k1 : k + dir * step;
    auto sol = solve_discriminant(cell, mu0, 2.0 * std::cos(next), w, 0.5);
    if (sol) {
      k = next;
      w = *sol;
      step = std::min(kMaxStep, step * 1.5);
    } else {
      step *= 0.5;
      if (step < 1e-10) throw ContinuationBreakdown("band continuation in kappa failed", k, w);
    }
  }
  return w;
}

/// Continues a solution of f(omega; delta) = 2 cos(kappa) from damping 0 to delta.
cplx track_damping(const UnitCell& cell, double mu0, double kappa, cplx w0, double delta) {
  const double initial = std::min(0.05, delta);
  double d = 0.0;
  double step = initial;
  int successes = 0;
  cplx w = w0;
  const cplx target = 2.0 * std::cos(kappa);
  while (d < delta) {
    const double next = std::min(delta, d + step);
    const DampedCell damped = with_damping(cell, next);
    auto sol = solve_discriminant(damped, mu0, target, w, 0.1 * std::max(1.0, std::abs(w)));
    if (sol) {
      d = next;
      w = *sol;
      if (++successes >= 3) {
        step = std::min(initial, step * 1.5);
        successes = 0;
      }
    } else {
      step *= 0.5;
      successes = 0;
      if (step < 1e-8) throw ContinuationBreakdown("band continuation in damping failed", kappa, w);
    }
  }
  return w;
}

}  // namespace

std::vector<BandCurve> band_curves(const UnitCell& cell, double mu0, double delta, std::span<const double> kappa_grid,
                                   double omega_max, double seed_scan_step) {
  for (double k : kappa_grid) {
    if (!(k >= 0.0 && k <= kPi)) throw std::invalid_argument("band_curves: kappa outside [0, pi]");
  }
  if (!(delta >= 0.0)) throw std::invalid_argument("band_curves: delta must be nonnegative");
  const DampedCell undamped = with_damping(cell, 0.0);

  // One crossing of f = 0 per band (kappa = pi/2).
  std::vector<double> seeds;
  auto fr = [&](double w) { return discriminant(undamped, w, mu0).real(); };
  double prev_w = seed_scan_step, prev_f = fr(prev_w);
  const auto n = static_cast<long>(std::ceil(omega_max / seed_scan_step));
  for (long i = 2; i <= n; ++i) {
    const double w = std::min(static_cast<double>(i) * seed_scan_step, omega_max);
    const double fw = fr(w);
    if ((prev_f < 0.0) != (fw < 0.0)) {
      double lo = prev_w, hi = w;
      const bool lo_neg = prev_f < 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((fr(mid) < 0.0) == lo_neg) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      seeds.push_back(0.5 * (lo + hi));
    }
    prev_w = w;
    prev_f = fw;
  }

  std::vector<BandCurve> curves;
  const double mid_kappa = 0.5 * kPi;
  for (std::size_t b = 0; b < seeds.size(); ++b) {
    BandCurve curve;
    curve.band_index = static_cast<int>(b);
    curve.delta = delta;
    bool complete = true;
    // Both band ends must lie inside the scanned range.
    for (double edge : {0.0, kPi}) {
      const cplx we = track_kappa(undamped, mu0, mid_kappa, seeds[b], edge);
      if (we.real() > omega_max) complete = false;
    }
    if (!complete) continue;
    for (double k : kappa_grid) {
      cplx w = track_kappa(undamped, mu0, mid_kappa, seeds[b], k);
      if (delta > 0.0) w = track_damping(cell, mu0, k, w, delta);
      curve.points.push_back({k, w});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<cplx> detect_band_points(const DampedCell& cell, double mu0, const Rect& region, int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("detect_band_points: grid needs at least 2x2 points");
  std::vector<cplx> pts(static_cast<std::size_t>(nx * ny));
  std::vector<cplx> fs(pts.size());
  auto idx = [nx](int i, int j) { return static_cast<std::size_t>(j * nx + i); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const cplx w(region.re_min + region.width() * i / (nx - 1), region.im_min + region.height() * j / (ny - 1));
      pts[idx(i, j)] = w;
      fs[idx(i, j)] = discriminant(cell, w, mu0);
    }
  }

  std::vector<cplx> band;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (std::abs(fs[k].imag()) <= kBandTolIm && std::abs(fs[k]) <= 2.0 - kBandTolMag) band.push_back(pts[k]);
  }
  auto edge = [&](std::size_t p, std::size_t q) {
    const double a = fs[p].imag(), b = fs[q].imag();
    if (!(a * b < 0.0)) return;
    cplx lo = pts[p], hi = pts[q];
    double flo = a;
    for (int it = 0; it < 60; ++it) {
      const cplx mid = 0.5 * (lo + hi);
      const double fm = discriminant(cell, mid, mu0).imag();
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    const cplx w = 0.5 * (lo + hi);
    if (classify_point(cell, w, mu0).is_band()) band.push_back(w);
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (i + 1 < nx) edge(idx(i, j), idx(i + 1, j));
      if (j + 1 < ny) edge(idx(i, j), idx(i, j + 1));
    }
  }
  return band;
}

GapWindow common_gap_window(const UnitCell& cell_a, const UnitCell& cell_b, double mu0, double delta, Interval seed,
                            double im_halfwidth, int density, double inset_fraction) {
  if (!(seed.hi > seed.lo) || !(im_halfwidth > 0.0) || density < 2) {
    throw std::invalid_argument("common_gap_window: bad seed interval, half-width or density");
  }
  const double inset = inset_fraction * seed.width();
  GapWindow win;
  win.rect = {seed.lo + inset, seed.hi - inset, -im_halfwidth, im_halfwidth};
  win.density = density;
  win.delta = delta;

  const double pad_x = 0.5 * win.rect.width();
  const double pad_y = 0.5 * win.rect.height();
  const Rect search{win.rect.re_min - pad_x, win.rect.re_max + pad_x, win.rect.im_min - pad_y,
                    win.rect.im_max + pad_y};
  const int n = 2 * density;
  // Band points are only located to within one search cell, so the margin is
  // reduced by the cell diagonal to stay a lower bound.
  const double cell_diag = std::hypot(search.width() / (n - 1), search.height() / (n - 1));
  double margin = std::min(pad_x, pad_y);
  for (const UnitCell* cell : {&cell_a, &cell_b}) {
    const DampedCell damped = with_damping(*cell, delta);
    for (int j = 0; j < density; ++j) {
      for (int i = 0; i < density; ++i) {
        const cplx w{win.rect.re_min + win.rect.width() * i / (density - 1),
                     win.rect.im_min + win.rect.height() * j / (density - 1)};
        if (classify_point(damped, w, mu0).is_band()) {
          throw WindowInvaded("grid point of the gap window lies in a band of cell " + cell->label, w);
        }
      }
    }
    for (cplx p : detect_band_points(damped, mu0, search, n, n)) {
      if (win.rect.contains(p)) {
        throw WindowInvaded("band point of cell " + cell->label + " inside the gap window", p);
      }
      margin = std::min(margin, win.rect.distance_to(p) - cell_diag);
    }
  }
  margin = std::max(margin, 0.0);
  win.margin = margin;
  return win;
}

}  // namespace dampedmodes
