#include "dampedmodes/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "dampedmodes/errors.hpp"

namespace dampedmodes {

// ---------------------------------------------------------------------------
// Bulk index and Zak phase
// ---------------------------------------------------------------------------

BulkIndex bulk_index(const DampedCell& cell, double mu0, Interval gap, GapEdge side, double parity_tol) {
  BulkIndex out;
  out.edge_omega = side == GapEdge::Lower ? gap.lo : gap.hi;
  const TransferMatrix t = cell_matrix(cell, out.edge_omega, mu0);
  const double f = t.trace().real();
  if (std::abs(std::abs(f) - 2.0) > 1e-6) {
    throw ParityAmbiguous("gap edge is not a band edge (|f| = " + std::to_string(std::abs(f)) + ")");
  }
  const double lambda = f > 0.0 ? 1.0 : -1.0;
  out.edge_kappa = f > 0.0 ? 0.0 : kPi;
  const CellState v = eigenvector(t, lambda);
  const double a = std::abs(v.u), b = std::abs(v.flux);
  if (b < parity_tol * a) {
    out.value = +1;
    out.evidence = b / a;
  } else if (a < parity_tol * b) {
    out.value = -1;
    out.evidence = a / b;
  } else {
    throw ParityAmbiguous("band-edge mode is neither symmetric nor antisymmetric (|V1| = " + std::to_string(a) +
                          ", |V2| = " + std::to_string(b) + ")");
  }
  return out;
}

Interval enclosing_gap(const DampedCell& cell, double mu0, double omega_inside, double scan_step) {
  auto excess = [&](double w) { return std::abs(discriminant(cell, w, mu0).real()) - 2.0; };
  if (excess(omega_inside) < 0.0) throw std::invalid_argument("enclosing_gap: frequency is inside a band");
  auto bisect = [&](double in_gap, double in_band) {
    for (int i = 0; i < 200 && std::abs(in_gap - in_band) > 1e-13; ++i) {
      const double mid = 0.5 * (in_gap + in_band);
      if (excess(mid) >= 0.0) {
        in_gap = mid;
      } else {
        in_band = mid;
      }
    }
    return 0.5 * (in_gap + in_band);
  };
  double lo = omega_inside;
  while (excess(lo - scan_step) >= 0.0) {
    lo -= scan_step;
    if (lo - scan_step <= 0.0) throw std::invalid_argument("enclosing_gap: gap reaches zero frequency");
  }
  double hi = omega_inside;
  int guard = 0;
  while (excess(hi + scan_step) >= 0.0) {
    hi += scan_step;
    if (++guard > 10000000) throw std::invalid_argument("enclosing_gap: unbounded gap");
  }
  return {bisect(lo, lo - scan_step), bisect(hi, hi + scan_step)};
}

double zak_phase_at_edge(const DampedCell& cell, double mu0, cplx edge_omega, double kappa_edge, double ratio_tol) {
  const cplx lambda(std::cos(kappa_edge), std::sin(kappa_edge));
  const TransferMatrix t = cell_matrix(cell, edge_omega, mu0);
  const CellState v = eigenvector(t, lambda);

  constexpr double offsets[] = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45};
  std::vector<std::pair<cplx, cplx>> pairs;  // (u(h), u(-h))
  double scale = 0.0;
  for (double h : offsets) {
    const cplx right = propagate_within_cell(cell, v, h, edge_omega, mu0).u;
    const cplx left = propagate_within_cell(cell, v, 1.0 - h, edge_omega, mu0).u / lambda;
    pairs.emplace_back(right, left);
    scale = std::max({scale, std::abs(right), std::abs(left)});
  }
  std::vector<cplx> ratios;
  for (const auto& [right, left] : pairs) {
    if (std::abs(right) > 1e-8 * scale) ratios.push_back(left / right);
  }
  if (ratios.size() < 2) throw RatioInconsistent("mode vanishes at too many sample offsets");
  const cplx ref = ratios.front();
  for (cplx r : ratios) {
    if (std::abs(r - ref) > ratio_tol * std::abs(ref)) {
      throw RatioInconsistent("u(-h)/u(h) depends on h: the mode is not an inversion eigenfunction");
    }
  }
  // Result in (-pi, pi]; a ratio of -1 with a roundoff-level imaginary part maps to +pi.
  const double phi = std::arg(ref);
  return phi <= -kPi ? kPi : phi;
}

bool predict_interface_mode(const DampedCell& cell_a, const DampedCell& cell_b, double mu0, Interval common_gap) {
  const double inside = common_gap.mid();
  const BulkIndex ja = bulk_index(cell_a, mu0, enclosing_gap(cell_a, mu0, inside), GapEdge::Lower);
  const BulkIndex jb = bulk_index(cell_b, mu0, enclosing_gap(cell_b, mu0, inside), GapEdge::Lower);
  return ja.value + jb.value == 0;
}

// ---------------------------------------------------------------------------
// Real axis
// ---------------------------------------------------------------------------

namespace {

void require_undamped(const DampedMedium& m, const char* who) {
  for (const DampedCell* c : {&m.cell_a, &m.cell_b}) {
    for (const auto& l : c->layers) {
      if (l.eps.imag() != 0.0) throw std::invalid_argument(std::string(who) + ": medium must be undamped");
    }
  }
}

cplx impedance_or_throw(const DampedMedium& m, cplx w) {
  const ImpedanceSample s = interface_impedance(m, w);
  if (s.has_pole()) throw PoleDetected("impedance pole");
  return s.z;
}

}  // namespace

RealAxisScan scan_real_axis(const DampedMedium& medium, Interval gap, int samples, double bracket_tol) {
  require_undamped(medium, "scan_real_axis");
  RealAxisScan out;
  out.samples = samples;
  struct Sample {
    double w;
    double z;
  };
  auto eval = [&](double w) -> std::optional<double> {
    const ImpedanceSample s = interface_impedance(medium, w);
    if (s.has_pole()) return std::nullopt;
    return s.z.real();
  };
  std::vector<Sample> pts;
  for (int i = 0; i < samples; ++i) {
    const double w = gap.lo + gap.width() * (i + 1) / (samples + 1);
    if (auto z = eval(w)) pts.push_back({w, *z});
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if ((pts[i].z < 0.0) == (pts[i + 1].z < 0.0)) continue;
    double lo = pts[i].w, hi = pts[i + 1].w;
    const bool lo_neg = pts[i].z < 0.0;
    bool pole = false;
    while (hi - lo > bracket_tol) {
      const double mid = 0.5 * (lo + hi);
      const auto z = eval(mid);
      if (!z) {
        pole = true;
        lo = hi = mid;
        break;
      }
      if ((*z < 0.0) == lo_neg) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double mid = 0.5 * (lo + hi);
    if (!pole) {
      const auto z = eval(mid);
      pole = !z || std::abs(*z) > 1.0;
    }
    (pole ? out.poles : out.roots).push_back(mid);
  }
  return out;
}

RootResult find_root_real(const DampedMedium& medium, Interval gap, double tol, int samples) {
  const RealAxisScan scan = scan_real_axis(medium, gap, samples);
  if (scan.roots.empty()) throw NoSignChange("interface impedance has no zero crossing in the gap");
  const double w0 = scan.roots.front();

  RootResult r;
  r.omega = w0;
  r.residual = std::abs(impedance_or_throw(medium, w0));
  if (r.residual >= tol) {
    RootResult polished = refine_root(medium, w0, tol, 20);
    r.omega = cplx(polished.omega.real(), 0.0);
    r.residual = std::abs(impedance_or_throw(medium, r.omega));
    r.iterations = polished.iterations;
  }
  if (r.residual >= tol) throw NoSignChange("bisected crossing does not reach the residual tolerance");
  r.delta = medium.delta;

  const double w = r.omega.real();
  const double half = 0.5 * std::min({w - gap.lo, gap.hi - w, 0.2 * gap.width()});
  const Rect box{w - half, w + half, -half, half};
  r.contour = box;
  try {
    r.winding = winding_number(medium, box);
  } catch (const Error&) {
    r.winding.reset();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Argument principle
// ---------------------------------------------------------------------------

namespace {

cplx contour_point(const Contour& c, double t) {
  if (const auto* circle = std::get_if<Circle>(&c)) {
    const double a = 2.0 * kPi * t;
    return circle->center + circle->radius * cplx(std::cos(a), std::sin(a));
  }
  const Rect& r = std::get<Rect>(c);
  const double w = r.width(), h = r.height();
  double s = t * 2.0 * (w + h);
  if (s <= w) return {r.re_min + s, r.im_min};
  s -= w;
  if (s <= h) return {r.re_max, r.im_min + s};
  s -= h;
  if (s <= w) return {r.re_max - s, r.im_max};
  s -= w;
  return {r.re_min, r.im_max - s};
}

cplx contour_value(const DampedMedium& m, cplx w) {
  const ImpedanceSample s = interface_impedance(m, w);
  if (s.has_pole()) throw PoleOnContour("impedance pole on the contour");
  if (s.z == 0.0) throw PhaseRefinementExhausted("impedance vanishes on the contour");
  return s.z;
}

}  // namespace

int winding_number(const DampedMedium& medium, const Contour& contour, int max_depth, int initial_samples) {
  if (initial_samples < 4) initial_samples = 4;
  struct Segment {
    double t0, t1;
    cplx z0, z1;
    int depth;
  };
  double total = 0.0;
  std::vector<Segment> stack;
  const cplx z_start = contour_value(medium, contour_point(contour, 0.0));
  cplx z_prev = z_start;
  for (int i = 1; i <= initial_samples; ++i) {
    const double t1 = static_cast<double>(i) / initial_samples;
    const cplx z1 = i == initial_samples ? z_start : contour_value(medium, contour_point(contour, t1));
    stack.push_back({static_cast<double>(i - 1) / initial_samples, t1, z_prev, z1, 0});
    z_prev = z1;
    while (!stack.empty()) {
      Segment s = stack.back();
      stack.pop_back();
      const double dphi = std::arg(s.z1 / s.z0);
      if (std::abs(dphi) < 0.5 * kPi) {
        total += dphi;
        continue;
      }
      if (s.depth >= max_depth) {
        throw PhaseRefinementExhausted("phase refinement exhausted; a zero is likely on or near the contour");
      }
      const double tm = 0.5 * (s.t0 + s.t1);
      const cplx zm = contour_value(medium, contour_point(contour, tm));
      // Right half first so the left half is processed next.
      stack.push_back({tm, s.t1, zm, s.z1, s.depth + 1});
      stack.push_back({s.t0, tm, s.z0, zm, s.depth + 1});
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

RootResult refine_root(const DampedMedium& medium, cplx omega0, double tol, int max_iter, std::optional<Rect> window) {
  RootResult r;
  r.delta = medium.delta;
  cplx w = omega0;
  cplx z;
  try {
    z = impedance_or_throw(medium, w);
    while (std::abs(z) >= tol && r.iterations < max_iter) {
      const double h = 1e-6 * std::max(1.0, std::abs(w));
      const cplx dz = (impedance_or_throw(medium, w + h) - impedance_or_throw(medium, w - h)) / (2.0 * h);
      if (dz == 0.0) break;
      const cplx step = z / dz;
      w -= step;
      ++r.iterations;
      if (window && !window->contains(w)) throw StepOutOfWindow("Newton iterate left the gap window");
      z = impedance_or_throw(medium, w);
      if (std::abs(step) < 1e-16 * std::abs(w)) break;
    }
  } catch (const BandCollision& e) {
    throw Diverged(std::string("Newton iterate left the common gap: ") + e.what());
  } catch (const PoleDetected& e) {
    throw Diverged(std::string("Newton iterate hit an impedance pole: ") + e.what());
  }
  if (!(std::abs(z) < tol)) {
    throw Diverged("Newton did not reach |Z| < tol within " + std::to_string(max_iter) + " iterations");
  }
  r.omega = w;
  r.residual = std::abs(z);
  const Circle c{w, std::max(4.0 * std::abs(w - omega0), 1e-6)};
  r.contour = c;
  try {
    r.winding = winding_number(medium, c);
  } catch (const Error&) {
    r.winding.reset();
  }
  return r;
}

namespace {

std::optional<int> robust_winding(const DampedMedium& m, Rect& rect) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    try {
      return winding_number(m, rect);
    } catch (const PhaseRefinementExhausted&) {
    } catch (const PoleOnContour&) {
    }
    // Nudge the contour off a near-boundary zero.
    const double dx = 1.37e-3 * rect.width(), dy = 1.37e-3 * rect.height();
    rect = {rect.re_min - dx, rect.re_max + dx, rect.im_min - dy, rect.im_max + dy};
  }
  return std::nullopt;
}

void search_roots(const DampedMedium& m, Rect rect, double tol, int depth, int max_depth,
                  std::vector<RootResult>& out) {
  const auto w = robust_winding(m, rect);
  if (!w) throw PhaseRefinementExhausted("cannot certify winding on a search rectangle");
  if (*w <= 0) return;
  if (*w == 1) {
    try {
      RootResult r = refine_root(m, rect.center(), tol, 50, rect);
      r.contour = rect;
      r.winding = 1;
      out.push_back(r);
      return;
    } catch (const Error&) {
    }
  }
  if (depth >= max_depth) {
    RootResult r = refine_root(m, rect.center(), tol, 50);
    out.push_back(r);
    return;
  }
  constexpr double kSplit = 0.5 + 0.0123;
  if (rect.width() >= rect.height()) {
    const double x = rect.re_min + kSplit * rect.width();
    search_roots(m, {rect.re_min, x, rect.im_min, rect.im_max}, tol, depth + 1, max_depth, out);
    search_roots(m, {x, rect.re_max, rect.im_min, rect.im_max}, tol, depth + 1, max_depth, out);
  } else {
    const double y = rect.im_min + kSplit * rect.height();
    search_roots(m, {rect.re_min, rect.re_max, rect.im_min, y}, tol, depth + 1, max_depth, out);
    search_roots(m, {rect.re_min, rect.re_max, y, rect.im_max}, tol, depth + 1, max_depth, out);
  }
}

}  // namespace

std::vector<RootResult> locate_roots(const DampedMedium& medium, const Rect& region, double tol, int max_depth) {
  std::vector<RootResult> out;
  search_roots(medium, region, tol, 0, max_depth, out);
  return out;
}

// ---------------------------------------------------------------------------
// Continuation
// ---------------------------------------------------------------------------

std::vector<ContinuationStep> continuation(const MediumFamily& family, const RootResult& start, double delta_target,
                                           double initial_step, double tol) {
  if (!(initial_step > 0.0)) throw std::invalid_argument("continuation: initial step must be positive");
  std::vector<ContinuationStep> trace;
  trace.push_back({start, true, 0.0});
  double delta = start.delta;
  const double dir = delta_target >= delta ? 1.0 : -1.0;
  cplx omega = start.omega;
  double step = initial_step;
  int successes = 0;
  while (dir * (delta_target - delta) > 0.0) {
    const double h = std::min(step, std::abs(delta_target - delta));
    const double next = std::abs(delta_target - delta) <= step ? delta_target : delta + dir * h;
    const DampedMedium m = family(next);
    bool ok = false;
    RootResult r;
    r.omega = omega;
    r.delta = next;
    try {
      r = refine_root(m, omega, tol, 50);
      ok = r.certified();
    } catch (const Error&) {
      ok = false;
    }
    trace.push_back({r, ok, h});
    if (ok) {
      delta = next;
      omega = r.omega;
      if (++successes >= 3) {
        step = std::min(initial_step, step * 1.5);
        successes = 0;
      }
    } else {
      step *= 0.5;
      successes = 0;
      if (step < kMinDampingStep) {
        throw StepUnderflow("damping step underflow; root tracking broke down", delta);
      }
    }
  }
  return trace;
}

std::vector<ContinuationStep> continuation(const InterfaceMedium& medium, const RootResult& start,
                                           double delta_target, double initial_step, double tol) {
  return continuation([&medium](double d) { return medium.damped(d); }, start, delta_target, initial_step, tol);
}

const RootResult& final_root(const std::vector<ContinuationStep>& trace) {
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    if (it->accepted) return it->root;
  }
  throw std::invalid_argument("final_root: trace has no accepted step");
}

// ---------------------------------------------------------------------------
// Rouche regions
// ---------------------------------------------------------------------------

double rouche_slack(const DampedMedium& medium_1, const DampedMedium& medium_2, cplx omega) {
  const ImpedanceSample s1 = interface_impedance(medium_1, omega);
  const ImpedanceSample s2 = interface_impedance(medium_2, omega);
  if (s1.has_pole() || s2.has_pole()) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(s2.z) - std::abs(s2.z - s1.z);
}

RoucheRegion rouche_classify(const DampedMedium& medium_1, const DampedMedium& medium_2, cplx omega,
                             double equality_tol) {
  const double slack = rouche_slack(medium_1, medium_2, omega);
  if (std::isnan(slack)) return RoucheRegion::Pole;
  return slack > equality_tol ? RoucheRegion::Certified : RoucheRegion::Violated;
}

cplx RoucheMap::omega_at(int i, int j) const {
  const double re = nx == 1 ? window.center().real() : window.re_min + window.width() * i / (nx - 1);
  const double im = ny == 1 ? window.center().imag() : window.im_min + window.height() * j / (ny - 1);
  return {re, im};
}

int RoucheMap::count(RoucheRegion r) const {
  return static_cast<int>(std::count(regions.begin(), regions.end(), r));
}

RoucheMap rouche_map(const DampedMedium& medium_1, const DampedMedium& medium_2, const Rect& window, int resolution,
                     double equality_tol) {
  if (resolution < 2) throw std::invalid_argument("rouche_map: resolution must be at least 2");
  RoucheMap map;
  map.window = window;
  map.nx = map.ny = resolution;
  map.equality_tol = equality_tol;
  map.medium_1 = medium_1;
  map.medium_2 = medium_2;
  map.regions.resize(static_cast<std::size_t>(resolution * resolution));
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      map.regions[static_cast<std::size_t>(j * resolution + i)] =
          rouche_classify(medium_1, medium_2, map.omega_at(i, j), equality_tol);
    }
  }
  map.roots_1 = locate_roots(medium_1, window);
  map.roots_2 = locate_roots(medium_2, window);
  return map;
}

std::optional<Circle> find_enclosing_contour(const RoucheMap& map, cplx omega1, cplx omega2, int samples, int radii) {
  const cplx center = 0.5 * (omega1 + omega2);
  const double half_gap = 0.5 * std::abs(omega1 - omega2);
  const Rect& w = map.window;
  const double r_max = std::min({center.real() - w.re_min, w.re_max - center.real(), center.imag() - w.im_min,
                                 w.im_max - center.imag()});
  if (!(r_max > half_gap)) return std::nullopt;
  const double r_min = std::max(1.05 * half_gap, 1e-3 * r_max);
  for (int k = 0; k < radii; ++k) {
    const double frac = radii == 1 ? 1.0 : static_cast<double>(k) / (radii - 1);
    const double r = r_min * std::pow(r_max / r_min, frac);
    if (!(r > half_gap)) continue;
    bool clear = true;
    for (int s = 0; s < samples && clear; ++s) {
      const double a = 2.0 * kPi * s / samples;
      const cplx p = center + r * cplx(std::cos(a), std::sin(a));
      clear = rouche_classify(map.medium_1, map.medium_2, p, map.equality_tol) == RoucheRegion::Certified;
    }
    if (clear) return Circle{center, r};
  }
  return std::nullopt;
}

}  // namespace dampedmodes
