#include "dampedmodes/medium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dampedmodes {

UnitCell UnitCell::reversed() const {
  UnitCell out{layers, label};
  std::reverse(out.layers.begin(), out.layers.end());
  return out;
}

double UnitCell::max_damping_coeff() const {
  double c = 0.0;
  for (const auto& l : layers) c = std::max(c, l.eps_im_coeff);
  return c;
}

const char* to_string(Violation v) {
  switch (v) {
    case Violation::Empty: return "empty";
    case Violation::WidthSum: return "width_sum";
    case Violation::NonPositiveWidth: return "non_positive_width";
    case Violation::NonPositiveEps: return "non_positive_eps";
    case Violation::NegativeDampingCoeff: return "negative_damping_coeff";
    case Violation::NotSymmetric: return "not_symmetric";
  }
  return "unknown";
}

bool ValidationReport::has(Violation v) const {
  return std::any_of(issues.begin(), issues.end(),
                     [v](const ValidationIssue& i) { return i.kind == v; });
}

ValidationReport validate_cell(const UnitCell& cell) {
  ValidationReport report;
  const auto& layers = cell.layers;
  if (layers.empty()) {
    report.issues.push_back({Violation::Empty, "cell has no layers"});
    return report;
  }

  double total = 0.0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    total += l.width;
    if (!(l.width > 0.0)) {
      std::ostringstream os;
      os << "layer " << i << " width " << l.width << " is not positive";
      report.issues.push_back({Violation::NonPositiveWidth, os.str()});
    }
    if (!(l.eps_re > 0.0)) {
      std::ostringstream os;
      os << "layer " << i << " eps_re " << l.eps_re << " is not positive";
      report.issues.push_back({Violation::NonPositiveEps, os.str()});
    }
    if (!(l.eps_im_coeff >= 0.0)) {
      std::ostringstream os;
      os << "layer " << i << " eps_im_coeff " << l.eps_im_coeff << " is negative";
      report.issues.push_back({Violation::NegativeDampingCoeff, os.str()});
    }
  }
  if (!(std::abs(total - 1.0) <= kGeometryTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "layer widths sum to " << total << ", expected 1";
    report.issues.push_back({Violation::WidthSum, os.str()});
  }

  const std::size_t n = layers.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const auto& a = layers[i];
    const auto& b = layers[n - 1 - i];
    if (std::abs(a.width - b.width) > kGeometryTol || std::abs(a.eps_re - b.eps_re) > kGeometryTol ||
        std::abs(a.eps_im_coeff - b.eps_im_coeff) > kGeometryTol) {
      std::ostringstream os;
      os << "layer " << i << " does not mirror layer " << (n - 1 - i);
      report.issues.push_back({Violation::NotSymmetric, os.str()});
      break;
    }
  }
  return report;
}

DampedCell with_damping(const UnitCell& cell, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("with_damping: delta must be nonnegative");
  DampedCell out;
  out.layers.reserve(cell.layers.size());
  for (const auto& l : cell.layers) {
    out.layers.push_back({cplx(l.eps_re, l.eps_im_coeff * delta), l.width});
  }
  return out;
}

DampedCell homogeneous_cell(cplx eps) { return DampedCell{{DampedLayer{eps, 1.0}}}; }

InterfaceMedium InterfaceMedium::at_delta(double d) const {
  InterfaceMedium m = *this;
  m.delta = d;
  return m;
}

DampedMedium InterfaceMedium::damped() const { return damped(delta); }

DampedMedium InterfaceMedium::damped(double d) const {
  return DampedMedium{with_damping(cell_a, d), with_damping(cell_b, d), mu0, d};
}

namespace {

cplx cell_permittivity(const UnitCell& cell, double local, double delta) {
  double start = 0.0;
  for (std::size_t i = 0; i + 1 < cell.layers.size(); ++i) {
    start += cell.layers[i].width;
    if (local < start) {
      const auto& l = cell.layers[i];
      return {l.eps_re, l.eps_im_coeff * delta};
    }
  }
  const auto& l = cell.layers.back();
  return {l.eps_re, l.eps_im_coeff * delta};
}

}  // namespace

cplx permittivity_at(const InterfaceMedium& medium, double x, double delta) {
  const double local = x - std::floor(x);
  return cell_permittivity(x < 0.0 ? medium.cell_a : medium.cell_b, local, delta);
}

InterfaceMedium reference_medium(double delta) {
  UnitCell a{{{1.0, 1.0, 0.25}, {4.0, 1.0, 0.5}, {1.0, 1.0, 0.25}}, "A"};
  UnitCell b{{{4.0, 1.0, 0.25}, {1.0, 1.0, 0.5}, {4.0, 1.0, 0.25}}, "B"};
  return InterfaceMedium{std::move(a), std::move(b), 1.0, delta};
}

}  // namespace dampedmodes
