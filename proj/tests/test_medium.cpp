#include <doctest.h>

#include <cmath>

#include "dampedmodes/config.hpp"
#include "dampedmodes/errors.hpp"
#include "dampedmodes/medium.hpp"

using namespace dampedmodes;

TEST_CASE("palindromic unit-width cell is valid") {
  const UnitCell c{{{1, 1, 0.25}, {4, 1, 0.5}, {1, 1, 0.25}}, "A"};
  CHECK(validate_cell(c).ok());
}

TEST_CASE("width sum violation is reported") {
  const UnitCell c{{{1, 1, 0.3}, {4, 1, 0.5}, {1, 1, 0.3}}, "A"};
  const auto r = validate_cell(c);
  CHECK(r.has(Violation::WidthSum));
  CHECK_FALSE(r.has(Violation::NotSymmetric));
}

TEST_CASE("non-palindromic cell is reported") {
  const UnitCell c{{{1, 1, 0.5}, {4, 1, 0.5}}, "A"};
  const auto r = validate_cell(c);
  CHECK(r.has(Violation::NotSymmetric));
  CHECK_FALSE(r.has(Violation::WidthSum));
}

TEST_CASE("positivity violations") {
  CHECK(validate_cell(UnitCell{{}, "A"}).has(Violation::Empty));
  CHECK(validate_cell(UnitCell{{{-1, 0, 1.0}}, "A"}).has(Violation::NonPositiveEps));
  CHECK(validate_cell(UnitCell{{{1, -1, 1.0}}, "A"}).has(Violation::NegativeDampingCoeff));
  CHECK(validate_cell(UnitCell{{{1, 0, 0.5}, {2, 0, 0.0}, {1, 0, 0.5}}, "A"}).has(Violation::NonPositiveWidth));
}

TEST_CASE("symmetry check is symmetric under reversal") {
  const std::vector<UnitCell> cells{
      {{{1, 1, 0.25}, {4, 1, 0.5}, {1, 1, 0.25}}, "x"},
      {{{1, 1, 0.5}, {4, 1, 0.5}}, "x"},
      {{{2, 0, 0.2}, {3, 1, 0.3}, {2, 0.5, 0.5}}, "x"},
      {{{1, 0, 0.1}, {5, 0, 0.8}, {1, 0, 0.1}}, "x"},
  };
  for (const auto& c : cells) CHECK(validate_cell(c).ok() == validate_cell(c.reversed()).ok());
}

TEST_CASE("symmetry is checked on every field within 1e-12") {
  CHECK(validate_cell(UnitCell{{{1, 1, 0.25}, {4, 1, 0.5}, {1, 2, 0.25}}, "x"}).has(Violation::NotSymmetric));
  CHECK(validate_cell(UnitCell{{{1, 1, 0.25}, {4, 1, 0.5}, {1 + 1e-9, 1, 0.25}}, "x"}).has(Violation::NotSymmetric));
  CHECK(validate_cell(UnitCell{{{1, 1, 0.25}, {4, 1, 0.5}, {1 + 1e-14, 1, 0.25}}, "x"}).ok());
}

TEST_CASE("permittivity lookup on the reference medium") {
  const InterfaceMedium ref = reference_medium();
  CHECK(permittivity_at(ref, 0.1, 0.0) == cplx(4.0, 0.0));
  CHECK(permittivity_at(ref, 0.1, 0.5) == cplx(4.0, 0.5));
  CHECK(permittivity_at(ref, -0.5, 0.0) == permittivity_at(ref, -1.5, 0.0));
  CHECK(permittivity_at(ref, -0.5, 0.0) == cplx(4.0, 0.0));
  CHECK(permittivity_at(ref, -0.1, 0.0) == cplx(1.0, 0.0));
}

TEST_CASE("permittivity is right-continuous at layer boundaries") {
  const InterfaceMedium ref = reference_medium();
  CHECK(permittivity_at(ref, 0.0, 0.0) == cplx(4.0, 0.0));   // x0 belongs to B
  CHECK(permittivity_at(ref, 0.25, 0.0) == cplx(1.0, 0.0));  // second layer of B starts here
  CHECK(permittivity_at(ref, -0.75, 0.0) == cplx(4.0, 0.0));
  CHECK(permittivity_at(ref, -1.0, 0.0) == cplx(1.0, 0.0));
}

TEST_CASE("permittivity is exactly 1-periodic on each half-line") {
  const InterfaceMedium ref = reference_medium();
  for (int i = 0; i < 200; ++i) {
    const double x = 0.0123 + 0.037 * i;
    CHECK(permittivity_at(ref, x + 1.0, 0.3) == permittivity_at(ref, x, 0.3));
    CHECK(permittivity_at(ref, -1.0 - x, 0.3) == permittivity_at(ref, -2.0 - x, 0.3));
  }
}

TEST_CASE("damping scales the imaginary parts linearly") {
  const UnitCell c{{{1, 1, 0.25}, {4, 1, 0.5}, {1, 2, 0.25}}, "x"};
  CHECK(with_damping(c, 0.0).layers[0].eps == cplx(1.0, 0.0));
  CHECK(with_damping(c, 0.429).layers[1].eps == cplx(4.0, 0.429));
  CHECK(std::abs(with_damping(c, 0.1).layers[2].eps - cplx(1.0, 0.2)) < 1e-15);
  CHECK_THROWS_AS(with_damping(c, -0.1), std::invalid_argument);
}

TEST_CASE("supremum of the imaginary part is delta times the largest coefficient") {
  InterfaceMedium m = reference_medium();
  m.cell_b.layers[1].eps_im_coeff = 3.0;
  for (double delta : {0.0, 1e-6, 0.1, 1.2}) {
    double sup = 0.0;
    for (int i = -400; i < 400; ++i) sup = std::max(sup, permittivity_at(m, i / 200.0 + 1e-3, delta).imag());
    CHECK(sup == doctest::Approx(3.0 * delta));
  }
  CHECK(m.cell_b.max_damping_coeff() == 3.0);
}

TEST_CASE("undamped medium has real permittivity everywhere") {
  const InterfaceMedium ref = reference_medium(0.0);
  for (int i = -300; i < 300; ++i) CHECK(permittivity_at(ref, i / 97.0, 0.0).imag() == 0.0);
  const DampedMedium d = ref.damped();
  for (const auto* c : {&d.cell_a, &d.cell_b}) {
    for (const auto& l : c->layers) CHECK(l.eps.imag() == 0.0);
  }
}

TEST_CASE("configuration parsing") {
  const nlohmann::json good = nlohmann::json::parse(R"({
    "mu0": 2.0,
    "cell_A": {"layers": [{"eps_re": 1, "eps_im_coeff": 1, "width": 1}]},
    "cell_B": {"layers": [{"eps_re": 3, "eps_im_coeff": 0, "width": 1}]},
    "delta": 0.25
  })");
  const InterfaceMedium m = medium_from_json(good);
  CHECK(m.mu0 == 2.0);
  CHECK(m.delta == 0.25);
  CHECK(m.cell_a.layers.size() == 1);
  CHECK(m.cell_b.layers[0].eps_re == 3.0);
  CHECK(medium_from_json(to_json(m)).cell_b.layers == m.cell_b.layers);

  nlohmann::json extra = good;
  extra["colour"] = "red";
  CHECK_THROWS_AS(medium_from_json(extra), ConfigError);
  nlohmann::json extra_layer = good;
  extra_layer["cell_A"]["layers"][0]["height"] = 1;
  CHECK_THROWS_AS(medium_from_json(extra_layer), ConfigError);
  nlohmann::json missing = good;
  missing.erase("cell_B");
  CHECK_THROWS_AS(medium_from_json(missing), ConfigError);
  nlohmann::json bad_mu = good;
  bad_mu["mu0"] = 0.0;
  CHECK_THROWS_AS(medium_from_json(bad_mu), ConfigError);
  nlohmann::json bad_delta = good;
  bad_delta["delta"] = -1.0;
  CHECK_THROWS_AS(medium_from_json(bad_delta), ConfigError);
  nlohmann::json not_number = good;
  not_number["cell_A"]["layers"][0]["width"] = "one";
  CHECK_THROWS_AS(medium_from_json(not_number), ConfigError);
}

TEST_CASE("reference configuration file matches the built-in reference medium") {
  const InterfaceMedium m = load_medium(DAMPEDMODES_TEST_DATA "/ref.json");
  const InterfaceMedium ref = reference_medium();
  CHECK(m.cell_a.layers == ref.cell_a.layers);
  CHECK(m.cell_b.layers == ref.cell_b.layers);
  CHECK(m.mu0 == ref.mu0);
  CHECK_THROWS_AS(load_medium(DAMPEDMODES_TEST_DATA "/does_not_exist.json"), ConfigError);
}
