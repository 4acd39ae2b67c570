#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "atspec/closed_form.hpp"
#include "atspec/errors.hpp"
#include "atspec/linkage.hpp"
#include "atspec/model.hpp"
#include "doctest.h"

using namespace atspec;

namespace {

constexpr double kPi = std::numbers::pi;

QuartupletParams quart(double o1, double o2, double m1, double m2,
                       double phase) {
  return QuartupletParams{o1, o2, m1, m2, phase, 1.0, 1.0};
}

QuintupletParams quint(double o1, double o2, double m1, double m2, double m3,
                       double phase) {
  return QuintupletParams{o1, o2, m1, m2, m3, phase, 1.0, 1.0};
}

}  // namespace

TEST_SUITE("closed_form") {

TEST_CASE("all-zero driving gives the bare Lorentzian peak") {
  // Numerator and denominator both vanish at 0; the numerator order is
  // lower, so the removable point evaluates to the ceiling 4 g^2/gamma^2.
  CHECK(spectrum_quartuplet(quart(0, 0, 0, 0, 0), 0.0) == 4.0);
  CHECK(spectrum_quartuplet(quart(0, 0, 0, 0, 0), 0.5) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(spectrum_doublet(0.0, 1.0, 1.0, 0.0) == 4.0);
}

TEST_CASE("equal-0.5 quartuplet hits its dark lines exactly") {
  const QuartupletParams p = quart(0.5, 0.5, 0.5, 0.5, 2 * kPi);
  CHECK(spectrum_quartuplet(p, 0.0) == 0.0);
  // sqrt(0.5) is not an exact root of the floating-point numerator, but the
  // residual is the square of a half-ulp cancellation.
  CHECK(spectrum_quartuplet(p, std::sqrt(0.5)) < 1e-20);
  CHECK(spectrum_quartuplet(p, -std::sqrt(0.5)) < 1e-20);
  // Frozen by the linear-solve and residue routes in the dressed suite.
  CHECK(spectrum_quartuplet(p, 0.35) ==
        doctest::Approx(3.7375405828566368).epsilon(1e-14));
}

TEST_CASE("dark line positions collapse and sort as documented") {
  const std::vector<double> three = dark_lines(quart(1, 1, 0.5, 0.5, 0.0));
  REQUIRE(three.size() == 3);
  CHECK(three[0] == -std::sqrt(0.5));
  CHECK(three[1] == 0.0);
  CHECK(three[2] == std::sqrt(0.5));

  // Both mediating fields off: the triple zero collapses to one entry.
  const std::vector<double> one = dark_lines(quart(1, 1, 0, 0, 0.0));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 0.0);

  const std::vector<double> four =
      dark_lines(quint(0.5, 0.5, 0.5, 0.5, 0.5, 0.0));
  REQUIRE(four.size() == 4);
  CHECK(std::abs(four[0] + 0.8090169943749475) < 1e-15);
  CHECK(std::abs(four[1] + 0.30901699437494745) < 1e-15);
  CHECK(std::abs(four[2] - 0.30901699437494745) < 1e-15);
  CHECK(std::abs(four[3] - 0.8090169943749475) < 1e-15);

  // m1 = m3 with m2 = 0 makes the quartic a perfect square; the coincident
  // pair collapses to two entries.
  const std::vector<double> two = dark_lines(quint(1, 1, 1, 0, 1, 0.0));
  REQUIRE(two.size() == 2);
  CHECK(two[0] == -1.0);
  CHECK(two[1] == 1.0);
}

TEST_CASE("dark_lines dispatches by linkage topology") {
  CHECK(dark_lines(preset("quartuplet", {1, 1, 1, 1}, 0.0)).size() == 3);
  CHECK(dark_lines(preset("quintuplet", {1, 1, 1, 1, 1}, 0.0)).size() == 4);
  CHECK_THROWS_AS(dark_lines(preset("doublet", {1.0}, 0.0)),
                  UnsupportedTopology);
}

TEST_CASE("peak height bound scales as 4 g^2 / gamma^2") {
  CHECK(peak_height_bound(1.0, 1.0) == 4.0);
  CHECK(peak_height_bound(2.0, 1.0) == 1.0);
  CHECK(peak_height_bound(1.0, 0.0) == 0.0);
}

TEST_CASE("doublet peaks reach the ceiling exactly at the split positions") {
  CHECK(spectrum_doublet(1.0, 1.0, 1.0, 1.0) == 4.0);
  CHECK(spectrum_doublet(1.0, 1.0, 1.0, -1.0) == 4.0);
  CHECK(spectrum_doublet(1.0, 1.0, 1.0, 0.0) == 0.0);
}

TEST_CASE("triplet chain keeps its dark pair and central bright line") {
  CHECK(spectrum_triplet(1.0, 0.5, 1.0, 1.0, 1.0, 0.5) == 0.0);
  CHECK(spectrum_triplet(1.0, 0.5, 1.0, 1.0, 1.0, -0.5) == 0.0);
  CHECK(spectrum_triplet(1.0, 1.0, 1.0, 1.0, 1.0, 0.0) == 4.0);
  // All fields off: removable point at 0 evaluates to the ceiling.
  CHECK(spectrum_triplet(0.0, 0.0, 0.0, 1.0, 1.0, 0.0) == 4.0);
}

TEST_CASE("vanishing-order ladder resolves exact 0/0 points") {
  // Numerator order above denominator order: dark.
  CHECK(spectrum_quartuplet(quart(1, 1, 0, 0, 0.0), 0.0) == 0.0);
  // Equal orders at an exactly representable root: the ratio limit.
  // o2 = m2 = 0 cuts the quintuplet to a triplet chain; at delta = m3 = 3
  // both integer-coefficient polynomials evaluate to exactly zero and the
  // shifted-series ratio reproduces the triplet value 25/150.25.
  const double ladder = spectrum_quintuplet(quint(1, 0, 2, 0, 3, 0.0), 3.0);
  const double direct = spectrum_triplet(1.0, 2.0, 0.0, 1.0, 1.0, 3.0);
  CHECK(direct == doctest::Approx(25.0 / 150.25).epsilon(1e-15));
  CHECK(ladder == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("quartuplet collapses to the doublet when the loop is cut") {
  const QuartupletParams cut = quart(0.7, 0, 0, 0, 0.0);
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double d = -3.0 + 6.0 * i / 2000.0;
    const double a = spectrum_quartuplet(cut, d);
    const double b = spectrum_doublet(0.7, 1.0, 1.0, d);
    const double scale = std::max(a, b);
    if (scale > 0.0) {
      worst = std::max(worst, std::abs(a - b) / scale);
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("quintuplet collapses to the quartuplet when the chain is cut") {
  const QuintupletParams cut = quint(0.7, 0, 0.9, 1.1, 0, 1.234);
  const QuartupletParams target = quart(0.7, 0, 0.9, 1.1, 1.234);
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double d = -3.0 + 6.0 * i / 2000.0;
    const double a = spectrum_quintuplet(cut, d);
    const double b = spectrum_quartuplet(target, d);
    const double scale = std::max(a, b);
    if (scale > 0.0) {
      worst = std::max(worst, std::abs(a - b) / scale);
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("quintuplet collapses to the triplet away from removable points") {
  // o2 = m2 = 0 leaves the chain e-g1-g3; at delta = +-m3 the quintic
  // forms are 0/0 and ill-conditioned nearby, and at the shared dark lines
  // +-m1 both spectra vanish so a ratio is pure roundoff. Both neighborhoods
  // are skipped with the same 1e-6 radius the oracle comparisons use.
  const QuintupletParams cut = quint(0.8, 0, 1.2, 0, 0.6, 0.0);
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double d = -3.0 + 6.0 * i / 2000.0;
    if (std::abs(std::abs(d) - 0.6) < 1e-6 ||
        std::abs(std::abs(d) - 1.2) < 1e-6) {
      continue;
    }
    const double a = spectrum_quintuplet(cut, d);
    const double b = spectrum_triplet(0.8, 1.2, 0.0, 1.0, 1.0, d);
    const double scale = std::max(a, b);
    if (scale > 0.0) {
      worst = std::max(worst, std::abs(a - b) / scale);
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("spectra are nonnegative and bounded by the ceiling") {
  std::mt19937 rng(424243);
  std::uniform_real_distribution<double> mag(0.0, 4.0);
  std::uniform_real_distribution<double> phase(0.0, 2 * kPi);
  std::uniform_real_distribution<double> detuning(-8.0, 8.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double d = detuning(rng);
    const double s4 = spectrum_quartuplet(
        quart(mag(rng), mag(rng), mag(rng), mag(rng), phase(rng)), d);
    const double s5 = spectrum_quintuplet(
        quint(mag(rng), mag(rng), mag(rng), mag(rng), mag(rng), phase(rng)),
        d);
    CHECK(s4 >= 0.0);
    CHECK(s5 >= 0.0);
    CHECK(s4 <= 4.0 + 1e-9);
    CHECK(s5 <= 4.0 + 1e-9);
  }
}

TEST_CASE("loop phase symmetries hold at machine precision") {
  std::mt19937 rng(7291);
  std::uniform_real_distribution<double> mag(0.1, 3.0);
  std::uniform_real_distribution<double> phase(-2 * kPi, 2 * kPi);
  std::uniform_real_distribution<double> detuning(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double o1 = mag(rng), o2 = mag(rng), m1 = mag(rng), m2 = mag(rng);
    const double m3 = mag(rng), ph = phase(rng), d = detuning(rng);

    // The quartuplet depends on the phase through sin(phase) only.
    const double a4 = spectrum_quartuplet(quart(o1, o2, m1, m2, ph), d);
    const double b4 = spectrum_quartuplet(quart(o1, o2, m1, m2, kPi - ph), d);
    const double scale4 = std::max(a4, b4);
    if (scale4 > 0.0) {
      CHECK(std::abs(a4 - b4) / scale4 < 1e-12);
    }

    // The quintuplet depends on it through cos(phase), which negation
    // preserves exactly in floating point.
    const double a5 = spectrum_quintuplet(quint(o1, o2, m1, m2, m3, ph), d);
    const double b5 = spectrum_quintuplet(quint(o1, o2, m1, m2, m3, -ph), d);
    CHECK(a5 == b5);

    // With the first optical field off the loop is broken and the phase
    // term carries a zero prefactor.
    const double c5 = spectrum_quintuplet(quint(0.0, o2, m1, m2, m3, ph), d);
    const double c5ref =
        spectrum_quintuplet(quint(0.0, o2, m1, m2, m3, 0.0), d);
    CHECK(c5 == c5ref);
    const double c4 = spectrum_quartuplet(quart(0.0, o2, m1, m2, ph), d);
    const double c4ref = spectrum_quartuplet(quart(0.0, o2, m1, m2, 0.0), d);
    CHECK(c4 == c4ref);

    // Both spectra are even in the detuning.
    CHECK(spectrum_quartuplet(quart(o1, o2, m1, m2, ph), -d) == a4);
    CHECK(spectrum_quintuplet(quint(o1, o2, m1, m2, m3, ph), -d) == a5);
  }
}

TEST_CASE("parameter extraction round-trips through the preset graphs") {
  const QuartupletParams p4 =
      quartuplet_params(preset("quartuplet", {1, 2, 3, 4}, 0.7));
  CHECK(p4.o1 == 1.0);
  CHECK(p4.o2 == 2.0);
  CHECK(p4.m1 == 3.0);
  CHECK(p4.m2 == 4.0);
  CHECK(std::abs(p4.phase - 0.7) < 1e-12);
  CHECK(p4.gamma == 1.0);

  const QuintupletParams p5 =
      quintuplet_params(preset("quintuplet", {5, 4, 3, 2, 1}, 1.9));
  CHECK(p5.o1 == 5.0);
  CHECK(p5.m3 == 1.0);
  CHECK(std::abs(p5.phase - 1.9) < 1e-12);
}

TEST_CASE("parameter validation rejects junk") {
  CHECK_THROWS_AS(validate(quart(-1, 1, 1, 1, 0.0)), InvalidParams);
  CHECK_THROWS_AS(validate(QuartupletParams{1, 1, 1, 1, 0.0, 0.0, 1.0}),
                  InvalidParams);
  CHECK_THROWS_AS(validate(quint(1, 1, 1, 1, 1, std::nan(""))), InvalidParams);
}

}  // TEST_SUITE("closed_form")
