#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bic1d/error.hpp"
#include "bic1d/specfun.hpp"
#include "reference_values.hpp"

using namespace bic1d;
using namespace bic1d::specfun;
using std::numbers::pi;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected bic1d::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("gamma real axis") {
  CHECK(specfun::gamma(5.0).value == doctest::Approx(24.0).epsilon(1e-15));
  CHECK(rel(specfun::gamma(0.5).value, std::sqrt(pi)) < 1e-14);
  for (const auto& row : ref::kGammaReal) {
    const RealResult g = specfun::gamma(row[0]);
    CAPTURE(row[0]);
    CHECK(rel(g.value, row[1]) < 1e-13);
    CHECK(g.abs_err >= 0.0);
  }
}

TEST_CASE("gamma complex") {
  const cplx cases[][2] = {{{2.5, 1.0}, ref::kGamma_2p5_1i},
                           {{-3.7, 2.0}, ref::kGamma_m3p7_2i},
                           {{12.0, -25.0}, ref::kGamma_12_m25i}};
  for (const auto& c : cases) {
    CAPTURE(c[0]);
    CHECK(std::abs(specfun::gamma(c[0]).value - c[1]) / std::abs(c[1]) < 1e-10);
  }
  // real-axis consistency
  CHECK(std::abs(specfun::gamma(cplx{7.25, 0.0}).value - 1155.3810139199896872) < 1e-9);
}

TEST_CASE("gamma errors") {
  CHECK(kind_of([] { specfun::gamma(0.0); }) == ErrorKind::Pole);
  CHECK(kind_of([] { specfun::gamma(-3.0); }) == ErrorKind::Pole);
  CHECK(kind_of([] { specfun::gamma(cplx{-2.0, 0.0}); }) == ErrorKind::Pole);
  CHECK(kind_of([] { specfun::gamma(200.0); }) == ErrorKind::Overflow);
  CHECK(rgamma(-4.0) == 0.0);
}

TEST_CASE("bessel_j reference values") {
  for (const auto& row : ref::kBesselJ) {
    CAPTURE(row[0]);
    CAPTURE(row[1]);
    const RealResult j = bessel_j(row[0], row[1]);
    CHECK(std::abs(j.value - row[2]) < 1e-10);
    CHECK(std::abs(j.value - row[2]) <= std::max(j.abs_err, 1e-15) * 4.0);
    CHECK(std::abs(bessel_j_prime(row[0], row[1]).value - row[3]) < 1e-10);
  }
}

TEST_CASE("bessel_j trivial points") {
  CHECK(bessel_j(0.0, 1e-300).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(bessel_j(0.5, pi / 2).value - 2.0 / pi) < 1e-14);
  // J'_0 = -J_1
  for (double z : {0.3, 4.0, 17.0, 55.0, 900.0}) {
    CHECK(std::abs(bessel_j_prime(0.0, z).value + bessel_j(1.0, z).value) < 1e-13);
  }
  // d/dz [sqrt(2/(pi z)) sin z] at pi/2 = -1/(pi z) sqrt(2/(pi z)) ... evaluated exactly
  const double z = pi / 2;
  const double want = std::sqrt(2.0 / (pi * z)) * (std::cos(z) - std::sin(z) / (2.0 * z));
  CHECK(std::abs(bessel_j_prime(0.5, z).value - want) < 1e-13);
  // near the first even BIC condition
  CHECK(std::abs(bessel_j_prime(5.6026, 7.0711).value) < 1e-3);
}

TEST_CASE("bessel_j domain errors") {
  CHECK(kind_of([] { bessel_j(1.0, 0.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { bessel_j(1.0, -2.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { bessel_j(51.5, 2.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("half-integer closed forms") {
  for (double z : {0.05, 0.7, 3.0, 9.5, 10.5, 28.0, 44.0, 150.0, 2500.0}) {
    CAPTURE(z);
    const double s = std::sin(z), c = std::cos(z), f = std::sqrt(2.0 / (pi * z));
    CHECK(std::abs(bessel_j(0.5, z).value - f * s) < 1e-12);
    CHECK(std::abs(bessel_j(-0.5, z).value - f * c) < 1e-12);
    CHECK(std::abs(bessel_j(1.5, z).value - f * (s / z - c)) < 1e-12);
    CHECK(std::abs(bessel_j(-1.5, z).value - f * (-c / z - s)) < 1e-12);
    CHECK(std::abs(bessel_y(0.5, z).value + f * c) < 1e-12);
    const cplx h1 = hankel(HankelKind::H1, 0.5, z).value;
    CHECK(std::abs(h1 - f * cplx{s, -c}) < 1e-12);
  }
}

TEST_CASE("Wronskian on a 20x20 grid") {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double nu = 0.137 + 0.35 * i;  // never an integer
    for (int k = 0; k < 20; ++k) {
      const double z = 0.5 * std::pow(400.0, k / 19.0);  // 0.5 .. 200
      const double w = bessel_j(nu, z).value * bessel_j_prime(-nu, z).value -
                       bessel_j_prime(nu, z).value * bessel_j(-nu, z).value;
      worst = std::max(worst, std::abs(w + 2.0 * std::sin(nu * pi) / (pi * z)));
    }
  }
  CHECK(worst < 1e-9);
}

// Absolute 1e-9 where |J| <= 1, relative to the largest term above (orders
// down to -8.3 at z = 0.2 reach 5e11).
TEST_CASE("recurrence closure across regimes") {
  double worst = 0.0;
  for (double nu : {-7.3, -2.5, -0.4, 0.0, 0.3, 1.0, 3.7, 6.2, 12.9, 30.1}) {
    for (double z : {0.2, 1.0, 5.0, 9.99, 10.01, 14.0, 29.9, 30.1, 60.0, 250.0, 1400.0, 2e4}) {
      const double lhs = bessel_j(nu - 1, z).value + bessel_j(nu + 1, z).value;
      const double rhs = 2.0 * nu / z * bessel_j(nu, z).value;
      const double size = std::max({1.0, std::abs(bessel_j(nu - 1, z).value), std::abs(rhs)});
      worst = std::max(worst, std::abs(lhs - rhs) / size);
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("regime continuity at switch thresholds") {
  for (double nu : {0.0, 0.4, 3.3, 7.1, -2.6, 11.5, 20.0}) {
    for (double zc : {series_limit(nu), asymptotic_limit(nu)}) {
      CAPTURE(nu);
      CAPTURE(zc);
      const RealResult lo = bessel_j(nu, std::nextafter(zc, 0.0));
      const RealResult hi = bessel_j(nu, std::nextafter(zc, 1e300));
      CHECK(std::abs(lo.value - hi.value) < 1e-9);
    }
  }
}

TEST_CASE("regime tags follow the branch taken") {
  CHECK(bessel_j(2.3, 1.0).regime == Regime::Series);
  CHECK(bessel_j(2.3, 15.0).regime == Regime::ContinuedFraction);
  CHECK(bessel_j(2.3, 500.0).regime == Regime::Asymptotic);
  CHECK(bessel_y(1.5, 2.0).regime == Regime::Reflection);
}

TEST_CASE("bessel_y and hankel") {
  for (const auto& row : ref::kBesselY) {
    CAPTURE(row[0]);
    CAPTURE(row[1]);
    CHECK(std::abs(bessel_y(row[0], row[1]).value - row[2]) < 1e-9);
  }
  CHECK(std::abs(bessel_y(0.5, pi / 2).value) < 1e-14);
  CHECK(kind_of([] { bessel_y(3.0, 2.0); }) == ErrorKind::NearIntegerOrder);
  CHECK(kind_of([] { bessel_y(3.0 + 5e-9, 2.0); }) == ErrorKind::NearIntegerOrder);
  CHECK_NOTHROW(bessel_y(3.0 + 1e-6, 2.0));

  for (double z : {0.8, 6.0, 45.0}) {
    const cplx sum = hankel(HankelKind::H1, 2.3, z).value + hankel(HankelKind::H2, 2.3, z).value;
    CHECK(std::abs(sum - 2.0 * bessel_j(2.3, z).value) < 1e-13);
  }
  const double amp = std::abs(hankel(HankelKind::H1, 2.3, 100.0).value);
  CHECK(std::abs(amp / std::sqrt(2.0 / (pi * 100.0)) - 1.0) < 1e-3);
}

TEST_CASE("cylinder_jy agrees with the public routines and stays finite at integer order") {
  for (double nu : {0.3, 2.7, 5.6}) {
    for (double z : {0.4, 7.0, 80.0}) {
      const CylinderValues c = cylinder_jy(nu, z);
      CHECK(std::abs(c.j - bessel_j(nu, z).value) < 1e-12);
      CHECK(std::abs(c.y - bessel_y(nu, z).value) < 1e-10 * std::max(1.0, std::abs(c.y)));
      CHECK(std::abs(c.jp - bessel_j_prime(nu, z).value) < 1e-12);
    }
  }
  // Wronskian J Y' - J' Y = 2/(pi z) holds at integer order too
  for (double nu : {0.0, 1.0, 4.0}) {
    for (double z : {0.5, 7.07, 40.0}) {
      const CylinderValues c = cylinder_jy(nu, z);
      CHECK(std::abs(c.j * c.yp - c.jp * c.y - 2.0 / (pi * z)) < 1e-12);
    }
  }
}

TEST_CASE("complex-order J") {
  for (const auto& row : ref::kBesselJComplex) {
    const cplx nu{row[0], row[1]};
    const cplx want{row[3], row[4]};
    CAPTURE(nu);
    CAPTURE(row[2]);
    const ComplexResult got = bessel_j_complex_order(nu, row[2]);
    CHECK(std::abs(got.value - want) < 1e-8 * std::max(1.0, std::abs(want)));
  }
  for (double z : {0.3, 4.0, 12.0, 90.0}) {
    CHECK(std::abs(bessel_j_complex_order(cplx{0.7, 0.0}, z).value - bessel_j(0.7, z).value) <
          1e-10);
  }
  // conjugation for imaginary order and real z
  for (double im : {0.5, 1.0, 3.0, 7.5}) {
    for (double z : {0.4, 2.0, 25.0, 300.0}) {
      const cplx p = bessel_j_complex_order(cplx{0.0, im}, z).value;
      const cplx m = bessel_j_complex_order(cplx{0.0, -im}, z).value;
      CHECK(std::abs(m - std::conj(p)) < 1e-9 * std::max(1.0, std::abs(p)));
    }
  }
  CHECK(kind_of([] { bessel_j_complex_order(cplx{0.0, 21.0}, 1.0); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("hyp2f3") {
  const RealResult one = hyp2f3(1.3, -0.2, 4.0, 0.5, 2.0, 0.0);
  CHECK(one.value == 1.0);
  CHECK(one.abs_err < 1e-15);
  for (const auto& row : ref::kHyp2F3) {
    CAPTURE(row[5]);
    const RealResult h = hyp2f3(row[0], row[1], row[2], row[3], row[4], row[5]);
    // w = -400 sums terms up to ~1e15 down to 0.06; abs_err must say so
    CHECK(std::abs(h.value - row[6]) <= h.abs_err);
    if (std::abs(row[5]) <= 50.0) CHECK(std::abs(h.value - row[6]) < 1e-12);
  }
  // a1 = b1 reduces to 1F2(a2; b2, b3; w)
  CHECK(std::abs(hyp2f3(0.9, 2.2, 0.9, 1.4, 3.3, -75.0).value - ref::k1F2_deg) < 1e-13);
  CHECK(kind_of([] { hyp2f3(1.0, 1.0, -2.0, 1.0, 1.0, 0.5); }) == ErrorKind::Pole);
}
