#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bic1d/error.hpp"
#include "bic1d/model.hpp"
#include "bic1d/specfun.hpp"
#include "reference_values.hpp"

using namespace bic1d;

namespace {

const ModelParams kP = make_params(50.0, 1.0, 1.0);

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected bic1d::Error");
  return ErrorKind::InvalidArgument;
}

// Largest |psi| over [x - w, x + w].
double local_max(const std::function<double(double)>& psi, double x, double w) {
  double m = 0.0;
  for (int i = -20; i <= 20; ++i) m = std::max(m, std::abs(psi(x + w * i / 20.0)));
  return m;
}

// Worst three-point residual of psi'' = g psi over 0 < |x| <= 4, scaled by
// max(|g|, 1/a^2) times the local max|psi|.
double ode_residual(const ModelParams& p, double energy,
                    const std::function<double(double)>& psi) {
  double worst = 0.0;
  for (double x = -4.0; x <= 4.0; x += 0.0137) {
    const double g = (potential(p, x) - energy) / p.h2m();
    const double lambda = 2.0 * std::numbers::pi / std::sqrt(std::abs(g) + 1e-300);
    const double h = std::min(1e-3, lambda / 1000.0);
    if (std::abs(x) <= 2.0 * h) continue;  // the cusp of V
    const double d2 = (psi(x + h) - 2.0 * psi(x) + psi(x - h)) / (h * h);
    const double scale = std::max(std::abs(g), 1.0 / (p.a() * p.a())) * local_max(psi, x, lambda);
    worst = std::max(worst, std::abs(d2 - g * psi(x)) / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("make_params") {
  CHECK(kP.q() == doctest::Approx(std::sqrt(50.0)).epsilon(1e-15));
  CHECK(kP.qa() == doctest::Approx(7.0710678118654755).epsilon(1e-15));
  CHECK(make_params(1, 1, 1).q() == 1.0);
  CHECK(make_params(50, 5, 1).qa() == doctest::Approx(35.35533905932738).epsilon(1e-14));
  const ModelParams p = make_params(3.0, 0.7, 0.4);
  CHECK(p.q() * p.q() * p.h2m() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(kind_of([] { make_params(0, 1, 1); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { make_params(1, -1, 1); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { make_params(1, 1, 0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { make_params(NAN, 1, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("potential") {
  CHECK(potential(kP, 0.0) == 0.0);
  CHECK(potential(kP, std::log(2.0) / 2.0) == doctest::Approx(-50.0).epsilon(1e-14));
  for (double x : {0.1, 0.9, 2.5, 7.0}) CHECK(potential(kP, -x) == potential(kP, x));
  CHECK(kind_of([] { potential(kP, 400.0); }) == ErrorKind::Overflow);
}

TEST_CASE("order_of_energy") {
  OrderValue o = order_of_energy(kP, 50.0);
  CHECK(o.kind == OrderKind::RealOrder);
  CHECK(o.magnitude == 0.0);
  o = order_of_energy(kP, 18.6108);
  CHECK(o.kind == OrderKind::RealOrder);
  CHECK(o.magnitude == doctest::Approx(std::sqrt(31.3892)).epsilon(1e-14));
  o = order_of_energy(kP, 54.0);
  CHECK(o.kind == OrderKind::ImaginaryOrder);
  CHECK(o.magnitude == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(energy_of_order(kP, order_below_top(kP, 23.7)) == doctest::Approx(23.7).epsilon(1e-14));
  CHECK(kind_of([] { order_below_top(kP, 50.0); }) == ErrorKind::Domain);
}

TEST_CASE("psi_pm") {
  const double u = order_below_top(kP, 18.6108);
  CHECK(psi_pm(kP, 18.6108, Sign::Plus, 0.0) == specfun::bessel_j(u, kP.qa()).value);
  CHECK(psi_pm(kP, 18.6108, Sign::Minus, 0.0) == specfun::bessel_j(-u, kP.qa()).value);
  for (double x : {0.3, 1.7, 3.2}) {
    CHECK(psi_pm(kP, 18.6108, Sign::Plus, x) == psi_pm(kP, 18.6108, Sign::Plus, -x));
  }
  CHECK(std::abs(psi_pm(kP, 18.6108, Sign::Plus, 2.0) - ref::kPsiPlus_18p6108_x2) < 1e-10);
}

TEST_CASE("continuum_state") {
  CHECK(std::abs(continuum_state(kP, 23.7, Parity::Odd, 0.0)) < 1e-15);
  CHECK(std::abs(continuum_state(kP, 23.7, Parity::Even, 1.0) - ref::kContinuumEven_23p7_x1) <
        1e-10);
  CHECK(std::abs(continuum_state(kP, 23.7, Parity::Odd, 1.0) - ref::kContinuumOdd_23p7_x1) <
        1e-10);
  CHECK(continuum_state(kP, 23.7, Parity::Odd, -1.0) == -continuum_state(kP, 23.7, Parity::Odd, 1.0));

  // centered difference vanishes by symmetry; the one-sided second-order one
  // checks psi_e'(0+) = 0 for real
  const double h = 1e-5;
  const auto even = [](double x) { return continuum_state(kP, 23.7, Parity::Even, x); };
  CHECK(std::abs(even(h) - even(-h)) / (2 * h) < 1e-6);
  const double forward = (-3.0 * even(0.0) + 4.0 * even(h) - even(2 * h)) / (2 * h);
  CHECK(std::abs(forward) < 1e-6);

  CHECK(kind_of([] { continuum_state(kP, 49.0, Parity::Even, 0.5); }) == ErrorKind::IntegerOrder);
  CHECK(kind_of([] { continuum_state(kP, 46.0 + 1e-7, Parity::Odd, 0.5); }) ==
        ErrorKind::IntegerOrder);
}

TEST_CASE("bic_wavefunction") {
  CHECK(bic_wavefunction(kP, 37.2630, Parity::Odd, 0.0) == 0.0);
  const double u = order_below_top(kP, 18.6108);
  CHECK(bic_wavefunction(kP, 18.6108, Parity::Even, 0.0) ==
        doctest::Approx(specfun::bessel_j(u, std::sqrt(50.0)).value).epsilon(1e-15));
  for (double x : {0.25, 1.3, 2.9}) {
    CHECK(std::abs(bic_wavefunction(kP, 18.6108, Parity::Even, x)) ==
          std::abs(bic_wavefunction(kP, 18.6108, Parity::Even, -x)));
    CHECK(bic_wavefunction(kP, 37.2630, Parity::Odd, -x) ==
          -bic_wavefunction(kP, 37.2630, Parity::Odd, x));
  }
  CHECK(bic_wavefunction(kP, 18.6108, Parity::Even, 0.5, 3.0) ==
        3.0 * bic_wavefunction(kP, 18.6108, Parity::Even, 0.5));
  CHECK(kind_of([] { bic_wavefunction(kP, 30.0, Parity::Even, 0.5); }) ==
        ErrorKind::NotAnEigenvalue);
  CHECK(kind_of([] { bic_wavefunction(kP, 18.6108, Parity::Odd, 0.5); }) ==
        ErrorKind::NotAnEigenvalue);
}

TEST_CASE("degeneracy: even and odd continuum states are independent") {
  const double h = 1e-6;
  for (double e : {3.0, 12.5, 23.7, 33.3, 47.5, 49.9}) {
    CAPTURE(e);
    const double pe = continuum_state(kP, e, Parity::Even, 0.0);
    const double po_prime = continuum_state(kP, e, Parity::Odd, h) / h;
    CHECK(std::abs(pe * po_prime) >= 1e-8);
  }
}

TEST_CASE("integer-order collapse of the continuum pair") {
  const auto sup = [](double u, Parity parity) {
    double m = 0.0;
    for (int i = 0; i <= 600; ++i) {
      m = std::max(m, std::abs(continuum_state_at_order(kP, u, parity, 3.0 * i / 600.0)));
    }
    return m;
  };
  for (int n = 1; n <= 7; ++n) {
    for (Parity parity : {Parity::Even, Parity::Odd}) {
      CAPTURE(n);
      const double generic = sup(n + 0.25 < kP.qa() ? n + 0.25 : n - 0.25, parity);
      CHECK(sup(n + 1e-12, parity) <= 1e-8 * generic);
      CHECK(sup(n - 1e-12, parity) <= 1e-8 * generic);
    }
  }
}

TEST_CASE("asymptotic decay of the bound state") {
  const double u = 5.602602117318083;
  // |J_u(z)| <= sqrt(2/(pi z)) (1 + O(u^2/z)) with z = qa e^{|x|/a}
  const double c = 1.5 * std::sqrt(2.0 / (std::numbers::pi * kP.qa()));
  for (double x = 2.0; x <= 8.0; x += 0.01) {
    CHECK(std::abs(bic_wavefunction_at_order(kP, u, Parity::Even, x)) <= c * std::exp(-x / 2.0));
  }
}

TEST_CASE("closed forms satisfy the Schrodinger equation") {
  const double u1 = 5.602602117318083;
  const double e1 = energy_of_order(kP, u1);
  CHECK(ode_residual(kP, e1, [&](double x) {
          return bic_wavefunction_at_order(kP, u1, Parity::Even, x);
        }) <= 1e-5);
  const double u2 = 3.568893268029502;
  CHECK(ode_residual(kP, energy_of_order(kP, u2), [&](double x) {
          return bic_wavefunction_at_order(kP, u2, Parity::Odd, x);
        }) <= 1e-5);
  for (Sign s : {Sign::Plus, Sign::Minus}) {
    CHECK(ode_residual(kP, 23.7, [&](double x) { return psi_pm(kP, 23.7, s, x); }) <= 1e-5);
  }
  for (Parity parity : {Parity::Even, Parity::Odd}) {
    CHECK(ode_residual(kP, 23.7, [&](double x) { return continuum_state(kP, 23.7, parity, x); }) <=
          1e-5);
  }
  // a perturbed order is not a solution at this energy
  CHECK(ode_residual(kP, 23.7, [&](double x) {
          return bic_wavefunction_at_order(kP, order_below_top(kP, 23.7) + 0.01, Parity::Even, x);
        }) > 1e-4);
}

TEST_CASE("symmetric_grid and tables") {
  auto xs = symmetric_grid(3.0, 601);
  CHECK(xs.size() == 601);
  CHECK(xs[300] == 0.0);
  CHECK(xs.front() == -3.0);
  CHECK(xs.back() == 3.0);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(xs[i] == -xs[xs.size() - 1 - i]);
  xs = symmetric_grid(2.0, 6);
  CHECK(xs.size() == 7);
  CHECK(std::count(xs.begin(), xs.end(), 0.0) == 1);
  xs = symmetric_grid(1.0, 2);
  CHECK(xs == std::vector<double>{-1.0, 1.0});
  CHECK(kind_of([] { symmetric_grid(1.0, 1); }) == ErrorKind::InvalidArgument);

  const RealTable t = bic_table(kP, 5.602602117318083, Parity::Even, symmetric_grid(3.0, 201));
  CHECK_NOTHROW(validate(t));
  CHECK(t.source == Source::ClosedForm);
  CHECK(t.parity == Parity::Even);
  for (std::size_t i = 0; i < t.xs.size(); ++i) CHECK(t.values[i] == t.values[t.xs.size() - 1 - i]);

  RealTable bad = t;
  std::swap(bad.xs[3], bad.xs[4]);
  CHECK(kind_of([&] { validate(bad); }) == ErrorKind::InvalidArgument);
  bad = t;
  bad.values[7] = NAN;
  CHECK(kind_of([&] { validate(bad); }) == ErrorKind::InvalidArgument);
  bad = t;
  bad.values.pop_back();
  CHECK(kind_of([&] { validate(bad); }) == ErrorKind::InvalidArgument);
}
