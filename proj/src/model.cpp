#include "bic1d/model.hpp"

#include <cmath>
#include <sstream>

#include "bic1d/error.hpp"
#include "bic1d/specfun.hpp"
#include "bic1d/spectrum.hpp"

namespace bic1d {

namespace sf = specfun;

const char* to_string(Parity parity) noexcept { return parity == Parity::Even ? "even" : "odd"; }

const char* to_string(Source source) noexcept {
  return source == Source::ClosedForm ? "closed_form" : "ode";
}

ModelParams make_params(double v0, double a, double h2m) {
  for (const double v : {v0, a, h2m}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "model parameters must be positive and finite (v0=" << v0 << ", a=" << a
          << ", h2m=" << h2m << ")";
      throw Error(ErrorKind::InvalidArgument, msg.str());
    }
  }
  return ModelParams(v0, a, h2m, std::sqrt(v0 / h2m));
}

double potential(const ModelParams& p, double x) {
  const double e = 2.0 * std::fabs(x) / p.a();
  if (e > 709.0) throw Error(ErrorKind::Overflow, "potential exponent out of range");
  return -p.v0() * std::expm1(e);
}

OrderValue order_of_energy(const ModelParams& p, double energy) {
  if (energy <= p.v0()) {
    return {OrderKind::RealOrder, p.a() * std::sqrt((p.v0() - energy) / p.h2m())};
  }
  return {OrderKind::ImaginaryOrder, p.a() * std::sqrt((energy - p.v0()) / p.h2m())};
}

double order_below_top(const ModelParams& p, double energy) {
  if (!(energy < p.v0())) {
    std::ostringstream msg;
    msg << "energy " << energy << " is not below the barrier top " << p.v0();
    throw Error(ErrorKind::Domain, msg.str());
  }
  return p.a() * std::sqrt((p.v0() - energy) / p.h2m());
}

double energy_of_order(const ModelParams& p, double u) {
  return p.v0() - u * u * p.h2m() / (p.a() * p.a());
}

double bessel_argument(const ModelParams& p, double x) {
  return p.qa() * std::exp(std::fabs(x) / p.a());
}

double psi_pm(const ModelParams& p, double energy, Sign sign, double x) {
  const double u = order_below_top(p, energy);
  return sf::bessel_j(sign == Sign::Plus ? u : -u, bessel_argument(p, x)).value;
}

double continuum_state_at_order(const ModelParams& p, double u, Parity parity, double x) {
  const double s = p.qa();
  const double z = bessel_argument(p, x);
  const double jp = sf::bessel_j(u, z).value;
  const double jm = sf::bessel_j(-u, z).value;
  if (parity == Parity::Even) {
    return sf::bessel_j_prime(-u, s).value * jp - sf::bessel_j_prime(u, s).value * jm;
  }
  const double sign = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  return sign * (sf::bessel_j(-u, s).value * jp - sf::bessel_j(u, s).value * jm);
}

double continuum_state(const ModelParams& p, double energy, Parity parity, double x) {
  const double u = order_below_top(p, energy);
  if (std::fabs(u - std::round(u)) <= kIntegerOrderGuard) {
    std::ostringstream msg;
    msg << "kappa*a = " << u << " is an integer; the definite-parity pair vanishes there";
    throw Error(ErrorKind::IntegerOrder, msg.str());
  }
  return continuum_state_at_order(p, u, parity, x);
}

double bic_wavefunction_at_order(const ModelParams& p, double u, Parity parity, double x,
                                 double d) {
  const double j = sf::bessel_j(u, bessel_argument(p, x)).value;
  if (parity == Parity::Even) return d * j;
  if (x == 0.0) return 0.0;
  return x > 0.0 ? d * j : -d * j;
}

double bic_wavefunction(const ModelParams& p, double energy, Parity parity, double x, double d) {
  const double u = order_below_top(p, energy);
  const double residual = std::fabs(condition(p, parity, u));
  if (residual > kNotAnEigenvalueTolerance) {
    std::ostringstream msg;
    msg << "E = " << energy << " is not a " << to_string(parity)
        << " eigenvalue (condition residual " << residual << ")";
    throw Error(ErrorKind::NotAnEigenvalue, msg.str());
  }
  return bic_wavefunction_at_order(p, u, parity, x, d);
}

template <typename T>
void validate(const WavefunctionTable<T>& table) {
  if (table.xs.size() != table.values.size()) {
    throw Error(ErrorKind::InvalidArgument, "table xs and values differ in length");
  }
  for (std::size_t i = 0; i < table.xs.size(); ++i) {
    if (i > 0 && !(table.xs[i] > table.xs[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "table xs not strictly increasing");
    }
    if constexpr (std::is_same_v<T, double>) {
      if (!std::isfinite(table.values[i])) {
        throw Error(ErrorKind::InvalidArgument, "table value not finite");
      }
    } else {
      if (!std::isfinite(table.values[i].real()) || !std::isfinite(table.values[i].imag())) {
        throw Error(ErrorKind::InvalidArgument, "table value not finite");
      }
    }
  }
}

template void validate(const WavefunctionTable<double>&);
template void validate(const WavefunctionTable<std::complex<double>>&);

std::vector<double> symmetric_grid(double x_max, int samples) {
  if (!(x_max > 0.0) || samples < 2) {
    throw Error(ErrorKind::InvalidArgument, "grid needs x_max > 0 and at least 2 samples");
  }
  // built from the left half and mirrored so that xs[i] == -xs[n-1-i] exactly
  const auto n = static_cast<std::size_t>(samples);
  std::vector<double> xs(n);
  const double h = 2.0 * x_max / (samples - 1);
  for (std::size_t i = 0; i < n / 2; ++i) {
    xs[i] = i == 0 ? -x_max : -x_max + static_cast<double>(i) * h;
    xs[n - 1 - i] = -xs[i];
  }
  if (n % 2 == 1) {
    xs[n / 2] = 0.0;
  } else if (n > 2) {
    xs.insert(xs.begin() + static_cast<std::ptrdiff_t>(n / 2), 0.0);
  }
  return xs;
}

RealTable bic_table(const ModelParams& p, double u, Parity parity, const std::vector<double>& xs,
                    double d) {
  RealTable table;
  table.xs = xs;
  table.values.reserve(xs.size());
  for (const double x : xs) table.values.push_back(bic_wavefunction_at_order(p, u, parity, x, d));
  table.energy = energy_of_order(p, u);
  table.parity = parity;
  table.source = Source::ClosedForm;
  return table;
}

}  // namespace bic1d
