#include "bic1d/scattering.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "bic1d/error.hpp"
#include "bic1d/parallel.hpp"
#include "bic1d/specfun.hpp"

namespace bic1d {

namespace sf = specfun;
using cplx = std::complex<double>;

namespace {

constexpr double kNudge = 1e-9;
constexpr double kDeterminantFloor = 1e-13;
// below this |kappa| a the imaginary-order Hankel formulas cancel badly and
// the order-zero real path is used instead (R, T are even in kappa)
constexpr double kSmallImaginaryOrder = 1e-7;

// H1, H2 and their z-derivatives at z = qa.
struct HankelPair {
  cplx h1, h1p, h2, h2p;
};

HankelPair real_order_pair(double u, double s) {
  const sf::CylinderValues c = sf::cylinder_jy(u, s);
  const cplx i1(0.0, 1.0);
  return {c.j + i1 * c.y, c.jp + i1 * c.yp, c.j - i1 * c.y, c.jp - i1 * c.yp};
}

HankelPair imaginary_order_pair(double mu, double s) {
  const cplx i1(0.0, 1.0);
  const cplx nu(0.0, mu);
  const cplx jn = sf::bessel_j_complex_order(nu, s).value;
  const cplx jn1 = sf::bessel_j_complex_order(nu - 1.0, s).value;
  const cplx jm = sf::bessel_j_complex_order(-nu, s).value;
  const cplx jm1 = sf::bessel_j_complex_order(-nu - 1.0, s).value;
  const cplx jnp = jn1 - nu / s * jn;
  const cplx jmp = jm1 + nu / s * jm;
  const cplx sin_nu_pi = std::sin(nu * std::numbers::pi);
  const cplx e_minus = std::exp(-i1 * nu * std::numbers::pi);
  const cplx e_plus = std::exp(i1 * nu * std::numbers::pi);
  const cplx d1 = i1 * sin_nu_pi;
  return {(jm - e_minus * jn) / d1, (jmp - e_minus * jnp) / d1, (jm - e_plus * jn) / (-d1),
          (jmp - e_plus * jnp) / (-d1)};
}

struct Wave {
  cplx f, fp;  // value and z-derivative at z = qa
  double jx;   // current along +x on the side where it is used
};

ScatterPoint match(const HankelPair& hp, double s, double a, Incidence incidence) {
  // On the right z = s e^{x/a} (dz/dx = +z/a), on the left dz/dx = -z/a.
  // Current along x of c f(z(x)) is |c|^2 Im(conj(f) f') dz/dx.
  const double flux_scale = s / a;
  const double im1 = std::imag(std::conj(hp.h1) * hp.h1p);
  const double im2 = std::imag(std::conj(hp.h2) * hp.h2p);
  const Wave right1{hp.h1, hp.h1p, im1 * flux_scale};
  const Wave right2{hp.h2, hp.h2p, im2 * flux_scale};
  const Wave left1{hp.h1, hp.h1p, -im1 * flux_scale};
  const Wave left2{hp.h2, hp.h2p, -im2 * flux_scale};

  // incidence side: incoming wave moves toward x = 0; the far side keeps only
  // the outgoing wave
  const bool from_left = incidence == Incidence::FromLeft;
  const Wave& a1 = from_left ? left1 : right1;
  const Wave& a2 = from_left ? left2 : right2;
  const Wave& b1 = from_left ? right1 : left1;
  const Wave& b2 = from_left ? right2 : left2;
  const double toward = from_left ? 1.0 : -1.0;
  const Wave& in = a1.jx * toward > 0.0 ? a1 : a2;
  const Wave& back = a1.jx * toward > 0.0 ? a2 : a1;
  const Wave& out = b1.jx * toward > 0.0 ? b1 : b2;

  // in + r back = t out, and since dz/dx flips sign across x = 0,
  // in' + r back' = -t out'
  // [back  -out ] [r]   [-in      ]
  // [back' out' ] [t] = [-in'     ]
  const cplx m11 = back.f, m12 = -out.f;
  const cplx m21 = back.fp, m22 = out.fp;
  const cplx r1 = -in.f, r2 = -in.fp;
  const cplx det = m11 * m22 - m12 * m21;
  const double scale = (std::abs(m11) + std::abs(m12)) * (std::abs(m21) + std::abs(m22));
  if (!(std::abs(det) >= kDeterminantFloor * scale)) {
    throw Error(ErrorKind::IllConditioned, "Hankel matching determinant vanishes");
  }
  const cplx r = (r1 * m22 - m12 * r2) / det;
  const cplx t = (m11 * r2 - r1 * m21) / det;
  const double j_in = std::fabs(in.jx);
  ScatterPoint sp;
  sp.r_prob = std::norm(r) * std::fabs(back.jx) / j_in;
  sp.t_prob = std::norm(t) * std::fabs(out.jx) / j_in;
  return sp;
}

}  // namespace

ScatterPoint rt_coefficients(const ModelParams& p, double energy, Incidence incidence) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw Error(ErrorKind::Domain, "scattering energy must be positive and finite");
  }
  const double s = p.qa();
  const OrderValue order = order_of_energy(p, energy);
  ScatterPoint sp;
  if (order.kind == OrderKind::RealOrder || order.magnitude < kSmallImaginaryOrder) {
    const double u = order.kind == OrderKind::RealOrder ? order.magnitude : 0.0;
    if (std::fabs(u - std::round(u)) <= kIntegerOrderGuard) {
      const ScatterPoint lo = match(real_order_pair(std::max(0.0, u - kNudge), s), s, p.a(),
                                    incidence);
      const ScatterPoint hi = match(real_order_pair(u + kNudge, s), s, p.a(), incidence);
      sp.r_prob = 0.5 * (lo.r_prob + hi.r_prob);
      sp.t_prob = 0.5 * (lo.t_prob + hi.t_prob);
    } else {
      sp = match(real_order_pair(u, s), s, p.a(), incidence);
    }
  } else {
    sp = match(imaginary_order_pair(order.magnitude, s), s, p.a(), incidence);
  }
  sp.energy = energy;
  return sp;
}

std::vector<ScanEntry> rt_scan(const ModelParams& p, double e_min, double e_max, int steps) {
  if (!(e_min > 0.0) || !(e_max > e_min) || steps < 2) {
    throw Error(ErrorKind::InvalidArgument, "scan needs 0 < e_min < e_max and steps >= 2");
  }
  std::vector<ScanEntry> out(static_cast<std::size_t>(steps));
  parallel_for(out.size(), [&](std::size_t i) {
    const double e =
        i + 1 == out.size() ? e_max : e_min + (e_max - e_min) * static_cast<double>(i) / (steps - 1);
    out[i].point.energy = e;
    try {
      out[i].point = rt_coefficients(p, e);
    } catch (const Error& err) {
      out[i].ok = false;
      out[i].error = err.what();
    }
  });
  return out;
}

}  // namespace bic1d
