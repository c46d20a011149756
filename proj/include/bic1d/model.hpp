#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace bic1d {

enum class Parity { Even, Odd };
const char* to_string(Parity parity) noexcept;

// Immutable physical parameters. V(x) = -v0 (exp(2|x|/a) - 1) and the
// Schrodinger equation is written as -h2m psi'' + V psi = E psi.
class ModelParams {
 public:
  double v0() const noexcept { return v0_; }
  double a() const noexcept { return a_; }
  double h2m() const noexcept { return h2m_; }
  double q() const noexcept { return q_; }
  double qa() const noexcept { return q_ * a_; }

 private:
  friend ModelParams make_params(double v0, double a, double h2m);
  ModelParams(double v0, double a, double h2m, double q) : v0_(v0), a_(a), h2m_(h2m), q_(q) {}
  double v0_;
  double a_;
  double h2m_;
  double q_;
};

// Throws InvalidArgument unless all three are positive and finite.
ModelParams make_params(double v0, double a, double h2m = 1.0);

double potential(const ModelParams& p, double x);

enum class OrderKind { RealOrder, ImaginaryOrder };

struct OrderValue {
  OrderKind kind = OrderKind::RealOrder;
  double magnitude = 0.0;  // kappa*a, or |kappa|*a above the barrier top
};

OrderValue order_of_energy(const ModelParams& p, double energy);

// kappa*a for E < v0 and its inverse.
double order_below_top(const ModelParams& p, double energy);
double energy_of_order(const ModelParams& p, double u);

// z = qa exp(|x|/a)
double bessel_argument(const ModelParams& p, double x);

enum class Sign { Plus, Minus };

// J_{+-kappa a}(qa e^{|x|/a}), E < v0.
double psi_pm(const ModelParams& p, double energy, Sign sign, double x);

// Definite-parity continuum pair built from J_{+u} and J_{-u}, with C = 1.
// Rejects |u - round(u)| <= 1e-6 (the construction vanishes identically there).
double continuum_state(const ModelParams& p, double energy, Parity parity, double x);

// Same construction at an explicit order, without the integer guard.
double continuum_state_at_order(const ModelParams& p, double u, Parity parity, double x);

// D J_u(qa e^{|x|/a}), times sign(x) for Odd. Throws NotAnEigenvalue when the
// quantization residual at E exceeds 1e-6.
double bic_wavefunction(const ModelParams& p, double energy, Parity parity, double x,
                        double d = 1.0);

// Unchecked variant at an explicit order.
double bic_wavefunction_at_order(const ModelParams& p, double u, Parity parity, double x,
                                 double d = 1.0);

inline constexpr double kNotAnEigenvalueTolerance = 1e-6;
inline constexpr double kIntegerOrderGuard = 1e-6;

enum class Source { ClosedForm, OdeIntegration };
const char* to_string(Source source) noexcept;

template <typename T>
struct WavefunctionTable {
  std::vector<double> xs;
  std::vector<T> values;
  double energy = 0.0;
  std::optional<Parity> parity;
  Source source = Source::ClosedForm;
};

using RealTable = WavefunctionTable<double>;
using ComplexTable = WavefunctionTable<std::complex<double>>;

// Throws InvalidArgument when xs is not strictly increasing, lengths differ,
// or a value is not finite.
template <typename T>
void validate(const WavefunctionTable<T>& table);

// samples points uniform on [-x_max, x_max]. x = 0 is always present for
// samples >= 3: exactly the midpoint for odd counts, inserted for even ones.
std::vector<double> symmetric_grid(double x_max, int samples);

RealTable bic_table(const ModelParams& p, double u, Parity parity, const std::vector<double>& xs,
                    double d = 1.0);

}  // namespace bic1d
