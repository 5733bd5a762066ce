#include "hberry/parameters.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "hberry/frame.hpp"
#include "hberry/spectral.hpp"

namespace hberry {

namespace {

bool finite(double x) { return std::isfinite(x); }

double reduce_unit(double s) {
  double r = s - std::floor(s);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace

void PhysicalConstants::check() const {
  if (!(hbar > 0.0) || !finite(hbar)) throw Error(ErrorCode::InvalidConfig, "hbar must be positive");
  if (!(c_light > 0.0) || !finite(c_light)) throw Error(ErrorCode::InvalidConfig, "c_light must be positive");
  if (!finite(e_charge)) throw Error(ErrorCode::InvalidConfig, "e_charge must be finite");
  if (!finite(kappa_tilde)) throw Error(ErrorCode::InvalidConfig, "kappa_tilde must be finite");
}

EffectiveStiffness effective_stiffness(const ParameterSet& R, const PhysicalConstants& constants) {
  const double kt = constants.kappa_tilde;
  return {R.k + kt * R.a, R.k + kt * (R.a + 2.0 * R.b + R.c), R.k + kt * (R.a + R.b)};
}

// ----------------------------------------------------------------------------
// Waveform

Waveform::Waveform(Kind kind, std::vector<double> coefficients)
    : kind_(kind), coefficients_(std::move(coefficients)) {
  for (double c : coefficients_)
    if (!finite(c)) throw Error(ErrorCode::InvalidConfig, "waveform coefficient is not finite");
  switch (kind_) {
    case Kind::Constant:
      if (coefficients_.size() != 1)
        throw Error(ErrorCode::InvalidConfig, "constant waveform takes exactly one coefficient");
      break;
    case Kind::Sinusoid: {
      if (coefficients_.size() < 2 || coefficients_.size() > 4)
        throw Error(ErrorCode::InvalidConfig,
                    "sinusoid waveform takes [offset, amplitude, harmonic?, phase?]");
      if (coefficients_.size() < 3) coefficients_.push_back(1.0);
      if (coefficients_.size() < 4) coefficients_.push_back(0.0);
      const double n = coefficients_[2];
      if (n < 1.0 || n != std::floor(n))
        throw Error(ErrorCode::InvalidConfig, "sinusoid harmonic must be a positive integer");
      break;
    }
    case Kind::FourierSeries:
      if (coefficients_.empty() || coefficients_.size() % 2 == 0)
        throw Error(ErrorCode::InvalidConfig,
                    "fourier-series waveform takes [a0, a1, b1, a2, b2, ...] (odd length)");
      break;
  }
}

bool Waveform::is_constant() const noexcept {
  switch (kind_) {
    case Kind::Constant: return true;
    case Kind::Sinusoid: return coefficients_[1] == 0.0;
    case Kind::FourierSeries:
      for (std::size_t i = 1; i < coefficients_.size(); ++i)
        if (coefficients_[i] != 0.0) return false;
      return true;
  }
  return false;
}

double Waveform::value(double s) const {
  switch (kind_) {
    case Kind::Constant: return coefficients_[0];
    case Kind::Sinusoid:
      return coefficients_[0] + coefficients_[1] * std::sin(kTwoPi * coefficients_[2] * s + coefficients_[3]);
    case Kind::FourierSeries: {
      double v = coefficients_[0];
      for (std::size_t n = 1; 2 * n <= coefficients_.size() - 1; ++n) {
        const double w = kTwoPi * static_cast<double>(n) * s;
        v += coefficients_[2 * n - 1] * std::cos(w) + coefficients_[2 * n] * std::sin(w);
      }
      return v;
    }
  }
  return 0.0;
}

double Waveform::derivative(double s) const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Sinusoid: {
      const double w = kTwoPi * coefficients_[2];
      return coefficients_[1] * w * std::cos(w * s + coefficients_[3]);
    }
    case Kind::FourierSeries: {
      double d = 0.0;
      for (std::size_t n = 1; 2 * n <= coefficients_.size() - 1; ++n) {
        const double w = kTwoPi * static_cast<double>(n);
        d += w * (-coefficients_[2 * n - 1] * std::sin(w * s) + coefficients_[2 * n] * std::cos(w * s));
      }
      return d;
    }
  }
  return 0.0;
}

std::string to_string(Waveform::Kind kind) {
  switch (kind) {
    case Waveform::Kind::Constant: return "constant";
    case Waveform::Kind::Sinusoid: return "sinusoid";
    case Waveform::Kind::FourierSeries: return "fourier-series";
  }
  return "constant";
}

Waveform::Kind waveform_kind_from_string(const std::string& name) {
  if (name == "constant") return Waveform::Kind::Constant;
  if (name == "sinusoid") return Waveform::Kind::Sinusoid;
  if (name == "fourier-series") return Waveform::Kind::FourierSeries;
  throw Error(ErrorCode::InvalidConfig, "unknown waveform kind '" + name + "'");
}

// ----------------------------------------------------------------------------
// ParameterLoop

ParameterLoop::ParameterLoop(LoopWaveforms waveforms, PhysicalConstants constants, double period_T)
    : waveforms_(std::move(waveforms)), constants_(constants), period_T_(period_T) {
  constants_.check();
  if (!(period_T_ > 0.0) || !finite(period_T_))
    throw Error(ErrorCode::InvalidConfig, "period_T must be positive");
}

bool ParameterLoop::is_constant() const noexcept {
  const auto& w = waveforms_;
  return w.m.is_constant() && w.k.is_constant() && w.rho.is_constant() && w.H1.is_constant() &&
         w.H2.is_constant() && w.H3.is_constant() && w.a.is_constant() && w.b.is_constant() &&
         w.c.is_constant();
}

ParameterLoop ParameterLoop::with_constants(const PhysicalConstants& constants) const {
  ParameterLoop copy = *this;
  constants.check();
  copy.constants_ = constants;
  return copy;
}

ParameterLoop ParameterLoop::with_period(double period_T) const {
  if (!(period_T > 0.0) || !finite(period_T))
    throw Error(ErrorCode::InvalidArgument, "period_T must be positive");
  ParameterLoop copy = *this;
  copy.period_T_ = period_T;
  return copy;
}

ParameterLoop ParameterLoop::with_waveforms(LoopWaveforms waveforms) const {
  ParameterLoop copy = *this;
  copy.waveforms_ = std::move(waveforms);
  return copy;
}

ParameterLoop ParameterLoop::reparameterized(double epsilon, int harmonic) const {
  if (!(std::abs(epsilon) < 1.0) || harmonic < 1)
    throw Error(ErrorCode::InvalidArgument, "warp needs |epsilon| < 1 and harmonic >= 1");
  if (warp_epsilon_ != 0.0)
    throw Error(ErrorCode::InvalidArgument, "loop is already reparameterized");
  ParameterLoop copy = *this;
  copy.warp_epsilon_ = epsilon;
  copy.warp_harmonic_ = harmonic;
  return copy;
}

ParameterSample ParameterLoop::sample(double s) const {
  s = reduce_unit(s);
  double sigma = s;
  double dsigma = 1.0;
  if (warp_epsilon_ != 0.0) {
    const double w = kTwoPi * warp_harmonic_;
    sigma = s + warp_epsilon_ * std::sin(w * s) / w;
    dsigma = 1.0 + warp_epsilon_ * std::cos(w * s);
  }
  const auto& w = waveforms_;
  ParameterSample out;
  out.value.m = w.m.value(sigma);
  out.value.k = w.k.value(sigma);
  out.value.rho = w.rho.value(sigma);
  out.value.H = Vec3(w.H1.value(sigma), w.H2.value(sigma), w.H3.value(sigma));
  out.value.a = w.a.value(sigma);
  out.value.b = w.b.value(sigma);
  out.value.c = w.c.value(sigma);

  out.rate.m = w.m.derivative(sigma) * dsigma;
  out.rate.k = w.k.derivative(sigma) * dsigma;
  out.rate.rho = w.rho.derivative(sigma) * dsigma;
  out.rate.H = Vec3(w.H1.derivative(sigma), w.H2.derivative(sigma), w.H3.derivative(sigma)) * dsigma;
  out.rate.a = w.a.derivative(sigma) * dsigma;
  out.rate.b = w.b.derivative(sigma) * dsigma;
  out.rate.c = w.c.derivative(sigma) * dsigma;
  return out;
}

ParameterSample sample_parameters(const ParameterLoop& loop, double s) { return loop.sample(s); }

// ----------------------------------------------------------------------------
// Validation

bool ValidationReport::ok() const { return first_failure() == nullptr; }

const CheckOutcome* ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

void ValidationReport::raise_if_invalid() const {
  if (const auto* f = first_failure()) {
    std::string msg = "loop validation failed: " + f->name;
    if (!f->detail.empty()) msg += " (" + f->detail + ")";
    throw Error(f->code, msg, f->first_failure_s);
  }
}

namespace {

void record(CheckOutcome& out, double margin, double s, bool failed, std::string detail = {}) {
  if (margin < out.worst) out.worst = margin;
  if (failed && out.passed) {
    out.passed = false;
    out.first_failure_s = s;
    out.detail = std::move(detail);
  }
}

}  // namespace

ValidationReport validate_loop(const ParameterLoop& loop, const ValidationOptions& options) {
  if (options.grid_points < 1 || options.l_max < 1)
    throw Error(ErrorCode::InvalidArgument, "validation grid_points and l_max must be positive");

  CheckOutcome periodicity{"periodicity", ErrorCode::InvalidLoop};
  CheckOutcome mass{"mass_positive", ErrorCode::InvalidLoop};
  CheckOutcome real_freq{"real_frequencies", ErrorCode::ImaginaryFrequency};
  CheckOutcome resonance{"non_resonance", ErrorCode::Resonance};
  CheckOutcome field{"nonzero_field", ErrorCode::ZeroField};
  CheckOutcome axis{"off_axis", ErrorCode::AxisSingularity};
  for (auto* c : {&periodicity, &mass, &real_freq, &resonance, &field, &axis})
    c->worst = std::numeric_limits<double>::infinity();

  {
    const auto& w = loop.waveforms();
    double worst = 0.0;
    for (const Waveform* wf : {&w.m, &w.k, &w.rho, &w.H1, &w.H2, &w.H3, &w.a, &w.b, &w.c}) {
      const double dv = std::abs(wf->value(1.0) - wf->value(0.0));
      const double dd = std::abs(wf->derivative(1.0) - wf->derivative(0.0));
      const double scale = 1.0 + std::abs(wf->value(0.0)) + std::abs(wf->derivative(0.0));
      worst = std::max(worst, std::max(dv, dd) / scale);
    }
    periodicity.worst = -worst;
    if (worst > options.periodicity_tolerance) {
      periodicity.passed = false;
      periodicity.first_failure_s = 1.0;
      periodicity.detail = "waveform does not close";
    }
  }

  const PhysicalConstants& constants = loop.constants();
  for (int i = 0; i < options.grid_points; ++i) {
    const double s = static_cast<double>(i) / options.grid_points;
    const ParameterSet R = loop.sample(s).value;

    record(mass, R.m, s, !(R.m > 0.0));
    if (!(R.m > 0.0)) continue;

    const EffectiveStiffness ks = effective_stiffness(R, constants);
    const double omega3_sq = ks.k_tilde / R.m - R.rho * R.rho;
    record(real_freq, omega3_sq, s, !(omega3_sq > 0.0), "k_tilde/m - rho^2 <= 0");
    if (omega3_sq > 0.0) {
      const Frequencies f = frequencies(R, constants);
      const int L = options.l_max;
      for (int l1 = -L; l1 <= L; ++l1)
        for (int l2 = -L; l2 <= L; ++l2)
          for (int l3 = -L; l3 <= L; ++l3) {
            const int order = std::abs(l1) + std::abs(l2) + std::abs(l3);
            if (order == 0 || order > L) continue;
            const double v = std::abs(l1 * f.Omega[0] + l2 * f.Omega[1] + l3 * f.Omega[2]);
            record(resonance, v, s, !(v > options.resonance_tolerance),
                   "l = (" + std::to_string(l1) + "," + std::to_string(l2) + "," + std::to_string(l3) + ")");
          }
    }

    const double Hmag = R.H.norm();
    record(field, Hmag, s, !(Hmag > options.zero_field_tolerance));
    if (Hmag > options.zero_field_tolerance) {
      const double sin_theta = std::hypot(R.H.x(), R.H.y()) / Hmag;
      record(axis, sin_theta, s, !(sin_theta > options.axis_tolerance), "H on the polar axis");
    } else {
      record(axis, 0.0, s, true, "frame undefined at H = 0");
    }
  }

  ValidationReport report;
  report.checks = {periodicity, mass, real_freq, resonance, field, axis};
  return report;
}

}  // namespace hberry
