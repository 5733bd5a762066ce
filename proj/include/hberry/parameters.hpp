#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hberry/error.hpp"
#include "hberry/types.hpp"

namespace hberry {

/// Physical constants of the model. Natural units by default.
/// kappa_tilde is the norm-rescaled nonlinearity κ‖Ψ‖² and may have either sign.
struct PhysicalConstants {
  double hbar = 1.0;
  double e_charge = 1.0;
  double c_light = 1.0;
  double kappa_tilde = 0.0;

  void check() const;
};

/// Instantaneous Hamiltonian parameters R = (m, k, ρ, H, a, b, c).
/// The same layout carries slow-time derivatives dR/ds.
struct ParameterSet {
  double m = 1.0;
  double k = 0.0;
  double rho = 0.0;
  Vec3 H = Vec3::Zero();
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct ParameterSample {
  ParameterSet value;
  ParameterSet rate;  // d/ds, exact
};

/// Nonlinearity-shifted stiffnesses.
///   k_tilde = k + κ̃ a        (Hessian, frequencies)
///   k_zero  = k + κ̃ (a+2b+c) (mean energy)
///   k_one   = k + κ̃ (a+b)    (mean force)
struct EffectiveStiffness {
  double k_tilde = 0.0;
  double k_zero = 0.0;
  double k_one = 0.0;
};

EffectiveStiffness effective_stiffness(const ParameterSet& R, const PhysicalConstants& constants);

/// Analytic 1-periodic schedule in slow time s.
///
///   constant        [v]
///   sinusoid        [offset, amplitude, harmonic, phase]  -> offset + amplitude sin(2π n s + phase)
///   fourier-series  [a0, a1, b1, a2, b2, ...]              -> a0 + Σ a_n cos(2π n s) + b_n sin(2π n s)
class Waveform {
 public:
  enum class Kind { Constant, Sinusoid, FourierSeries };

  Waveform() = default;
  Waveform(Kind kind, std::vector<double> coefficients);

  static Waveform constant(double v) { return {Kind::Constant, {v}}; }
  static Waveform sinusoid(double offset, double amplitude, int harmonic = 1, double phase = 0.0) {
    return {Kind::Sinusoid, {offset, amplitude, static_cast<double>(harmonic), phase}};
  }
  static Waveform fourier(std::vector<double> coefficients) {
    return {Kind::FourierSeries, std::move(coefficients)};
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  bool is_constant() const noexcept;

  double value(double s) const;
  double derivative(double s) const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<double> coefficients_{0.0};
};

std::string to_string(Waveform::Kind kind);
Waveform::Kind waveform_kind_from_string(const std::string& name);

struct LoopWaveforms {
  Waveform m = Waveform::constant(1.0);
  Waveform k = Waveform::constant(1.0);
  Waveform rho = Waveform::constant(0.0);
  Waveform H1 = Waveform::constant(0.0);
  Waveform H2 = Waveform::constant(0.0);
  Waveform H3 = Waveform::constant(0.0);
  Waveform a = Waveform::constant(0.0);
  Waveform b = Waveform::constant(0.0);
  Waveform c = Waveform::constant(0.0);
};

/// A closed path R(s), s ∈ [0, 1), with period T in fast time (t = sT).
///
/// An optional monotone warp σ(s) = s + ε sin(2π n s)/(2π n), |ε| < 1, reparameterizes
/// the same closed curve; sampling then returns R(σ(s)) and R'(σ(s)) σ'(s).
class ParameterLoop {
 public:
  ParameterLoop(LoopWaveforms waveforms, PhysicalConstants constants, double period_T);

  const LoopWaveforms& waveforms() const noexcept { return waveforms_; }
  const PhysicalConstants& constants() const noexcept { return constants_; }
  double period() const noexcept { return period_T_; }
  bool is_constant() const noexcept;

  ParameterLoop with_constants(const PhysicalConstants& constants) const;
  ParameterLoop with_period(double period_T) const;
  ParameterLoop with_waveforms(LoopWaveforms waveforms) const;
  ParameterLoop reparameterized(double epsilon, int harmonic = 1) const;

  double warp_epsilon() const noexcept { return warp_epsilon_; }
  int warp_harmonic() const noexcept { return warp_harmonic_; }

  ParameterSample sample(double s) const;

 private:
  LoopWaveforms waveforms_;
  PhysicalConstants constants_;
  double period_T_;
  double warp_epsilon_ = 0.0;
  int warp_harmonic_ = 1;
};

/// R(s) and dR/ds; s is reduced mod 1.
ParameterSample sample_parameters(const ParameterLoop& loop, double s);

struct ValidationOptions {
  int grid_points = 256;
  int l_max = 4;
  double resonance_tolerance = 1e-6;
  double axis_tolerance = 1e-9;  // on sinθ = |H_⊥|/|H|
  double zero_field_tolerance = 1e-12;
  double periodicity_tolerance = 1e-12;
};

struct CheckOutcome {
  std::string name;
  ErrorCode code = ErrorCode::InvalidLoop;
  bool passed = true;
  std::optional<double> first_failure_s;
  double worst = 0.0;  // smallest margin seen (check-specific units)
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckOutcome> checks;

  bool ok() const;
  const CheckOutcome* first_failure() const;
  /// Throws an Error carrying the first failing check's code and s.
  void raise_if_invalid() const;
};

ValidationReport validate_loop(const ParameterLoop& loop, const ValidationOptions& options = {});

}  // namespace hberry
