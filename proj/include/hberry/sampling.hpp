#pragma once

#include <cstdint>
#include <random>

#include "hberry/parameters.hpp"

namespace hberry {

/// Uniform double in [lo, hi) from the top 53 bits of one draw. Same stream on every platform,
/// which std::uniform_real_distribution does not promise.
double uniform(std::mt19937_64& rng, double lo, double hi);

/// Random instantaneous parameters with k̃/m − ρ² bounded away from zero and H off the axis.
ParameterSet random_parameter_set(std::mt19937_64& rng);

/// Two-harmonic Fourier loop around a random centre; the field winds once around the polar axis
/// away from the poles, and Ω_2 stays separated from Ω_3.
ParameterLoop random_loop(std::mt19937_64& rng, double T = 100.0, double kappa_tilde = 0.0);

/// H(s) = |H| (sinθ_0 cos 2πs, sinθ_0 sin 2πs, cosθ_0) with constant scalars.
ParameterLoop latitude_loop(double theta0, double H_mag = 2.0, double m = 1.0, double k = 2.0, double rho = 0.0,
                            double kappa_tilde = 0.0, double T = 100.0);

ParameterLoop constant_loop(const ParameterSet& R, double T = 10.0, double kappa_tilde = 0.0);

/// Every schedule a cosine series, so all first derivatives vanish at s = 0.
ParameterLoop cosine_loop(double T = 100.0, double kappa_tilde = 0.0);

/// Replaces the field schedules by a constant-latitude circle at polar angle θ_0, keeping |H(0)|
/// and the scalar schedules.
ParameterLoop with_latitude(const ParameterLoop& loop, double theta0);

}  // namespace hberry
