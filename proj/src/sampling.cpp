#include "hberry/sampling.hpp"

#include <cmath>

namespace hberry {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

ParameterSet random_parameter_set(std::mt19937_64& rng) {
  ParameterSet R;
  R.m = uniform(rng, 0.5, 2.0);
  R.rho = uniform(rng, -0.5, 0.5);
  R.k = R.m * (R.rho * R.rho + uniform(rng, 0.3, 3.0));
  const double theta = uniform(rng, 0.3, kPi - 0.3), phi = uniform(rng, 0.0, kTwoPi);
  const double Hm = uniform(rng, 0.2, 3.0);
  R.H = Hm * Vec3(std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta), std::cos(theta));
  R.a = uniform(rng, 0.0, 0.5);
  R.b = uniform(rng, 0.0, 0.5);
  R.c = uniform(rng, 0.0, 0.5);
  return R;
}

ParameterLoop random_loop(std::mt19937_64& rng, double T, double kappa_tilde) {
  auto series = [&](double centre, double amplitude) {
    std::vector<double> c{centre};
    for (int n = 0; n < 4; ++n) c.push_back(uniform(rng, -amplitude, amplitude) / (1 + n / 2));
    return Waveform::fourier(c);
  };
  LoopWaveforms w;
  w.m = series(uniform(rng, 1.0, 1.5), 0.1);
  w.k = series(uniform(rng, 2.0, 3.0), 0.25);
  w.rho = series(uniform(rng, -0.15, 0.15), 0.08);
  const double A = uniform(rng, 1.0, 2.0), B = uniform(rng, -1.0, 1.0);
  w.H1 = Waveform::fourier({uniform(rng, -0.2, 0.2) * A, A, 0.0, 0.0, uniform(rng, -0.1, 0.1) * A});
  w.H2 = Waveform::fourier({uniform(rng, -0.2, 0.2) * A, 0.0, A, uniform(rng, -0.1, 0.1) * A, 0.0});
  w.H3 = series(B, 0.2);
  w.a = series(uniform(rng, 0.1, 0.4), 0.05);
  w.b = series(uniform(rng, 0.0, 0.3), 0.05);
  w.c = series(uniform(rng, 0.1, 0.4), 0.05);
  PhysicalConstants constants;
  constants.kappa_tilde = kappa_tilde;
  return ParameterLoop(w, constants, T);
}

namespace {

void set_latitude(LoopWaveforms& w, double theta0, double H_mag) {
  w.H1 = Waveform::fourier({0.0, H_mag * std::sin(theta0), 0.0});
  w.H2 = Waveform::fourier({0.0, 0.0, H_mag * std::sin(theta0)});
  w.H3 = Waveform::constant(H_mag * std::cos(theta0));
}

}  // namespace

ParameterLoop latitude_loop(double theta0, double H_mag, double m, double k, double rho, double kappa_tilde,
                            double T) {
  LoopWaveforms w;
  w.m = Waveform::constant(m);
  w.k = Waveform::constant(k);
  w.rho = Waveform::constant(rho);
  set_latitude(w, theta0, H_mag);
  PhysicalConstants constants;
  constants.kappa_tilde = kappa_tilde;
  return ParameterLoop(w, constants, T);
}

ParameterLoop constant_loop(const ParameterSet& R, double T, double kappa_tilde) {
  LoopWaveforms w;
  w.m = Waveform::constant(R.m);
  w.k = Waveform::constant(R.k);
  w.rho = Waveform::constant(R.rho);
  w.H1 = Waveform::constant(R.H.x());
  w.H2 = Waveform::constant(R.H.y());
  w.H3 = Waveform::constant(R.H.z());
  w.a = Waveform::constant(R.a);
  w.b = Waveform::constant(R.b);
  w.c = Waveform::constant(R.c);
  PhysicalConstants constants;
  constants.kappa_tilde = kappa_tilde;
  return ParameterLoop(w, constants, T);
}

ParameterLoop cosine_loop(double T, double kappa_tilde) {
  LoopWaveforms w;
  w.m = Waveform::fourier({1.0, 0.1, 0.0});
  w.k = Waveform::fourier({2.0, 0.2, 0.0});
  w.rho = Waveform::fourier({0.2, 0.1, 0.0});
  w.H1 = Waveform::fourier({1.2, 0.3, 0.0});
  w.H2 = Waveform::fourier({0.3, -0.3, 0.0});
  w.H3 = Waveform::fourier({0.8, 0.2, 0.0});
  w.a = Waveform::fourier({0.3, 0.05, 0.0});
  w.c = Waveform::fourier({0.2, 0.05, 0.0});
  PhysicalConstants constants;
  constants.kappa_tilde = kappa_tilde;
  return ParameterLoop(w, constants, T);
}

ParameterLoop with_latitude(const ParameterLoop& loop, double theta0) {
  LoopWaveforms w = loop.waveforms();
  const double H_mag = Vec3(w.H1.value(0.0), w.H2.value(0.0), w.H3.value(0.0)).norm();
  set_latitude(w, theta0, H_mag);
  return loop.with_waveforms(std::move(w));
}

}  // namespace hberry
