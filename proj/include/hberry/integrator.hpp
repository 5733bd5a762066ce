#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>

#include <Eigen/Core>

#include "hberry/error.hpp"

namespace hberry {

struct Tolerances {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: automatic
  std::size_t max_steps = 50'000'000;

  void check() const {
    if (!(rtol > 0.0) || !(atol > 0.0))
      throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  }
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  double max_error_estimate = 0.0;  // largest accepted scaled local error
  double min_step = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
};

namespace detail {

template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, const Tolerances& tol) {
  double acc = 0.0;
  const auto n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    using std::abs;
    const double sc = tol.atol + tol.rtol * std::max(abs(y0(i)), abs(y1(i)));
    const double r = abs(err(i)) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace detail

// Dormand–Prince 8(5,3) tableau (Hairer, Nørsett & Wanner), via the SciPy coefficient set.
namespace dop853 {
inline constexpr int kStages = 12;
inline constexpr double C[kStages] = {0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274, 0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077, 0.6512820512820513, 0.6, 0.8571428571428571, 1.0};
inline constexpr double A[kStages][kStages] = {
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0, 0.0},
    {0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0, 0.0},
    {-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0, 0.0},
    {2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0},
};
inline constexpr double B[kStages] = {0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259};
inline constexpr double E3[kStages + 1] = {-0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, -0.4226823213237919, -0.1521609496625161, 0.20136540080403034, 0.02265179219836082, 0.0};
inline constexpr double E5[kStages + 1] = {0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294, 0.0};
}  // namespace dop853

/// Dormand–Prince 8(5,3) with PI step-size control.
///
/// Integrates y' = rhs(t, y) from t0 to t1 (either direction). The step is clipped so that
/// every time in `sample_times` (monotone in the direction of integration, within [t0, t1])
/// is hit exactly; `on_sample(index, t, y)` is called there. `post_step(y)` may project the
/// state after each accepted step.
template <class State, class Rhs, class OnSample, class PostStep>
IntegratorStats integrate_rk(Rhs&& rhs, double t0, double t1, State& y, const Tolerances& tol,
                             std::span<const double> sample_times, OnSample&& on_sample, PostStep&& post_step) {
  using namespace dop853;
  tol.check();
  IntegratorStats stats;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  const double span_len = std::abs(t1 - t0);

  std::size_t next_sample = 0;
  auto flush_samples_at = [&](double t) {
    while (next_sample < sample_times.size() &&
           dir * (sample_times[next_sample] - t) <= 1e-14 * std::max(1.0, std::abs(t))) {
      on_sample(next_sample, sample_times[next_sample], y);
      ++next_sample;
    }
  };
  for (std::size_t i = 1; i < sample_times.size(); ++i)
    if (dir * (sample_times[i] - sample_times[i - 1]) < 0.0)
      throw Error(ErrorCode::InvalidArgument, "sample times must be monotone");
  flush_samples_at(t0);
  if (span_len == 0.0) return stats;

  constexpr double safety = 0.9, fac_min = 0.2, fac_max = 6.0;
  constexpr double beta = 0.04, alpha = 1.0 / 8 - 0.75 * beta;

  std::array<State, kStages + 1> K;
  double t = t0;
  K[0] = rhs(t, y);
  ++stats.rhs_evaluations;

  double h = tol.initial_step;
  if (!(h > 0.0)) {
    const double d0 = detail::scaled_error(y, y, y, tol);
    const double d1 = detail::scaled_error(K[0], y, y, tol);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, 0.1 * span_len);
  }
  double err_old = 1e-4;
  bool last_rejected = false;
  const double h_floor = 1e-14 * std::max(1.0, span_len);

  while (dir * (t1 - t) > 0.0) {
    if (stats.accepted + stats.rejected >= tol.max_steps)
      throw Error(ErrorCode::ToleranceFailure, "integrator exceeded max_steps");
    if (h < h_floor)
      throw Error(ErrorCode::ToleranceFailure, "integrator step size underflow; tolerance cannot be met");

    double target = t1;
    if (next_sample < sample_times.size() && dir * (sample_times[next_sample] - t1) < 0.0)
      target = sample_times[next_sample];
    double h_try = h;
    bool clipped = false;
    if (h_try >= std::abs(target - t)) {
      h_try = std::abs(target - t);
      clipped = true;
    }
    const double hs = dir * h_try;

    for (int s = 1; s < kStages; ++s) {
      State acc = A[s][0] * K[0];
      for (int j = 1; j < s; ++j)
        if (A[s][j] != 0.0) acc += A[s][j] * K[j];
      K[s] = rhs(t + C[s] * hs, State(y + hs * acc));
    }
    State incr = B[0] * K[0];
    for (int j = 1; j < kStages; ++j)
      if (B[j] != 0.0) incr += B[j] * K[j];
    State y_new = y + hs * incr;
    K[kStages] = rhs(t + hs, y_new);
    stats.rhs_evaluations += kStages;

    // blended 5th/3rd order estimate
    State err5 = E5[0] * K[0], err3 = E3[0] * K[0];
    for (int j = 1; j <= kStages; ++j) {
      if (E5[j] != 0.0) err5 += E5[j] * K[j];
      if (E3[j] != 0.0) err3 += E3[j] * K[j];
    }
    const double n5 = detail::scaled_error(err5, y, y_new, tol), n3 = detail::scaled_error(err3, y, y_new, tol);
    const double en = (n5 == 0.0 && n3 == 0.0) ? 0.0 : h_try * n5 * n5 / std::sqrt(n5 * n5 + 0.01 * n3 * n3);
    if (!std::isfinite(en)) throw Error(ErrorCode::ToleranceFailure, "integrator produced non-finite state");

    if (en <= 1.0) {
      ++stats.accepted;
      stats.max_error_estimate = std::max(stats.max_error_estimate, en);
      stats.min_step = std::min(stats.min_step, h_try);
      stats.max_step = std::max(stats.max_step, h_try);
      t = clipped ? target : t + hs;
      post_step(y_new);
      y = y_new;
      K[0] = rhs(t, y);  // re-evaluated because post_step may have changed y
      ++stats.rhs_evaluations;
      flush_samples_at(t);

      const double e = std::max(en, 1e-10);
      double fac = safety * std::pow(e, -alpha) * std::pow(err_old, beta);
      fac = std::clamp(fac, fac_min, fac_max);
      if (last_rejected) fac = std::min(fac, 1.0);
      // a step shortened to land on a sample time does not shrink the controller's step
      const double base = clipped ? std::max(h, h_try) : h_try;
      h = base * fac;
      err_old = std::max(en, 1e-4);
      last_rejected = false;
    } else {
      ++stats.rejected;
      const double fac = std::max(fac_min, safety * std::pow(en, -1.0 / 8));
      h = h_try * fac;
      last_rejected = true;
    }
  }
  flush_samples_at(t1);
  return stats;
}

template <class State, class Rhs>
IntegratorStats integrate_rk(Rhs&& rhs, double t0, double t1, State& y, const Tolerances& tol) {
  return integrate_rk(std::forward<Rhs>(rhs), t0, t1, y, tol, std::span<const double>{},
                      [](std::size_t, double, const State&) {}, [](State&) {});
}

}  // namespace hberry
