#include "hberry/wavefield.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "hberry/frame.hpp"

namespace hberry {

MultiIndexPolynomial MultiIndexPolynomial::constant(cplx c) {
  MultiIndexPolynomial p;
  p.add({0, 0, 0}, c);
  return p;
}

cplx MultiIndexPolynomial::coefficient(const Exponent& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

unsigned MultiIndexPolynomial::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
  return d;
}

void MultiIndexPolynomial::add(const Exponent& e, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

MultiIndexPolynomial MultiIndexPolynomial::derivative(int axis) const {
  MultiIndexPolynomial out;
  for (const auto& [e, c] : terms_) {
    if (e[axis] == 0) continue;
    Exponent f = e;
    --f[axis];
    out.add(f, c * static_cast<double>(e[axis]));
  }
  return out;
}

MultiIndexPolynomial MultiIndexPolynomial::times_linear(const CVec3& row) const {
  MultiIndexPolynomial out;
  for (const auto& [e, c] : terms_)
    for (int j = 0; j < 3; ++j) {
      if (row(j) == cplx(0.0)) continue;
      Exponent f = e;
      ++f[j];
      out.add(f, c * row(j));
    }
  return out;
}

MultiIndexPolynomial& MultiIndexPolynomial::operator+=(const MultiIndexPolynomial& other) {
  for (const auto& [e, c] : other.terms_) add(e, c);
  return *this;
}

MultiIndexPolynomial& MultiIndexPolynomial::operator*=(cplx c) {
  if (c == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

cplx MultiIndexPolynomial::evaluate(const CVec3& zeta) const {
  cplx sum = 0.0;
  for (const auto& [e, c] : terms_) {
    cplx term = c;
    for (int j = 0; j < 3; ++j)
      for (unsigned p = 0; p < e[j]; ++p) term *= zeta(j);
    sum += term;
  }
  return sum;
}

MultiIndexPolynomial hermite_poly(const CMat3& W, const FockIndex& nu) {
  MultiIndexPolynomial p = MultiIndexPolynomial::constant(1.0);
  for (int i = 0; i < 3; ++i) {
    const CVec3 row = -2.0 * W.row(i).transpose();
    for (unsigned r = 0; r < nu.n[i]; ++r) {
      MultiIndexPolynomial next = p.derivative(i);
      next += p.times_linear(row);
      next *= -1.0;
      p = std::move(next);
    }
  }
  return p;
}

void SpatialGrid::check() const {
  for (int a = 0; a < 3; ++a) {
    if (points[a] < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points per axis");
    if (!std::isfinite(lower[a]) || !std::isfinite(upper[a]) || !(upper[a] > lower[a]))
      throw Error(ErrorCode::InvalidArgument, "grid range must be finite and increasing");
  }
}

std::size_t SpatialGrid::size() const {
  return static_cast<std::size_t>(points[0]) * points[1] * points[2];
}

double SpatialGrid::spacing(int axis) const { return (upper[axis] - lower[axis]) / (points[axis] - 1); }

double SpatialGrid::cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }

Vec3 SpatialGrid::point(std::size_t idx) const {
  const std::size_t nx = points[0], ny = points[1];
  const std::size_t i = idx % nx, j = (idx / nx) % ny, k = idx / (nx * ny);
  return {lower[0] + i * spacing(0), lower[1] + j * spacing(1), lower[2] + k * spacing(2)};
}

FockState::FockState(const ParameterSet& R, const FockIndex& nu, const PhysicalConstants& constants)
    : hbar_(constants.hbar) {
  const Frequencies f = frequencies(R, constants);
  G_ = build_G(magnetic_frame(R.H)).G;
  const double m = R.m;
  q0_ = CVec3(m * cplx(-R.rho, f.omega_a), m * cplx(-R.rho, f.omega_a), m * cplx(-R.rho, f.Omega[2]));
  const CMat3 c0 = coordinate_germ_frame(R, constants);
  xi_map_ = (-kI / std::sqrt(hbar_)) * c0.conjugate().inverse();
  poly_ = hermite_poly(hermite_matrix(R, constants), nu);

  double fact = 1.0;
  for (int k = 0; k < 3; ++k)
    for (unsigned j = 2; j <= nu.n[k]; ++j) fact *= j;
  const double amp = std::pow(m, 0.75) * std::pow(f.Omega[2], 0.25) * std::sqrt(f.omega_a) /
                     std::pow(kPi * hbar_, 0.75);
  norm_ = std::pow(std::sqrt(0.5), static_cast<double>(nu.total())) / std::sqrt(fact) * std::exp(kI * (kPi / 4.0)) *
          amp;
}

cplx FockState::operator()(const Vec3& x) const {
  const Vec3 chi = G_.transpose() * x;
  cplx quad = 0.0;
  for (int j = 0; j < 3; ++j) quad += q0_(j) * chi(j) * chi(j);
  const CVec3 xi = xi_map_ * chi.cast<cplx>();
  return norm_ * std::exp(kI * quad / (2.0 * hbar_)) * poly_.evaluate(xi);
}

cplx fock_state_at(const ParameterSet& R, const FockIndex& nu, const Vec3& x, const PhysicalConstants& constants) {
  return FockState(R, nu, constants)(x);
}

ComplexField fock_state(const ParameterSet& R, const FockIndex& nu, const SpatialGrid& grid,
                        const PhysicalConstants& constants, unsigned threads) {
  grid.check();
  const FockState psi(R, nu, constants);
  ComplexField field{grid, std::vector<cplx>(grid.size())};
  const std::size_t slab = static_cast<std::size_t>(grid.points[0]) * grid.points[1];
  const unsigned nz = static_cast<unsigned>(grid.points[2]);
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = std::min(workers, nz);

  auto fill = [&](unsigned w) {
    for (unsigned k = w; k < nz; k += workers)
      for (std::size_t i = k * slab; i < (k + 1) * slab; ++i) field.values[i] = psi(grid.point(i));
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(fill, w);
  fill(0);
  for (auto& t : pool) t.join();
  return field;
}

cplx vacuum_time_factor(const ParameterSet& R, const FockIndex& nu, const PhysicalConstants& constants, double t) {
  return std::exp(-kI * (eigenvalue(R, nu, constants) / constants.hbar * t));
}

cplx grid_overlap(const ComplexField& f, const ComplexField& g) {
  if (!(f.grid == g.grid) || f.values.size() != g.values.size())
    throw Error(ErrorCode::GridMismatch, "fields live on different grids");
  cplx sum = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) sum += std::conj(f.values[i]) * g.values[i];
  return sum * f.grid.cell_volume();
}

double grid_norm(const ComplexField& f) { return std::sqrt(grid_overlap(f, f).real()); }

GridMoments grid_moments(const ComplexField& f) {
  GridMoments m;
  Vec3 first = Vec3::Zero();
  Mat3 second = Mat3::Zero();
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double w = std::norm(f.values[i]);
    const Vec3 x = f.grid.point(i);
    m.mass += w;
    first += w * x;
    second += w * x * x.transpose();
  }
  m.mean = first / m.mass;
  m.covariance = second / m.mass - m.mean * m.mean.transpose();
  m.mass *= f.grid.cell_volume();
  return m;
}

std::string field_to_csv(const ComplexField& f) {
  std::string out = "x,y,z,re,im\n";
  char buf[160];
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const Vec3 x = f.grid.point(i);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x(0), x(1), x(2), f.values[i].real(),
                  f.values[i].imag());
    out += buf;
  }
  return out;
}

std::string field_to_json(const ComplexField& f) {
  nlohmann::json j;
  j["grid"] = {{"lower", f.grid.lower}, {"upper", f.grid.upper}, {"points", f.grid.points}, {"order", "x-fastest"}};
  std::vector<double> flat;
  flat.reserve(2 * f.values.size());
  for (const cplx& v : f.values) {
    flat.push_back(v.real());
    flat.push_back(v.imag());
  }
  j["values"] = std::move(flat);
  return j.dump();
}

}  // namespace hberry
