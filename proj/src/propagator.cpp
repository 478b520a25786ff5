#include "kxxz/propagator.hpp"

#include <algorithm>
#include <cmath>

namespace kxxz {
namespace {

Eigen::MatrixXd sector_block(const ModelParams& p,
                             const std::vector<basis_index>& states) {
  const int L = p.L;
  const Eigen::Index n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const basis_index b = states[i];
    H(i, i) = p.V * ((L - 1) - 2.0 * domain_wall_count(b, L));
    if (p.J == 0.0) continue;
    for (int j = 1; j < L; ++j) {
      const basis_index pair = (basis_index{3}) << (j - 1);
      const basis_index bits = b & pair;
      if (bits == 0 || bits == pair) continue;
      const basis_index b2 = b ^ pair;
      const auto it = std::lower_bound(states.begin(), states.end(), b2);
      H(it - states.begin(), i) = 2.0 * p.J;
    }
  }
  return H;
}

void phase_rotate(const Eigen::VectorXd& c, const Eigen::VectorXd& s,
                  Eigen::VectorXd& re, Eigen::VectorXd& im) {
  // (re + i im) * (c - i s), elementwise
  Eigen::VectorXd nr = re.cwiseProduct(c) + im.cwiseProduct(s);
  im = im.cwiseProduct(c) - re.cwiseProduct(s);
  re.swap(nr);
}

}  // namespace

void apply_global_x_rotation(Eigen::VectorXcd& psi, int L, double theta) {
  check_sites(L);
  const basis_index dim = basis_dim(L);
  if (psi.size() != static_cast<Eigen::Index>(dim))
    throw ConfigError("state length does not match 2^L");
  const double c = std::cos(theta);
  const cx mis(0.0, -std::sin(theta));
  if (mis == cx(0.0, 0.0) && c == 1.0) return;
  for (int j = 1; j <= L; ++j) {
    const basis_index bit = basis_index{1} << (j - 1);
    for (basis_index b = 0; b < dim; ++b) {
      if (b & bit) continue;
      const Eigen::Index lo = static_cast<Eigen::Index>(b);
      const Eigen::Index hi = static_cast<Eigen::Index>(b | bit);
      const cx a0 = psi[lo];
      const cx a1 = psi[hi];
      psi[lo] = c * a0 + mis * a1;
      psi[hi] = mis * a0 + c * a1;
    }
  }
}

std::vector<std::vector<basis_index>> sectors_by_m(int L) {
  check_sites(L);
  std::vector<std::vector<basis_index>> secs(L + 1);
  for (basis_index b = 0; b < basis_dim(L); ++b)
    secs[(magnetization_m(b, L) + L) / 2].push_back(b);
  return secs;
}

EvolveMode parse_evolve_mode(const std::string& name) {
  if (name == "auto") return EvolveMode::Auto;
  if (name == "dense") return EvolveMode::Dense;
  if (name == "sector") return EvolveMode::Sector;
  if (name == "krylov") return EvolveMode::Krylov;
  throw ConfigError("unknown evolve mode: " + name);
}

void Propagator::apply_kick(Eigen::VectorXcd& psi) const {
  apply_global_x_rotation(psi, p_.L, p_.kick_angle());
}

void Propagator::step(Eigen::VectorXcd& psi) const {
  apply_kick(psi);
  apply_interaction(psi);
}

SectorPropagator::SectorPropagator(const ModelParams& p, bool force_f32)
    : Propagator(p) {
  const auto secs = sectors_by_m(p_.L);
  double bytes_d = 0.0;
  for (const auto& s : secs)
    bytes_d += 8.0 * static_cast<double>(s.size()) * static_cast<double>(s.size());
  const bool f32 = force_f32 || bytes_d > 2.0e9;
  if ((f32 ? bytes_d / 2 : bytes_d) > 3.5e9)
    throw ConfigError("sector eigenvector storage would exceed 3.5 GB; use krylov mode");
  blocks_.reserve(secs.size());
  for (const auto& states : secs) {
    SpectralBlock blk;
    blk.m = states.empty() ? 0
                           : magnetization_m(states.front(), p_.L);
    blk.states = states;
    blk.f32 = f32;
    Eigen::MatrixXd H = sector_block(p_, states);
    symmetric_eig_inplace(H, blk.evals);
    if (f32)
      blk.evecs_f = H.cast<float>();
    else
      blk.evecs = std::move(H);
    blocks_.push_back(std::move(blk));
  }
}

void SectorPropagator::apply_interaction(Eigen::VectorXcd& psi) const {
  const basis_index dim = basis_dim(p_.L);
  if (psi.size() != static_cast<Eigen::Index>(dim))
    throw ConfigError("state length does not match 2^L");
  const double T = p_.T;
  for (const auto& blk : blocks_) {
    const Eigen::Index n = static_cast<Eigen::Index>(blk.states.size());
    if (n == 0) continue;
    if (n == 1) {
      const double ph = T * blk.evals[0];
      psi[static_cast<Eigen::Index>(blk.states[0])] *= cx(std::cos(ph), -std::sin(ph));
      continue;
    }
    Eigen::VectorXd xr(n), xi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const cx v = psi[static_cast<Eigen::Index>(blk.states[i])];
      xr[i] = v.real();
      xi[i] = v.imag();
    }
    const Eigen::VectorXd c = (T * blk.evals.array()).cos();
    const Eigen::VectorXd s = (T * blk.evals.array()).sin();
    Eigen::VectorXd tr, ti;
    if (blk.f32) {
      Eigen::VectorXf fr = blk.evecs_f.transpose() * xr.cast<float>();
      Eigen::VectorXf fi = blk.evecs_f.transpose() * xi.cast<float>();
      tr = fr.cast<double>();
      ti = fi.cast<double>();
      phase_rotate(c, s, tr, ti);
      fr = (blk.evecs_f * tr.cast<float>().eval()).eval();
      fi = (blk.evecs_f * ti.cast<float>().eval()).eval();
      tr = fr.cast<double>();
      ti = fi.cast<double>();
    } else {
      tr.noalias() = blk.evecs.transpose() * xr;
      ti.noalias() = blk.evecs.transpose() * xi;
      phase_rotate(c, s, tr, ti);
      xr.noalias() = blk.evecs * tr;
      xi.noalias() = blk.evecs * ti;
      tr.swap(xr);
      ti.swap(xi);
    }
    for (Eigen::Index i = 0; i < n; ++i)
      psi[static_cast<Eigen::Index>(blk.states[i])] = cx(tr[i], ti[i]);
  }
}

void SectorPropagator::apply_interaction_batch(Eigen::MatrixXcd& cols) const {
  const basis_index dim = basis_dim(p_.L);
  if (cols.rows() != static_cast<Eigen::Index>(dim))
    throw ConfigError("state length does not match 2^L");
  const double T = p_.T;
  const Eigen::Index nc = cols.cols();
  for (const auto& blk : blocks_) {
    const Eigen::Index n = static_cast<Eigen::Index>(blk.states.size());
    if (n == 0) continue;
    Eigen::MatrixXd Xr(n, nc), Xi(n, nc);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < nc; ++k) {
        const cx v = cols(static_cast<Eigen::Index>(blk.states[i]), k);
        Xr(i, k) = v.real();
        Xi(i, k) = v.imag();
      }
    const Eigen::ArrayXd c = (T * blk.evals.array()).cos();
    const Eigen::ArrayXd s = (T * blk.evals.array()).sin();
    Eigen::MatrixXd Tr, Ti;
    if (blk.f32) {
      Eigen::MatrixXf Fr = blk.evecs_f.transpose() * Xr.cast<float>();
      Eigen::MatrixXf Fi = blk.evecs_f.transpose() * Xi.cast<float>();
      Tr = Fr.cast<double>();
      Ti = Fi.cast<double>();
    } else {
      Tr.noalias() = blk.evecs.transpose() * Xr;
      Ti.noalias() = blk.evecs.transpose() * Xi;
    }
    Eigen::MatrixXd Nr = Tr.array().colwise() * c + Ti.array().colwise() * s;
    Ti = (Ti.array().colwise() * c - Tr.array().colwise() * s).matrix();
    Tr = std::move(Nr);
    if (blk.f32) {
      Eigen::MatrixXf Fr = blk.evecs_f * Tr.cast<float>().eval();
      Eigen::MatrixXf Fi = blk.evecs_f * Ti.cast<float>().eval();
      Tr = Fr.cast<double>();
      Ti = Fi.cast<double>();
    } else {
      Eigen::MatrixXd Yr = blk.evecs * Tr;
      Eigen::MatrixXd Yi = blk.evecs * Ti;
      Tr.swap(Yr);
      Ti.swap(Yi);
    }
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < nc; ++k)
        cols(static_cast<Eigen::Index>(blk.states[i]), k) = cx(Tr(i, k), Ti(i, k));
  }
}

DensePropagator::DensePropagator(const ModelParams& p) : Propagator(p) {
  if (p_.L > 13) throw ConfigError("dense mode supports L <= 13");
  Eigen::MatrixXd H = to_dense(build_xxz(p_));
  symmetric_eig_inplace(H, evals_);
  evecs_ = std::move(H);
}

void DensePropagator::apply_interaction(Eigen::VectorXcd& psi) const {
  if (psi.size() != evecs_.rows())
    throw ConfigError("state length does not match 2^L");
  Eigen::VectorXd xr = psi.real();
  Eigen::VectorXd xi = psi.imag();
  Eigen::VectorXd tr = evecs_.transpose() * xr;
  Eigen::VectorXd ti = evecs_.transpose() * xi;
  const Eigen::VectorXd c = (p_.T * evals_.array()).cos();
  const Eigen::VectorXd s = (p_.T * evals_.array()).sin();
  phase_rotate(c, s, tr, ti);
  xr.noalias() = evecs_ * tr;
  xi.noalias() = evecs_ * ti;
  psi.real() = xr;
  psi.imag() = xi;
}

KrylovPropagator::KrylovPropagator(const ModelParams& p, int m, double tol)
    : Propagator(p), mv_(p), m_(m), tol_(tol) {
  if (m_ < 2) throw ConfigError("krylov subspace needs at least 2 vectors");
  if (!(tol_ > 0.0)) throw ConfigError("krylov tolerance must be positive");
}

void KrylovPropagator::apply_interaction(Eigen::VectorXcd& psi) const {
  krylov_expmi(mv_, p_.T, psi, m_, tol_);
}

std::unique_ptr<Propagator> make_propagator(const ModelParams& p,
                                            EvolveMode mode, int krylov_m,
                                            double krylov_tol) {
  p.validate();
  if (mode == EvolveMode::Auto)
    mode = p.L >= 17 ? EvolveMode::Krylov : EvolveMode::Sector;
  switch (mode) {
    case EvolveMode::Dense:
      return std::make_unique<DensePropagator>(p);
    case EvolveMode::Krylov:
      return std::make_unique<KrylovPropagator>(p, krylov_m, krylov_tol);
    default:
      return std::make_unique<SectorPropagator>(p);
  }
}

}  // namespace kxxz
