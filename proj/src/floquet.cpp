#include "kxxz/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kxxz/operators.hpp"
#include "kxxz/propagator.hpp"

namespace kxxz {
namespace {

// M <- K M where K = exp(-i theta sum sx); pairs of rows mix.
void left_x_rotation(Eigen::MatrixXcd& M, int L, double theta) {
  const double c = std::cos(theta);
  const cx mis(0.0, -std::sin(theta));
  const basis_index dim = basis_dim(L);
  Eigen::RowVectorXcd tmp(M.cols());
  for (int j = 1; j <= L; ++j) {
    const basis_index bit = basis_index{1} << (j - 1);
    for (basis_index b = 0; b < dim; ++b) {
      if (b & bit) continue;
      const Eigen::Index lo = static_cast<Eigen::Index>(b);
      const Eigen::Index hi = static_cast<Eigen::Index>(b | bit);
      tmp = c * M.row(lo) + mis * M.row(hi);
      M.row(hi) = mis * M.row(lo) + c * M.row(hi);
      M.row(lo) = tmp;
    }
  }
}

// M <- M K; pairs of columns mix.
void right_x_rotation(Eigen::MatrixXcd& M, int L, double theta) {
  const double c = std::cos(theta);
  const cx mis(0.0, -std::sin(theta));
  const basis_index dim = basis_dim(L);
  Eigen::VectorXcd tmp(M.rows());
  for (int j = 1; j <= L; ++j) {
    const basis_index bit = basis_index{1} << (j - 1);
    for (basis_index b = 0; b < dim; ++b) {
      if (b & bit) continue;
      const Eigen::Index lo = static_cast<Eigen::Index>(b);
      const Eigen::Index hi = static_cast<Eigen::Index>(b | bit);
      tmp = c * M.col(lo) + mis * M.col(hi);
      M.col(hi) = mis * M.col(lo) + c * M.col(hi);
      M.col(lo) = tmp;
    }
  }
}

// One magnetization block of exp(-i T H) from its eigensystem, dense.
void u2_block(const SpectralBlock& blk, double T, Eigen::MatrixXd& re,
              Eigen::MatrixXd& im) {
  Eigen::MatrixXd W;
  if (blk.f32)
    W = blk.evecs_f.cast<double>();
  else
    W = blk.evecs;
  const Eigen::ArrayXd c = (T * blk.evals.array()).cos();
  const Eigen::ArrayXd s = (T * blk.evals.array()).sin();
  re.noalias() = (W * c.matrix().asDiagonal()) * W.transpose();
  im.noalias() = (W * (-s).matrix().asDiagonal()) * W.transpose();
}

Eigen::MatrixXcd assemble_u2_dense(const SectorPropagator& sp) {
  const int L = sp.params().L;
  const basis_index dim = basis_dim(L);
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXd re, im;
  for (const auto& blk : sp.blocks()) {
    const Eigen::Index n = static_cast<Eigen::Index>(blk.states.size());
    if (n == 0) continue;
    u2_block(blk, sp.params().T, re, im);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index cj = static_cast<Eigen::Index>(blk.states[j]);
      for (Eigen::Index i = 0; i < n; ++i)
        U(static_cast<Eigen::Index>(blk.states[i]), cj) = cx(re(i, j), im(i, j));
    }
  }
  return U;
}

struct SymUnitaryEig {
  Eigen::MatrixXd W;
  Eigen::VectorXcd lambda;
  double residual = 0.0;
};

// Eigensystem of the unitary complex symmetric A + iB. A and B are commuting
// real symmetric matrices, so a real orthonormal eigenbasis exists: diagonalize
// A, then split each near-degenerate cluster by diagonalizing B inside it.
SymUnitaryEig diag_sym_unitary_once(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& B,
                                    double cluster_tol) {
  const Eigen::Index n = A.rows();
  SymUnitaryEig out;
  out.W = A;
  Eigen::VectorXd a;
  symmetric_eig_inplace(out.W, a);
  Eigen::MatrixXd BW = B * out.W;
  Eigen::VectorXd b(n);
  for (Eigen::Index s = 0; s < n;) {
    Eigen::Index e = s + 1;
    while (e < n && a[e] - a[e - 1] < cluster_tol) ++e;
    const Eigen::Index m = e - s;
    if (m == 1) {
      b[s] = out.W.col(s).dot(BW.col(s));
    } else {
      Eigen::MatrixXd Bc =
          out.W.middleCols(s, m).transpose() * BW.middleCols(s, m);
      Bc = 0.5 * (Bc + Bc.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Bc);
      if (es.info() != Eigen::Success)
        throw NumericalError("cluster eigensolver failed");
      const Eigen::MatrixXd& R = es.eigenvectors();
      out.W.middleCols(s, m) = (out.W.middleCols(s, m) * R).eval();
      BW.middleCols(s, m) = (BW.middleCols(s, m) * R).eval();
      b.segment(s, m) = es.eigenvalues();
      const Eigen::VectorXd ac = a.segment(s, m);
      for (Eigen::Index k = 0; k < m; ++k)
        a[s + k] = (R.col(k).array().square() * ac.array()).sum();
    }
    s = e;
  }
  out.lambda.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cx z(a[i], b[i]);
    out.lambda[i] = z / std::abs(z);
  }
  const Eigen::MatrixXd AW = A * out.W;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double rr =
        (AW.col(i) - out.lambda[i].real() * out.W.col(i)).squaredNorm();
    const double ri =
        (BW.col(i) - out.lambda[i].imag() * out.W.col(i)).squaredNorm();
    worst = std::max(worst, std::sqrt(rr + ri));
  }
  out.residual = worst;
  return out;
}

SymUnitaryEig diag_sym_unitary(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& B) {
  double best_resid = -1.0;
  for (const double tol : {1e-7, 3e-6, 1e-4}) {
    SymUnitaryEig r = diag_sym_unitary_once(A, B, tol);
    if (r.residual < 1e-8) return r;
    best_resid = std::max(best_resid, r.residual);
  }
  throw NumericalError("Floquet eigenpair residual stayed above 1e-8 (worst " +
                       std::to_string(best_resid) + ")");
}

Eigen::VectorXd fold_quasienergies(const Eigen::VectorXcd& lambda, double T) {
  Eigen::VectorXd q(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    double e = -std::arg(lambda[i]) / T;
    if (e <= -M_PI / T) e += 2.0 * M_PI / T;
    q[i] = e;
  }
  return q;
}

std::vector<Eigen::Index> sort_order(const Eigen::VectorXd& key) {
  std::vector<Eigen::Index> idx(key.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return key[x] < key[y]; });
  return idx;
}

cx kick_parity_phase(int L) {
  switch (L % 4) {
    case 0: return cx(1.0, 0.0);
    case 1: return cx(0.0, -1.0);
    case 2: return cx(-1.0, 0.0);
    default: return cx(0.0, 1.0);
  }
}

}  // namespace

double wrap_angle(double x) {
  double y = std::fmod(x + M_PI, 2.0 * M_PI);
  if (y <= 0.0) y += 2.0 * M_PI;
  return y - M_PI;
}

Eigen::MatrixXcd floquet_matrix(const ModelParams& p) {
  p.validate();
  if (p.L > 13) throw ConfigError("dense one-period matrix supports L <= 13");
  SectorPropagator sp(p);
  Eigen::MatrixXcd U = assemble_u2_dense(sp);
  right_x_rotation(U, p.L, p.kick_angle());
  return U;
}

FloquetSpectrum floquet_spectrum(const ModelParams& p) {
  p.validate();
  if (p.L > 14) throw ConfigError("spectrum supports L <= 14");
  const int L = p.L;
  const double half = 0.5 * p.kick_angle();
  Eigen::MatrixXd A, B;
  {
    SectorPropagator sp(p);
    Eigen::MatrixXcd U = assemble_u2_dense(sp);
    left_x_rotation(U, L, half);
    right_x_rotation(U, L, half);
    A = 0.5 * (U.real() + U.real().transpose());
    B = 0.5 * (U.imag() + U.imag().transpose());
  }
  SymUnitaryEig eig = diag_sym_unitary(A, B);
  A.resize(0, 0);
  B.resize(0, 0);

  FloquetSpectrum fs;
  fs.params = p;
  const Eigen::VectorXd q = fold_quasienergies(eig.lambda, p.T);
  Eigen::MatrixXcd V = eig.W.cast<cx>();
  left_x_rotation(V, L, -half);  // back from the symmetrized frame
  const auto order = sort_order(q);
  const Eigen::Index n = q.size();
  fs.eigvals.resize(n);
  fs.quasienergies.resize(n);
  fs.eigvecs.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    fs.eigvals[i] = eig.lambda[order[i]];
    fs.quasienergies[i] = q[order[i]];
    fs.eigvecs.col(i) = V.col(order[i]);
  }
  return fs;
}

std::vector<SectorSpectrum> floquet_spectrum_blocked(const ModelParams& p) {
  p.validate();
  if (p.epsilon != 0.0)
    throw ConfigError("per-charge diagonalization needs epsilon = 0");
  const int L = p.L;
  SectorPropagator sp(p);
  const cx phase = kick_parity_phase(L);
  std::vector<SectorSpectrum> out;
  for (int q = L % 2; q <= L; q += 2) {
    const auto& plus = sp.blocks()[(q + L) / 2].states;
    const auto& minus = sp.blocks()[(-q + L) / 2].states;
    SectorSpectrum ss;
    ss.q = q;
    ss.states = plus;
    if (q > 0) ss.states.insert(ss.states.end(), minus.begin(), minus.end());
    const Eigen::Index n = static_cast<Eigen::Index>(ss.states.size());

    Eigen::MatrixXcd U2 = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXd re, im;
    u2_block(sp.blocks()[(q + L) / 2], p.T, re, im);
    const Eigen::Index np = static_cast<Eigen::Index>(plus.size());
    U2.topLeftCorner(np, np).real() = re;
    U2.topLeftCorner(np, np).imag() = im;
    if (q > 0) {
      u2_block(sp.blocks()[(-q + L) / 2], p.T, re, im);
      U2.bottomRightCorner(n - np, n - np).real() = re;
      U2.bottomRightCorner(n - np, n - np).imag() = im;
    }

    // U_F = phase * U2 * flip; the flip permutes columns.
    Eigen::MatrixXcd UF(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const basis_index f = flip_all(ss.states[j], L);
      Eigen::Index fj;
      if (q == 0) {
        fj = std::lower_bound(plus.begin(), plus.end(), f) - plus.begin();
      } else if (j < np) {
        fj = np + (std::lower_bound(minus.begin(), minus.end(), f) - minus.begin());
      } else {
        fj = std::lower_bound(plus.begin(), plus.end(), f) - plus.begin();
      }
      UF.col(j) = phase * U2.col(fj);
    }

    Eigen::MatrixXd A = 0.5 * (UF.real() + UF.real().transpose());
    Eigen::MatrixXd B = 0.5 * (UF.imag() + UF.imag().transpose());
    SymUnitaryEig eig = diag_sym_unitary(A, B);
    const Eigen::VectorXd qe = fold_quasienergies(eig.lambda, p.T);
    const auto order = sort_order(qe);
    ss.eigvals.resize(n);
    ss.quasienergies.resize(n);
    ss.eigvecs.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      ss.eigvals[i] = eig.lambda[order[i]];
      ss.quasienergies[i] = qe[order[i]];
      ss.eigvecs.col(i) = eig.W.col(order[i]);
    }
    out.push_back(std::move(ss));
  }
  return out;
}

Eigen::VectorXd eigenstate_overlaps(const FloquetSpectrum& fs,
                                    const Eigen::VectorXcd& psi) {
  if (psi.size() != fs.eigvecs.rows())
    throw ConfigError("state length does not match the spectrum");
  return (fs.eigvecs.adjoint() * psi).cwiseAbs2();
}

std::vector<PiPair> detect_pi_pairs(const FloquetSpectrum& fs,
                                    const Eigen::VectorXd& overlaps,
                                    double weight_cut_frac, double pair_tol) {
  if (overlaps.size() != fs.quasienergies.size())
    throw ConfigError("overlap vector does not match the spectrum");
  const double wmax = overlaps.size() ? overlaps.maxCoeff() : 0.0;
  if (wmax <= 0.0) return {};
  std::vector<int> cand;
  for (Eigen::Index i = 0; i < overlaps.size(); ++i)
    if (overlaps[i] >= weight_cut_frac * wmax) cand.push_back(static_cast<int>(i));
  std::stable_sort(cand.begin(), cand.end(),
                   [&](int x, int y) { return overlaps[x] > overlaps[y]; });
  std::vector<char> used(overlaps.size(), 0);
  std::vector<PiPair> pairs;
  const double T = fs.params.T;
  for (const int a : cand) {
    if (used[a]) continue;
    int best = -1;
    double best_d = pair_tol;
    for (const int b : cand) {
      if (b == a || used[b]) continue;
      const double gap = (fs.quasienergies[b] - fs.quasienergies[a]) * T;
      const double d = std::abs(std::abs(wrap_angle(gap)) - M_PI);
      if (d <= best_d) {
        best_d = d;
        best = b;
      }
    }
    if (best < 0) {
      used[a] = 1;
      continue;
    }
    used[a] = used[best] = 1;
    PiPair pp;
    pp.a = std::min(a, best);
    pp.b = std::max(a, best);
    pp.weight = overlaps[a] + overlaps[best];
    pp.offset = best_d;
    pairs.push_back(pp);
  }
  return pairs;
}

std::vector<BeatInfo> beat_frequencies(const FloquetSpectrum& fs,
                                       const std::vector<PiPair>& pairs) {
  const double T = fs.params.T;
  std::vector<BeatInfo> out;
  if (pairs.size() < 2) return out;
  out.reserve(pairs.size() * (pairs.size() - 1) / 2);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      BeatInfo bi;
      bi.first = (int)i;
      bi.second = (int)j;
      bi.delta = std::numeric_limits<double>::infinity();
      for (int x : {pairs[i].a, pairs[i].b})
        for (int y : {pairs[j].a, pairs[j].b})
          bi.delta = std::min(
              bi.delta,
              std::abs(wrap_angle((fs.quasienergies[x] - fs.quasienergies[y]) * T)));
      bi.nu = bi.delta / (2.0 * M_PI * T);
      std::vector<double> cand = {bi.nu, 1.0 / T - bi.nu, 0.5 / T + bi.nu,
                                  0.5 / T - bi.nu};
      std::sort(cand.begin(), cand.end());
      for (const double nu : cand) {
        if (nu < 0.0 || nu >= 1.0 / T - 1e-15) continue;
        if (!bi.predicted.empty() && nu - bi.predicted.back() < 1e-12) continue;
        bi.predicted.push_back(nu);
      }
      out.push_back(std::move(bi));
    }
  return out;
}

}  // namespace kxxz
