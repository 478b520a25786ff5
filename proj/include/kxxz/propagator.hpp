#pragma once
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kxxz/basis.hpp"
#include "kxxz/model.hpp"
#include "kxxz/operators.hpp"

namespace kxxz {

/// In place psi <- exp(-i theta sum_j sx_j) psi.
void apply_global_x_rotation(Eigen::VectorXcd& psi, int L, double theta);

/// Basis states grouped by signed magnetization; entry k holds m = 2k - L,
/// states sorted ascending.
std::vector<std::vector<basis_index>> sectors_by_m(int L);

/// Eigendecomposition of one magnetization block of the chain Hamiltonian.
struct SpectralBlock {
  int m = 0;
  std::vector<basis_index> states;
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;    // empty when single precision storage is active
  Eigen::MatrixXf evecs_f;  // empty otherwise
  bool f32 = false;
};

enum class EvolveMode { Auto, Dense, Sector, Krylov };
EvolveMode parse_evolve_mode(const std::string& name);

/// One Floquet period is step(): the kick exp(-i(pi/2-eps) sum sx) followed by
/// the interaction exp(-i T H).
class Propagator {
 public:
  virtual ~Propagator() = default;
  void apply_kick(Eigen::VectorXcd& psi) const;
  virtual void apply_interaction(Eigen::VectorXcd& psi) const = 0;
  void step(Eigen::VectorXcd& psi) const;
  const ModelParams& params() const { return p_; }
  virtual const char* mode_name() const = 0;

 protected:
  explicit Propagator(const ModelParams& p) : p_(p) { p_.validate(); }
  ModelParams p_;
};

/// Exact evolution from per-magnetization-sector eigendecompositions.
/// Eigenvector storage drops to single precision when the double cost passes
/// 2 GB and refuses outright past 3.5 GB.
class SectorPropagator : public Propagator {
 public:
  explicit SectorPropagator(const ModelParams& p, bool force_f32 = false);
  void apply_interaction(Eigen::VectorXcd& psi) const override;
  /// Interaction applied to many states at once (one gemm pair per sector).
  void apply_interaction_batch(Eigen::MatrixXcd& cols) const;
  const std::vector<SpectralBlock>& blocks() const { return blocks_; }
  const char* mode_name() const override { return "sector"; }

 private:
  std::vector<SpectralBlock> blocks_;
};

/// Full-matrix eigendecomposition of H; reference engine, L <= 13.
class DensePropagator : public Propagator {
 public:
  explicit DensePropagator(const ModelParams& p);
  void apply_interaction(Eigen::VectorXcd& psi) const override;
  const char* mode_name() const override { return "dense"; }

 private:
  Eigen::VectorXd evals_;
  Eigen::MatrixXd evecs_;
};

/// Matrix-free Lanczos evolution; memory stays O(m 2^L).
class KrylovPropagator : public Propagator {
 public:
  explicit KrylovPropagator(const ModelParams& p, int m = 30, double tol = 1e-10);
  void apply_interaction(Eigen::VectorXcd& psi) const override;
  const char* mode_name() const override { return "krylov"; }

 private:
  XxzMatvec mv_;
  int m_;
  double tol_;
};

std::unique_ptr<Propagator> make_propagator(const ModelParams& p,
                                            EvolveMode mode = EvolveMode::Auto,
                                            int krylov_m = 30,
                                            double krylov_tol = 1e-10);

/// psi <- exp(-i t H) psi via restarted Lanczos with full reorthogonalization.
/// Substeps double until the residual estimate drops below tol * ||psi||.
void krylov_expmi(const XxzMatvec& H, double t, Eigen::VectorXcd& psi, int m,
                  double tol);

}  // namespace kxxz
