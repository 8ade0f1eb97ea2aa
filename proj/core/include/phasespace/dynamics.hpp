#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "phasespace/eigenstates.hpp"
#include "phasespace/phase_grid.hpp"
#include "phasespace/star_algebra.hpp"

namespace phasespace {

/// One quadrature node of the dynamical kernel: action k > 0 and weight w (units 1/action).
struct KernelNode {
  double k;
  double weight;
};

/// Distribution over the action parameter that selects the dynamics.
///
/// Classical is its own variant rather than a small-k node: the k -> 0 limit of (2/k) sin(k/2 .)
/// is singular numerically, so it is evaluated as the Poisson bracket directly.
class DynamicsKernel {
 public:
  static DynamicsKernel classical();
  /// K(k) = (2/k) delta(k - hbar), i.e. the single node (hbar, 2/hbar).
  static DynamicsKernel quantum(double hbar);
  /// Explicit nodes; k values must be distinct and positive.
  static DynamicsKernel quadrature(std::vector<KernelNode> nodes);
  /// n-point Gauss-Legendre rule on [k_lo, k_hi] with weights w_m = quadrature weight * density(k_m).
  static DynamicsKernel gauss_legendre(const std::function<double(double)>& density, double k_lo, double k_hi,
                                       int n);

  bool is_classical() const { return classical_; }
  const std::vector<KernelNode>& nodes() const { return nodes_; }
  std::string describe() const;

 private:
  DynamicsKernel() = default;
  bool classical_ = false;
  std::vector<KernelNode> nodes_;
};

/// Either a set of generalized eigenstates (generator sum_i eps_i g_i) or an explicit H field.
using Source = std::variant<EigenstateSet, PhaseField>;

/// sum_i eps_i g_i for a set, or the field itself.
PhaseField source_field(const Source& source);

/// Linear map f -> df/dt for a fixed source and kernel.
///
/// Quadrature kernels give sum_m w_m * f sin(k_m Lambda / 2) H, the classical kernel gives
/// f Lambda H = {H, f}. Tables depending on H are precomputed, so construct once and apply often.
class Generator {
 public:
  Generator(const Source& source, const DynamicsKernel& kernel, BracketKind kind = BracketKind::Sine);

  PhaseField apply(const PhaseField& f) const;

  const PhaseGrid& grid() const { return hamiltonian_.grid(); }
  const PhaseField& hamiltonian() const { return hamiltonian_; }
  const DynamicsKernel& kernel() const { return kernel_; }
  BracketKind bracket_kind() const { return kind_; }
  bool is_zero() const { return zero_; }

 private:
  PhaseField hamiltonian_;
  DynamicsKernel kernel_;
  BracketKind kind_;
  bool zero_ = false;
  std::vector<BracketOperator> brackets_;
  std::vector<double> weights_;
  std::optional<PoissonOperator> poisson_;
};

PhaseField generator_apply(const PhaseField& f, const Source& source, const DynamicsKernel& kernel);

/// Dense generator acting on row-major flattened fields.
struct LiouvillianOperator {
  Eigen::MatrixXd matrix;
  PhaseGrid grid;
  std::string description;
  double probe_defect = 0.0;  // max |L f - generator(f)| over the assembly probes

  /// max |L + L^T| / max |L| (0 for the zero operator).
  double antisymmetry_defect() const;
};

constexpr std::size_t kDefaultLiouvillianCap = 4096;

/// Materializes the generator column by column and verifies it on 10 random probes.
LiouvillianOperator assemble_liouvillian(const Generator& generator, std::size_t cap = kDefaultLiouvillianCap);
LiouvillianOperator assemble_liouvillian(const Source& source, const DynamicsKernel& kernel,
                                         std::size_t cap = kDefaultLiouvillianCap);

enum class Integrator { Rk4, Exact };

struct EvolveOptions {
  double t_final = 1.0;
  double dt = 1e-3;
  Integrator integrator = Integrator::Rk4;
  int snapshot_stride = 1;  // steps between stored snapshots; the final state is always stored
  std::size_t exact_cap = kDefaultLiouvillianCap;
};

struct Snapshot {
  double t;
  PhaseField f;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;

  const Snapshot& final() const { return snapshots.back(); }
};

/// Fixed-step integration of df/dt = generator(f). Throws NumericalInstability when the L2 norm
/// grows past 10x its initial value.
Trajectory evolve(const PhaseField& f0, const Generator& generator, const EvolveOptions& options);
Trajectory evolve(const PhaseField& f0, const Source& source, const DynamicsKernel& kernel,
                  const EvolveOptions& options);

/// ||generator(g)||_2 / ||g||_2.
double stationarity_residual(const PhaseField& g, const Generator& generator);
double stationarity_residual(const PhaseField& g, const Source& source, const DynamicsKernel& kernel);

/// Residuals of the displacement-kernel reading J(z, d) = L[z + d, z] / (dq dp):
///  (i)   |J(z, d) + J(z + d, -d)|   (skew-symmetry, equivalent to L = -L^T)
///  (ii)  |J(z, d) + J(z, -d)|       (oddness in the displacement)
///  (iii) |J(z + d, d) - J(z, d)|    (translation periodicity along the displacement)
/// Displacements wrap around the periodic index torus.
struct JConditionReport {
  double skew = 0.0;
  double oddness = 0.0;
  double periodicity = 0.0;
  double max_abs_j = 0.0;
};

JConditionReport j_condition_checks(const LiouvillianOperator& L);

}  // namespace phasespace
