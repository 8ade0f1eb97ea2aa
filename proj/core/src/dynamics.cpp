#include "phasespace/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "phasespace/error.hpp"

namespace phasespace {

// ---------------------------------------------------------------------------
// DynamicsKernel

DynamicsKernel DynamicsKernel::classical() {
  DynamicsKernel k;
  k.classical_ = true;
  return k;
}

DynamicsKernel DynamicsKernel::quantum(double hbar) {
  if (!(hbar > 0)) throw ValidationError("hbar must be positive");
  return quadrature({{hbar, 2.0 / hbar}});
}

DynamicsKernel DynamicsKernel::quadrature(std::vector<KernelNode> nodes) {
  if (nodes.empty()) throw ValidationError("quadrature kernel needs at least one node");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i].k > 0) || !std::isfinite(nodes[i].k)) throw ValidationError("kernel nodes need k > 0");
    if (!std::isfinite(nodes[i].weight)) throw ValidationError("kernel weights must be finite");
    for (std::size_t j = 0; j < i; ++j)
      if (nodes[i].k == nodes[j].k) throw ValidationError("kernel nodes must be distinct");
  }
  DynamicsKernel k;
  k.nodes_ = std::move(nodes);
  return k;
}

DynamicsKernel DynamicsKernel::gauss_legendre(const std::function<double(double)>& density, double k_lo,
                                              double k_hi, int n) {
  if (!(k_lo > 0) || !(k_hi > k_lo)) throw ValidationError("Gauss-Legendre interval must satisfy 0 < k_lo < k_hi");
  if (n < 1) throw ValidationError("Gauss-Legendre rule needs at least one node");
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the Legendre recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = beta;
    jacobi(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  std::vector<KernelNode> nodes;
  const double half = 0.5 * (k_hi - k_lo);
  const double mid = 0.5 * (k_hi + k_lo);
  for (int i = 0; i < n; ++i) {
    const double x = eig.eigenvalues()(i);
    const double w = 2.0 * eig.eigenvectors()(0, i) * eig.eigenvectors()(0, i);
    const double k = mid + half * x;
    nodes.push_back({k, half * w * density(k)});
  }
  return quadrature(std::move(nodes));
}

std::string DynamicsKernel::describe() const {
  if (classical_) return "classical";
  std::ostringstream out;
  out << "nodes";
  for (const KernelNode& n : nodes_) out << ' ' << n.k << ':' << n.weight;
  return out.str();
}

// ---------------------------------------------------------------------------
// Generator

PhaseField source_field(const Source& source) {
  if (const auto* set = std::get_if<EigenstateSet>(&source)) {
    if (set->empty()) throw ValidationError("eigenstate source is empty");
    PhaseField h(set->grid(), FieldRole::Observable);
    for (const Eigenstate& e : set->entries()) h.add_scaled(e.g, e.coefficient());
    return h;
  }
  return std::get<PhaseField>(source).with_role(FieldRole::Observable);
}

Generator::Generator(const Source& source, const DynamicsKernel& kernel, BracketKind kind)
    : hamiltonian_(source_field(source)),
      kernel_(kernel),
      kind_(kind) {
  zero_ = max_abs(hamiltonian_) == 0.0;
  if (zero_) return;
  if (kernel_.is_classical()) {
    poisson_.emplace(hamiltonian_);
    return;
  }
  // By bilinearity, sum_i eps_i sin-bracket(f, g_i) is one bracket against H = sum_i eps_i g_i.
  for (const KernelNode& node : kernel_.nodes()) {
    brackets_.emplace_back(hamiltonian_, node.k);
    weights_.push_back(node.weight);
  }
}

PhaseField Generator::apply(const PhaseField& f) const {
  require_same_grid(grid(), f.grid());
  PhaseField out(grid(), FieldRole::Observable);
  if (zero_) return out;
  if (kernel_.is_classical()) {
    // f Lambda H = -{f, H}
    PhaseField flow = poisson_->bracket(f);
    flow *= -1.0;
    return flow;
  }
  const ModeArray fm = mode_transform(f);
  for (std::size_t m = 0; m < brackets_.size(); ++m) out.add_scaled(brackets_[m].apply_modes(fm, kind_), weights_[m]);
  return out;
}

PhaseField generator_apply(const PhaseField& f, const Source& source, const DynamicsKernel& kernel) {
  return Generator(source, kernel).apply(f);
}

// ---------------------------------------------------------------------------
// Liouvillian

double LiouvillianOperator::antisymmetry_defect() const {
  const double scale = matrix.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (matrix + matrix.transpose()).cwiseAbs().maxCoeff() / scale;
}

LiouvillianOperator assemble_liouvillian(const Generator& generator, std::size_t cap) {
  const PhaseGrid& grid = generator.grid();
  const std::size_t n = grid.size();
  if (n > cap) {
    throw ValidationError("Liouvillian of size " + std::to_string(n) + " exceeds the cap of " + std::to_string(cap));
  }
  LiouvillianOperator L{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), grid,
                        "kernel=" + generator.kernel().describe()};
  if (!generator.is_zero()) {
    PhaseField unit(grid);
    for (std::size_t c = 0; c < n; ++c) {
      unit.values()[c] = 1.0;
      const PhaseField col = generator.apply(unit);
      unit.values()[c] = 0.0;
      for (std::size_t r = 0; r < n; ++r) L.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col.values()[r];
    }
  }

  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int probe = 0; probe < 10; ++probe) {
    PhaseField f(grid);
    for (double& x : f.values()) x = normal(rng);
    const PhaseField expected = generator.apply(f);
    const Eigen::Map<const Eigen::VectorXd> fv(f.values().data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd lf = L.matrix * fv;
    double defect = 0.0;
    double scale = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      defect = std::max(defect, std::abs(lf(static_cast<Eigen::Index>(r)) - expected.values()[r]));
      scale = std::max(scale, std::abs(expected.values()[r]));
    }
    L.probe_defect = std::max(L.probe_defect, defect / scale);
  }
  if (L.probe_defect > 1e-10) {
    throw NumericalInstability("assembled Liouvillian disagrees with the generator on random probes");
  }
  return L;
}

LiouvillianOperator assemble_liouvillian(const Source& source, const DynamicsKernel& kernel, std::size_t cap) {
  return assemble_liouvillian(Generator(source, kernel), cap);
}

// ---------------------------------------------------------------------------
// Time integration

namespace {

class Stepper {
 public:
  virtual ~Stepper() = default;
  virtual PhaseField step(const PhaseField& f, double h) = 0;
};

class Rk4Stepper final : public Stepper {
 public:
  explicit Rk4Stepper(const Generator& gen) : gen_(gen) {}

  PhaseField step(const PhaseField& f, double h) override {
    const PhaseField k1 = gen_.apply(f);
    const PhaseField k2 = gen_.apply(PhaseField(f).add_scaled(k1, 0.5 * h));
    const PhaseField k3 = gen_.apply(PhaseField(f).add_scaled(k2, 0.5 * h));
    const PhaseField k4 = gen_.apply(PhaseField(f).add_scaled(k3, h));
    PhaseField out = f;
    out.add_scaled(k1, h / 6.0).add_scaled(k2, h / 3.0).add_scaled(k3, h / 3.0).add_scaled(k4, h / 6.0);
    return out;
  }

 private:
  const Generator& gen_;
};

class ExactStepper final : public Stepper {
 public:
  ExactStepper(const Generator& gen, std::size_t cap) : L_(assemble_liouvillian(gen, cap)) {}

  PhaseField step(const PhaseField& f, double h) override {
    if (h != cached_h_) {
      propagator_ = (h * L_.matrix).exp();
      cached_h_ = h;
    }
    const Eigen::Map<const Eigen::VectorXd> fv(f.values().data(), static_cast<Eigen::Index>(f.values().size()));
    const Eigen::VectorXd next = propagator_ * fv;
    return PhaseField(f.grid(), std::vector<double>(next.data(), next.data() + next.size()), f.role());
  }

 private:
  LiouvillianOperator L_;
  Eigen::MatrixXd propagator_;
  double cached_h_ = -1.0;
};

}  // namespace

Trajectory evolve(const PhaseField& f0, const Generator& generator, const EvolveOptions& options) {
  require_same_grid(generator.grid(), f0.grid());
  if (!(options.dt > 0) || !std::isfinite(options.dt)) throw ValidationError("dt must be positive");
  if (!(options.t_final >= 0) || !std::isfinite(options.t_final)) throw ValidationError("t_final must be nonnegative");
  if (options.snapshot_stride < 1) throw ValidationError("snapshot stride must be at least 1");

  std::unique_ptr<Stepper> stepper;
  if (options.integrator == Integrator::Exact) {
    stepper = std::make_unique<ExactStepper>(generator, options.exact_cap);
  } else {
    stepper = std::make_unique<Rk4Stepper>(generator);
  }

  // Whole steps of dt, with the last one shortened to land on t_final.
  const double ratio = options.t_final / options.dt;
  long long steps = static_cast<long long>(std::ceil(ratio - 1e-9));
  if (steps < 0) steps = 0;

  Trajectory traj;
  traj.snapshots.push_back({0.0, f0.with_role(FieldRole::Density)});
  const double limit = 10.0 * l2_norm(f0);
  PhaseField f = f0.with_role(FieldRole::Density);
  for (long long s = 1; s <= steps; ++s) {
    const bool last = s == steps;
    const double t = last ? options.t_final : s * options.dt;
    f = stepper->step(f, last ? options.t_final - (s - 1) * options.dt : options.dt);
    if (!(l2_norm(f) <= limit)) {
      throw NumericalInstability("evolution diverged at t = " + std::to_string(t) +
                                 " (dt too large for the generator's spectral radius)");
    }
    if (s % options.snapshot_stride == 0 || s == steps) traj.snapshots.push_back({t, f});
  }
  return traj;
}

Trajectory evolve(const PhaseField& f0, const Source& source, const DynamicsKernel& kernel,
                  const EvolveOptions& options) {
  return evolve(f0, Generator(source, kernel), options);
}

double stationarity_residual(const PhaseField& g, const Generator& generator) {
  const double norm = l2_norm(g);
  if (!(norm > 0)) throw ValidationError("stationarity residual of a zero field is undefined");
  return l2_norm(generator.apply(g)) / norm;
}

double stationarity_residual(const PhaseField& g, const Source& source, const DynamicsKernel& kernel) {
  return stationarity_residual(g, Generator(source, kernel));
}

// ---------------------------------------------------------------------------
// Displacement-kernel checks

JConditionReport j_condition_checks(const LiouvillianOperator& L) {
  const PhaseGrid& grid = L.grid;
  const int nq = grid.nq();
  const int np = grid.np();
  const double inv_cell = 1.0 / grid.cell_area();
  const auto flat = [&](int i, int j) {
    return static_cast<Eigen::Index>(((i % nq) + nq) % nq) * np + ((j % np) + np) % np;
  };
  // J(z, d) with z = (i, j), d = (di, dj).
  const auto J = [&](int i, int j, int di, int dj) { return L.matrix(flat(i + di, j + dj), flat(i, j)) * inv_cell; };

  JConditionReport report;
  report.max_abs_j = L.matrix.cwiseAbs().maxCoeff() * inv_cell;
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < np; ++j)
      for (int di = 0; di < nq; ++di)
        for (int dj = 0; dj < np; ++dj) {
          const double jz = J(i, j, di, dj);
          report.skew = std::max(report.skew, std::abs(jz + J(i + di, j + dj, -di, -dj)));
          report.oddness = std::max(report.oddness, std::abs(jz + J(i, j, -di, -dj)));
          report.periodicity = std::max(report.periodicity, std::abs(J(i + di, j + dj, di, dj) - jz));
        }
  return report;
}

}  // namespace phasespace
