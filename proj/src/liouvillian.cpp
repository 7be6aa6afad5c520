#include "cpt/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace cpt {

namespace {

void require_basis_match(const SystemParams& params,
                         const SymmetricBasis& basis) {
  if (basis.n_atoms() != params.n_atoms) {
    throw std::invalid_argument("basis was built for a different atom count");
  }
}

}  // namespace

ComplexMatrix build_hamiltonian(const SystemParams& params,
                                const SymmetricBasis& basis) {
  params.validate();
  require_basis_match(params, basis);
  ComplexMatrix h =
      params.delta * (collective_operator(basis, 2, 2) -
                      collective_operator(basis, 3, 3)) +
      params.omega2 * (collective_operator(basis, 1, 2) +
                       collective_operator(basis, 2, 1)) +
      params.omega3 * (collective_operator(basis, 1, 3) +
                       collective_operator(basis, 3, 1));
  return h;
}

ComplexMatrix build_liouvillian(const SystemParams& params,
                                const SymmetricBasis& basis) {
  params.validate();
  require_basis_match(params, basis);
  if (params.n_atoms > kMaxExactAtoms) {
    throw std::invalid_argument(
        "exact superoperator supports at most " +
        std::to_string(kMaxExactAtoms) +
        " atoms; use the dressed or analytic route beyond that");
  }
  const int d = basis.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  const ComplexMatrix h = build_hamiltonian(params, basis);
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const Complex im(0.0, 1.0);

  // Column-major vectorization: vec(A rho B) = (B^T kron A) vec(rho).
  ComplexMatrix liou = ComplexMatrix::Zero(n, n);
  liou.noalias() -= im * Eigen::kroneckerProduct(id, h);
  liou.noalias() += im * Eigen::kroneckerProduct(h.transpose(), id);

  auto add_jump = [&](const ComplexMatrix& c, double rate) {
    if (rate <= 0.0) return;
    const ComplexMatrix cdc = c.adjoint() * c;
    liou.noalias() += (2.0 * rate) * Eigen::kroneckerProduct(c.conjugate(), c);
    liou.noalias() -= rate * Eigen::kroneckerProduct(id, cdc);
    liou.noalias() -= rate * Eigen::kroneckerProduct(cdc.transpose(), id);
  };
  add_jump(collective_operator(basis, 2, 1), params.gamma2 * (1.0 + params.nbar2));
  add_jump(collective_operator(basis, 1, 2), params.gamma2 * params.nbar2);
  add_jump(collective_operator(basis, 3, 1), params.gamma3 * (1.0 + params.nbar3));
  add_jump(collective_operator(basis, 1, 3), params.gamma3 * params.nbar3);
  return liou;
}

DensityCheck check_density(const ComplexMatrix& rho) {
  DensityCheck out{};
  out.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  out.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      ((rho + rho.adjoint()) / 2.0).eval(), Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  return out;
}

void require_density(const ComplexMatrix& rho, double herm_tol,
                     double trace_tol, double eig_floor) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("density matrix must be square");
  }
  const DensityCheck c = check_density(rho);
  if (c.hermiticity_error > herm_tol) {
    throw std::invalid_argument("density matrix is not Hermitian (error " +
                                std::to_string(c.hermiticity_error) + ")");
  }
  if (c.trace_error > trace_tol) {
    throw std::invalid_argument("density matrix trace deviates from 1 by " +
                                std::to_string(c.trace_error));
  }
  if (c.min_eigenvalue < eig_floor) {
    throw std::invalid_argument("density matrix has eigenvalue " +
                                std::to_string(c.min_eigenvalue) +
                                " below the positivity floor");
  }
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                 kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights (error estimator).
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

}  // namespace

ComplexMatrix evolve(const ComplexMatrix& liouvillian,
                     const ComplexMatrix& rho0, double t_final, double tol) {
  const Eigen::Index n = liouvillian.rows();
  if (liouvillian.cols() != n) {
    throw std::invalid_argument("Liouvillian must be square");
  }
  const Eigen::Index d = rho0.rows();
  if (rho0.cols() != d || d * d != n) {
    throw std::invalid_argument(
        "state dimension does not match the Liouvillian");
  }
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw std::invalid_argument("t_final must be finite and >= 0");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  require_density(rho0);
  if (t_final == 0.0) return rho0;

  ComplexVector y = Eigen::Map<const ComplexVector>(rho0.data(), n);
  const double drift_cap = 100.0 * tol;

  auto rehermitize = [&](ComplexVector& v) {
    Eigen::Map<ComplexMatrix> m(v.data(), d, d);
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    const double herm_err = (m - sym).cwiseAbs().maxCoeff();
    m = sym;
    const double tr_err = std::abs(m.trace() - Complex(1.0, 0.0));
    if (herm_err > drift_cap || tr_err > drift_cap) {
      throw std::runtime_error(
          "density-matrix invariants drifted beyond 100x the integrator "
          "tolerance (hermiticity " +
          std::to_string(herm_err) + ", trace " + std::to_string(tr_err) + ")");
    }
  };

  ComplexVector k1 = liouvillian * y;
  const double lscale = liouvillian.cwiseAbs().rowwise().sum().maxCoeff();
  double h = std::min(t_final, 0.1 / std::max(lscale, 1e-300));
  double t = 0.0;
  const double h_floor =
      16.0 * std::numeric_limits<double>::epsilon() * t_final;

  ComplexVector k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y5(n);
  while (t < t_final) {
    h = std::min(h, t_final - t);
    k2 = liouvillian * (y + h * kA21 * k1);
    k3 = liouvillian * (y + h * (kA31 * k1 + kA32 * k2));
    k4 = liouvillian * (y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
    k5 = liouvillian *
         (y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
    k6 = liouvillian * (y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 +
                                 kA64 * k4 + kA65 * k5));
    y5 = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    k7 = liouvillian * y5;

    double err_sq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex e = h * (kE1 * k1(i) + kE3 * k3(i) + kE4 * k4(i) +
                             kE5 * k5(i) + kE6 * k6(i) + kE7 * k7(i));
      const double sc =
          tol + tol * std::max(std::abs(y(i)), std::abs(y5(i)));
      const double q = std::abs(e) / sc;
      err_sq += q * q;
    }
    const double err = std::sqrt(err_sq / static_cast<double>(n));

    if (err <= 1.0) {
      t += h;
      y = y5;
      rehermitize(y);
      if (t >= t_final) break;
      k1 = liouvillian * y;
    }
    const double factor = (err > 0.0)
                              ? 0.9 * std::pow(err, -0.2)
                              : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < h_floor) {
      throw std::runtime_error("integrator step size underflow at t = " +
                               std::to_string(t));
    }
  }

  ComplexMatrix rho = Eigen::Map<ComplexMatrix>(y.data(), d, d);
  require_density(rho, drift_cap, drift_cap,
                  std::min(-1e-8, -drift_cap));
  return rho;
}

SteadyStateResult steady_state_numeric(const ComplexMatrix& liouvillian,
                                       const SteadyStateOptions& options) {
  const Eigen::Index n = liouvillian.rows();
  if (liouvillian.cols() != n || n == 0) {
    throw std::invalid_argument("Liouvillian must be square and non-empty");
  }
  const Eigen::Index d = static_cast<Eigen::Index>(std::llround(
      std::sqrt(static_cast<double>(n))));
  if (d * d != n) {
    throw std::invalid_argument("Liouvillian dimension is not a square");
  }
  const double lnorm = liouvillian.norm();
  if (!(lnorm > 0.0)) {
    throw std::runtime_error("Liouvillian is identically zero");
  }

  // Least-squares null vector with the trace functional as an extra row;
  // the weight puts the constraint on the scale of a typical row of L.
  const double w = lnorm / std::sqrt(static_cast<double>(n));
  ComplexMatrix a(n + 1, n);
  a.topRows(n) = liouvillian;
  a.row(n).setZero();
  for (Eigen::Index i = 0; i < d; ++i) a(n, i + i * d) = w;
  ComplexVector b = ComplexVector::Zero(n + 1);
  b(n) = w;

  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(a);
  ComplexVector x = qr.solve(b);
  x += qr.solve(b - a * x);  // one refinement pass

  const double residual_rel = (liouvillian * x).norm() / lnorm;
  SteadyStateResult result;
  result.residual_rel = residual_rel;
  result.null_space_gap = std::numeric_limits<double>::quiet_NaN();

  const bool check_gap = options.uniqueness_check == 1 ||
                         (options.uniqueness_check < 0 && n <= 1024);
  if (check_gap) {
    Eigen::BDCSVD<ComplexMatrix> svd(liouvillian);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    result.null_space_gap = sv(n - 2) / smax;
    if (sv(n - 2) <= 1e-10 * smax) {
      throw std::runtime_error(
          "steady state is not unique: the Liouvillian null space has "
          "dimension > 1 (singular-value gap " +
          std::to_string(result.null_space_gap) + ")");
    }
  }
  if (residual_rel > options.residual_tol) {
    throw std::runtime_error("steady-state residual " +
                             std::to_string(residual_rel) +
                             " exceeds tolerance " +
                             std::to_string(options.residual_tol));
  }

  ComplexMatrix rho = Eigen::Map<ComplexMatrix>(x.data(), d, d);
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  const double tr = rho.trace().real();
  if (!(std::abs(tr) > 1e-300)) {
    throw std::runtime_error("steady-state candidate has vanishing trace");
  }
  rho /= tr;
  require_density(rho);
  result.rho = std::move(rho);
  return result;
}

double upper_population(const ComplexMatrix& rho, const SymmetricBasis& basis) {
  const int d = basis.dim();
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("state dimension does not match the basis");
  }
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    total += basis.state(i)[0] * rho(i, i).real();
  }
  return total;
}

}  // namespace cpt
