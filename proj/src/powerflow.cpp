#include "quartersim/powerflow.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "quartersim/error.hpp"

namespace quartersim {

using cplx = std::complex<double>;

namespace {

std::vector<cplx> currents(const AdmittanceMatrix& y, const std::vector<cplx>& v) {
  std::vector<cplx> i(v.size(), cplx{});
  for (Eigen::Index k = 0; k < y.y.outerSize(); ++k) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(y.y, k); it; ++it) {
      i[static_cast<std::size_t>(it.row())] += it.value() * v[static_cast<std::size_t>(it.col())];
    }
  }
  return i;
}

}  // namespace

std::vector<cplx> bus_injections(const AdmittanceMatrix& y, const std::vector<cplx>& v) {
  const auto i = currents(y, v);
  std::vector<cplx> s(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) s[k] = v[k] * std::conj(i[k]);
  return s;
}

double max_mismatch(const AdmittanceMatrix& y, const std::vector<cplx>& v, const std::vector<cplx>& s_spec,
                    std::size_t slack) {
  const auto s = bus_injections(y, v);
  double worst = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k == slack) continue;
    const auto d = s[k] - s_spec[k];
    worst = std::max({worst, std::abs(d.real()), std::abs(d.imag())});
  }
  return worst;
}

PowerFlowResult solve_power_flow(const AdmittanceMatrix& y, const std::vector<cplx>& s_spec, std::size_t slack,
                                 const PowerFlowOptions& options) {
  const auto n = y.n();
  if (s_spec.size() != n) throw DomainError("injection vector size does not match bus count");
  if (slack >= n) throw DomainError("slack index out of range");

  // position of each non-slack bus among the unknowns
  std::vector<Eigen::Index> pos(n, -1);
  Eigen::Index m = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != slack) pos[k] = m++;
  }

  PowerFlowResult result;
  result.voltage.assign(n, cplx{1.0, 0.0});
  auto& v = result.voltage;
  if (m == 0) return result;

  Eigen::VectorXd f(2 * m);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int iter = 0;; ++iter) {
    const auto i = currents(y, v);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (pos[k] < 0) continue;
      const auto d = v[k] * std::conj(i[k]) - s_spec[k];
      f[pos[k]] = d.real();
      f[m + pos[k]] = d.imag();
      worst = std::max({worst, std::abs(d.real()), std::abs(d.imag())});
    }
    result.max_mismatch_pu = worst;
    result.iterations = iter;
    if (worst < options.tolerance_pu) return result;
    result.trace.push_back(worst);
    if (iter >= options.max_iterations || !std::isfinite(worst)) {
      std::ostringstream msg;
      msg << "power flow did not converge after " << iter << " iterations (max mismatch " << worst << " p.u.)";
      throw SolverError(msg.str(), result.trace);
    }

    // dS/dtheta = j diag(V) conj(diag(I) - Y diag(V))
    // dS/d|V|   = diag(V) conj(Y diag(V/|V|)) + conj(diag(I)) diag(V/|V|)
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(4 * static_cast<std::size_t>(y.y.nonZeros()) + 4 * n);
    auto put = [&](Eigen::Index r, Eigen::Index c, cplx ds_da, cplx ds_dm) {
      triplets.emplace_back(r, c, ds_da.real());
      triplets.emplace_back(r, m + c, ds_dm.real());
      triplets.emplace_back(m + r, c, ds_da.imag());
      triplets.emplace_back(m + r, m + c, ds_dm.imag());
    };
    const cplx j{0.0, 1.0};
    for (Eigen::Index col = 0; col < y.y.outerSize(); ++col) {
      for (Eigen::SparseMatrix<cplx>::InnerIterator it(y.y, col); it; ++it) {
        const auto r = static_cast<std::size_t>(it.row());
        const auto c = static_cast<std::size_t>(it.col());
        if (pos[r] < 0 || pos[c] < 0) continue;
        const auto unit_c = v[c] / std::abs(v[c]);
        put(pos[r], pos[c], j * v[r] * std::conj(-it.value() * v[c]), v[r] * std::conj(it.value() * unit_c));
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (pos[k] < 0) continue;
      put(pos[k], pos[k], j * v[k] * std::conj(i[k]), std::conj(i[k]) * v[k] / std::abs(v[k]));
    }
    Eigen::SparseMatrix<double> jac(2 * m, 2 * m);
    jac.setFromTriplets(triplets.begin(), triplets.end());
    jac.makeCompressed();
    lu.compute(jac);
    if (lu.info() != Eigen::Success) throw SingularityError("power-flow Jacobian is singular");
    const Eigen::VectorXd dx = lu.solve(-f);
    if (lu.info() != Eigen::Success) throw SingularityError("power-flow Jacobian solve failed");

    for (std::size_t k = 0; k < n; ++k) {
      if (pos[k] < 0) continue;
      const double angle = std::arg(v[k]) + dx[pos[k]];
      const double mag = std::abs(v[k]) + dx[m + pos[k]];
      v[k] = std::polar(mag, angle);
    }
  }
}

}  // namespace quartersim
