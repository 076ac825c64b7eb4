#pragma once

#include <complex>
#include <vector>

#include "quartersim/grid.hpp"

namespace quartersim {

struct PowerFlowOptions {
  double tolerance_pu = 1e-8;
  int max_iterations = 50;
};

struct PowerFlowResult {
  std::vector<std::complex<double>> voltage;
  int iterations = 0;
  double max_mismatch_pu = 0.0;
  /// Max |dP, dQ| before each Newton step.
  std::vector<double> trace;
};

/// Complex power drawn from the network at each bus, S = V conj(Y V).
std::vector<std::complex<double>> bus_injections(const AdmittanceMatrix& y, const std::vector<std::complex<double>>& v);

/// Largest |dP| or |dQ| over the non-slack buses.
double max_mismatch(const AdmittanceMatrix& y, const std::vector<std::complex<double>>& v,
                    const std::vector<std::complex<double>>& s_spec, std::size_t slack);

/// Newton-Raphson in polar coordinates from a flat start. `s_spec` holds specified net
/// injections (generation positive) in per-unit; the slack is held at 1.0 at angle 0.
/// Throws SolverError (with the mismatch trace) when it does not converge and
/// SingularityError when the Jacobian cannot be factorized.
PowerFlowResult solve_power_flow(const AdmittanceMatrix& y, const std::vector<std::complex<double>>& s_spec,
                                 std::size_t slack, const PowerFlowOptions& options = {});

}  // namespace quartersim
