#pragma once

// Reference power-flow solvers used to cross-check the Newton-Raphson implementation.
// Neither touches the admittance assembly or the Jacobian.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "quartersim/grid.hpp"
#include "quartersim/rng.hpp"

namespace oracle {

using cplx = std::complex<double>;

struct RadialBranch {
  std::size_t parent = 0;
  std::size_t child = 0;
  cplx z;  // per-unit series impedance
};

/// Radial test network rooted at bus 0 (slack); branches listed parent before child.
struct RadialCase {
  std::size_t n = 0;
  std::vector<RadialBranch> branches;
  std::vector<cplx> s_spec;  // generation positive, per-unit
};

/// Backward/forward sweep with constant-power loads.
inline std::vector<cplx> sweep(const RadialCase& c, double tol = 1e-13, int max_iter = 10000) {
  std::vector<cplx> v(c.n, cplx(1.0, 0.0));
  for (int it = 0; it < max_iter; ++it) {
    std::vector<cplx> i_node(c.n);
    for (std::size_t k = 1; k < c.n; ++k) i_node[k] = std::conj(-c.s_spec[k] / v[k]);
    std::vector<cplx> i_branch(c.branches.size());
    std::vector<cplx> downstream = i_node;
    for (std::size_t b = c.branches.size(); b-- > 0;) {
      i_branch[b] = downstream[c.branches[b].child];
      downstream[c.branches[b].parent] += i_branch[b];
    }
    double change = 0.0;
    for (std::size_t b = 0; b < c.branches.size(); ++b) {
      const cplx next = v[c.branches[b].parent] - c.branches[b].z * i_branch[b];
      change = std::max(change, std::abs(next - v[c.branches[b].child]));
      v[c.branches[b].child] = next;
    }
    if (change < tol) return v;
  }
  throw std::runtime_error("sweep did not converge");
}

/// Dense Gauss-Seidel on a bus admittance matrix built here from the branch list.
inline std::vector<cplx> gauss_seidel(const RadialCase& c, double tol = 1e-13, int max_iter = 1000000) {
  std::vector<std::vector<cplx>> y(c.n, std::vector<cplx>(c.n));
  for (const auto& b : c.branches) {
    const cplx ys = 1.0 / b.z;
    y[b.parent][b.parent] += ys;
    y[b.child][b.child] += ys;
    y[b.parent][b.child] -= ys;
    y[b.child][b.parent] -= ys;
  }
  std::vector<cplx> v(c.n, cplx(1.0, 0.0));
  for (int it = 0; it < max_iter; ++it) {
    double change = 0.0;
    for (std::size_t i = 1; i < c.n; ++i) {
      cplx acc = std::conj(c.s_spec[i]) / std::conj(v[i]);
      for (std::size_t j = 0; j < c.n; ++j) {
        if (j != i) acc -= y[i][j] * v[j];
      }
      const cplx next = acc / y[i][i];
      change = std::max(change, std::abs(next - v[i]));
      v[i] = next;
    }
    if (change < tol) return v;
  }
  throw std::runtime_error("Gauss-Seidel did not converge");
}

/// Random radial network: each new bus hangs off a random earlier bus.
inline RadialCase random_radial(quartersim::RngStream& rng, std::size_t n) {
  RadialCase c;
  c.n = n;
  c.s_spec.assign(n, cplx());
  for (std::size_t k = 1; k < n; ++k) {
    const auto parent = static_cast<std::size_t>(rng.index(k));
    c.branches.push_back({parent, k, cplx(rng.uniform(0.002, 0.03), rng.uniform(0.002, 0.03))});
    // mostly consumption, occasionally net feed-in
    const double p = rng.uniform() < 0.2 ? rng.uniform(0.0, 0.03) : -rng.uniform(0.0, 0.05);
    c.s_spec[k] = cplx(p, -rng.uniform(0.0, 0.015));
  }
  return c;
}

inline quartersim::AdmittanceMatrix admittance(const RadialCase& c) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < c.n; ++i) ids.push_back("b" + std::to_string(i));
  std::vector<quartersim::Branch> branches;
  for (std::size_t b = 0; b < c.branches.size(); ++b) {
    quartersim::Branch br;
    br.id = "l" + std::to_string(b);
    br.from = c.branches[b].parent;
    br.to = c.branches[b].child;
    br.y_series = 1.0 / c.branches[b].z;
    br.i_base_a = 1.0;
    branches.push_back(br);
  }
  return quartersim::assemble_admittance(ids, branches, 1.0);
}

}  // namespace oracle
