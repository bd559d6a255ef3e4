#pragma once

#include "ns1d/core.hpp"

namespace ns1d {

/// Forward difference of a node field onto centers: (v_{i+1} - v_i) / dy.
/// Exact on affine fields, second order on smooth ones.
Field ddy_node_to_center(const Field& v, const MassGrid& grid);

/// Boundary closure for center-to-node differences. NeumannZero sets the
/// two boundary nodes to 0 (zero-flux fields); OneSided uses a one-sided
/// second-order stencil there (requires N >= 3).
enum class BoundaryDiff { NeumannZero, OneSided };

/// Centered difference of a center field onto nodes: interior nodes get
/// (w_{i+1/2} - w_{i-1/2}) / dy, boundary nodes per `bc`.
Field ddy_center_to_node(const Field& w, const MassGrid& grid, BoundaryDiff bc);

/// Tridiagonal system A x = rhs with sub/super of size n-1 and diag, rhs of
/// size n. Every system assembled by the solvers here is symmetric positive
/// definite (a nonnegative lumped-mass diagonal plus a weighted discrete
/// Laplacian with Dirichlet rows), so elimination without pivoting is safe.
struct TridiagonalSystem {
    Field sub;
    Field diag;
    Field super;
    Field rhs;
};

/// Thomas algorithm. Throws NumericalError on a vanishing pivot and
/// ConfigError on inconsistent dimensions.
Field solve_tridiagonal(const TridiagonalSystem& sys);

/// A x, for residual checks.
Field apply_tridiagonal(const TridiagonalSystem& sys, const Field& x);

}  // namespace ns1d
