#include "ns1d/operators.hpp"

#include <cmath>

namespace ns1d {

Field ddy_node_to_center(const Field& v, const MassGrid& grid) {
    if (static_cast<int>(v.size()) != grid.num_nodes())
        throw ConfigError("ddy_node_to_center: expected a node field");
    Field out(grid.num_centers());
    for (int i = 0; i < grid.num_centers(); ++i)
        out[i] = (v[i + 1] - v[i]) / grid.dy;
    return out;
}

Field ddy_center_to_node(const Field& w, const MassGrid& grid, BoundaryDiff bc) {
    if (static_cast<int>(w.size()) != grid.num_centers())
        throw ConfigError("ddy_center_to_node: expected a center field");
    const int N = grid.N;
    Field out(grid.num_nodes());
    for (int i = 1; i < N; ++i) out[i] = (w[i] - w[i - 1]) / grid.dy;
    switch (bc) {
        case BoundaryDiff::NeumannZero:
            out[0] = 0.0;
            out[N] = 0.0;
            break;
        case BoundaryDiff::OneSided:
            if (N < 3)
                throw ConfigError("ddy_center_to_node: one-sided closure needs N >= 3");
            // second-order extrapolation from the three nearest centers
            out[0] = (-2.0 * w[0] + 3.0 * w[1] - w[2]) / grid.dy;
            out[N] = (2.0 * w[N - 1] - 3.0 * w[N - 2] + w[N - 3]) / grid.dy;
            break;
    }
    return out;
}

Field solve_tridiagonal(const TridiagonalSystem& sys) {
    const std::size_t n = sys.diag.size();
    if (n == 0) throw ConfigError("solve_tridiagonal: empty system");
    if (sys.sub.size() != n - 1 || sys.super.size() != n - 1 || sys.rhs.size() != n)
        throw ConfigError("solve_tridiagonal: inconsistent dimensions");

    Field c(n, 0.0);  // modified super-diagonal
    Field x(n, 0.0);

    double pivot = sys.diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot))
        throw NumericalError("solve_tridiagonal: zero pivot in row 0");
    if (n > 1) c[0] = sys.super[0] / pivot;
    x[0] = sys.rhs[0] / pivot;

    for (std::size_t i = 1; i < n; ++i) {
        pivot = sys.diag[i] - sys.sub[i - 1] * c[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot))
            throw NumericalError("solve_tridiagonal: zero pivot in row " +
                                 std::to_string(i));
        if (i < n - 1) c[i] = sys.super[i] / pivot;
        x[i] = (sys.rhs[i] - sys.sub[i - 1] * x[i - 1]) / pivot;
    }

    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

Field apply_tridiagonal(const TridiagonalSystem& sys, const Field& x) {
    const std::size_t n = sys.diag.size();
    if (x.size() != n) throw ConfigError("apply_tridiagonal: size mismatch");
    Field out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = sys.diag[i] * x[i];
        if (i > 0) out[i] += sys.sub[i - 1] * x[i - 1];
        if (i + 1 < n) out[i] += sys.super[i] * x[i + 1];
    }
    return out;
}

}  // namespace ns1d
