#pragma once

#include <cstddef>
#include <vector>

namespace tubemeasure {

/// Exact solution of an uncapacitated transportation problem on a dense
/// cost matrix:  minimize sum f_ij c_ij  over flows f >= 0 with
/// sum_j (f_ij - f_ji) = supply_i.  Supplies must balance to ~0.
///
/// Solved by successive shortest paths with node potentials; for
/// real-valued supplies each augmentation exhausts a source or a sink, so
/// at most 2V augmentations run, each a dense Dijkstra.
struct TransportPlan {
    double cost = 0.0;
    /// Dual values with phi_i - phi_j <= c_ij on all pairs and
    /// sum_i supply_i * phi_i == cost (Kantorovich duality).
    std::vector<double> potential;
    /// Row-major flow matrix, flow[i*n + j] = flow shipped from i to j.
    std::vector<double> flow;
};

TransportPlan min_cost_transport(const std::vector<double>& supply,
                                 const std::vector<double>& cost_matrix);

} // namespace tubemeasure
