#include "tubemeasure/transport.hpp"

#include "tubemeasure/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace tubemeasure {

TransportPlan min_cost_transport(const std::vector<double>& supply,
                                 const std::vector<double>& cost_matrix) {
    const std::size_t n = supply.size();
    if (cost_matrix.size() != n * n) {
        throw std::invalid_argument("min_cost_transport: cost matrix size mismatch");
    }

    double total_abs = 0.0, total = 0.0;
    for (double s : supply) {
        total_abs += std::abs(s);
        total += s;
    }
    const double bal_tol = 1e-9 * std::max(1.0, total_abs);
    if (std::abs(total) > bal_tol) {
        throw std::invalid_argument("min_cost_transport: supplies do not balance");
    }

    TransportPlan plan;
    plan.potential.assign(n, 0.0);
    plan.flow.assign(n * n, 0.0);
    if (n == 0 || total_abs == 0.0) return plan;

    // Excess below this threshold counts as exhausted.
    const double eps = 1e-13 * std::max(1.0, total_abs);
    std::vector<double> excess = supply;
    std::vector<double> pi(n, 0.0);

    std::vector<double> dist(n);
    std::vector<int> parent(n);
    std::vector<char> parent_back(n); // 1 when the step cancels opposing flow
    std::vector<char> done(n);
    const double inf = std::numeric_limits<double>::infinity();

    auto cost = [&](std::size_t i, std::size_t j) { return cost_matrix[i * n + j]; };

    const std::size_t max_rounds = 200 * n * n + 1000;
    std::size_t rounds = 0;
    for (;;) {
        std::size_t source = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (excess[i] > eps) {
                source = i;
                break;
            }
        }
        if (source == n) break;
        if (++rounds > max_rounds) {
            throw NumericalError("min_cost_transport: augmentation limit exceeded");
        }

        // Dense Dijkstra on the residual graph with reduced costs.
        std::fill(dist.begin(), dist.end(), inf);
        std::fill(parent.begin(), parent.end(), -1);
        std::fill(parent_back.begin(), parent_back.end(), 0);
        std::fill(done.begin(), done.end(), 0);
        dist[source] = 0.0;
        std::size_t sink = n;
        for (;;) {
            std::size_t u = n;
            double best = inf;
            for (std::size_t i = 0; i < n; ++i) {
                if (!done[i] && dist[i] < best) {
                    best = dist[i];
                    u = i;
                }
            }
            if (u == n) break;
            done[u] = 1;
            if (excess[u] < -eps) {
                sink = u;
                break;
            }
            for (std::size_t v = 0; v < n; ++v) {
                if (done[v] || v == u) continue;
                // Forward residual arc u -> v.
                double rc = cost(u, v) + pi[u] - pi[v];
                if (rc < 0.0) rc = 0.0; // guard round-off
                if (dist[u] + rc < dist[v]) {
                    dist[v] = dist[u] + rc;
                    parent[v] = static_cast<int>(u);
                    parent_back[v] = 0;
                }
                // Backward residual arc u -> v (cancels flow on v -> u).
                if (plan.flow[v * n + u] > 0.0) {
                    double brc = -cost(v, u) + pi[u] - pi[v];
                    if (brc < 0.0) brc = 0.0;
                    if (dist[u] + brc < dist[v]) {
                        dist[v] = dist[u] + brc;
                        parent[v] = static_cast<int>(u);
                        parent_back[v] = 1;
                    }
                }
            }
        }
        if (sink == n) {
            throw NumericalError("min_cost_transport: no augmenting path (unbalanced input?)");
        }

        const double d_sink = dist[sink];
        for (std::size_t i = 0; i < n; ++i) {
            pi[i] += std::min(dist[i], d_sink);
        }

        double amount = std::min(excess[source], -excess[sink]);
        for (std::size_t v = sink; v != source;) {
            const std::size_t u = static_cast<std::size_t>(parent[v]);
            if (parent_back[v]) amount = std::min(amount, plan.flow[v * n + u]);
            v = u;
        }
        for (std::size_t v = sink; v != source;) {
            const std::size_t u = static_cast<std::size_t>(parent[v]);
            if (parent_back[v]) {
                plan.flow[v * n + u] -= amount;
            } else {
                plan.flow[u * n + v] += amount;
            }
            v = u;
        }
        excess[source] -= amount;
        excess[sink] += amount;
    }

    double cost_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double f = plan.flow[i * n + j];
            if (f > 0.0) cost_total += f * cost(i, j);
        }
    }
    plan.cost = cost_total;
    for (std::size_t i = 0; i < n; ++i) plan.potential[i] = -pi[i];
    return plan;
}

} // namespace tubemeasure
