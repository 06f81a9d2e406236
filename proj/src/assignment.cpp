#include "glmbtrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>

namespace glmb {

namespace {

// Large finite stand-in for forbidden entries inside the solver; selected
// entries are checked against the original matrix afterwards.
constexpr double kBig = 1e15;

double assignment_cost(const CostMatrix& cost, const std::vector<int>& row_to_col) {
  double total = 0.0;
  for (std::size_t i = 0; i < row_to_col.size(); ++i) {
    total += cost(static_cast<int>(i), row_to_col[i]);
  }
  return total;
}

// Shortest augmenting path assignment on an n x m matrix, n <= m.
// Returns per-row column or empty when infeasible.
std::vector<int> solve_rectangular(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  if (n == 0) return {};
  if (n > m) return {};

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

struct Constraints {
  std::vector<std::pair<int, int>> forced;     // (row, col)
  std::vector<std::pair<int, int>> forbidden;  // (row, col)
};

// Best assignment of the full matrix honoring the constraints, or nullopt.
std::optional<Assignment> solve_constrained(const CostMatrix& cost, const Constraints& cons) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());

  std::vector<char> row_fixed(n, 0), col_fixed(m, 0);
  for (auto [r, c] : cons.forced) {
    row_fixed[r] = 1;
    col_fixed[c] = 1;
  }
  std::vector<int> free_rows, free_cols;
  for (int r = 0; r < n; ++r)
    if (!row_fixed[r]) free_rows.push_back(r);
  for (int c = 0; c < m; ++c)
    if (!col_fixed[c]) free_cols.push_back(c);

  Eigen::MatrixXd sub(free_rows.size(), free_cols.size());
  for (std::size_t i = 0; i < free_rows.size(); ++i) {
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
      double v = cost(free_rows[i], free_cols[j]);
      if (!std::isfinite(v)) v = kBig;
      sub(static_cast<int>(i), static_cast<int>(j)) = v;
    }
  }
  for (auto [r, c] : cons.forbidden) {
    const auto ri = std::find(free_rows.begin(), free_rows.end(), r);
    const auto ci = std::find(free_cols.begin(), free_cols.end(), c);
    if (ri != free_rows.end() && ci != free_cols.end()) {
      sub(static_cast<int>(ri - free_rows.begin()),
          static_cast<int>(ci - free_cols.begin())) = kBig;
    }
  }

  const std::vector<int> sub_sol = solve_rectangular(sub);
  if (sub_sol.empty() && !free_rows.empty()) return std::nullopt;

  Assignment out;
  out.row_to_col.assign(n, -1);
  for (auto [r, c] : cons.forced) out.row_to_col[r] = c;
  for (std::size_t i = 0; i < free_rows.size(); ++i) {
    out.row_to_col[free_rows[i]] = free_cols[sub_sol[i]];
  }
  for (int r = 0; r < n; ++r) {
    if (!std::isfinite(cost(r, out.row_to_col[r]))) return std::nullopt;
  }
  for (auto [r, c] : cons.forbidden) {
    if (out.row_to_col[r] == c) return std::nullopt;  // only big entries were left
  }
  out.cost = assignment_cost(cost, out.row_to_col);
  return out;
}

struct MurtyNode {
  Constraints cons;
  Assignment best;
};

struct NodeOrder {
  bool operator()(const MurtyNode& a, const MurtyNode& b) const {
    if (a.best.cost != b.best.cost) return a.best.cost > b.best.cost;
    return a.best.row_to_col > b.best.row_to_col;
  }
};

}  // namespace

Assignment best_assignment(const CostMatrix& cost) {
  auto sol = solve_constrained(cost, {});
  if (!sol) throw std::runtime_error("best_assignment: no feasible assignment");
  return *sol;
}

std::vector<Assignment> murty_k_best(const CostMatrix& cost, int k) {
  if (k < 1) throw std::invalid_argument("murty_k_best: k must be >= 1");
  const int n = static_cast<int>(cost.rows());

  std::priority_queue<MurtyNode, std::vector<MurtyNode>, NodeOrder> queue;
  {
    auto root = solve_constrained(cost, {});
    if (!root) throw std::runtime_error("murty_k_best: no feasible assignment");
    queue.push(MurtyNode{{}, std::move(*root)});
  }

  std::vector<Assignment> results;
  results.reserve(static_cast<std::size_t>(k));
  while (!queue.empty() && results.size() < static_cast<std::size_t>(k)) {
    // Drain every node tied at the current cost so equal-cost assignments
    // can be emitted in lexicographic order.
    const double tier = queue.top().best.cost;
    std::vector<Assignment> tied;
    while (!queue.empty() && queue.top().best.cost == tier) {
      MurtyNode node = queue.top();
      queue.pop();
      tied.push_back(node.best);

      // Partition: child i forbids the i-th free-row pair of this solution
      // and forces the earlier ones.
      std::vector<char> row_fixed(n, 0);
      for (auto [r, c] : node.cons.forced) row_fixed[r] = 1;
      Constraints child = node.cons;
      for (int r = 0; r < n; ++r) {
        if (row_fixed[r]) continue;
        Constraints branch = child;
        branch.forbidden.emplace_back(r, node.best.row_to_col[r]);
        if (auto sol = solve_constrained(cost, branch)) {
          queue.push(MurtyNode{std::move(branch), std::move(*sol)});
        }
        child.forced.emplace_back(r, node.best.row_to_col[r]);
      }
    }
    std::sort(tied.begin(), tied.end(),
              [](const Assignment& a, const Assignment& b) { return a.row_to_col < b.row_to_col; });
    for (auto& a : tied) {
      if (results.size() == static_cast<std::size_t>(k)) break;
      results.push_back(std::move(a));
    }
  }
  return results;
}

std::vector<Assignment> enumerate_all_assignments(const CostMatrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > 6 || m > 8) {
    throw std::invalid_argument("enumerate_all_assignments: matrix exceeds 6x8 guard");
  }

  std::vector<Assignment> out;
  std::vector<int> current(n, -1);
  std::vector<char> used(m, 0);
  auto rec = [&](auto&& self, int row) -> void {
    if (row == n) {
      Assignment a;
      a.row_to_col = current;
      a.cost = assignment_cost(cost, current);
      out.push_back(std::move(a));
      return;
    }
    for (int c = 0; c < m; ++c) {
      if (used[c] || !std::isfinite(cost(row, c))) continue;
      used[c] = 1;
      current[row] = c;
      self(self, row + 1);
      used[c] = 0;
    }
  };
  rec(rec, 0);

  std::sort(out.begin(), out.end(), [](const Assignment& a, const Assignment& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.row_to_col < b.row_to_col;
  });
  return out;
}

std::vector<DagPath> k_shortest_paths(const LayeredDag& dag, int k) {
  if (k < 1) return {};
  std::vector<DagPath> paths{DagPath{{}, 0.0}};
  for (const auto& layer : dag.arc_costs) {
    std::vector<DagPath> next;
    next.reserve(paths.size() * layer.size());
    for (const auto& p : paths) {
      for (std::size_t a = 0; a < layer.size(); ++a) {
        DagPath q = p;
        q.arcs.push_back(static_cast<int>(a));
        q.cost += layer[a];
        next.push_back(std::move(q));
      }
    }
    std::sort(next.begin(), next.end(), [](const DagPath& a, const DagPath& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      return a.arcs < b.arcs;
    });
    if (next.size() > static_cast<std::size_t>(k)) next.resize(static_cast<std::size_t>(k));
    paths = std::move(next);
  }
  return paths;
}

}  // namespace glmb
