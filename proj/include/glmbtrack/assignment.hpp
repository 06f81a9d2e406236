#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace glmb {

/// Cost matrix for track-to-measurement association. Rows are tracks,
/// columns are measurements plus any dedicated per-track miss columns.
/// Entries are extended-real costs; +infinity marks a forbidden pair.
using CostMatrix = Eigen::MatrixXd;

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

/// A feasible assignment: every row mapped to a distinct column.
struct Assignment {
  std::vector<int> row_to_col;
  double cost = 0.0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Minimum-cost assignment of all rows to distinct columns (Jonker-Volgenant
/// style shortest augmenting paths). Throws std::runtime_error when no
/// feasible assignment exists.
Assignment best_assignment(const CostMatrix& cost);

/// Murty's ranked-assignment algorithm: the min(k, #feasible) cheapest
/// assignments in nondecreasing cost; equal costs ordered lexicographically
/// by assignment vector. No duplicates.
std::vector<Assignment> murty_k_best(const CostMatrix& cost, int k);

/// Exhaustive assignment enumeration, sorted by (cost, lexicographic
/// assignment vector). Test oracle; guarded to rows <= 6, cols <= 8.
std::vector<Assignment> enumerate_all_assignments(const CostMatrix& cost);

/// Layered DAG in which every source-to-sink path picks exactly one of the
/// parallel arcs in each layer; the path cost is the sum of chosen arcs.
struct LayeredDag {
  std::vector<std::vector<double>> arc_costs;  // [layer][arc]
};

struct DagPath {
  std::vector<int> arcs;  // chosen arc index per layer
  double cost = 0.0;
};

/// The min(k, #paths) cheapest source-to-sink paths in nondecreasing cost;
/// ties broken lexicographically by arc indices.
std::vector<DagPath> k_shortest_paths(const LayeredDag& dag, int k);

}  // namespace glmb
