#pragma once

#include <string>
#include <utility>
#include <vector>

#include "krylow/operators.hpp"

namespace krylow {

/// Symmetrized adjacency operator from a Matrix Market coordinate file
/// (real or pattern, symmetric or general, 1-based indices). Symmetric
/// files have their stored triangle mirrored; general files are averaged
/// as (A + A^T)/2; duplicate entries are summed before symmetrization.
/// Sparse row storage internally.
MatVecOperator adjacency_from_matrix_market(const std::string& path);

/// Pattern/symmetric coordinate file for an undirected graph given as
/// 1-based edges (the gen-matrix fixture path).
void write_matrix_market_pattern(const std::string& path, int64_t n,
                                 const std::vector<std::pair<int64_t, int64_t>>& edges);

}  // namespace krylow
