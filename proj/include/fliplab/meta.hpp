#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fliplab/scheme.hpp"

namespace fliplab {

enum class DimAxis { N = 0, M = 1, P = 2 };

/// Parses "n", "m", "p" (either case). Throws StructuralError otherwise.
DimAxis parse_axis(const std::string& text);
char axis_name(DimAxis a);

/// Grows the axis by one. The new last row/column is served by the standard
/// products for it, so rank grows by the product of the two other dimensions.
/// Throws ContractError if s does not verify.
Scheme extend(const Scheme& s, DimAxis axis);

/// Removes the last index of the axis and drops triples with a zero slot.
/// Throws StructuralError if the axis has dimension 1, ContractError if s does
/// not verify.
Scheme project(const Scheme& s, DimAxis axis);

/// Block juxtaposition along the axis: rank is the sum of the ranks.
/// Throws StructuralError on ring or off-axis dimension mismatch,
/// ContractError if an input does not verify.
Scheme combine(const Scheme& s1, const Scheme& s2, DimAxis axis);

struct GridConstraints {
    std::size_t min_dim = 2;
    std::size_t max_dim = 8;
    std::size_t sum_cap = 14;
    std::size_t max_length = 11;
};

using FormatPath = std::vector<Format>;

/// Maximal extension paths over sorted formats starting at (min_dim)^3: a path
/// is reported when it has max_length edges or no admissible successor.
/// Paths come in lexicographic order. The visitor returns false to stop.
void enumerate_grid_paths(const GridConstraints& c, const std::function<bool(const FormatPath&)>& visit);
std::vector<FormatPath> grid_paths(const GridConstraints& c);
std::size_t count_grid_paths(const GridConstraints& c);

} // namespace fliplab
