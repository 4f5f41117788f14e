#pragma once

#include "rdmfix/fixer.hpp"

namespace rdmfix::detail {

// Projects c onto the PSD cone with its trace target, unless it already
// satisfies both to within cfg's tolerances. Leaving feasible matrices alone
// keeps exact inputs bit-identical instead of accumulating round-off from
// the eigendecomposition. Returns whether c changed.
bool fix_condition(ConditionMatrix& c, const FixConfig& cfg);

}  // namespace rdmfix::detail
