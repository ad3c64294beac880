#ifndef PATHLEN_SRC_DETAIL_HPP
#define PATHLEN_SRC_DETAIL_HPP

#include "pathlen/optimizers.hpp"

#include <optional>

namespace pathlen::detail {

// Evaluates every non-cap stop criterion at iterate k with gradient g. A zero
// gradient stops the run only when `at_rest` (no momentum left).
std::optional<StopReason> check_stop(const StopRule& stop, const Vector& x, const Vector& g,
                                     std::size_t k, bool at_rest = true);

}  // namespace pathlen::detail

#endif  // PATHLEN_SRC_DETAIL_HPP
