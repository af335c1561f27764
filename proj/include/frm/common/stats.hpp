#pragma once

#include <span>

namespace frm {

// Linear-interpolation quantile of an ascending sample: position q*(n-1)
// between order statistics (Hyndman-Fan type 7). q in [0, 1], sample nonempty.
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace frm
