#pragma once

#include <algorithm>
#include <cmath>

#include "breather/grid.hpp"

namespace testing_support {

inline double sup_diff(const mkdv::Field& a, const mkdv::Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double sup(const mkdv::Field& a) { return a.sup_norm(); }

inline mkdv::GridSpec standard_grid() { return mkdv::GridSpec::make(30.0, 2048); }

}  // namespace testing_support
