#pragma once

#include "dgdiss/dgcore.hpp"
#include "oracles.hpp"

inline oracle::Field to_oracle(const dgdiss::DgField& u) {
    const auto& s = u.space();
    oracle::Field f{s.dim(), s.order(), s.components(), {1, 1, 1}, {1.0, 1.0, 1.0}, {}};
    for (int a = 0; a < s.dim(); ++a) {
        f.n[a] = s.mesh().cells_along(a);
        f.len[a] = s.mesh().box_length(a);
    }
    f.coef = u.coefficients();
    return f;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
