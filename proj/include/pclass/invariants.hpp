#pragma once

#include <cstddef>
#include <optional>

namespace pclass::structure {

// the arithmetic invariants driving the multiplicity formulas:
// upsilon = 1 iff zeta_p is a norm from K; dim_nj = dim_Fp N(J);
// dim_f_mod_nk = dim_Fp F^x / N(K^x) (nullopt when infinite / unmeasured)
struct InvariantProfile {
    unsigned p = 2;
    int upsilon = 0;
    std::size_t dim_nj = 0;
    std::optional<std::size_t> dim_f_mod_nk;
    std::optional<std::size_t> dim_epsilon;
};

} // namespace pclass::structure
