#pragma once

#include <cmath>

#include "postfid/fock.hpp"
#include "postfid/numerics.hpp"

namespace postfid {

/// Von Neumann entropy in bits, -sum lambda log2 lambda with 0 log 0 := 0.
/// Eigenvalues below 1e-14 are excluded.
inline double von_neumann_entropy(const DensityOperator& rho) {
    const EigenSystem es = hermitian_eig(rho.matrix);
    double s = 0.0;
    for (int i = 0; i < es.eigenvalues.size(); ++i) {
        const double w = es.eigenvalues[i];
        if (w > 1e-14) s -= w * std::log2(w);
    }
    return s;
}

/// Holevo bound on the accessible information of an ensemble:
/// chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i), in bits.
inline double holevo_chi(const Ensemble& e) {
    double member_entropy = 0.0;
    for (const auto& [p, rho] : e.members)
        member_entropy += p * von_neumann_entropy(rho);
    return von_neumann_entropy(mix(e)) - member_entropy;
}

} // namespace postfid
