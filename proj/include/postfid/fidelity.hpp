#pragma once

#include <cmath>
#include <string>

#include "postfid/errors.hpp"
#include "postfid/fock.hpp"
#include "postfid/numerics.hpp"

namespace postfid {

/// rho = p_max * rho_c + gamma with gamma PSD; gamma is unnormalized,
/// Tr(gamma) = 1 - p_max.
struct MixingDecomposition {
    double p_max;
    Matrix gamma;
};

/// Uhlmann mixed-state fidelity {Tr[(sqrt(a) b sqrt(a))^{1/2}]}^2.
inline double uhlmann_fidelity(const DensityOperator& a,
                               const DensityOperator& b) {
    if (a.dim() != b.dim())
        throw numeric_error("uhlmann_fidelity: dimension mismatch");
    const Matrix root = psd_sqrt(a.matrix);
    const EigenSystem es = hermitian_eig((root * b.matrix * root).eval());
    double sum = 0.0;
    // eigenvalues at the numerical-noise floor would contribute sqrt(noise)
    for (int i = 0; i < es.eigenvalues.size(); ++i)
        if (es.eigenvalues[i] > 1e-14) sum += std::sqrt(es.eigenvalues[i]);
    return sum * sum;
}

/// Largest-weight decomposition of rho against the correct state rho_c.
inline MixingDecomposition decompose_pmax(const DensityOperator& rho,
                                          const DensityOperator& rho_c,
                                          double tol = kSupportTol) {
    const double p = max_mixing_weight(rho.matrix, rho_c.matrix, tol);
    return {p, rho.matrix - p * rho_c.matrix};
}

/// F_c = P^max * P^r(n|n): the produced state under perfect detection is
/// decomposed against the correct state, scaled by the retrodictive
/// confidence of the readout.
inline double correct_output_fidelity(const DensityOperator& rho_perfectdet,
                                      const DensityOperator& rho_c,
                                      double pr_nn) {
    if (pr_nn < 0.0 || pr_nn > 1.0)
        throw numeric_error("correct_output_fidelity: pr_nn outside [0,1]");
    return decompose_pmax(rho_perfectdet, rho_c).p_max * pr_nn;
}

/// Denominator convention for the summed-series closed forms. `plus`
/// (1 + eta(G-1)) agrees with the POVM-level computation and keeps a perfect
/// detector flat in gain; `minus` is the printed variant, singular at
/// G = 1 + 1/eta, retained for comparison.
enum class DenominatorSign { plus, minus };

namespace detail {

inline double effective_efficiency(double eta, double g, DenominatorSign sign) {
    double denom;
    if (sign == DenominatorSign::plus) {
        denom = 1.0 + eta * (g - 1.0);
    } else {
        denom = 1.0 - eta * (g - 1.0);
        if (denom <= 0.0)
            throw numeric_error(
                "closed form: singular denominator 1 - eta(G-1) <= 0 under "
                "the minus convention");
    }
    return eta * g / denom;
}

} // namespace detail

/// Closed-form retrodictive probability of the coherent-state comparison:
/// P^r(0|0) = (1 + e^{-2|a|^2}) / (1 + e^{-2|a|^2 * etaG/(1 +- eta(G-1))}).
inline double closed_form_pr00(Complex alpha, double eta, double g,
                               DenominatorSign sign = DenominatorSign::plus) {
    const double a2 = std::norm(alpha);
    const double eff = detail::effective_efficiency(eta, g, sign);
    return (1.0 + std::exp(-2.0 * a2)) / (1.0 + std::exp(-2.0 * a2 * eff));
}

/// Closed-form correct output fidelity of the comparison:
/// F_c = 1 / (1 + e^{-2|a|^2 * etaG/(1 +- eta(G-1))}).
inline double closed_form_fc(Complex alpha, double eta, double g,
                             DenominatorSign sign = DenominatorSign::plus) {
    const double a2 = std::norm(alpha);
    const double eff = detail::effective_efficiency(eta, g, sign);
    return 1.0 / (1.0 + std::exp(-2.0 * a2 * eff));
}

} // namespace postfid
