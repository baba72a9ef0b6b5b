#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "postfid/channels.hpp"
#include "postfid/detection.hpp"
#include "postfid/errors.hpp"
#include "postfid/fidelity.hpp"
#include "postfid/fock.hpp"
#include "postfid/information.hpp"
#include "postfid/numerics.hpp"

namespace postfid {

// ---------------------------------------------------------------------------
// Coherent-state comparison at a 50/50 beam splitter, postselected on zero
// photocounts with a preamplified inefficient detector.
// ---------------------------------------------------------------------------

struct ComparisonResult {
    double alpha, eta, gain;
    double p_max;
    double pr00_povm;
    double pr00_closed;
    double f_c;
    double f_uhlmann;
    double p_zero_counts;
    double chi_unprocessed;
    double chi_attenuated;
    double chi_amp_att;
    double tail_mass;
};

namespace detail {

/// The three-member detector-arm ensemble: vacuum with weight 1/2 and the
/// two coherent branches with weight 1/4 each.
inline Ensemble comparison_arm_ensemble(double amplitude, int dim) {
    return Ensemble{{{0.5, to_density(number_state(0, dim))},
                     {0.25, to_density(coherent_state(amplitude, dim))},
                     {0.25, to_density(coherent_state(-amplitude, dim))}}};
}

} // namespace detail

/// Joint two-arm output state of the comparison for identical/different
/// random inputs |+-alpha>: equal-weight mixture of the four transformed
/// coherent product states.
inline DensityOperator comparison_joint_state(double alpha, int dim) {
    const double b = std::sqrt(2.0) * alpha;
    const DensityOperator plus = to_density(coherent_state(b, dim));
    const DensityOperator minus = to_density(coherent_state(-b, dim));
    const DensityOperator vac = to_density(number_state(0, dim));
    return mix(Ensemble{{{0.25, tensor(plus, vac)},
                         {0.25, tensor(minus, vac)},
                         {0.25, tensor(vac, minus)},
                         {0.25, tensor(vac, plus)}}});
}

/// Same joint state computed by pushing the four random coherent input pairs
/// through the 50/50 beam splitter numerically. Cross-validation path; cost
/// grows quickly with dim.
inline DensityOperator comparison_joint_state_via_transform(double alpha,
                                                            int dim) {
    const TransferMatrix bs = beamsplitter(1.0 / std::sqrt(2.0),
                                           1.0 / std::sqrt(2.0));
    const int cap = 2 * (dim - 1);
    std::vector<std::pair<double, DensityOperator>> members;
    for (double sa : {1.0, -1.0})
        for (double sb : {1.0, -1.0}) {
            PureState in = tensor(coherent_state(sa * alpha, dim),
                                  coherent_state(sb * alpha, dim));
            members.emplace_back(0.25,
                                 to_density(apply_mode_transform(in, bs, cap)));
        }
    return mix(Ensemble{std::move(members)});
}

/// with_information=false skips the Holevo-bound columns (reported as NaN);
/// the amplified ensemble needs more truncation headroom than the rest of
/// the comparison, so fidelity-only sweeps can run at smaller dim.
inline ComparisonResult coherent_comparison(
    double alpha, double eta, double gain, int dim = 64,
    DenominatorSign sign = DenominatorSign::plus,
    bool with_information = true) {
    const double b = std::sqrt(2.0) * alpha;
    const PureState plus = coherent_state(b, dim);
    const PureState minus = coherent_state(-b, dim);
    const PureState vac = number_state(0, dim);
    const DetectorModel det(eta, gain);

    // vacuum overlap of the coherent branches (e^{-2 alpha^2} up to truncation)
    const double q_plus = std::norm(plus.amplitudes[0]);
    const double q_minus = std::norm(minus.amplitudes[0]);

    const DensityOperator rho_c =
        mix(Ensemble{{{0.5, to_density(plus)}, {0.5, to_density(minus)}}});

    // arm-1 state conditioned on a perfect zero-count detection
    const double norm_perfect = 0.25 + 0.25 + 0.25 * (q_plus + q_minus);
    const DensityOperator rho1_perfect =
        mix(Ensemble{{{0.25 / norm_perfect, to_density(plus)},
                      {0.25 / norm_perfect, to_density(minus)},
                      {0.25 * (q_plus + q_minus) / norm_perfect,
                       to_density(vac)}}});

    const PovmElement zero = smeared_povm(det, 0, dim);
    const double e_vac = std::real(zero.matrix(0, 0));
    const double e_plus =
        std::real((plus.amplitudes.adjoint() * zero.matrix * plus.amplitudes)(0, 0));
    const double e_minus =
        std::real((minus.amplitudes.adjoint() * zero.matrix * minus.amplitudes)(0, 0));

    const double p_zero = 0.5 * e_vac + 0.25 * (e_plus + e_minus);

    // arm-1 state conditioned on a zero readout of the imperfect detector
    const DensityOperator rho1_imperfect =
        mix(Ensemble{{{0.25 * e_vac / p_zero, to_density(plus)},
                      {0.25 * e_vac / p_zero, to_density(minus)},
                      {0.25 * (e_plus + e_minus) / p_zero, to_density(vac)}}});

    // At alpha = 0 the branches coincide and the decomposition degenerates to
    // weight 1; every alpha > 0 gives 1/(1+e^{-2 alpha^2}), so the alpha -> 0
    // limit 1/2 is used for the degenerate point.
    const double p_max =
        alpha == 0.0 ? 0.5
                     : max_mixing_weight(rho1_perfect.matrix, rho_c.matrix);

    // retrodiction over the number-state decomposition of the arm-2 state:
    // prior weights are the Fock diagonal of Lambda_2, so the m=0 measured
    // state carries the vacuum components of the coherent branches
    const DensityOperator lambda2 =
        mix(Ensemble{{{0.5, to_density(vac)},
                      {0.25, to_density(plus)},
                      {0.25, to_density(minus)}}});
    std::vector<std::pair<double, DensityOperator>> prior;
    prior.reserve(dim);
    for (int m = 0; m < dim; ++m)
        prior.emplace_back(std::real(lambda2.matrix(m, m)),
                           to_density(number_state(m, dim)));
    const double pr00_povm =
        retrodictive_prob(det, Ensemble{std::move(prior)}, 0, 0);

    const double pr00_closed = closed_form_pr00(alpha, eta, gain, sign);
    const double f_c = p_max * pr00_povm;
    const double f_uhl = uhlmann_fidelity(rho1_imperfect, rho_c);

    // accessible-information bound on the three-state detector-arm ensemble,
    // before and after the detector-side channels
    double chi_raw = std::numeric_limits<double>::quiet_NaN();
    double chi_att = chi_raw, chi_ampatt = chi_raw;
    if (with_information) {
        const Ensemble raw = detail::comparison_arm_ensemble(alpha, dim);
        auto processed = [&](bool amplify) {
            std::vector<std::pair<double, DensityOperator>> members;
            const KrausChannel amp = amplifier_channel(gain, dim);
            const KrausChannel att = loss_channel(eta, dim);
            for (const auto& [p, rho] : raw.members) {
                DensityOperator s = rho;
                if (amplify) s = apply_channel(amp, s, 0);
                s = apply_channel(att, s, 0);
                members.emplace_back(p, std::move(s));
            }
            return Ensemble{std::move(members)};
        };
        chi_raw = holevo_chi(raw);
        chi_att = holevo_chi(processed(false));
        chi_ampatt = holevo_chi(processed(true));
    }

    return {alpha,    eta,     gain,       p_max,   pr00_povm, pr00_closed,
            f_c,      f_uhl,   p_zero,     chi_raw, chi_att,   chi_ampatt,
            plus.tail_mass};
}

// ---------------------------------------------------------------------------
// Two-photon generation at a lossy beam splitter, postselected on zero counts.
// ---------------------------------------------------------------------------

struct TwoPhotonResult {
    Complex t, r;
    double p20, p10, p00, p01, p02; // simulated outcome probabilities
    double f_c_formula;
    double f_c_simulated;
};

inline TwoPhotonResult two_photon_generator(Complex t, Complex r, int dim = 3) {
    if (dim < 3)
        throw numeric_error("two_photon_generator: dim must be >= 3");
    const double k = std::norm(t) + std::norm(r);
    if (k > 1.0 + 1e-12)
        throw numeric_error("two_photon_generator: |t|^2 + |r|^2 > 1");

    // closed-form a priori probabilities
    const double cross = 2.0 * std::real(t * std::conj(r));
    const double p20_f = 2.0 * std::norm(t) * std::norm(r);
    const double p10_f = k * (1.0 - k) - cross * cross;
    const double p00_f = (1.0 - k) * (1.0 - k) + cross * cross;
    if (p10_f < -1e-12)
        throw convention_error(
            "two_photon_generator: phase convention yields negative p10");
    const double f_c_formula = p20_f / (p20_f + p10_f + p00_f);

    // simulation path
    const DensityOperator in =
        to_density(tensor(number_state(1, dim), number_state(1, dim)));
    const DensityOperator out = lossy_beamsplitter(in, t, r);
    auto diag = [&](int n, int m) {
        const int idx = n * dim + m;
        return std::real(out.matrix(idx, idx));
    };
    const double p20 = diag(2, 0), p10 = diag(1, 0), p00 = diag(0, 0);
    const double p01 = diag(0, 1), p02 = diag(0, 2);
    const double f_c_sim = p20 / (p20 + p10 + p00);

    return {t, r, p20, p10, p00, p01, p02, f_c_formula, f_c_sim};
}

// ---------------------------------------------------------------------------
// Nonlinear sign-shift gate from two beam splitters, with uniform loss.
// ---------------------------------------------------------------------------

struct NlssResult {
    double k_loss;
    std::array<Complex, 3> input_coeffs;
    double success_prob;
    DensityOperator conditional_output;
    double p_max;
    double k4_ratio;
};

namespace detail {

inline const double kNlssR1 = std::sqrt(5.0 - 3.0 * std::sqrt(2.0));
inline const double kNlssR2 = std::sqrt((3.0 - std::sqrt(2.0)) / 7.0);
inline const double kNlssSuccess = (3.0 - std::sqrt(2.0)) / 7.0;

/// Beam splitter with a pi phase on reflection from one side, mode labels
/// crossing through the element: diagonal entries are the reflection
/// amplitudes. `side` selects which face carries the pi phase.
inline Matrix nlss_bs(double r, int side) {
    const double t = std::sqrt(1.0 - r * r);
    Matrix m(2, 2);
    m << side * r, t, t, -side * r;
    return m;
}

/// Reflection-phase placement for the two beam splitters, plus the
/// assignment of the two caption reflectivities to the signal/ancilla-photon
/// and signal/vacuum couplings.
struct NlssConvention {
    double r_first;  // BS coupling signal with the single-photon ancilla
    double r_second; // BS coupling signal with the vacuum ancilla
    int side_first;
    int side_second;
};

inline Matrix embed_pair(const Matrix& two_by_two, int mode_a, int mode_b) {
    Matrix m = Matrix::Identity(3, 3);
    m(mode_a, mode_a) = two_by_two(0, 0);
    m(mode_a, mode_b) = two_by_two(0, 1);
    m(mode_b, mode_a) = two_by_two(1, 0);
    m(mode_b, mode_b) = two_by_two(1, 1);
    return m;
}

struct NlssRawOutput {
    Vector conditional; // unnormalized signal amplitudes given readout (1, 0)
    double success;
};

inline NlssRawOutput nlss_run_lossless(const NlssConvention& c,
                                       const std::array<Complex, 3>& coeffs,
                                       int dim) {
    Vector signal = Vector::Zero(dim);
    for (int i = 0; i < 3; ++i) signal[i] = coeffs[i];
    PureState psi = tensor(tensor(PureState{{dim}, signal, 0.0},
                                  number_state(1, dim)),
                           number_state(0, dim));
    const int cap = 3 * (dim - 1);
    psi = apply_mode_transform(
        psi, TransferMatrix(embed_pair(nlss_bs(c.r_first, c.side_first), 0, 1)),
        cap);
    psi = apply_mode_transform(
        psi,
        TransferMatrix(embed_pair(nlss_bs(c.r_second, c.side_second), 0, 2)),
        cap);
    Vector cond(3);
    for (int n = 0; n < 3; ++n)
        cond[n] = psi.amplitudes[(n * dim + 1) * dim + 0];
    return {cond, cond.squaredNorm()};
}

/// Pick the sign placement under which the lossless gate realizes the exact
/// sign-shift with the advertised success probability. Fails loudly if no
/// candidate passes.
inline const NlssConvention& nlss_convention() {
    static const NlssConvention pinned = [] {
        const std::array<Complex, 3> probe = {Complex(0.5), Complex(0.7),
                                              Complex(std::sqrt(0.26))};
        for (const auto& [ra, rb] :
             {std::pair{kNlssR2, kNlssR1}, std::pair{kNlssR1, kNlssR2}})
            for (int sa : {1, -1})
                for (int sb : {1, -1}) {
                    NlssConvention c{ra, rb, sa, sb};
                    const NlssRawOutput out = nlss_run_lossless(c, probe, 5);
                    const Complex lambda = out.conditional[0] / probe[0];
                    const bool shifts =
                        std::abs(out.conditional[1] - lambda * probe[1]) < 1e-9 &&
                        std::abs(out.conditional[2] + lambda * probe[2]) < 1e-9;
                    if (shifts && std::abs(out.success - kNlssSuccess) < 1e-9)
                        return c;
                }
        throw convention_error(
            "nlss_gate: no reflection-phase convention reproduces the "
            "sign-shift transformation");
    }();
    return pinned;
}

} // namespace detail

inline NlssResult nlss_gate(double k_loss,
                            const std::array<Complex, 3>& input_coeffs,
                            int dim = 5) {
    if (!(k_loss > 0.0 && k_loss <= 1.0))
        throw numeric_error("nlss_gate: K must be in (0,1]");
    if (dim < 4) throw numeric_error("nlss_gate: dim must be >= 4");
    double norm2 = 0.0;
    for (const Complex& c : input_coeffs) norm2 += std::norm(c);
    if (std::abs(norm2 - 1.0) > 1e-9)
        throw numeric_error("nlss_gate: input coefficients must be unit norm");

    const detail::NlssConvention& conv = detail::nlss_convention();
    const double root_k = std::sqrt(k_loss);
    const int cap = 3 * (dim - 1);

    Vector signal = Vector::Zero(dim);
    for (int i = 0; i < 3; ++i) signal[i] = input_coeffs[i];
    PureState psi = tensor(tensor(PureState{{dim}, signal / std::sqrt(norm2), 0.0},
                                  number_state(1, dim)),
                           number_state(0, dim));

    const TransferMatrix bs1(detail::embed_pair(
        detail::nlss_bs(conv.r_first, conv.side_first), 0, 1));
    const TransferMatrix bs2(detail::embed_pair(
        detail::nlss_bs(conv.r_second, conv.side_second), 0, 2));

    // Uniform loss: every mode is damped by K exactly once, attached at the
    // last splitter it exits. Because equal loss on all ports of a passive
    // unitary commutes with it, this equals an overall transmission K on the
    // gate; double-counting the shared signal port would overstate the loss
    // relative to the K^4 scaling of the two-photon component.
    DensityOperator rho = to_density(apply_mode_transform(psi, bs1, cap));
    if (k_loss < 1.0) {
        const KrausChannel loss = loss_channel(k_loss, dim);
        rho = apply_channel(loss, rho, 1);
        rho = apply_mode_transform(rho, bs2, cap);
        rho = apply_channel(loss, rho, 0);
        rho = apply_channel(loss, rho, 2);
    } else {
        rho = apply_mode_transform(rho, bs2, cap);
    }

    // postselect one photocount in the first ancilla, zero in the second
    Matrix cond = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            cond(i, j) = rho.matrix((i * dim + 1) * dim, (j * dim + 1) * dim);
    const double success = std::real(cond.trace());
    if (success <= 0.0)
        throw numeric_error("nlss_gate: postselection probability vanished");
    cond /= success;

    Vector target_amps = Vector::Zero(dim);
    target_amps[0] = input_coeffs[0];
    target_amps[1] = input_coeffs[1];
    target_amps[2] = -input_coeffs[2];
    target_amps /= target_amps.norm();
    const DensityOperator target =
        to_density(PureState{{dim}, target_amps, 0.0});

    DensityOperator conditional{{dim}, std::move(cond), rho.tail_mass};
    const double p_max = max_mixing_weight(conditional.matrix, target.matrix);
    const double k4 = std::pow(k_loss, 4.0);
    return {k_loss, input_coeffs, success, std::move(conditional), p_max,
            p_max / k4};
}

} // namespace postfid
