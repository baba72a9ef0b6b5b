#pragma once

#include <cmath>
#include <string>

#include "postfid/channels.hpp"
#include "postfid/errors.hpp"
#include "postfid/fock.hpp"
#include "postfid/numerics.hpp"

namespace postfid {

/// Measurement-outcome operator, 0 <= matrix <= 1.
struct PovmElement {
    Matrix matrix;
    int outcome_label;
};

/// Imperfect photodetector: quantum efficiency eta, preamplifier gain.
/// Models an amplifier placed in front of an attenuator followed by a
/// perfect photon counter.
struct DetectorModel {
    double eta = 1.0;
    double gain = 1.0;

    DetectorModel(double eta_, double gain_) : eta(eta_), gain(gain_) {
        if (!(eta > 0.0 && eta <= 1.0))
            throw numeric_error("DetectorModel: eta must be in (0,1]");
        if (gain < 1.0)
            throw numeric_error("DetectorModel: gain must be >= 1");
    }
};

inline PovmElement ideal_projector(int m, int dim) {
    if (m < 0 || m >= dim)
        throw numeric_error("ideal_projector: count " + std::to_string(m) +
                            " outside dim " + std::to_string(dim));
    Matrix e = Matrix::Zero(dim, dim);
    e(m, m) = 1.0;
    return {std::move(e), m};
}

/// POVM element whose trace against the arm state gives the probability of
/// reading m counts on the imperfect detector. Built as the Heisenberg
/// adjoint of (amplifier, then attenuator) applied to the ideal projector,
/// evaluated with a guard band above the logical dimension.
inline PovmElement smeared_povm(const DetectorModel& d, int m, int dim) {
    const int guard = amplifier_guard(dim);
    const int internal = dim + guard;
    if (m < 0 || m >= dim)
        throw numeric_error("smeared_povm: count out of range");
    Matrix e = ideal_projector(m, internal).matrix;
    // adjoint of the Schroedinger composition loss(eta) o amplifier(g)
    e = adjoint_apply(loss_channel(d.eta, internal), e);
    if (d.gain > 1.0) {
        KrausChannel amp = amplifier_channel(d.gain, internal);
        // operators live on internal + its own guard; adjoint crops back
        e = adjoint_apply(amp, e);
    }
    return {e.topLeftCorner(dim, dim), m};
}

/// P^p(m|rho): probability that the detector reads m counts on the arm state.
inline double predictive_prob(const DetectorModel& d, int readout,
                              const DensityOperator& armstate) {
    const PovmElement e = smeared_povm(d, readout, armstate.dim());
    return std::real((armstate.matrix * e.matrix).trace());
}

/// Retrodictive conditional probability P^r(m|n): Bayes inversion over the
/// prior ensemble of perfect-detection arm states.
inline double retrodictive_prob(const DetectorModel& d, const Ensemble& prior,
                                int hypothesis, int readout) {
    if (prior.members.empty())
        throw numeric_error("retrodictive_prob: empty prior");
    if (hypothesis < 0 ||
        hypothesis >= static_cast<int>(prior.members.size()))
        throw numeric_error("retrodictive_prob: hypothesis index out of range");
    const int dim = prior.members.front().second.dim();
    const PovmElement e = smeared_povm(d, readout, dim);
    double numerator = 0.0, denominator = 0.0;
    for (std::size_t m = 0; m < prior.members.size(); ++m) {
        const auto& [p, rho] = prior.members[m];
        const double pred = std::real((rho.matrix * e.matrix).trace());
        denominator += p * pred;
        if (static_cast<int>(m) == hypothesis) numerator = p * pred;
    }
    if (denominator < 1e-300)
        throw numeric_error(
            "retrodictive_prob: zero total readout probability, posterior "
            "undefined");
    return numerator / denominator;
}

} // namespace postfid
