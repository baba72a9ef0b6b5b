#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "postfid/errors.hpp"
#include "postfid/fock.hpp"
#include "postfid/numerics.hpp"
#include "postfid/transfer.hpp"

namespace postfid {

enum class ChannelKind { loss, amplifier };

/// Single-mode Kraus channel on a truncated Fock space. The amplifier keeps a
/// guard band of extra levels above the logical dimension: populations are
/// pushed upward internally and cropped back so the trace error stays below
/// 1e-6 for g <= 3.
struct KrausChannel {
    std::vector<Matrix> operators; // act on internal_dim
    ChannelKind kind;
    double parameter; // eta or g
    int logical_dim;
    int internal_dim;
};

inline int amplifier_guard(int dim) { return std::max(8, (dim + 3) / 4); }

/// Pure-loss (attenuation) channel: <n-k|K_k|n> = sqrt(C(n,k) eta^{n-k} (1-eta)^k).
inline KrausChannel loss_channel(double eta, int dim) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw numeric_error("loss_channel: eta must be in (0,1], got " +
                            std::to_string(eta));
    std::vector<Matrix> ops;
    const int kmax = eta == 1.0 ? 0 : dim - 1;
    for (int k = 0; k <= kmax; ++k) {
        Matrix op = Matrix::Zero(dim, dim);
        for (int n = k; n < dim; ++n) {
            const long double binom = detail::factorial(n) /
                (detail::factorial(k) * detail::factorial(n - k));
            op(n - k, n) = std::sqrt(static_cast<double>(
                binom * std::pow(static_cast<long double>(eta), n - k) *
                std::pow(static_cast<long double>(1.0 - eta), k)));
        }
        ops.push_back(std::move(op));
    }
    return {std::move(ops), ChannelKind::loss, eta, dim, dim};
}

/// Quantum-limited phase-insensitive amplifier of gain g: two-mode squeezer
/// with vacuum idler, idler traced out. <n+k|A_k|n> = sqrt(C(n+k,k)) *
/// g^{-(n+1)/2} ((g-1)/g)^{k/2}.
inline KrausChannel amplifier_channel(double g, int dim) {
    if (g < 1.0)
        throw numeric_error("amplifier_channel: gain must be >= 1, got " +
                            std::to_string(g));
    const int internal = dim + amplifier_guard(dim);
    std::vector<Matrix> ops;
    const int kmax = g == 1.0 ? 0 : internal - 1;
    for (int k = 0; k <= kmax; ++k) {
        Matrix op = Matrix::Zero(internal, internal);
        for (int n = 0; n + k < internal; ++n) {
            const long double binom = detail::factorial(n + k) /
                (detail::factorial(k) * detail::factorial(n));
            op(n + k, n) = std::sqrt(static_cast<double>(
                binom * std::pow(static_cast<long double>(g), -(n + 1)) *
                std::pow(static_cast<long double>((g - 1.0) / g), k)));
        }
        ops.push_back(std::move(op));
    }
    return {std::move(ops), ChannelKind::amplifier, g, dim, internal};
}

namespace detail {

/// Lift a single-mode operator to the joint space, acting on `mode`; the
/// selected mode may be embedded into a larger internal dimension, in which
/// case the joint dims are taken with that dimension substituted.
inline Matrix lift_operator(const Matrix& op, const std::vector<int>& mode_dims,
                            int mode) {
    Matrix lifted = op;
    // fold modes before `mode`
    for (int i = mode - 1; i >= 0; --i) {
        const int d = mode_dims[i];
        Matrix bigger = Matrix::Zero(d * lifted.rows(), d * lifted.cols());
        for (int n = 0; n < d; ++n)
            bigger.block(n * lifted.rows(), n * lifted.cols(), lifted.rows(),
                         lifted.cols()) = lifted;
        lifted = std::move(bigger);
    }
    // fold modes after `mode`
    int tail = 1;
    for (std::size_t i = mode + 1; i < mode_dims.size(); ++i) tail *= mode_dims[i];
    if (tail > 1) {
        Matrix bigger = Matrix::Zero(lifted.rows() * tail, lifted.cols() * tail);
        for (int i = 0; i < lifted.rows(); ++i)
            for (int j = 0; j < lifted.cols(); ++j)
                if (lifted(i, j) != Complex(0.0))
                    bigger.block(i * tail, j * tail, tail, tail) =
                        lifted(i, j) * Matrix::Identity(tail, tail);
        lifted = std::move(bigger);
    }
    return lifted;
}

/// Zero-pad / crop one mode of a joint matrix to a new dimension.
inline Matrix resize_mode(const Matrix& m, const std::vector<int>& mode_dims,
                          int mode, int new_dim) {
    const int old_dim = mode_dims[mode];
    if (new_dim == old_dim) return m;
    int head = 1, tail = 1;
    for (int i = 0; i < mode; ++i) head *= mode_dims[i];
    for (std::size_t i = mode + 1; i < mode_dims.size(); ++i) tail *= mode_dims[i];
    const int keep = std::min(old_dim, new_dim);
    Matrix out = Matrix::Zero(head * new_dim * tail, head * new_dim * tail);
    for (int hi = 0; hi < head; ++hi)
        for (int hj = 0; hj < head; ++hj)
            for (int ni = 0; ni < keep; ++ni)
                for (int nj = 0; nj < keep; ++nj)
                    out.block((hi * new_dim + ni) * tail,
                              (hj * new_dim + nj) * tail, tail, tail) =
                        m.block((hi * old_dim + ni) * tail,
                                (hj * old_dim + nj) * tail, tail, tail);
    return out;
}

} // namespace detail

/// Schroedinger-picture application: sum_k K_k rho K_k^dag on one mode.
/// The trace is re-checked, not silently renormalized; an amplifier whose
/// guard band overflows fails loudly.
inline DensityOperator apply_channel(const KrausChannel& ch,
                                     const DensityOperator& rho, int mode) {
    if (mode < 0 || mode >= static_cast<int>(rho.mode_dims.size()))
        throw numeric_error("apply_channel: mode index out of range");
    if (rho.mode_dims[mode] != ch.logical_dim)
        throw numeric_error("apply_channel: channel dim " +
                            std::to_string(ch.logical_dim) +
                            " does not match mode dim " +
                            std::to_string(rho.mode_dims[mode]));
    Matrix work = detail::resize_mode(rho.matrix, rho.mode_dims, mode,
                                      ch.internal_dim);
    std::vector<int> work_dims = rho.mode_dims;
    work_dims[mode] = ch.internal_dim;

    Matrix acc = Matrix::Zero(work.rows(), work.cols());
    for (const Matrix& k : ch.operators) {
        const Matrix lifted = detail::lift_operator(k, work_dims, mode);
        acc += lifted * work * lifted.adjoint();
    }
    Matrix cropped = detail::resize_mode(acc, work_dims, mode, ch.logical_dim);
    const double tr = std::real(cropped.trace());
    if (std::abs(tr - 1.0) > 1e-6)
        throw truncation_error(
            "apply_channel: trace " + std::to_string(tr) +
            " after channel application; truncation dim too small");
    return {rho.mode_dims, std::move(cropped), rho.tail_mass};
}

/// Heisenberg-picture adjoint: sum_k K_k^dag E K_k on a single-mode operator.
/// Preserves 0 <= E <= 1.
inline Matrix adjoint_apply(const KrausChannel& ch, const Matrix& e) {
    if (e.rows() != ch.logical_dim && e.rows() != ch.internal_dim)
        throw numeric_error("adjoint_apply: operator dim mismatch");
    Matrix work = Matrix::Zero(ch.internal_dim, ch.internal_dim);
    work.topLeftCorner(e.rows(), e.cols()) = e;
    Matrix acc = Matrix::Zero(ch.internal_dim, ch.internal_dim);
    for (const Matrix& k : ch.operators) acc += k.adjoint() * work * k;
    return acc.topLeftCorner(ch.logical_dim, ch.logical_dim);
}

/// Lossless beam splitter with a pi phase change on reflection from arm 2:
/// coherent inputs |a>|b> map to |ta+rb>|tb-ra> for real t, r. Complex r is
/// supported through the general form [[t, r], [-conj(r), conj(t)]].
inline TransferMatrix beamsplitter(Complex t, Complex r) {
    if (std::abs(std::norm(t) + std::norm(r) - 1.0) > 1e-12)
        throw numeric_error("beamsplitter: |t|^2 + |r|^2 must equal 1");
    Matrix m(2, 2);
    m << t, r, -std::conj(r), std::conj(t);
    return TransferMatrix(std::move(m));
}

/// Unitary mode transform on a mixed state via its spectral decomposition:
/// each eigenvector above weight 1e-14 is pushed through the pure-state
/// transform and the mixture reassembled.
inline DensityOperator apply_mode_transform(const DensityOperator& rho,
                                            const TransferMatrix& u,
                                            int max_total_photons) {
    EigenSystem es = hermitian_eig(rho.matrix);
    Matrix rotated = Matrix::Zero(rho.dim(), rho.dim());
    for (int i = 0; i < rho.dim(); ++i) {
        const double w = es.eigenvalues[i];
        if (w <= 1e-14) continue;
        PureState component{rho.mode_dims, es.eigenvectors.col(i), 0.0};
        component = apply_mode_transform(component, u, max_total_photons);
        rotated += w * (component.amplitudes * component.amplitudes.adjoint());
    }
    return {rho.mode_dims, std::move(rotated), rho.tail_mass};
}

/// Uniform-loss beam splitter, |t|^2 + |r|^2 = K <= 1: the transfer matrix
/// factors as sqrt(K) times the unitary beamsplitter(t/sqrt(K), r/sqrt(K)),
/// realized as that unitary followed by a loss channel of efficiency K on
/// both output modes.
inline DensityOperator lossy_beamsplitter(const DensityOperator& rho, Complex t,
                                          Complex r) {
    if (rho.mode_dims.size() != 2)
        throw numeric_error("lossy_beamsplitter: expects a two-mode state");
    const double k = std::norm(t) + std::norm(r);
    if (k > 1.0 + 1e-12)
        throw numeric_error("lossy_beamsplitter: |t|^2 + |r|^2 > 1");
    const double root = std::sqrt(k);
    const TransferMatrix u = beamsplitter(t / root, r / root);
    if (!u.unitary)
        throw convention_error(
            "lossy_beamsplitter: transfer matrix does not factor as sqrt(K) "
            "times a unitary");

    const int max_photons = rho.mode_dims[0] + rho.mode_dims[1];
    DensityOperator out = apply_mode_transform(rho, u, max_photons);
    if (k < 1.0) {
        out = apply_channel(loss_channel(k, rho.mode_dims[0]), out, 0);
        out = apply_channel(loss_channel(k, rho.mode_dims[1]), out, 1);
    }
    return out;
}

} // namespace postfid
