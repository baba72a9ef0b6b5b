#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <vector>

#include "postfid/errors.hpp"
#include "postfid/numerics.hpp"
#include "postfid/transfer.hpp"

namespace postfid {

inline constexpr double kDefaultTailBudget = 1e-9;

inline int joint_dim(const std::vector<int>& mode_dims) {
    int d = 1;
    for (int md : mode_dims) d *= md;
    return d;
}

/// Basis ordering is mode-major with the last listed mode varying fastest:
/// flat index = ((n_0 * d_1 + n_1) * d_2 + n_2) * ...
inline std::vector<int> mode_strides(const std::vector<int>& mode_dims) {
    std::vector<int> strides(mode_dims.size());
    int s = 1;
    for (int i = static_cast<int>(mode_dims.size()) - 1; i >= 0; --i) {
        strides[i] = s;
        s *= mode_dims[i];
    }
    return strides;
}

/// Normalized pure multimode state in a truncated number basis.
struct PureState {
    std::vector<int> mode_dims;
    Vector amplitudes;
    double tail_mass = 0.0; // probability lost to truncation at construction

    int dim() const { return static_cast<int>(amplitudes.size()); }
};

/// Hermitian, unit-trace density matrix on a truncated multimode space.
/// Positivity is an invariant of every construction path; it is asserted in
/// tests rather than re-diagonalized on each call.
struct DensityOperator {
    std::vector<int> mode_dims;
    Matrix matrix;
    double tail_mass = 0.0;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

struct Ensemble {
    std::vector<std::pair<double, DensityOperator>> members;
};

namespace detail {

inline const std::vector<long double>& factorial_table() {
    static const std::vector<long double> table = [] {
        std::vector<long double> t(1024);
        t[0] = 1.0L;
        for (std::size_t n = 1; n < t.size(); ++n)
            t[n] = t[n - 1] * static_cast<long double>(n);
        return t;
    }();
    return table;
}

inline long double factorial(int n) { return factorial_table().at(n); }

} // namespace detail

inline PureState number_state(int n, int dim) {
    if (dim < 1) throw numeric_error("number_state: dim must be positive");
    if (n < 0 || n >= dim)
        throw numeric_error("number_state: n=" + std::to_string(n) +
                            " outside truncation dim=" + std::to_string(dim));
    Vector amps = Vector::Zero(dim);
    amps[n] = 1.0;
    return {{dim}, amps, 0.0};
}

/// Truncated coherent state, renormalized. The probability weight beyond the
/// truncation is recorded as tail_mass and must stay under the budget.
inline PureState coherent_state(Complex alpha, int dim,
                                double tail_budget = kDefaultTailBudget) {
    if (dim < 2) throw numeric_error("coherent_state: dim must be >= 2");
    Vector amps(dim);
    Complex a = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < dim; ++n) {
        amps[n] = a;
        a *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    const double kept = amps.squaredNorm();
    const double tail = std::max(0.0, 1.0 - kept);
    if (tail > tail_budget) {
        std::ostringstream msg;
        msg << "coherent_state: truncation tail " << tail << " exceeds budget "
            << tail_budget << " for |alpha|=" << std::abs(alpha)
            << ", dim=" << dim;
        throw truncation_error(msg.str());
    }
    amps /= std::sqrt(kept);
    return {{dim}, amps, tail};
}

inline DensityOperator to_density(const PureState& psi) {
    return {psi.mode_dims, psi.amplitudes * psi.amplitudes.adjoint(),
            psi.tail_mass};
}

inline DensityOperator mix(const Ensemble& ensemble) {
    if (ensemble.members.empty())
        throw numeric_error("mix: empty ensemble");
    double total = 0.0;
    const auto& dims = ensemble.members.front().second.mode_dims;
    for (const auto& [p, rho] : ensemble.members) {
        if (p < 0.0) throw numeric_error("mix: negative probability");
        if (rho.mode_dims != dims)
            throw numeric_error("mix: ensemble members have mismatched dims");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw numeric_error("mix: probabilities sum to " + std::to_string(total));
    Matrix out = Matrix::Zero(ensemble.members.front().second.dim(),
                              ensemble.members.front().second.dim());
    double tail = 0.0;
    for (const auto& [p, rho] : ensemble.members) {
        out += p * rho.matrix;
        tail += p * rho.tail_mass;
    }
    return {dims, std::move(out), tail};
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    std::vector<int> dims = a.mode_dims;
    dims.insert(dims.end(), b.mode_dims.begin(), b.mode_dims.end());
    Matrix out(a.dim() * b.dim(), a.dim() * b.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            out.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) =
                a.matrix(i, j) * b.matrix;
    return {std::move(dims), std::move(out),
            a.tail_mass + b.tail_mass};
}

inline PureState tensor(const PureState& a, const PureState& b) {
    std::vector<int> dims = a.mode_dims;
    dims.insert(dims.end(), b.mode_dims.begin(), b.mode_dims.end());
    Vector out(a.dim() * b.dim());
    for (int i = 0; i < a.dim(); ++i)
        out.segment(i * b.dim(), b.dim()) = a.amplitudes[i] * b.amplitudes;
    return {std::move(dims), std::move(out), a.tail_mass + b.tail_mass};
}

/// Reduced state on the kept modes (indices into mode_dims, any order given;
/// output keeps original mode order). Trace preserving.
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     std::vector<int> keep) {
    const int num_modes = static_cast<int>(rho.mode_dims.size());
    if (keep.empty()) throw numeric_error("partial_trace: empty keep set");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (int k : keep)
        if (k < 0 || k >= num_modes)
            throw numeric_error("partial_trace: mode index out of range");

    const auto strides = mode_strides(rho.mode_dims);
    std::vector<int> traced;
    for (int i = 0; i < num_modes; ++i)
        if (!std::binary_search(keep.begin(), keep.end(), i)) traced.push_back(i);

    // flat offsets of every kept-subspace and traced-subspace configuration
    auto offsets = [&](const std::vector<int>& modes) {
        std::vector<int> offs{0};
        for (int m : modes) {
            std::vector<int> next;
            next.reserve(offs.size() * rho.mode_dims[m]);
            for (int o : offs)
                for (int n = 0; n < rho.mode_dims[m]; ++n)
                    next.push_back(o + n * strides[m]);
            offs = std::move(next);
        }
        return offs;
    };
    const std::vector<int> kept_offs = offsets(keep);
    const std::vector<int> traced_offs = offsets(traced);

    std::vector<int> out_dims;
    for (int k : keep) out_dims.push_back(rho.mode_dims[k]);
    const int d = static_cast<int>(kept_offs.size());
    Matrix out = Matrix::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            Complex sum = 0.0;
            for (int t : traced_offs)
                sum += rho.matrix(kept_offs[a] + t, kept_offs[b] + t);
            out(a, b) = sum;
        }
    return {std::move(out_dims), std::move(out), rho.tail_mass};
}

/// Unitary passive mode transform on a pure state: each creation operator
/// a^dag_i maps to sum_j M_ji a^dag_j in the polynomial expansion over the
/// vacuum. Photon number and norm are preserved; the norm is checked, then
/// snapped to exactly 1.
inline PureState apply_mode_transform(const PureState& state,
                                      const TransferMatrix& m,
                                      int max_total_photons = 4) {
    const int num_modes = static_cast<int>(state.mode_dims.size());
    if (m.size() != num_modes)
        throw numeric_error("apply_mode_transform: transfer matrix size mismatch");
    if (!m.unitary)
        throw convention_error(
            "apply_mode_transform: non-unitary transfer matrix (use "
            "lossy_beamsplitter for contractions)");

    const auto strides = mode_strides(state.mode_dims);
    Vector out = Vector::Zero(state.dim());

    std::vector<int> occ(num_modes);
    for (int idx = 0; idx < state.dim(); ++idx) {
        const Complex amp = state.amplitudes[idx];
        if (amp == Complex(0.0)) continue;
        int rem = idx, total = 0;
        for (int i = 0; i < num_modes; ++i) {
            occ[i] = rem / strides[i];
            rem %= strides[i];
            total += occ[i];
        }
        if (total > max_total_photons) {
            if (std::abs(amp) > 1e-14)
                throw truncation_error(
                    "apply_mode_transform: basis state with " +
                    std::to_string(total) + " photons exceeds cap " +
                    std::to_string(max_total_photons));
            continue;
        }

        // monomials in creation operators, keyed by occupation with radix N+1
        const std::int64_t radix = total + 1;
        std::unordered_map<std::int64_t, Complex> poly{{0, Complex(1.0)}};
        std::unordered_map<std::int64_t, Complex> next;
        for (int i = 0; i < num_modes; ++i) {
            for (int rep = 0; rep < occ[i]; ++rep) {
                next.clear();
                next.reserve(poly.size() * num_modes);
                std::int64_t key_stride = 1;
                for (int j = num_modes - 1; j >= 0; --j) {
                    const Complex c = m.m(j, i);
                    if (c != Complex(0.0))
                        for (const auto& [key, coeff] : poly)
                            next[key + key_stride] += c * coeff;
                    key_stride *= radix;
                }
                poly.swap(next);
            }
        }

        const long double in_fact = [&] {
            long double f = 1.0L;
            for (int i = 0; i < num_modes; ++i) f *= detail::factorial(occ[i]);
            return f;
        }();
        for (const auto& [key, coeff] : poly) {
            std::int64_t k = key;
            long double out_fact = 1.0L;
            int flat = 0;
            bool overflow = false;
            for (int j = num_modes - 1; j >= 0; --j) {
                const int mj = static_cast<int>(k % radix);
                k /= radix;
                if (mj >= state.mode_dims[j]) { overflow = true; break; }
                out_fact *= detail::factorial(mj);
                flat += mj * strides[j];
            }
            if (overflow) continue;
            const double weight =
                static_cast<double>(std::sqrt(out_fact / in_fact));
            out[flat] += amp * coeff * weight;
        }
    }

    const double norm = out.norm();
    if (std::abs(norm - 1.0) > 1e-9)
        throw truncation_error(
            "apply_mode_transform: output norm " + std::to_string(norm) +
            " deviates from 1 (truncation too tight)");
    out /= norm;
    return {state.mode_dims, std::move(out), state.tail_mass};
}

} // namespace postfid
