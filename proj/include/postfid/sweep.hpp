#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "postfid/errors.hpp"
#include "postfid/fidelity.hpp"
#include "postfid/scenarios.hpp"

namespace postfid {

/// Parse a comma-separated list of scalars and start:stop:step ranges,
/// locale independent. "1:3:0.1" yields 21 points including both endpoints.
inline std::vector<double> parse_values(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string token;
    auto parse_double = [](const std::string& s) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw numeric_error("cannot parse number '" + s + "'");
        }
        if (pos != s.size())
            throw numeric_error("trailing characters in number '" + s + "'");
        return v;
    };
    while (std::getline(ss, token, ',')) {
        if (token.empty())
            throw numeric_error("empty entry in value list '" + spec + "'");
        const std::size_t c1 = token.find(':');
        if (c1 == std::string::npos) {
            out.push_back(parse_double(token));
            continue;
        }
        const std::size_t c2 = token.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw numeric_error("range needs start:stop:step, got '" + token +
                                "'");
        const double start = parse_double(token.substr(0, c1));
        const double stop = parse_double(token.substr(c1 + 1, c2 - c1 - 1));
        const double step = parse_double(token.substr(c2 + 1));
        if (step <= 0.0)
            throw numeric_error("range step must be positive in '" + token +
                                "'");
        const long n = std::lround((stop - start) / step);
        if (n < 0)
            throw numeric_error("empty range '" + token + "'");
        for (long i = 0; i <= n; ++i) {
            const double v = start + static_cast<double>(i) * step;
            if (v > stop + 1e-9 * step) break;
            out.push_back(v);
        }
    }
    if (out.empty()) throw numeric_error("no values in '" + spec + "'");
    return out;
}

/// Fixed 12-significant-digit general format; reparses to the same double.
inline std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void append_row(std::string& csv, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) csv += ',';
        csv += format_value(values[i]);
    }
    csv += '\n';
}

/// Comparison sweep: fidelities, zero-count probability and information bounds
/// on the (alpha, eta, gain) grid in lexicographic order.
inline std::string run_compare(const std::vector<double>& alphas,
                               const std::vector<double>& etas,
                               const std::vector<double>& gains, int dim = 64,
                               DenominatorSign sign = DenominatorSign::plus) {
    std::string csv =
        "alpha,eta,gain,p_max,pr00_povm,pr00_closed,f_c,f_uhlmann,p_zero,"
        "chi_raw,chi_att,chi_ampatt\n";
    for (double alpha : alphas)
        for (double eta : etas)
            for (double gain : gains) {
                const ComparisonResult r =
                    coherent_comparison(alpha, eta, gain, dim, sign);
                append_row(csv,
                           {r.alpha, r.eta, r.gain, r.p_max, r.pr00_povm,
                            r.pr00_closed, r.f_c, r.f_uhlmann, r.p_zero_counts,
                            r.chi_unprocessed, r.chi_attenuated, r.chi_amp_att});
            }
    return csv;
}

/// |t|=|r| sweep of the lossy two-photon generator, formula and
/// simulation paths side by side. Phase convention t real, r = i|t|.
inline std::string run_two_photon(const std::vector<double>& t_values,
                                  int dim = 3) {
    std::string csv = "t_abs,p20,p10,p00,f_c_formula,f_c_sim\n";
    for (double t : t_values) {
        if (!(t > 0.0) || 2.0 * t * t > 1.0 + 1e-12)
            throw numeric_error("two-photon: need 0 < t and 2 t^2 <= 1, got " +
                                format_value(t));
        const TwoPhotonResult r =
            two_photon_generator(Complex(t, 0.0), Complex(0.0, t), dim);
        append_row(csv,
                   {t, r.p20, r.p10, r.p00, r.f_c_formula, r.f_c_simulated});
    }
    return csv;
}

/// Lossy NS-gate sweep with the (1,1,1)/sqrt(3) input.
inline std::string run_nlss(const std::vector<double>& k_values, int dim = 5) {
    const double inv = 1.0 / std::sqrt(3.0);
    const std::array<Complex, 3> coeffs = {Complex(inv), Complex(inv),
                                           Complex(inv)};
    std::string csv = "k,success_prob,p_max,k4,k4_ratio\n";
    for (double k : k_values) {
        if (!(k > 0.0 && k <= 1.0))
            throw numeric_error("nlss: K must be in (0,1], got " +
                                format_value(k));
        const NlssResult r = nlss_gate(k, coeffs, dim);
        append_row(csv, {k, r.success_prob, r.p_max, std::pow(k, 4.0),
                         r.k4_ratio});
    }
    return csv;
}

} // namespace postfid
