// End-to-end acceptance gate: one pass/fail line per criterion, nonzero exit
// if any fails. Criteria 2-4 and 6 share one 48-point comparison grid.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "postfid/postfid.hpp"

using namespace postfid;

namespace {

int failures = 0;

class Timer {
  public:
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

void report(int idx, const std::string& what, bool ok, double secs,
            const std::string& detail = "") {
    std::printf("%s %2d %s (%.1f s)%s%s\n", ok ? "[pass]" : "[FAIL]", idx,
                what.c_str(), secs, detail.empty() ? "" : " ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Holevo bounds of the three-state detector-arm ensemble before and after
/// the detector-side channels.
struct ChiTriple {
    double raw, att, ampatt;
};

ChiTriple chi_triple(double alpha, double eta, double gain, int dim) {
    const Ensemble raw = detail::comparison_arm_ensemble(alpha, dim);
    const KrausChannel att = loss_channel(eta, dim);
    const KrausChannel amp = amplifier_channel(gain, dim);
    auto processed = [&](bool amplify) {
        std::vector<std::pair<double, DensityOperator>> members;
        for (const auto& [p, rho] : raw.members) {
            DensityOperator s = rho;
            if (amplify) s = apply_channel(amp, s, 0);
            s = apply_channel(att, s, 0);
            members.emplace_back(p, std::move(s));
        }
        return Ensemble{std::move(members)};
    };
    return {holevo_chi(raw), holevo_chi(processed(false)),
            holevo_chi(processed(true))};
}

} // namespace

int main() {
    const std::array<double, 3> alphas = {0.5, 1.0, 2.0};
    const std::array<double, 4> etas = {0.25, 0.5, 0.75, 1.0};
    const std::array<double, 4> gains = {1.0, 1.5, 2.0, 3.0};

    // 1. worked decomposition example: P^max = 1/2, reversed order 0
    {
        Timer t;
        const int dim = 5;
        const DensityOperator rho_a = mix(Ensemble{
            {{1.0 / 3, to_density(number_state(1, dim))},
             {1.0 / 3, to_density(number_state(2, dim))},
             {1.0 / 3, to_density(number_state(3, dim))}}});
        const DensityOperator rho_b = mix(Ensemble{
            {{2.0 / 3, to_density(number_state(2, dim))},
             {1.0 / 3, to_density(number_state(3, dim))}}});
        const double fwd = decompose_pmax(rho_a, rho_b).p_max;
        const double rev = decompose_pmax(rho_b, rho_a).p_max;
        report(1, "worked number-state decomposition: 1/2 and 0",
               std::abs(fwd - 0.5) <= 1e-10 && std::abs(rev) <= 1e-10 &&
                   t.seconds() < 1.0,
               t.seconds());
    }

    // shared 48-point comparison grid at dim 64, in (alpha, eta, gain) order
    Timer grid_timer;
    std::vector<ComparisonResult> grid;
    for (double a : alphas)
        for (double e : etas)
            for (double g : gains)
                grid.push_back(coherent_comparison(
                    a, e, g, 64, DenominatorSign::plus, false));
    const double grid_secs = grid_timer.seconds();
    auto at = [&](double a, double e, double g) -> const ComparisonResult& {
        for (const ComparisonResult& r : grid)
            if (r.alpha == a && r.eta == e && r.gain == g) return r;
        std::abort();
    };

    // 2. closed-form zero-count retrodiction vs explicit POVM path
    {
        double worst = 0.0;
        for (const ComparisonResult& r : grid)
            worst = std::max(worst, std::abs(r.pr00_povm - r.pr00_closed));
        char buf[40];
        std::snprintf(buf, sizeof buf, "max |diff| = %.1e", worst);
        report(2, "closed form vs POVM retrodiction on the 48-point grid",
               worst <= 1e-8 && grid_secs < 60.0, grid_secs, buf);
    }

    // 3. F_c flat in gain at eta=1, strictly increasing below
    {
        Timer t;
        bool ok = true;
        const double base = at(1.0, 1.0, 1.0).f_c;
        ok = ok && std::abs(base - 0.880797) <= 1e-6;
        for (double g : gains)
            ok = ok && std::abs(at(1.0, 1.0, g).f_c - base) <= 1e-9;
        for (double e : {0.25, 0.5, 0.75}) {
            double prev = -1.0;
            for (double g : gains) {
                const double fc = at(1.0, e, g).f_c;
                ok = ok && fc > prev;
                prev = fc;
            }
        }
        report(3, "F_c flat in gain at eta=1, strictly increasing below", ok,
               t.seconds());
    }

    // 4. zero-count probability strictly decreasing in gain; lossier
    //    detectors report zero more often at every gain
    {
        Timer t;
        bool ok = true;
        for (double a : alphas) {
            for (double e : etas) {
                double prev = 2.0;
                for (double g : gains) {
                    const double pz = at(a, e, g).p_zero_counts;
                    ok = ok && pz < prev;
                    prev = pz;
                }
            }
            for (double g : gains)
                for (size_t i = 1; i < etas.size(); ++i)
                    ok = ok && at(a, etas[i - 1], g).p_zero_counts >
                                   at(a, etas[i], g).p_zero_counts;
        }
        report(4, "P(zero counts) ordering in gain and efficiency", ok,
               t.seconds());
    }

    // 5. accessible-information ordering along the alpha grid
    {
        Timer t;
        bool ok = true;
        for (int i = 0; i <= 30; ++i) {
            const ChiTriple c = chi_triple(i * 0.1, 0.9, 1.5, 72);
            ok = ok && c.raw >= c.att - 1e-9 && c.att >= c.ampatt - 1e-9;
        }
        const double chi4 =
            holevo_chi(detail::comparison_arm_ensemble(4.0, 56));
        ok = ok && chi4 > 1.45 && chi4 <= 1.5 + 1e-12;
        report(5, "Holevo ordering raw >= attenuated >= amplified+attenuated",
               ok, t.seconds(), "chi(alpha=4) = " + std::to_string(chi4) + " bits");
    }

    // 6. F_c lower-bounds the Uhlmann fidelity; good detectors put the
    //    Uhlmann fidelity above P^max
    {
        Timer t;
        bool ok = true;
        for (const ComparisonResult& r : grid)
            ok = ok && r.f_c <= r.f_uhlmann + 1e-8;
        for (double e : {0.9, 0.95, 1.0}) {
            const ComparisonResult r = coherent_comparison(1.0, e, 1.0);
            ok = ok && r.f_uhlmann > r.p_max;
        }
        report(6, "F_c <= Uhlmann fidelity; Uhlmann > P^max for eta >= 0.9",
               ok, t.seconds());
    }

    // 7. two-photon generator: formula path vs lossy-splitter simulation
    {
        Timer t;
        bool ok = true;
        const double t_max = 1.0 / std::sqrt(2.0);
        for (int i = 0; i < 20; ++i) {
            const double x = 0.1 + i * (t_max - 0.1) / 19.0;
            const TwoPhotonResult r = two_photon_generator(x, Complex(0.0, x));
            ok = ok && std::abs(r.f_c_formula - r.f_c_simulated) <= 1e-8;
        }
        const TwoPhotonResult balanced =
            two_photon_generator(t_max, Complex(0.0, t_max));
        ok = ok && std::abs(balanced.f_c_formula - 1.0) <= 1e-9 &&
             std::abs(balanced.f_c_simulated - 1.0) <= 1e-9;
        const TwoPhotonResult lossy =
            two_photon_generator(0.6, Complex(0.0, 0.6));
        ok = ok && std::abs(lossy.f_c_formula - 0.480712) <= 1e-6 &&
             std::abs(lossy.f_c_simulated - 0.480712) <= 1e-6;
        report(7, "two-photon generator formula vs simulation",
               ok && t.seconds() < 10.0, t.seconds());
    }

    // 8. lossless sign-shift gate: calibrated convention reproduces the
    //    target with the pinned success probability
    {
        Timer t;
        bool ok = true;
        std::string detail;
        try {
            std::mt19937 rng(17);
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (int trial = 0; trial < 10; ++trial) {
                std::array<Complex, 3> c;
                double n2 = 0.0;
                for (auto& cc : c) {
                    cc = Complex(gauss(rng), gauss(rng));
                    n2 += std::norm(cc);
                }
                for (auto& cc : c) cc /= std::sqrt(n2);
                const NlssResult r = nlss_gate(1.0, c);
                ok = ok && std::abs(r.success_prob -
                                    (3.0 - std::sqrt(2.0)) / 7.0) <= 1e-9;
                Vector target = Vector::Zero(r.conditional_output.dim());
                target[0] = c[0];
                target[1] = c[1];
                target[2] = -c[2];
                const DensityOperator ideal = to_density(
                    PureState{{r.conditional_output.dim()}, target, 0.0});
                ok = ok && uhlmann_fidelity(r.conditional_output, ideal) >=
                               1.0 - 1e-9;
            }
        } catch (const convention_error& err) {
            ok = false;
            detail = err.what();
        }
        report(8, "lossless sign-shift gate: target state and success 0.2265",
               ok, t.seconds(), detail);
    }

    // 9. lossy sign-shift gate: P^max against the K^4 estimate
    {
        Timer t;
        bool ok = true;
        const double c = 1.0 / std::sqrt(3.0);
        std::string detail = "ratios:";
        for (double k : {0.9, 0.95, 0.99}) {
            const double ratio = nlss_gate(k, {Complex(c), Complex(c),
                                               Complex(c)}).k4_ratio;
            ok = ok && ratio >= 0.8 && ratio <= 1.2;
            char buf[40];
            std::snprintf(buf, sizeof buf, " K=%.2f:%.4f", k, ratio);
            detail += buf;
        }
        report(9, "lossy sign-shift gate P^max/K^4 within [0.8, 1.2]", ok,
               t.seconds(), detail);
    }

    // 10. Schroedinger/Heisenberg duality on random (rho, E, channel) triples
    {
        Timer t;
        const int dim = 32;
        std::mt19937 rng(101);
        std::uniform_real_distribution<double> eta_draw(0.05, 1.0);
        std::uniform_real_distribution<double> gain_draw(1.0, 1.5);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Matrix e = oracles::random_effect(rng, dim);
            KrausChannel ch = i % 2 == 0
                                  ? loss_channel(eta_draw(rng), dim)
                                  : amplifier_channel(gain_draw(rng), dim);
            Matrix rho_m;
            if (i % 2 == 0) {
                rho_m = oracles::random_density(rng, dim);
            } else {
                // keep the amplified state inside the guard band
                rho_m = Matrix::Zero(dim, dim);
                rho_m.topLeftCorner(6, 6) = oracles::random_density(rng, 6);
            }
            const DensityOperator rho{{dim}, rho_m, 0.0};
            const double lhs =
                std::real((e * apply_channel(ch, rho, 0).matrix).trace());
            const double rhs =
                std::real((adjoint_apply(ch, e) * rho_m).trace());
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "max |diff| = %.1e", worst);
        report(10, "channel/POVM duality on 100 random triples",
               worst <= 1e-10 && t.seconds() < 10.0, t.seconds(), buf);
    }

    // 11. CLI determinism: identical invocations are byte-identical
    {
        Timer t;
        const std::string args =
            " compare --alpha 1 --eta 0.5 --gain 1:3:0.5 --dim 64 > ";
        const std::string a_path = "/tmp/postfid_acceptance_a.csv";
        const std::string b_path = "/tmp/postfid_acceptance_b.csv";
        const int ra = std::system(
            (std::string(POSTFID_CLI_PATH) + args + a_path).c_str());
        const int rb = std::system(
            (std::string(POSTFID_CLI_PATH) + args + b_path).c_str());
        const std::string a = read_file(a_path);
        const std::string b = read_file(b_path);
        report(11, "CLI determinism: consecutive sweeps byte-identical",
               ra == 0 && rb == 0 && !a.empty() && a == b, t.seconds());
    }

    if (failures > 0)
        std::printf("%d of 11 criteria failed\n", failures);
    else
        std::printf("all 11 criteria passed\n");
    return failures == 0 ? 0 : 1;
}
