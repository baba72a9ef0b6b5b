// postfid: reproduce the postselection-fidelity case studies as CSV.
//
// Subcommands: compare (coherent-state comparison with a preamplified
// detector), two-photon (lossy beam-splitter two-photon generator), nlss
// (lossy nonlinear sign-shift gate). Value flags accept comma lists and
// start:stop:step ranges. Exit codes: 0 success, 2 usage error, 3 numerical
// guard failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "postfid/postfid.hpp"

namespace {

void write_output(const std::string& csv, const std::string& path) {
    if (path.empty() || path == "-") {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw postfid::error("cannot open output file " + path);
    out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
}

postfid::DenominatorSign parse_sign(const std::string& s) {
    if (s == "plus") return postfid::DenominatorSign::plus;
    if (s == "minus") return postfid::DenominatorSign::minus;
    throw CLI::ValidationError("--denominator-sign", "must be plus or minus");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

/// Expand key=value lines from a --config file into trailing "--key value"
/// arguments, skipping keys already given explicitly so flags override the
/// file.
void apply_config_file(std::vector<std::string>& args) {
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--config",
                                       "expected key=value, got: " + line);
        const std::string flag = "--" + trim(line.substr(0, eq));
        const bool given = std::any_of(
            args.begin(), args.end(), [&](const std::string& a) {
                return a == flag || a.rfind(flag + "=", 0) == 0;
            });
        if (!given) {
            args.push_back(flag);
            args.push_back(trim(line.substr(eq + 1)));
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Postselection fidelity for imperfect optical devices"};
    app.require_subcommand(1);

    std::string out_path, config_path, sign_str = "plus";
    int dim_compare = 64, dim_two_photon = 4, dim_nlss = 5;

    auto add_common = [&](CLI::App* sub, int& dim) {
        sub->add_option("--out", out_path, "output CSV path (default stdout)");
        sub->add_option("--config", config_path,
                        "key=value config file; flags override");
        sub->add_option("--dim", dim, "Fock truncation dimension")
            ->capture_default_str()
            ->check(CLI::Range(4, 512));
    };

    std::string alpha_spec, eta_spec = "1", gain_spec = "1";
    CLI::App* compare = app.add_subcommand(
        "compare", "coherent-state comparison fidelities");
    compare->add_option("--alpha", alpha_spec, "coherent amplitudes")
        ->required();
    compare->add_option("--eta", eta_spec, "detector quantum efficiencies");
    compare->add_option("--gain", gain_spec, "preamplifier gains");
    compare->add_option("--denominator-sign", sign_str,
                        "closed-form denominator convention: plus|minus");
    add_common(compare, dim_compare);

    std::string t_spec;
    CLI::App* two_photon = app.add_subcommand(
        "two-photon", "lossy two-photon generator sweep, |t|=|r|");
    two_photon->add_option("--t", t_spec, "transmission magnitudes")->required();
    add_common(two_photon, dim_two_photon);

    std::string k_spec;
    CLI::App* nlss = app.add_subcommand(
        "nlss", "lossy nonlinear sign-shift gate sweep");
    nlss->add_option("--k", k_spec, "beam-splitter throughput factors K");
    nlss->get_option("--k")->required();
    add_common(nlss, dim_nlss);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        apply_config_file(args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::string csv;
        if (compare->parsed()) {
            const auto alphas = postfid::parse_values(alpha_spec);
            const auto etas = postfid::parse_values(eta_spec);
            const auto gains = postfid::parse_values(gain_spec);
            for (double a : alphas)
                if (a < 0.0)
                    throw CLI::ValidationError("--alpha", "must be >= 0");
            for (double e : etas)
                if (!(e > 0.0 && e <= 1.0))
                    throw CLI::ValidationError("--eta", "must be in (0,1]");
            for (double g : gains)
                if (g < 1.0)
                    throw CLI::ValidationError("--gain", "must be >= 1");
            csv = postfid::run_compare(alphas, etas, gains, dim_compare,
                                       parse_sign(sign_str));
        } else if (two_photon->parsed()) {
            const auto ts = postfid::parse_values(t_spec);
            for (double t : ts)
                if (!(t > 0.0) || 2.0 * t * t > 1.0 + 1e-12)
                    throw CLI::ValidationError(
                        "--t", "need 0 < t with 2 t^2 <= 1 (|t|=|r| sweep)");
            csv = postfid::run_two_photon(ts, dim_two_photon);
        } else {
            const auto ks = postfid::parse_values(k_spec);
            for (double k : ks)
                if (!(k > 0.0 && k <= 1.0))
                    throw CLI::ValidationError("--k", "must be in (0,1]");
            csv = postfid::run_nlss(ks, dim_nlss);
        }
        write_output(csv, out_path);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const postfid::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
