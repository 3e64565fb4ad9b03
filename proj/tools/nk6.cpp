// nk6: sampled verification of nearly Kaehler identities.
//
// Exit codes: 0 all selected identities pass, 1 an identity failed,
// 2 configuration error, 3 runtime failure during evaluation.

#include "nk6/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

// CLI11 splits comma lists (flags and config arrays); the filter parser wants one string
std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : ",") + p;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    nk6::RunConfig cfg;
    std::vector<std::string> identities{"all"};
    std::string derivatives;
    double fd_step = 0.0;
    std::string out;
    bool list = false;

    CLI::App app{"Sampled verification of nearly Kaehler identities on six-manifolds"};
    app.set_config("--config", "", "flat key=value file; command-line flags override it");
    app.add_option("--backend", cfg.backend, "s6 | c3 | perturbed")->capture_default_str();
    app.add_option("--delta", cfg.delta, "ellipsoid deformation for the perturbed backend, 0 < delta < 0.5")
        ->capture_default_str();
    app.add_option("--radius", cfg.radius, "sphere radius for the s6 backend")->capture_default_str();
    app.add_option("--points", cfg.points, "number of sample points")->capture_default_str();
    app.add_option("--seed", cfg.seed, "master seed (falls back to NK6_SEED)")->envname("NK6_SEED")->capture_default_str();
    app.add_option("--draws", cfg.draws, "random vector tuples per identity and point")->capture_default_str();
    app.add_option("--derivatives", derivatives, "auto | exact | fd (default auto; fd when --fd-step is given)");
    app.add_option("--fd-step", fd_step, "finite-difference step h for orders 1-2 (3h for order 3)");
    app.add_option("--tol-tier1", cfg.tolerances.tier1)->capture_default_str();
    app.add_option("--tol-tier2", cfg.tolerances.tier2)->capture_default_str();
    app.add_option("--tol-tier3", cfg.tolerances.tier3)->capture_default_str();
    app.add_option("--identities", identities, "comma-separated I1..I32, pde, einstein, classify, or all")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--format", cfg.format, "json | csv | human")->capture_default_str();
    app.add_option("--out", out, "write the report to this file instead of stdout");
    app.add_flag("--serial", cfg.serial, "use the single-threaded reference path");
    app.add_flag("--timing", cfg.timing, "include wall-clock time in the report");
    app.add_flag("--list", list, "print the identity registry and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list) {
        for (const auto& info : nk6::identity_registry())
            std::cout << info.id << "\ttier " << info.tier << "\t" << info.statement << "\n";
        return 0;
    }

    try {
        cfg.identities = nk6::parse_identity_filter(join(identities));
        if (!derivatives.empty()) cfg.derivatives = nk6::derivative_mode_from_string(derivatives);
        if (app.count("--fd-step") > 0) {
            cfg.fd_steps = {fd_step, 3.0 * fd_step};
            if (derivatives.empty()) cfg.derivatives = nk6::DerivativeMode::finite_difference;
        }
        const nk6::RunReport report = nk6::run(cfg);
        const std::string text = nk6::emit(report, cfg.format);
        if (out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(out, std::ios::binary);
            if (!f) throw nk6::ConfigError("cannot open output file '" + out + "'");
            f << text;
        }
        return report.pass ? 0 : 1;
    } catch (const nk6::ConfigError& e) {
        std::cerr << "nk6: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "nk6: " << e.what() << "\n";
        return 3;
    }
}
