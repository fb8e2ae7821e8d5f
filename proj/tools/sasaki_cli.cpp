// sasaki-cli: command-line driver for the Sasakian product toolkit.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "sasaki/cli.hpp"

int main(int argc, char** argv) {
    using namespace sasaki;
    CLI::App app{"Hermitian structures on products of Sasakian manifolds: identity checks, Einstein verdicts, "
                 "parameter scans and finite-difference oracle comparisons"};

    std::string command, a = "0", b = "1", factor = "round", factor_prime = "round";
    std::string format = "json", check = "einstein";
    RunConfig cfg;
    app.add_option("command", command, "verify-factor | verify-product | einstein | scan | oracle-compare | example")
        ->required();
    app.add_option("--p", cfg.p, "n of the first factor S^{2p+1}")->capture_default_str();
    app.add_option("--q", cfg.q, "n of the second factor S^{2q+1}")->capture_default_str();
    app.add_option("--a", a, "parameter a, or a grid start:stop:step for scan")->capture_default_str();
    app.add_option("--b", b, "parameter b (nonzero), or a grid for scan")->capture_default_str();
    app.add_option("--factor", factor, "round | space-form:<c> | deformed:<alpha>")->capture_default_str();
    app.add_option("--factor-prime", factor_prime, "round | space-form:<c> | deformed:<alpha>")->capture_default_str();
    app.add_option("--check", check, "scan check: einstein | integrability | not-kahler | weakly-star")
        ->capture_default_str();
    app.add_option("--tol-algebraic", cfg.tolerances.algebraic, "tolerance for closed-form checks")
        ->capture_default_str();
    app.add_option("--tol-fd", cfg.tolerances.fd, "tolerance for finite-difference checks")->capture_default_str();
    app.add_option("--tol-einstein", cfg.tolerances.einstein, "tolerance for the Einstein residual")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for chart sample points")->capture_default_str();
    app.add_option("--samples", cfg.samples, "number of chart sample points")->capture_default_str();
    app.add_option("--format", format, "json | csv")->capture_default_str();
    app.add_option("--out", cfg.output_path, "output file (default: standard output)");
    app.add_flag("--timing", cfg.timing, "record wall time in the report summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::Usage);
    }

    try {
        cfg.command = parse_command(command);
        cfg.a = Grid::parse(a);
        cfg.b = Grid::parse(b);
        cfg.factor = FactorSpec::parse(factor);
        cfg.factor_prime = FactorSpec::parse(factor_prime);
        cfg.format = parse_format(format);
        cfg.check = parse_scan_check(check);
        std::string text;
        const ExitCode code = run_and_write(cfg, text);
        std::fwrite(text.data(), 1, text.size(), stdout);
        return static_cast<int>(code);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Usage);
    } catch (const OutputError& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Io);
    }
}
