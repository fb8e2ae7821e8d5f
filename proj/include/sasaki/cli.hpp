#pragma once

// Command-line front end: configuration, check records, reports, and the
// commands that produce them. The executable in tools/ only parses
// arguments and writes the result.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sasaki/chart_oracle.hpp"
#include "sasaki/hermitian_product.hpp"
#include "sasaki/sasakian_model.hpp"

namespace sasaki {

enum class ExitCode : int { Ok = 0, CheckFailed = 1, Usage = 2, Io = 3 };

class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

class OutputError : public std::runtime_error {
public:
    explicit OutputError(const std::string& what) : std::runtime_error(what) {}
};

enum class Command { VerifyFactor, VerifyProduct, Einstein, Scan, OracleCompare, Example };
enum class ReportFormat { Json, Csv };
enum class ScanCheck { Einstein, Integrability, NotKahler, WeaklyStar };

Command parse_command(const std::string& name);
std::string to_string(Command c);
ReportFormat parse_format(const std::string& name);
ScanCheck parse_scan_check(const std::string& name);
std::string to_string(ScanCheck c);

/// `round`, `space-form:<c>` (c > -3) or `deformed:<alpha>` (alpha > 0).
/// A deformed factor always starts from the round sphere.
struct FactorSpec {
    enum class Kind { Round, SpaceForm, Deformed };
    Kind kind = Kind::Round;
    double value = 0.0;

    static FactorSpec parse(const std::string& text);
    std::string to_string() const;
    SasakianPointModel build(int n) const;
    FactorChart chart(int n) const;
};

/// `x` or `start:stop:step`. Inclusive of start, and of stop when it is
/// reached within 1e-12.
struct Grid {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    std::string text;

    static Grid parse(const std::string& text);
    static Grid single(double v);
    std::vector<double> values() const;
    bool is_single() const { return step == 0.0; }
};

struct Tolerances {
    double algebraic = kAlgebraicTolerance;
    double fd = 1e-4;
    double einstein = 1e-9;
};

struct RunConfig {
    Command command = Command::VerifyProduct;
    int p = 1;
    int q = 1;
    Grid a = Grid::single(0.0);
    Grid b = Grid::single(1.0);
    FactorSpec factor;
    FactorSpec factor_prime;
    Tolerances tolerances;
    std::uint64_t seed = 20240101;
    int samples = 5;
    ScanCheck check = ScanCheck::Einstein;
    ReportFormat format = ReportFormat::Json;
    std::string output_path;  // empty: standard output
    bool timing = false;      // off keeps reports byte-identical across runs
};

/// Throws UsageError on an invalid configuration.
void validate(const RunConfig& config);

struct CheckRecord {
    std::string name;
    std::string anchor;  // the statement being checked
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// pass is residual <= tolerance; non-finite residuals fail.
CheckRecord make_record(std::string name, std::string anchor, double residual, double tolerance);

using ReportValue = std::variant<bool, std::int64_t, double, std::string>;
using ReportFields = std::vector<std::pair<std::string, ReportValue>>;

struct Report {
    ReportFields config;
    ReportFields results;
    std::vector<CheckRecord> checks;
    double wall_time_ms = 0.0;

    std::size_t pass_count() const;
    std::size_t fail_count() const;
    bool all_pass() const { return fail_count() == 0; }
};

std::string emit_report(const Report& report, ReportFormat format);

/// Runs the configured command. Numerical failures inside a command become
/// failed records; configuration errors throw UsageError.
Report run(const RunConfig& config);

/// Runs, writes the report to config.output_path (or `out` when empty) and
/// returns the exit status.
ExitCode run_and_write(const RunConfig& config, std::string& out);

}  // namespace sasaki
