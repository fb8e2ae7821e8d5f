#include "sasaki/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>

#include "sasaki/einstein.hpp"

namespace sasaki {

namespace {

constexpr double kGridSlack = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parse_number(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError("invalid number for " + what + ": '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t from = 0;
    while (true) {
        const auto at = text.find(sep, from);
        parts.push_back(text.substr(from, at - from));
        if (at == std::string::npos) break;
        from = at + 1;
    }
    return parts;
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

std::string short_double(double v) { return fmt::format("{:g}", v); }

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) out += fmt::format("\\u{:04x}", static_cast<unsigned>(c));
                else out += ch;
        }
    }
    return out;
}

std::string json_value(const ReportValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, double>) return std::isfinite(x) ? fmt_double(x) : "null";
            else return "\"" + json_escape(x) + "\"";
        },
        v);
}

std::string json_object(const ReportFields& fields, const std::string& indent) {
    if (fields.empty()) return "{}";
    std::string out = "{\n";
    for (std::size_t i = 0; i < fields.size(); ++i) {
        out += indent + "  \"" + json_escape(fields[i].first) + "\": " + json_value(fields[i].second);
        out += i + 1 < fields.size() ? ",\n" : "\n";
    }
    return out + indent + "}";
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// Scales an absolute tolerance to the magnitude of the data it guards.
double scaled(double tol, double magnitude) { return tol * std::max(1.0, magnitude); }

double max_abs_entry(const BilinearForm& f) { return max_abs(f.entries()); }

/// Adds the record produced by `body`, or a failed record carrying the
/// error message if it throws.
void guarded(Report& report, const std::string& name, const std::string& anchor, double tol,
             const std::function<double()>& body) {
    try {
        report.checks.push_back(make_record(name, anchor, body(), tol));
    } catch (const std::exception& e) {
        report.checks.push_back(make_record(name + " [error: " + e.what() + "]", anchor, kNaN, tol));
    }
}

struct ProductInputs {
    SasakianPointModel factor;
    SasakianPointModel factor_prime;
};

ProductInputs build_factors(const RunConfig& c) {
    return {c.factor.build(c.p), c.factor_prime.build(c.q)};
}

void run_verify_factor(const RunConfig& c, Report& r) {
    const SasakianPointModel m = c.factor.build(c.p);
    const double tol = c.tolerances.algebraic;
    const double scale = std::max(1.0, max_abs(m.ricci.entries()));

    guarded(r, "almost contact metric structure", "phi^2 = -I + xi (x) eta, eta(xi) = 1, g(phi X, phi Y) = g(X,Y) - eta(X)eta(Y)",
            tol, [&] { return structure_residuals(m).max(); });
    guarded(r, "curvature symmetries", "R skew in (1,2) and (3,4), pair symmetric, first Bianchi", scaled(tol, scale),
            [&] { return curvature_symmetry_residuals(m.R).max(); });
    const SasakianIdentityReport id = verify_sasakian_curvature_identities(m);
    const std::pair<const char*, std::pair<const char*, double>> identities[] = {
        {"R(X,Y)xi", {"R(X,Y)xi = eta(Y)X - eta(X)Y", id.r_xy_xi}},
        {"ricci(xi, X)", {"rho(xi, X) = 2n eta(X)", id.ricci_xi}},
        {"ricci trace", {"rho(Y,Z) = sum R(Y,e,e,Z)", id.ricci_trace}},
        {"phi Z curvature identity",
         {"R(X,Y,phiZ,W) - R(phiZ,X,Y,W) = -g(X,Y)g(phiZ,W) - 2g(Z,phiY)g(X,W) + g(Z,phiX)g(Y,W)", id.phi_z_identity}},
        {"phi trace, difference", {"sum R(X,Y,phi e,e) - sum R(phi e,X,Y,e) = 3 g(phi X, Y)", id.phi_trace_3}},
        {"phi trace", {"sum R(X,Y,e,phi e) = -2 g(phi X, Y)", id.phi_trace_2}},
        {"phi-phi trace", {"sum R(X,phi Y,e,phi e) = -2 (g - eta (x) eta)", id.phi_phi_trace}},
    };
    for (const auto& [name, detail] : identities)
        r.checks.push_back(make_record(name, detail.first, detail.second, scaled(tol, scale)));

    const EtaEinsteinCoefficients cls = classify_eta_einstein(m);
    r.results.emplace_back("eta_einstein_A", cls.A);
    r.results.emplace_back("eta_einstein_B", cls.B);
    r.results.emplace_back("eta_einstein_residual", cls.residual);

    // First-principles checks on an explicit chart.
    const FactorChart chart = c.factor.chart(c.p);
    const auto points = sample_chart_points(chart.dimension(), static_cast<std::size_t>(c.samples), c.seed);
    FactorFieldReport worst;
    bool failed = false;
    std::string error;
    try {
        for (const auto& u : points) {
            const FactorFieldReport f = verify_factor_fields(chart, u, StencilConfig{});
            worst.unit_xi = std::max(worst.unit_xi, f.unit_xi);
            worst.phi_squared = std::max(worst.phi_squared, f.phi_squared);
            worst.nabla_xi = std::max(worst.nabla_xi, f.nabla_xi);
            worst.nabla_eta = std::max(worst.nabla_eta, f.nabla_eta);
            worst.nabla_phi = std::max(worst.nabla_phi, f.nabla_phi);
            worst.contact = std::max(worst.contact, f.contact);
            worst.contact_unhalved = std::max(worst.contact_unhalved, f.contact_unhalved);
            worst.curvature_xi = std::max(worst.curvature_xi, f.curvature_xi);
            worst.ricci_xi = std::max(worst.ricci_xi, f.ricci_xi);
        }
    } catch (const std::exception& e) {
        failed = true;
        error = e.what();
    }
    auto fd = [&](const char* name, const char* anchor, double value, double tol_fd) {
        if (failed) r.checks.push_back(make_record(std::string(name) + " [error: " + error + "]", anchor, kNaN, tol_fd));
        else r.checks.push_back(make_record(name, anchor, value, tol_fd));
    };
    const double tol_fd = c.tolerances.fd;
    fd("chart: unit xi", "g(xi, xi) = 1", worst.unit_xi, tol_fd);
    fd("chart: phi squared", "phi^2 = -I + xi (x) eta", worst.phi_squared, tol_fd);
    fd("chart: nabla xi", "nabla_X xi = -phi X", worst.nabla_xi, tol_fd);
    fd("chart: nabla eta", "(nabla_X eta)(Y) = -g(phi X, Y)", worst.nabla_eta, tol_fd);
    fd("chart: nabla phi", "(nabla_X phi)Y = g(X,Y)xi - eta(Y)X", worst.nabla_phi, tol_fd);
    fd("chart: contact", "d eta(X,Y) = g(X, phi Y)", worst.contact, tol_fd);
    fd("chart: R(X,Y)xi", "R(X,Y)xi = eta(Y)X - eta(X)Y", worst.curvature_xi, tol_fd);
    fd("chart: ricci(xi, X)", "rho(xi, X) = 2n eta(X)", worst.ricci_xi, tol_fd);
    r.results.emplace_back("chart_points", static_cast<std::int64_t>(points.size()));
}

void run_verify_product(const RunConfig& c, Report& r) {
    const auto [m, mp] = build_factors(c);
    const HermitianParams params{c.a.start, c.b.start};
    const ProductHermitianModel model = build_product_model(m, mp, params);
    const double tol = c.tolerances.algebraic;
    const std::size_t n = model.dimension();
    const double ab2 = params.a * params.a + params.b * params.b;
    const double scale = std::max({1.0, max_abs_entry(model.ricci_bar), max_abs(model.g_bar.entries())});

    guarded(r, "J^2 = -I", "J^2 = -I", scaled(tol, scale), [&] {
        return max_abs((model.J_bar * model.J_bar + Endomorphism::identity(n)).entries());
    });
    guarded(r, "compatible metric", "g(JX, JY) = g(X, Y)", scaled(tol, scale), [&] {
        const SquareMatrix& J = model.J_bar.entries();
        return max_abs((J.transposed() * model.g_bar.entries() * J) - model.g_bar.entries());
    });
    guarded(r, "integrability", "g((nabla_X J)Y, Z) = g((nabla_JX J)JY, Z)", scaled(tol, ab2),
            [&] { return check_integrability(model); });
    double witness = 0.0;
    guarded(r, "not Kaehler", "max |g((nabla_X J)Y, Z)| >= min(1, a^2 + b^2)", tol, [&] {
        witness = check_not_kahler(model);
        return std::max(0.0, std::min(1.0, ab2) - witness);
    });
    guarded(r, "product curvature symmetries", "R skew in (1,2) and (3,4), pair symmetric, first Bianchi",
            scaled(tol, scale), [&] { return curvature_symmetry_residuals(model.R_bar).max(); });
    guarded(r, "product ricci", "closed-form rho equals the trace of the closed-form R", scaled(tol, scale),
            [&] { return max_abs_difference(ricci_from_curvature(model.R_bar, model.g_bar), model.ricci_bar); });
    guarded(r, "product ricci-*", "closed-form rho* equals tr(Z -> R(X, JZ)JY)", scaled(tol, scale), [&] {
        return max_abs_difference(ricci_star_by_definition(model.R_bar, model.J_bar, model.g_bar),
                                  model.ricci_star_bar);
    });
    const WeaklyStarEinsteinResult ws = check_weakly_star_einstein(model, tol);
    r.results.emplace_back("not_kaehler_witness", witness);
    r.results.emplace_back("tau", model.tau_bar);
    r.results.emplace_back("tau_star", model.tau_star_bar);
    r.results.emplace_back("weakly_star_einstein", ws.is_weakly_star_einstein);
    r.results.emplace_back("weakly_star_residual", ws.residual);
}

void add_verdict_results(Report& r, const EinsteinVerdict& v) {
    r.results.emplace_back("is_einstein", v.is_einstein);
    r.results.emplace_back("lambda", v.lambda);
    r.results.emplace_back("lambda_xi", v.lambda_xi);
    r.results.emplace_back("residual", v.residual);
    r.results.emplace_back("a_is_zero", v.structural_conditions.a_is_zero);
    r.results.emplace_back("p_equals_b2q", v.structural_conditions.p_equals_b2q);
    r.results.emplace_back("factor_einstein", v.structural_conditions.factor_einstein);
    r.results.emplace_back("factor_prime_eta_einstein_match", v.structural_conditions.factorprime_eta_einstein_match);
    r.results.emplace_back("agreement", v.agreement);
}

void run_einstein(const RunConfig& c, Report& r) {
    const auto [m, mp] = build_factors(c);
    const HermitianParams params{c.a.start, c.b.start};
    const ProductHermitianModel model = build_product_model(m, mp, params);
    const EinsteinVerdict v = theorem1_verdict(model, c.tolerances.einstein);
    r.checks.push_back(make_record("einstein", "rho = lambda g with lambda = tau / N", v.residual, c.tolerances.einstein));
    const double expected_xi = 2.0 * c.p + 2.0 * params.a * params.a * c.q;
    r.checks.push_back(make_record("lambda on xi", "rho(xi, xi) / g(xi, xi) = 2p + 2a^2 q",
                                   std::abs(v.lambda_xi - expected_xi), scaled(c.tolerances.algebraic, expected_xi)));
    add_verdict_results(r, v);
}

void run_scan(const RunConfig& c, Report& r) {
    const auto [m, mp] = build_factors(c);
    std::int64_t cells = 0, passing = 0;
    for (double a : c.a.values())
        for (double b : c.b.values()) {
            if (std::abs(b) <= kGridSlack) continue;
            ++cells;
            const std::string name = "a=" + short_double(a) + " b=" + short_double(b);
            const HermitianParams params{a, b};
            const double ab2 = a * a + b * b;
            switch (c.check) {
                case ScanCheck::Einstein:
                    guarded(r, name, "rho = lambda g", c.tolerances.einstein, [&] {
                        return theorem1_verdict(build_product_model(m, mp, params), c.tolerances.einstein).residual;
                    });
                    break;
                case ScanCheck::Integrability:
                    guarded(r, name, "g((nabla_X J)Y, Z) = g((nabla_JX J)JY, Z)", scaled(c.tolerances.algebraic, ab2),
                            [&] { return check_integrability(build_product_model(m, mp, params)); });
                    break;
                case ScanCheck::NotKahler:
                    guarded(r, name, "max |nabla J| >= min(1, a^2 + b^2)", c.tolerances.algebraic, [&] {
                        return std::max(0.0, std::min(1.0, ab2) - check_not_kahler(build_product_model(m, mp, params)));
                    });
                    break;
                case ScanCheck::WeaklyStar:
                    guarded(r, name, "rho* = (tau*/N) g", c.tolerances.algebraic, [&] {
                        return check_weakly_star_einstein(build_product_model(m, mp, params)).residual;
                    });
                    break;
            }
            if (r.checks.back().pass) ++passing;
        }
    r.results.emplace_back("cells", cells);
    r.results.emplace_back("passing_cells", passing);
}

void run_oracle_compare(const RunConfig& c, Report& r) {
    const auto [m, mp] = build_factors(c);
    const HermitianParams params{c.a.start, c.b.start};
    const ProductHermitianModel model = build_product_model(m, mp, params);
    const ProductChart chart{c.factor.chart(c.p), c.factor_prime.chart(c.q), params, false, 0.0};
    const auto points = sample_chart_points(chart.dimension(), static_cast<std::size_t>(c.samples), c.seed);

    OracleComparison worst;
    std::string error;
    try {
        for (const auto& u : points) {
            const OracleComparison o = compare_with_algebraic(chart, model, u, StencilConfig{});
            worst.metric = std::max(worst.metric, o.metric);
            worst.complex_structure = std::max(worst.complex_structure, o.complex_structure);
            worst.curvature = std::max(worst.curvature, o.curvature);
            worst.ricci = std::max(worst.ricci, o.ricci);
            worst.ricci_star = std::max(worst.ricci_star, o.ricci_star);
            worst.nabla_J = std::max(worst.nabla_J, o.nabla_J);
            worst.connection_blocks = std::max(worst.connection_blocks, o.connection_blocks);
            worst.integrability = std::max(worst.integrability, o.integrability);
            worst.nijenhuis = std::max(worst.nijenhuis, o.nijenhuis);
        }
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double tol = c.tolerances.fd;
    auto add = [&](const char* name, const char* anchor, double value) {
        if (error.empty()) r.checks.push_back(make_record(name, anchor, value, tol));
        else r.checks.push_back(make_record(std::string(name) + " [error: " + error + "]", anchor, kNaN, tol));
    };
    add("frame: metric", "transported chart metric equals the closed-form metric", worst.metric);
    add("frame: complex structure", "transported chart J equals the closed-form J", worst.complex_structure);
    add("curvature", "finite-difference R equals closed-form R", worst.curvature);
    add("ricci", "finite-difference rho equals closed-form rho", worst.ricci);
    add("ricci-*", "finite-difference rho* equals closed-form rho*", worst.ricci_star);
    add("nabla J", "finite-difference nabla J equals closed-form nabla J", worst.nabla_J);
    add("connection blocks", "g(nabla_X Y, Z) block formulas on coordinate fields", worst.connection_blocks);
    add("integrability (finite differences)", "g((nabla_X J)Y, Z) = g((nabla_JX J)JY, Z)", worst.integrability);
    add("nijenhuis", "N(X, Y) = 0", worst.nijenhuis);
    r.results.emplace_back("chart_points", static_cast<std::int64_t>(points.size()));
}

void run_example(const RunConfig& c, Report& r) {
    const CalabiEckmannExample ex = calabi_eckmann_einstein_example(c.p, c.q);
    const double tol = c.tolerances.algebraic;
    const EinsteinVerdict v = theorem1_verdict(ex.model, c.tolerances.einstein);
    const double lam = 2.0 * c.p;
    r.checks.push_back(make_record("einstein", "rho = lambda g", v.residual, scaled(tol, lam)));
    r.checks.push_back(make_record("lambda = 2p", "lambda = 2p", std::abs(v.lambda - lam), scaled(tol, lam)));
    r.checks.push_back(make_record("p = b^2 q", "p = b^2 q", std::abs(c.p - ex.spec.b * ex.spec.b * c.q), scaled(tol, c.p)));
    const WeaklyStarEinsteinResult ws = check_weakly_star_einstein(ex.model, tol);
    const auto basis = adapted_orthonormal_basis(ex.model);
    const TangentVector& xi = basis[ex.model.dimension() - 2];

    r.results.emplace_back("a", ex.spec.a);
    r.results.emplace_back("b", ex.spec.b);
    r.results.emplace_back("c", ex.spec.c);
    r.results.emplace_back("alpha", ex.spec.alpha);
    add_verdict_results(r, v);
    r.results.emplace_back("tau_star", ex.model.tau_star_bar);
    r.results.emplace_back("tau_star_einstein_factor_formula", star_scalar_prediction(c.p, c.q));
    r.results.emplace_back("weakly_star_einstein", ws.is_weakly_star_einstein);
    r.results.emplace_back("ricci_star_xi_xi", ex.model.ricci_star_bar(xi, xi));
    r.results.emplace_back("g_xi_xi", ex.model.g_bar(xi, xi));
}

}  // namespace

Command parse_command(const std::string& name) {
    if (name == "verify-factor") return Command::VerifyFactor;
    if (name == "verify-product") return Command::VerifyProduct;
    if (name == "einstein") return Command::Einstein;
    if (name == "scan") return Command::Scan;
    if (name == "oracle-compare") return Command::OracleCompare;
    if (name == "example") return Command::Example;
    throw UsageError("unknown command '" + name + "'");
}

std::string to_string(Command c) {
    switch (c) {
        case Command::VerifyFactor: return "verify-factor";
        case Command::VerifyProduct: return "verify-product";
        case Command::Einstein: return "einstein";
        case Command::Scan: return "scan";
        case Command::OracleCompare: return "oracle-compare";
        case Command::Example: return "example";
    }
    return "";
}

ReportFormat parse_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw UsageError("unknown format '" + name + "' (json or csv)");
}

ScanCheck parse_scan_check(const std::string& name) {
    if (name == "einstein") return ScanCheck::Einstein;
    if (name == "integrability") return ScanCheck::Integrability;
    if (name == "not-kahler") return ScanCheck::NotKahler;
    if (name == "weakly-star") return ScanCheck::WeaklyStar;
    throw UsageError("unknown scan check '" + name + "'");
}

std::string to_string(ScanCheck c) {
    switch (c) {
        case ScanCheck::Einstein: return "einstein";
        case ScanCheck::Integrability: return "integrability";
        case ScanCheck::NotKahler: return "not-kahler";
        case ScanCheck::WeaklyStar: return "weakly-star";
    }
    return "";
}

FactorSpec FactorSpec::parse(const std::string& text) {
    if (text == "round") return {};
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("invalid factor spec '" + text + "'");
    const std::string kind = text.substr(0, colon);
    const double v = parse_number(text.substr(colon + 1), "factor spec");
    if (kind == "space-form") {
        if (v <= -3.0) throw UsageError("space-form needs c > -3");
        return {Kind::SpaceForm, v};
    }
    if (kind == "deformed") {
        if (v <= 0.0) throw UsageError("deformed needs alpha > 0");
        return {Kind::Deformed, v};
    }
    throw UsageError("invalid factor spec '" + text + "'");
}

std::string FactorSpec::to_string() const {
    switch (kind) {
        case Kind::Round: return "round";
        case Kind::SpaceForm: return "space-form:" + short_double(value);
        case Kind::Deformed: return "deformed:" + short_double(value);
    }
    return "";
}

SasakianPointModel FactorSpec::build(int n) const {
    switch (kind) {
        case Kind::Round: return make_round_sphere_model(n);
        case Kind::SpaceForm: return make_space_form_model(n, value);
        case Kind::Deformed: return d_homothetic_deform(make_round_sphere_model(n), value);
    }
    return {};
}

FactorChart FactorSpec::chart(int n) const {
    switch (kind) {
        case Kind::Round: return FactorChart::round(n);
        case Kind::SpaceForm: return FactorChart::space_form(n, value);
        case Kind::Deformed: return FactorChart::deformed(n, value);
    }
    return {};
}

Grid Grid::single(double v) { return Grid{v, v, 0.0, short_double(v)}; }

Grid Grid::parse(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) {
        Grid g = single(parse_number(parts[0], "grid"));
        g.text = text;
        return g;
    }
    if (parts.size() != 3) throw UsageError("grid must be 'x' or 'start:stop:step', got '" + text + "'");
    Grid g{parse_number(parts[0], "grid start"), parse_number(parts[1], "grid stop"),
           parse_number(parts[2], "grid step"), text};
    if (g.step <= 0.0) throw UsageError("grid step must be positive");
    if (g.stop < g.start) throw UsageError("grid stop must not be below start");
    return g;
}

std::vector<double> Grid::values() const {
    if (is_single()) return {start};
    std::vector<double> out;
    for (long i = 0;; ++i) {
        double v = start + static_cast<double>(i) * step;
        if (v > stop + kGridSlack) break;
        if (std::abs(v - stop) <= kGridSlack) v = stop;
        if (std::abs(v) <= kGridSlack) v = 0.0;
        out.push_back(v);
    }
    return out;
}

void validate(const RunConfig& c) {
    if (c.p < 1 || c.q < 1) throw UsageError("p and q must be at least 1");
    if (!(c.tolerances.algebraic > 0.0) || !(c.tolerances.fd > 0.0) || !(c.tolerances.einstein > 0.0))
        throw UsageError("tolerances must be positive");
    if (c.samples < 1) throw UsageError("samples must be at least 1");
    if (c.command != Command::Scan && (!c.a.is_single() || !c.b.is_single()))
        throw UsageError("grids for a and b are only accepted by scan");
    if (c.command == Command::Scan) {
        const auto bs = c.b.values();
        if (std::all_of(bs.begin(), bs.end(), [](double b) { return std::abs(b) <= kGridSlack; }))
            throw UsageError("b grid must contain a nonzero value");
    } else if (c.command != Command::VerifyFactor && c.command != Command::Example && c.b.start == 0.0) {
        throw UsageError("b must be nonzero");
    }
}

CheckRecord make_record(std::string name, std::string anchor, double residual, double tolerance) {
    CheckRecord r{std::move(name), std::move(anchor), residual, tolerance, false};
    r.pass = std::isfinite(residual) && residual <= tolerance;
    return r;
}

std::size_t Report::pass_count() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const CheckRecord& r) { return r.pass; }));
}

std::size_t Report::fail_count() const { return checks.size() - pass_count(); }

std::string emit_report(const Report& report, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        std::string out = "name,paper_anchor,residual,tolerance,pass\n";
        for (const auto& c : report.checks) {
            out += csv_field(c.name) + "," + csv_field(c.anchor) + "," +
                   (std::isfinite(c.residual) ? fmt_double(c.residual) : "nan") + "," + fmt_double(c.tolerance) + "," +
                   (c.pass ? "true" : "false") + "\n";
        }
        return out;
    }
    std::string out = "{\n";
    out += "  \"config\": " + json_object(report.config, "  ") + ",\n";
    out += "  \"results\": " + json_object(report.results, "  ") + ",\n";
    out += "  \"checks\": [";
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
        const CheckRecord& c = report.checks[i];
        out += i == 0 ? "\n" : ",\n";
        out += "    {\"name\": \"" + json_escape(c.name) + "\", \"paper_anchor\": \"" + json_escape(c.anchor) +
               "\", \"residual\": " + json_value(c.residual) + ", \"tolerance\": " + json_value(c.tolerance) +
               ", \"pass\": " + (c.pass ? "true" : "false") + "}";
    }
    out += report.checks.empty() ? "],\n" : "\n  ],\n";
    out += "  \"summary\": {\"pass\": " + std::to_string(report.pass_count()) +
           ", \"fail\": " + std::to_string(report.fail_count()) + ", \"wall_time_ms\": " +
           json_value(report.wall_time_ms) + "}\n";
    return out + "}\n";
}

Report run(const RunConfig& c) {
    validate(c);
    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    r.config = {
        {"command", to_string(c.command)},
        {"p", static_cast<std::int64_t>(c.p)},
        {"q", static_cast<std::int64_t>(c.q)},
        {"a", c.a.text},
        {"b", c.b.text},
        {"factor", c.factor.to_string()},
        {"factor_prime", c.factor_prime.to_string()},
        {"tol_algebraic", c.tolerances.algebraic},
        {"tol_fd", c.tolerances.fd},
        {"tol_einstein", c.tolerances.einstein},
        {"seed", static_cast<std::int64_t>(c.seed)},
        {"samples", static_cast<std::int64_t>(c.samples)},
    };
    if (c.command == Command::Scan) r.config.emplace_back("check", to_string(c.check));

    try {
        switch (c.command) {
            case Command::VerifyFactor: run_verify_factor(c, r); break;
            case Command::VerifyProduct: run_verify_product(c, r); break;
            case Command::Einstein: run_einstein(c, r); break;
            case Command::Scan: run_scan(c, r); break;
            case Command::OracleCompare: run_oracle_compare(c, r); break;
            case Command::Example: run_example(c, r); break;
        }
    } catch (const UsageError&) {
        throw;
    } catch (const InvalidParameterError& e) {
        throw UsageError(e.what());
    } catch (const std::exception& e) {
        r.checks.push_back(make_record(std::string("run [error: ") + e.what() + "]", to_string(c.command), kNaN, 0.0));
    }
    if (c.timing) {
        r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    return r;
}

ExitCode run_and_write(const RunConfig& config, std::string& out) {
    const Report report = run(config);
    const std::string text = emit_report(report, config.format);
    if (config.output_path.empty()) {
        out = text;
    } else {
        std::ofstream f(config.output_path, std::ios::binary | std::ios::trunc);
        if (!f) throw OutputError("cannot open '" + config.output_path + "' for writing");
        f << text;
        f.flush();
        if (!f) throw OutputError("failed writing '" + config.output_path + "'");
    }
    return report.all_pass() ? ExitCode::Ok : ExitCode::CheckFailed;
}

}  // namespace sasaki
