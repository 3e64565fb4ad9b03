#include "nk6/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nk6 {

using nlohmann::json;

std::string to_string(DerivativeMode mode) {
    switch (mode) {
        case DerivativeMode::automatic: return "auto";
        case DerivativeMode::exact: return "exact";
        case DerivativeMode::finite_difference: return "fd";
    }
    return "auto";
}

DerivativeMode derivative_mode_from_string(const std::string& s) {
    if (s == "auto") return DerivativeMode::automatic;
    if (s == "exact") return DerivativeMode::exact;
    if (s == "fd") return DerivativeMode::finite_difference;
    throw ConfigError("derivatives must be auto, exact or fd (got '" + s + "')");
}

namespace {

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double read_number(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json config_json(const RunConfig& c) {
    return json{{"backend", c.backend},
                {"delta", c.delta},
                {"radius", c.radius},
                {"points", c.points},
                {"seed", c.seed},
                {"draws", c.draws},
                {"derivatives", to_string(c.derivatives)},
                {"fd_steps", {{"low_order", c.fd_steps.low_order}, {"third_order", c.fd_steps.third_order}}},
                {"tolerances", {{"tier1", c.tolerances.tier1}, {"tier2", c.tolerances.tier2}, {"tier3", c.tolerances.tier3}}},
                {"identities", c.identities},
                {"format", c.format},
                {"execution", c.serial ? "serial" : "parallel"},
                {"timing", c.timing}};
}

RunConfig config_from(const json& j) {
    RunConfig c;
    c.backend = j.at("backend").get<std::string>();
    c.delta = j.at("delta").get<double>();
    c.radius = j.at("radius").get<double>();
    c.points = j.at("points").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.draws = j.at("draws").get<int>();
    c.derivatives = derivative_mode_from_string(j.at("derivatives").get<std::string>());
    c.fd_steps.low_order = j.at("fd_steps").at("low_order").get<double>();
    c.fd_steps.third_order = j.at("fd_steps").at("third_order").get<double>();
    c.tolerances.tier1 = j.at("tolerances").at("tier1").get<double>();
    c.tolerances.tier2 = j.at("tolerances").at("tier2").get<double>();
    c.tolerances.tier3 = j.at("tolerances").at("tier3").get<double>();
    c.identities = j.at("identities").get<std::vector<std::string>>();
    c.format = j.at("format").get<std::string>();
    c.serial = j.at("execution").get<std::string>() == "serial";
    c.timing = j.at("timing").get<bool>();
    return c;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

}  // namespace

std::string emit_json(const RunReport& r) {
    json ids = json::array();
    for (const auto& i : r.identities) {
        json e{{"id", i.id},
               {"n", i.n},
               {"max_residual", number(i.max_residual)},
               {"mean_residual", number(i.mean_residual)},
               {"tol", i.tol},
               {"pass", i.pass}};
        if (!i.note.empty()) e["note"] = i.note;
        ids.push_back(std::move(e));
    }
    json j{{"schema", kSchema},
           {"config", config_json(r.config)},
           {"mu",
            {{"value", number(r.mu.value)},
             {"spread", number(r.mu.spread)},
             {"min", number(r.mu.min)},
             {"max", number(r.mu.max)},
             {"samples", r.mu.samples}}},
           {"lambda",
            {{"re", number(r.lambda.value.real())},
             {"im", number(r.lambda.value.imag())},
             {"spread", number(r.lambda.spread)}}},
           {"scalar_curvature", number(r.scalar_curvature)},
           {"classification", r.classification},
           {"identities", ids},
           {"pass", r.pass}};
    if (r.wall_seconds) j["wall_seconds"] = *r.wall_seconds;
    return j.dump(2) + "\n";
}

RunReport parse_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("report is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("schema", "") != kSchema)
        throw std::runtime_error(std::string("report schema is not ") + kSchema);
    try {
        RunReport r;
        r.config = config_from(j.at("config"));
        const json& m = j.at("mu");
        r.mu.value = read_number(m.at("value"));
        r.mu.spread = read_number(m.at("spread"));
        r.mu.min = read_number(m.at("min"));
        r.mu.max = read_number(m.at("max"));
        r.mu.samples = m.at("samples").get<int>();
        const json& l = j.at("lambda");
        r.lambda.value = {read_number(l.at("re")), read_number(l.at("im"))};
        r.lambda.spread = read_number(l.at("spread"));
        r.scalar_curvature = read_number(j.at("scalar_curvature"));
        r.classification = j.at("classification").get<std::string>();
        for (const auto& e : j.at("identities")) {
            IdentityReport i;
            i.id = e.at("id").get<std::string>();
            i.n = e.at("n").get<int>();
            i.max_residual = read_number(e.at("max_residual"));
            i.mean_residual = read_number(e.at("mean_residual"));
            i.tol = e.at("tol").get<double>();
            i.pass = e.at("pass").get<bool>();
            i.note = e.value("note", "");
            r.identities.push_back(std::move(i));
        }
        r.pass = j.at("pass").get<bool>();
        if (j.contains("wall_seconds")) r.wall_seconds = j.at("wall_seconds").get<double>();
        return r;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed report: ") + e.what());
    } catch (const ConfigError& e) {
        throw std::runtime_error(std::string("malformed report: ") + e.what());
    }
}

std::string emit_csv(const RunReport& r) {
    std::ostringstream os;
    os << "id,n,max_residual,mean_residual,tol,pass\n";
    for (const auto& i : r.identities)
        os << i.id << ',' << i.n << ',' << fmt("%.6e", i.max_residual) << ',' << fmt("%.6e", i.mean_residual) << ','
           << fmt("%.1e", i.tol) << ',' << (i.pass ? "true" : "false") << '\n';
    return os.str();
}

std::string emit_human(const RunReport& r) {
    const RunConfig& c = r.config;
    std::ostringstream os;
    os << "backend " << c.backend;
    if (c.backend == "s6") os << " (radius " << fmt("%g", c.radius) << ")";
    if (c.backend == "perturbed") os << " (delta " << fmt("%g", c.delta) << ")";
    os << "   points " << c.points << "   draws " << c.draws << "   seed " << c.seed << "   derivatives "
       << to_string(c.derivatives) << "\n";
    os << "mu = " << fmt("%.6f", r.mu.value) << " ± " << fmt("%.1e", r.mu.spread) << "\n";
    os << "lambda = " << fmt("%.6f", r.lambda.value.real()) << (r.lambda.value.imag() < 0 ? " - " : " + ")
       << fmt("%.6f", std::abs(r.lambda.value.imag())) << "i\n";
    os << "scalar curvature = " << fmt("%.6f", r.scalar_curvature) << "\n";
    os << "classification: " << r.classification << "\n\n";

    char line[160];
    std::snprintf(line, sizeof line, "%-16s %6s  %-13s %-14s %-8s %s\n", "identity", "n", "max_residual",
                  "mean_residual", "tol", "result");
    os << line;
    for (const auto& i : r.identities) {
        std::snprintf(line, sizeof line, "%-16s %6d  %-13.3e %-14.3e %-8.0e %s", i.id.c_str(), i.n, i.max_residual,
                      i.mean_residual, i.tol, i.pass ? "pass" : "FAIL");
        os << line;
        if (!i.note.empty()) os << "  (" << i.note << ")";
        os << "\n";
    }
    if (r.wall_seconds) os << "\nwall clock " << fmt("%.3f", *r.wall_seconds) << " s";
    os << "\noverall: " << (r.pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::string emit(const RunReport& report, const std::string& format) {
    if (format == "json") return emit_json(report);
    if (format == "csv") return emit_csv(report);
    if (format == "human") return emit_human(report);
    throw ConfigError("format must be json, csv or human (got '" + format + "')");
}

}  // namespace nk6
