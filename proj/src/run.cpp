#include "nk6/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace nk6 {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool is_extra(const std::string& key) { return key == "pde" || key == "einstein" || key == "classify"; }

}  // namespace

std::vector<std::string> parse_identity_filter(const std::string& spec) {
    std::vector<std::string> out;
    auto add = [&](const std::string& k) {
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    };
    std::size_t start = 0;
    while (start <= spec.size()) {
        const auto comma = spec.find(',', start);
        const std::string key = trim(spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (key == "all") {
            for (const auto& info : identity_registry()) add(info.id);
        } else if (is_registry_id(key) || is_extra(key)) {
            add(key);
        } else {
            throw ConfigError("unknown identity key '" + key + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void validate(const RunConfig& c) {
    if (c.backend != "s6" && c.backend != "c3" && c.backend != "perturbed")
        throw ConfigError("unknown backend '" + c.backend + "' (expected s6, c3 or perturbed)");
    if (c.points < 1) throw ConfigError("points must be at least 1");
    if (c.draws < 1) throw ConfigError("draws must be at least 1");
    if (c.identities.empty()) throw ConfigError("no identities selected");
    for (const auto& id : c.identities)
        if (!is_registry_id(id) && !is_extra(id)) throw ConfigError("unknown identity key '" + id + "'");
    for (double t : {c.tolerances.tier1, c.tolerances.tier2, c.tolerances.tier3})
        if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("tolerances must be positive");
    if (!(c.fd_steps.low_order > 0.0) || !(c.fd_steps.third_order > 0.0) || !std::isfinite(c.fd_steps.low_order) ||
        !std::isfinite(c.fd_steps.third_order))
        throw ConfigError("finite-difference steps must be positive");
    if (c.format != "json" && c.format != "csv" && c.format != "human")
        throw ConfigError("format must be json, csv or human (got '" + c.format + "')");
}

BackendPtr make_backend(const RunConfig& c) {
    try {
        if (c.backend == "s6") return backend_s6(c.radius);
        if (c.backend == "c3") return backend_flat_kahler();
        if (c.backend == "perturbed") return backend_perturbed(c.delta);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown backend '" + c.backend + "' (expected s6, c3 or perturbed)");
}

RunReport run(const RunConfig& config) {
    validate(config);
    const auto t0 = std::chrono::steady_clock::now();
    const BackendPtr backend = make_backend(config);

    VerifyOptions opts;
    opts.draws = config.draws;
    opts.derivatives.mode = config.derivatives;
    opts.derivatives.steps = config.fd_steps;
    opts.tolerances = config.tolerances;
    opts.execution = config.serial ? Execution::serial : Execution::parallel;
    const Session session(backend, config.points, config.seed, opts);

    RunReport r;
    r.config = config;
    r.mu = session.mu();
    r.lambda = session.lambda();
    r.scalar_curvature = session.scalar_curvature();
    r.classification = session.classify().label;
    for (const auto& key : config.identities) {
        if (key == "pde") {
            auto [a, b] = session.pde_pair();
            r.identities.push_back(std::move(a));
            r.identities.push_back(std::move(b));
        } else if (key == "einstein") {
            r.identities.push_back(session.einstein());
        } else if (key == "classify") {
            r.identities.push_back(session.classification_report());
        } else {
            r.identities.push_back(session.run(key));
        }
    }
    r.pass = std::all_of(r.identities.begin(), r.identities.end(), [](const IdentityReport& i) { return i.pass; });
    if (config.timing)
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace nk6
