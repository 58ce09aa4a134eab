#include "wr/harness/config.hpp"

#include "wr/errors.hpp"
#include "wr/harness/materials.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>

namespace wr {

namespace {

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
    }
}

int to_int(const std::string& key, const std::string& value) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + value + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Scheme parse_scheme(const std::string& s) {
    if (s == "ie") return Scheme::implicit_euler;
    if (s == "sdirk2") return Scheme::sdirk2;
    throw ConfigError("scheme must be ie or sdirk2, got '" + s + "'");
}

DtRule parse_rule(const std::string& s) {
    if (s == "max") return DtRule::max;
    if (s == "min") return DtRule::min;
    if (s == "avg") return DtRule::avg;
    if (s == "mix") return DtRule::mix;
    throw ConfigError("theta rule must be max, min, avg or mix, got '" + s + "'");
}

double ExperimentConfig::dx() const {
    if (dx_override) return *dx_override;
    if (dim == 1) return 1.0 / 200.0;
    return full_scale ? 1.0 / 100.0 : 1.0 / 20.0;
}

Material ExperimentConfig::mat_1() const { return custom_1 ? *custom_1 : MaterialRegistry::get(material_1); }
Material ExperimentConfig::mat_2() const { return custom_2 ? *custom_2 : MaterialRegistry::get(material_2); }

WROptions ExperimentConfig::options() const {
    WROptions o;
    o.tol = tol;
    o.k_max = k_max;
    o.policy = theta;
    o.concurrent = concurrent;
    return o;
}

void ExperimentConfig::validate() const {
    if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");
    if (!(length_1 > 0.0 && length_2 > 0.0)) throw ConfigError("subdomain lengths must be positive");
    if (!(dx() > 0.0)) throw ConfigError("dx must be positive");
    mat_1().validate();
    mat_2().validate();
    if (!(tf > 0.0)) throw ConfigError("tf must be positive");
    if (n < 1) throw ConfigError("n must be at least 1");
    if (c1 < 1 || c2 < 1) throw ConfigError("c1 and c2 must be positive integers");
    if (!(tol > 0.0)) throw ConfigError("tol must be positive");
    if (k_max < 1) throw ConfigError("kmax must be at least 1");
    if (adaptive_tol && !(*adaptive_tol > 0.0)) throw ConfigError("adaptive tolerance must be positive");
    if (scheme == Scheme::sdirk2 && (n1() < 2 || n2() < 2) && !adaptive_tol) {
        throw ConfigError("SDIRK2 needs at least two timesteps per subdomain");
    }
}

std::vector<std::string> config_keys() {
    return {"geometry.dim",       "geometry.dx",        "geometry.length_1",   "geometry.length_2",
            "geometry.full_scale", "materials.pair",   "materials.omega_1",   "materials.omega_2",
            "materials.alpha_1",  "materials.lambda_1", "materials.alpha_2",   "materials.lambda_2",
            "time.tf",            "time.scheme",        "time.n",              "time.c1",
            "time.c2",            "time.adaptive_tol",  "coupling.algo",       "coupling.tol",
            "coupling.kmax",      "coupling.theta",     "coupling.rule",       "coupling.concurrent",
            "initial.condition"};
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    if (key == "geometry.dim") {
        dim = to_int(key, value);
    } else if (key == "geometry.dx") {
        dx_override = to_double(key, value);
    } else if (key == "geometry.length_1") {
        length_1 = to_double(key, value);
    } else if (key == "geometry.length_2") {
        length_2 = to_double(key, value);
    } else if (key == "geometry.full_scale") {
        full_scale = to_bool(key, value);
    } else if (key == "materials.pair") {
        const auto dash = value.find('-');
        if (dash == std::string::npos) throw ConfigError("material pair must look like 'air-steel'");
        set("materials.omega_1", value.substr(0, dash));
        set("materials.omega_2", value.substr(dash + 1));
    } else if (key == "materials.omega_1" || key == "materials.omega_2") {
        if (!MaterialRegistry::contains(value)) throw ConfigError("unknown material '" + value + "'");
        if (key == "materials.omega_1") {
            material_1 = value;
            custom_1.reset();
        } else {
            material_2 = value;
            custom_2.reset();
        }
    } else if (key == "materials.alpha_1" || key == "materials.lambda_1") {
        Material m = mat_1();
        (key == "materials.alpha_1" ? m.alpha : m.lambda) = to_double(key, value);
        custom_1 = m;
    } else if (key == "materials.alpha_2" || key == "materials.lambda_2") {
        Material m = mat_2();
        (key == "materials.alpha_2" ? m.alpha : m.lambda) = to_double(key, value);
        custom_2 = m;
    } else if (key == "time.tf") {
        tf = to_double(key, value);
    } else if (key == "time.scheme") {
        scheme = parse_scheme(value);
    } else if (key == "time.n") {
        n = to_int(key, value);
    } else if (key == "time.c1") {
        c1 = to_int(key, value);
    } else if (key == "time.c2") {
        c2 = to_int(key, value);
    } else if (key == "time.adaptive_tol") {
        if (value == "none") {
            adaptive_tol.reset();
        } else {
            adaptive_tol = to_double(key, value);
        }
    } else if (key == "coupling.algo") {
        if (value == "dnwr") {
            algo = AlgorithmChoice::dnwr;
        } else if (value == "nnwr") {
            algo = AlgorithmChoice::nnwr;
        } else if (value == "monolithic") {
            algo = AlgorithmChoice::monolithic;
        } else {
            throw ConfigError("algo must be dnwr, nnwr or monolithic, got '" + value + "'");
        }
    } else if (key == "coupling.tol") {
        tol = to_double(key, value);
    } else if (key == "coupling.kmax") {
        k_max = to_int(key, value);
    } else if (key == "coupling.theta") {
        if (value == "opt") {
            theta = ThetaPolicy::opt(theta.rule);
        } else if (value == "adaptive") {
            theta = ThetaPolicy::adaptive_avg();
        } else {
            theta = ThetaPolicy::fixed(to_double(key, value));
        }
    } else if (key == "coupling.rule") {
        theta.rule = parse_rule(value);
    } else if (key == "coupling.concurrent") {
        concurrent = to_bool(key, value);
    } else if (key == "initial.condition") {
        if (value == "sine" || value == "u1") {
            initial = InitialCondition::sine;
        } else if (value == "bump" || value == "u2") {
            initial = InitialCondition::bump;
        } else {
            throw ConfigError("initial condition must be sine (u1) or bump (u2), got '" + value + "'");
        }
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void ExperimentConfig::write(std::ostream& out) const {
    const auto flags = out.flags();
    out << std::setprecision(17);
    out << "[geometry]\ndim = " << dim << "\ndx = " << dx() << "\nlength_1 = " << length_1
        << "\nlength_2 = " << length_2 << "\n\n[materials]\n";
    const Material a = mat_1();
    const Material b = mat_2();
    out << "alpha_1 = " << a.alpha << "\nlambda_1 = " << a.lambda << "\nalpha_2 = " << b.alpha
        << "\nlambda_2 = " << b.lambda << "\n\n[time]\ntf = " << tf
        << "\nscheme = " << (scheme == Scheme::sdirk2 ? "sdirk2" : "ie") << "\nn = " << n << "\nc1 = " << c1
        << "\nc2 = " << c2 << "\n";
    if (adaptive_tol) out << "adaptive_tol = " << *adaptive_tol << "\n";
    out << "\n[coupling]\nalgo = "
        << (algo == AlgorithmChoice::dnwr ? "dnwr" : algo == AlgorithmChoice::nnwr ? "nnwr" : "monolithic")
        << "\ntol = " << tol << "\nkmax = " << k_max << "\ntheta = ";
    switch (theta.kind) {
        case ThetaPolicy::Kind::fixed: out << theta.theta; break;
        case ThetaPolicy::Kind::opt: out << "opt"; break;
        case ThetaPolicy::Kind::adaptive_avg: out << "adaptive"; break;
    }
    out << "\nrule = " << to_string(theta.rule) << "\nconcurrent = " << (concurrent ? "true" : "false")
        << "\n\n[initial]\ncondition = " << (initial == InitialCondition::sine ? "sine" : "bump") << "\n";
    out.flags(flags);
}

ExperimentConfig parse_config(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax error: ") + e.what());
    }
    ExperimentConfig config;
    // materials.pair first so explicit coefficients in the same file refine it
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside a section");
        if (section == "materials" && body.count("pair")) config.set("materials.pair", body.get<std::string>("pair"));
    }
    for (const auto& [section, body] : tree) {
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            if (full == "materials.pair") continue;
            config.set(full, value.data());
        }
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

WRProblem build_problem(const ExperimentConfig& config) {
    config.validate();
    const double dx = config.dx();
    const SubdomainMesh mesh_1 = SubdomainMesh::left_of_interface(config.dim, config.length_1, dx);
    const SubdomainMesh mesh_2 = SubdomainMesh::right_of_interface(config.dim, config.length_2, dx);
    WRProblem p{assemble_subdomain(mesh_1, config.mat_1()),
                assemble_subdomain(mesh_2, config.mat_2()),
                {},
                {},
                {},
                config.tf,
                config.scheme};

    const double l1 = config.length_1;
    const double span = config.length_1 + config.length_2;
    const int dim = config.dim;
    const auto pi = std::numbers::pi;
    std::function<double(Point)> u0;
    if (config.initial == InitialCondition::sine) {
        u0 = [=](Point p) {
            const double v = 500.0 * std::sin(pi * (p.x + l1) / span);
            return dim == 2 ? v * std::sin(pi * p.y) : v;
        };
    } else {
        u0 = [=](Point p) {
            const double s = std::sin(2.0 * pi * (p.x + l1) / span);
            return dim == 2 ? 800.0 * s * s * std::sin(pi * p.y) : 800.0 * s * s;
        };
    }
    p.u0_interior_1 = sample_nodes(p.sys1.interior_nodes, u0);
    p.u0_interior_2 = sample_nodes(p.sys2.interior_nodes, u0);
    p.u0_interface = sample_nodes(p.sys1.interface_nodes, u0);
    if (config.initial == InitialCondition::bump) p.u0_interface.setZero();
    p.validate();
    return p;
}

}  // namespace wr
