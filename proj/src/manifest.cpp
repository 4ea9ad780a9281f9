#include "nrd/manifest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nrd {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw std::invalid_argument("config: bad numeric value for " + key + ": " + v);
    }
}

TimeProfile parse_time_profile(const std::string& v, const std::string& key) {
    const std::vector<std::string> parts = split(v, ':');
    TimeProfile p;
    if (parts.empty() || parts[0] == "zero") return p;
    if (parts[0] == "constant") {
        p.kind = TimeProfile::Constant;
        p.amplitude = parts.size() > 1 ? to_double(parts[1], key) : 1.0;
        return p;
    }
    if (parts[0] == "expdecay") {
        p.kind = TimeProfile::ExpDecay;
        p.amplitude = parts.size() > 1 ? to_double(parts[1], key) : 1.0;
        p.rate = parts.size() > 2 ? to_double(parts[2], key) : 1.0;
        return p;
    }
    throw std::invalid_argument("config: unknown time profile for " + key + ": " + v);
}

std::string time_profile_str(const TimeProfile& p) {
    switch (p.kind) {
    case TimeProfile::Zero: return "zero";
    case TimeProfile::Constant: return "constant:" + format17(p.amplitude);
    case TimeProfile::ExpDecay:
        return "expdecay:" + format17(p.amplitude) + ":" + format17(p.rate);
    }
    return "zero";
}

} // namespace

ModelSpec parse_config_text(const std::string& text) {
    ModelSpec spec;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "m") spec.m = to_double(val, key);
        else if (key == "m_tilde") spec.m_tilde = to_double(val, key);
        else if (key == "a_profile") {
            if (val == "rational") spec.a_profile = AProfile::Rational;
            else if (val == "constant") spec.a_profile = AProfile::Constant;
            else throw std::invalid_argument("config: unknown a_profile " + val);
        } else if (key == "l_weight") {
            if (val == "one") spec.l_weight = LWeight::One;
            else if (val == "tilt") spec.l_weight = LWeight::Tilt;
            else throw std::invalid_argument("config: unknown l_weight " + val);
        } else if (key == "l_tilt") spec.l_tilt = to_double(val, key);
        else if (key == "f_profile") {
            if (val == "sin2") spec.f_profile = FProfile::SinP2;
            else if (val == "cubic") spec.f_profile = FProfile::CubicP4;
            else if (val == "linear") spec.f_profile = FProfile::Linear;
            else throw std::invalid_argument("config: unknown f_profile " + val);
        } else if (key == "eta") spec.eta = to_double(val, key);
        else if (key == "c_f") spec.c_f = to_double(val, key);
        else if (key == "kappa") spec.kappa = to_double(val, key);
        else if (key == "alpha_1") spec.alpha1 = to_double(val, key);
        else if (key == "alpha_2") spec.alpha2 = to_double(val, key);
        else if (key == "p") spec.p = to_double(val, key);
        else if (key == "coupling") {
            if (val == "additive") spec.coupling = CouplingType::Additive;
            else if (val == "multiplicative") spec.coupling = CouplingType::Multiplicative;
            else if (val == "general") spec.coupling = CouplingType::General;
            else throw std::invalid_argument("config: unknown coupling " + val);
        } else if (key == "phi_mode") spec.phi_mode = (int)to_double(val, key);
        else if (key == "phi_amplitude") spec.phi_amplitude = to_double(val, key);
        else if (key == "d_1") spec.d1 = to_double(val, key);
        else if (key == "d_2") spec.d2 = to_double(val, key);
        else if (key == "q") spec.q = to_double(val, key);
        else if (key == "psi_1") spec.psi1 = parse_time_profile(val, key);
        else if (key == "psi_2") spec.psi2 = parse_time_profile(val, key);
        else if (key == "h_profile") {
            const std::vector<std::string> parts = split(val, ':');
            if (parts[0] == "zero") spec.h_profile = HProfile{};
            else if (parts[0] == "constant") {
                spec.h_profile.kind = HProfile::ConstantField;
                spec.h_profile.amplitude = parts.size() > 1 ? to_double(parts[1], key) : 1.0;
                spec.h_profile.mode = parts.size() > 2 ? (int)to_double(parts[2], key) : 1;
            } else if (parts[0] == "pulse") {
                spec.h_profile.kind = HProfile::Pulse;
                spec.h_profile.amplitude = parts.size() > 1 ? to_double(parts[1], key) : 1.0;
                spec.h_profile.mode = parts.size() > 2 ? (int)to_double(parts[2], key) : 1;
                spec.h_profile.rate = parts.size() > 3 ? to_double(parts[3], key) : 1.0;
            } else
                throw std::invalid_argument("config: unknown h_profile " + val);
        } else if (key == "epsilon") spec.epsilon = to_double(val, key);
        else if (key == "eta_damp") spec.eta_damp = to_double(val, key);
        else if (key == "c_const") spec.c_const = to_double(val, key);
        else
            throw std::invalid_argument("config: unknown key " + key);
    }
    return spec;
}

ModelSpec load_config(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("config: cannot open " + filename);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const ModelSpec& s) {
    std::ostringstream os;
    os << "m = " << format17(s.m) << "\n";
    os << "m_tilde = " << format17(s.m_tilde) << "\n";
    os << "a_profile = " << (s.a_profile == AProfile::Rational ? "rational" : "constant") << "\n";
    os << "l_weight = " << (s.l_weight == LWeight::One ? "one" : "tilt") << "\n";
    os << "l_tilt = " << format17(s.l_tilt) << "\n";
    os << "f_profile = "
       << (s.f_profile == FProfile::SinP2 ? "sin2"
                                          : s.f_profile == FProfile::CubicP4 ? "cubic" : "linear")
       << "\n";
    os << "eta = " << format17(s.eta) << "\n";
    os << "c_f = " << format17(s.c_f) << "\n";
    os << "kappa = " << format17(s.kappa) << "\n";
    os << "alpha_1 = " << format17(s.alpha1) << "\n";
    os << "alpha_2 = " << format17(s.alpha2) << "\n";
    os << "p = " << format17(s.p) << "\n";
    os << "coupling = "
       << (s.coupling == CouplingType::Additive
               ? "additive"
               : s.coupling == CouplingType::Multiplicative ? "multiplicative" : "general")
       << "\n";
    os << "phi_mode = " << s.phi_mode << "\n";
    os << "phi_amplitude = " << format17(s.phi_amplitude) << "\n";
    os << "d_1 = " << format17(s.d1) << "\n";
    os << "d_2 = " << format17(s.d2) << "\n";
    os << "q = " << format17(s.q) << "\n";
    os << "psi_1 = " << time_profile_str(s.psi1) << "\n";
    os << "psi_2 = " << time_profile_str(s.psi2) << "\n";
    switch (s.h_profile.kind) {
    case HProfile::Zero: os << "h_profile = zero\n"; break;
    case HProfile::ConstantField:
        os << "h_profile = constant:" << format17(s.h_profile.amplitude) << ":"
           << s.h_profile.mode << "\n";
        break;
    case HProfile::Pulse:
        os << "h_profile = pulse:" << format17(s.h_profile.amplitude) << ":" << s.h_profile.mode
           << ":" << format17(s.h_profile.rate) << "\n";
        break;
    }
    os << "epsilon = " << format17(s.epsilon) << "\n";
    os << "eta_damp = " << format17(s.eta_damp) << "\n";
    os << "c_const = " << format17(s.c_const) << "\n";
    return os.str();
}

void RunManifest::add(const std::string& key, const std::string& value) {
    params.emplace_back(key, value);
}
void RunManifest::add(const std::string& key, double value) { params.emplace_back(key, format17(value)); }
void RunManifest::add(const std::string& key, std::uint64_t value) {
    params.emplace_back(key, std::to_string(value));
}

std::string RunManifest::canonical() const {
    std::vector<std::string> lines;
    lines.push_back("subcommand=" + subcommand);
    for (const auto& [k, v] : params) lines.push_back(k + "=" + v);
    for (std::uint64_t s : seeds) lines.push_back("seed=" + std::to_string(s));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

std::uint64_t RunManifest::hash() const { return fnv1a(canonical()); }

std::string RunManifest::hash_hex() const {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)hash());
    return buf;
}

std::string RunManifest::manifest_line() const { return "# manifest: " + hash_hex(); }

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["hash"] = hash_hex();
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
    j["seeds"] = seeds;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

void RunManifest::write(const std::string& filename) const {
    std::ofstream out(filename, std::ios::binary);
    if (!out) throw std::runtime_error("manifest: cannot write " + filename);
    out << to_json();
}

} // namespace nrd
