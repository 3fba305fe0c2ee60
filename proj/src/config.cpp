#include "driftsolve/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace drift {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    }
}

long to_long(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const long n = std::stol(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError("bad boolean value for '" + key + "': " + v);
}

template <class T, class Fn>
std::vector<T> to_list(const std::string& key, const std::string& v, Fn parse)
{
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(parse(key, item));
    }
    if (out.empty())
        throw ConfigError("empty list for '" + key + "'");
    return out;
}

} // namespace

DriftModel RunConfig::model() const
{
    DriftModel m;
    if (model_kind == "pure-drift")
        m = PureDrift{};
    else if (model_kind == "selection")
        m = Selection{eta, beta};
    else if (model_kind == "one-way")
        m = OneWayMutation{gamma};
    else if (model_kind == "two-way")
        m = TwoWayMutation{gamma, mu};
    else if (model_kind.empty())
        throw ConfigError("missing 'model'");
    else
        throw ConfigError("unknown model kind: " + model_kind);
    try {
        validate(m);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return m;
}

InitialCondition RunConfig::initial() const
{
    if (init_kind == "gaussian") {
        if (!(x0 > 0.0 && x0 < 1.0) || !(sigma > 0.0))
            throw ConfigError("gaussian init needs x0 in (0,1) and sigma > 0");
        return GaussianPdf{x0, sigma};
    }
    if (init_kind == "delta0")
        return DeltaAtZero{};
    if (init_kind == "uniform")
        return UniformPdf{};
    throw ConfigError("unknown init kind: " + init_kind);
}

SchemeVariant RunConfig::variant() const
{
    if (scheme == "rfdm")
        return SchemeVariant::Rfdm;
    if (scheme == "sfdm")
        return SchemeVariant::Sfdm;
    throw ConfigError("unknown scheme: " + scheme);
}

void apply_override(RunConfig& cfg, const std::string& key_value)
{
    const auto eq = key_value.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override is not of the form key=value: " + key_value);
    const std::string key = trim(key_value.substr(0, eq));
    const std::string val = trim(key_value.substr(eq + 1));
    if (key.empty() || val.empty())
        throw ConfigError("override is not of the form key=value: " + key_value);

    if (key == "model") cfg.model_kind = val;
    else if (key == "eta") cfg.eta = to_double(key, val);
    else if (key == "beta") cfg.beta = to_double(key, val);
    else if (key == "gamma") cfg.gamma = to_double(key, val);
    else if (key == "mu") cfg.mu = to_double(key, val);
    else if (key == "init") cfg.init_kind = val;
    else if (key == "x0") cfg.x0 = to_double(key, val);
    else if (key == "sigma") cfg.sigma = to_double(key, val);
    else if (key == "scheme") cfg.scheme = val;
    else if (key == "K") cfg.k = static_cast<int>(to_long(key, val));
    else if (key == "tau") cfg.tau = to_double(key, val);
    else if (key == "T") cfg.horizon = to_double(key, val);
    else if (key == "stride") cfg.stride = to_long(key, val);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(key, val));
    else if (key == "out") cfg.out_dir = val;
    else if (key == "grids")
        cfg.grids = to_list<int>(key, val, [](const std::string& k, const std::string& v) {
            return static_cast<int>(to_long(k, v));
        });
    else if (key == "taus")
        cfg.taus = to_list<double>(key, val, to_double);
    else if (key == "ref_K") cfg.ref_k = static_cast<int>(to_long(key, val));
    else if (key == "ref_tau") cfg.ref_tau = to_double(key, val);
    else if (key == "window") {
        const auto w = to_list<double>(key, val, to_double);
        if (w.size() != 2 || !(w[0] < w[1]))
            throw ConfigError("window must be 'lo,hi' with lo < hi");
        cfg.window_lo = w[0];
        cfg.window_hi = w[1];
    }
    else if (key == "snapshots")
        cfg.snapshots = to_list<double>(key, val, to_double);
    else if (key == "a_inf") cfg.a_inf = to_double(key, val);
    else if (key == "b_inf") cfg.b_inf = to_double(key, val);
    else if (key == "init_on_first_level") cfg.init_on_first_level = to_bool(key, val);
    else if (key == "pop_size") cfg.pop_size = static_cast<int>(to_long(key, val));
    else if (key == "replicates") cfg.replicates = to_long(key, val);
    else if (key == "generation_cap") cfg.generation_cap = to_long(key, val);
    else if (key == "init_freq") cfg.init_freq = to_double(key, val);
    else
        throw ConfigError("unknown configuration key: " + key);
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        try {
            apply_override(cfg, line);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

} // namespace drift
