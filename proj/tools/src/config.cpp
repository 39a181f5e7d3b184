#include "bbench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace bbench {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

const json& section(const json& root, const char* name) {
    const json& s = root.at(name);
    if (!s.is_object()) throw ConfigError(std::string("'") + name + "' must be an object");
    return s;
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

std::size_t read_count(const json& obj, const char* key, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

mkdv::BreatherParams read_params(const json& obj) {
    if (!obj.is_object()) throw ConfigError("breather parameters must be an object");
    reject_unknown(obj, {"alpha", "beta", "x1", "x2"}, "params");
    mkdv::BreatherParams p;
    read(obj, "alpha", p.alpha);
    read(obj, "beta", p.beta);
    read(obj, "x1", p.x1);
    read(obj, "x2", p.x2);
    if (!(p.alpha > 0.0) || !(p.beta > 0.0)) throw ConfigError("alpha and beta must be positive");
    return p;
}

}  // namespace

Tolerances::Tolerances() {
    entries_ = {
        {"mass", {1e-10}},          {"energy", {1e-9}},
        {"elliptic", {1e-6}},       {"second_order", {1e-6}},
        {"kernel_x1", {1e-6}},      {"kernel_x2", {1e-6}},
        {"scale_alpha", {1e-5}},    {"scale_beta", {1e-5}},
        {"b0", {1e-5}},             {"qform_alpha", {1e-4}},
        {"qform_beta", {1e-4}},     {"soliton_limit", {1e-6}},
        {"edge_fraction", {0.98}},  {"propagation", {1e-6}},
        {"drift", {1e-8}},          {"sup_ratio", {50.0}},
        {"growth", {5.0}},          {"soliton_mass", {1e-10}},
        {"mass_derivative", {1e-6}}, {"soliton_ode", {1e-8}},
        {"slope_band", {0.2}},
    };
}

const Threshold& Tolerances::entry(const std::string& name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) throw std::out_of_range("no tolerance named '" + name + "'");
    return it->second;
}

double Tolerances::operator[](const std::string& name) const { return entry(name).value; }

void Tolerances::override_value(const std::string& name, double value) {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw ConfigError("unknown tolerance '" + name + "'");
    if (!(value > 0.0)) throw ConfigError("tolerance '" + name + "' must be positive");
    it->second = {value, "config"};
}

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config must be a JSON object");

    RunConfig cfg;
    try {
        reject_unknown(root, {"grid", "params", "evolution", "stability", "spectrum", "verify",
                              "soliton", "output", "tolerances"},
                       "config");
        if (root.contains("grid")) {
            const json& g = section(root, "grid");
            reject_unknown(g, {"L", "N"}, "grid");
            read(g, "L", cfg.half_width);
            cfg.n_points = read_count(g, "N", cfg.n_points);
        }
        try {
            (void)cfg.grid();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (root.contains("params")) cfg.params = read_params(section(root, "params"));

        cfg.evolution.t_end = 3.141592653589793;
        if (root.contains("evolution")) {
            const json& e = section(root, "evolution");
            reject_unknown(e, {"dt", "t_end", "output_stride", "dealias", "strict_tails", "scheme"},
                           "evolution");
            read(e, "dt", cfg.evolution.dt);
            read(e, "t_end", cfg.evolution.t_end);
            cfg.evolution.output_stride = read_count(e, "output_stride", cfg.evolution.output_stride);
            read(e, "dealias", cfg.evolution.dealias);
            read(e, "strict_tails", cfg.evolution.strict_tails);
            if (e.contains("scheme")) {
                try {
                    cfg.evolution.scheme = mkdv::scheme_from_string(e.at("scheme").get<std::string>());
                } catch (const std::invalid_argument& err) {
                    throw ConfigError(err.what());
                }
            }
        }
        cfg.evolution.alpha = cfg.params.alpha;
        cfg.evolution.beta = cfg.params.beta;
        try {
            cfg.evolution.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }

        if (root.contains("stability")) {
            const json& s = section(root, "stability");
            reject_unknown(s, {"eta", "seed", "k_max", "t_end"}, "stability");
            read(s, "eta", cfg.stability.eta);
            if (s.contains("seed")) {
                const json& v = s.at("seed");
                if (!v.is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
                cfg.stability.seed = v.get<std::uint64_t>();
            }
            read(s, "k_max", cfg.stability.k_max);
            read(s, "t_end", cfg.stability.t_end);
        }
        if (!(cfg.stability.eta > 0.0) || cfg.stability.eta > 0.05) {
            std::ostringstream msg;
            msg << "stability.eta = " << cfg.stability.eta
                << " outside (0, 0.05]: the stability run is defined for small perturbations only";
            throw ConfigError(msg.str());
        }
        if (!(cfg.stability.t_end > 0.0)) throw ConfigError("stability.t_end must be positive");
        if (!(cfg.stability.k_max > 0.0) || cfg.stability.k_max > 2.0 * cfg.grid().nyquist() / 3.0) {
            throw ConfigError("stability.k_max must lie in (0, 2/3 of the grid Nyquist wavenumber]");
        }

        if (root.contains("spectrum")) {
            const json& s = section(root, "spectrum");
            reject_unknown(s, {"k"}, "spectrum");
            cfg.spectrum_k = read_count(s, "k", cfg.spectrum_k);
            if (cfg.spectrum_k < 4 || cfg.spectrum_k > cfg.n_points) {
                throw ConfigError("spectrum.k must lie in [4, N]");
            }
        }
        if (root.contains("verify")) {
            const json& v = section(root, "verify");
            reject_unknown(v, {"params", "times"}, "verify");
            if (v.contains("params")) {
                for (const json& p : v.at("params")) cfg.suite_params.push_back(read_params(p));
            }
            if (v.contains("times")) cfg.suite_times = v.at("times").get<std::vector<double>>();
        }
        if (root.contains("soliton")) {
            const json& s = section(root, "soliton");
            reject_unknown(s, {"speeds", "t_end"}, "soliton");
            if (s.contains("speeds")) cfg.soliton_speeds = s.at("speeds").get<std::vector<double>>();
            read(s, "t_end", cfg.soliton_t_end);
            for (double c : cfg.soliton_speeds) {
                if (!(c > 0.0)) throw ConfigError("soliton speeds must be positive");
            }
            if (!(cfg.soliton_t_end > 0.0)) throw ConfigError("soliton.t_end must be positive");
        }
        if (root.contains("output")) {
            const json& o = section(root, "output");
            reject_unknown(o, {"snapshot_every", "space_every"}, "output");
            cfg.output.snapshot_every = read_count(o, "snapshot_every", cfg.output.snapshot_every);
            cfg.output.space_every = read_count(o, "space_every", cfg.output.space_every);
            if (cfg.output.snapshot_every == 0 || cfg.output.space_every == 0) {
                throw ConfigError("output strides must be >= 1");
            }
        }
        if (root.contains("tolerances")) {
            const json& t = section(root, "tolerances");
            for (auto it = t.begin(); it != t.end(); ++it) {
                cfg.tolerances.override_value(it.key(), it.value().get<double>());
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    json j;
    j["grid"] = {{"L", cfg.half_width}, {"N", cfg.n_points}};
    j["params"] = {{"alpha", cfg.params.alpha},
                   {"beta", cfg.params.beta},
                   {"x1", cfg.params.x1},
                   {"x2", cfg.params.x2}};
    j["evolution"] = {{"dt", cfg.evolution.dt},
                      {"t_end", cfg.evolution.t_end},
                      {"output_stride", cfg.evolution.output_stride},
                      {"dealias", cfg.evolution.dealias},
                      {"strict_tails", cfg.evolution.strict_tails},
                      {"scheme", std::string(mkdv::to_string(cfg.evolution.scheme))}};
    j["stability"] = {{"eta", cfg.stability.eta},
                      {"seed", cfg.stability.seed},
                      {"k_max", cfg.stability.k_max},
                      {"t_end", cfg.stability.t_end}};
    j["spectrum"] = {{"k", cfg.spectrum_k}};
    j["soliton"] = {{"speeds", cfg.soliton_speeds}, {"t_end", cfg.soliton_t_end}};
    j["output"] = {{"snapshot_every", cfg.output.snapshot_every},
                   {"space_every", cfg.output.space_every}};
    return j;
}

}  // namespace bbench
