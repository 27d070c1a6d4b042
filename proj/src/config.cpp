#include "fene/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fene {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ConfigError("config: '" + where + "' must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("config: unknown key '" + key + "' in " + where);
}

template <typename T>
void get_if(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    check_keys(doc, "top level",
               {"model", "discretization", "diagnostics", "initial_data", "outputs", "decay_study", "linearized"});

    ExperimentConfig c;
    if (doc.contains("model")) {
        const auto& m = doc["model"];
        check_keys(m, "model", {"k", "nu"});
        get_if(m, "k", c.k);
        get_if(m, "nu", c.nu);
    }
    if (doc.contains("discretization")) {
        const auto& d = doc["discretization"];
        check_keys(d, "discretization", {"L_box", "M", "P", "dt", "T_final", "scheme"});
        get_if(d, "L_box", c.l_box);
        get_if(d, "M", c.m);
        get_if(d, "P", c.p);
        get_if(d, "dt", c.dt);
        get_if(d, "T_final", c.t_final);
        if (d.contains("scheme")) {
            const std::string s = d["scheme"].get<std::string>();
            if (s == "imex_euler")
                c.scheme = Scheme::ImexEuler;
            else if (s == "cnab2")
                c.scheme = Scheme::Cnab2;
            else
                throw ConfigError("config: scheme must be 'imex_euler' or 'cnab2', got '" + s + "'");
        }
    }
    if (doc.contains("diagnostics")) {
        const auto& d = doc["diagnostics"];
        check_keys(d, "diagnostics", {"s", "a", "eta", "s_exp", "record_every"});
        get_if(d, "s", c.s);
        get_if(d, "a", c.a);
        get_if(d, "eta", c.eta);
        get_if(d, "s_exp", c.s_exp);
        get_if(d, "record_every", c.record_every);
    }
    if (doc.contains("initial_data")) {
        const auto& d = doc["initial_data"];
        check_keys(d, "initial_data", {"epsilon", "xi_cutoff", "seed"});
        get_if(d, "epsilon", c.epsilon);
        get_if(d, "xi_cutoff", c.xi_cutoff);
        get_if(d, "seed", c.seed);
    }
    if (doc.contains("outputs")) {
        const auto& d = doc["outputs"];
        check_keys(d, "outputs", {"directory", "formats"});
        get_if(d, "directory", c.out_dir);
        if (d.contains("formats")) {
            c.emit_csv = c.emit_json = false;
            for (const auto& f : d["formats"]) {
                const std::string s = f.get<std::string>();
                if (s == "csv")
                    c.emit_csv = true;
                else if (s == "json")
                    c.emit_json = true;
                else
                    throw ConfigError("config: unknown output format '" + s + "'");
            }
        }
    }
    if (doc.contains("decay_study")) {
        const auto& d = doc["decay_study"];
        check_keys(d, "decay_study", {"num_seeds"});
        get_if(d, "num_seeds", c.num_seeds);
    }
    get_if(doc, "linearized", c.linearized);

    // hypothesis validation; messages name the violated requirement
    if (!(c.k > 1.0))
        throw ConfigError("config: k must exceed 1 (the drag-closure integrals carry the weight "
                          "(1-|R|^2)^{k-2} and the strong Hardy control fails otherwise)");
    if (c.nu < 0.0) throw ConfigError("config: nu must be nonnegative");
    if (!is_power_of_two(c.m)) throw ConfigError("config: M must be a power of two");
    if (c.p < 2)
        throw ConfigError("config: P must be at least 2 so the quadratic moments R_j R_l are representable");
    if (c.s < 3)
        throw ConfigError("config: s must be at least 3 (the Sobolev embedding needs s > N/2 + 1 = 2)");
    if (!(c.l_box > 0.0)) throw ConfigError("config: L_box must be positive");
    if (c.dt < 0.0) throw ConfigError("config: dt must be positive (or omitted for the CFL default)");
    if (c.t_final < 0.0) throw ConfigError("config: T_final must be nonnegative");
    if (c.record_every < 1) throw ConfigError("config: record_every must be at least 1");
    if (c.epsilon < 0.0) throw ConfigError("config: epsilon must be nonnegative");
    if (!(c.xi_cutoff > 0.0)) throw ConfigError("config: xi_cutoff must be positive");
    if (c.a < 0.0) throw ConfigError("config: a must be positive (or omitted for the auto value)");
    if (!(c.eta > 0.0)) throw ConfigError("config: eta must be positive");
    if (!(c.s_exp > 0.0)) throw ConfigError("config: s_exp must be positive");
    if (c.num_seeds < 1) throw ConfigError("config: decay_study.num_seeds must be at least 1");
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string ExperimentConfig::echo_json() const {
    json doc;
    doc["model"] = {{"k", k}, {"nu", nu}};
    doc["discretization"] = {{"L_box", l_box}, {"M", m},       {"P", p},
                             {"dt", dt},       {"T_final", t_final},
                             {"scheme", scheme == Scheme::Cnab2 ? "cnab2" : "imex_euler"}};
    doc["diagnostics"] = {{"s", s}, {"a", a}, {"eta", eta}, {"s_exp", s_exp}, {"record_every", record_every}};
    doc["initial_data"] = {{"epsilon", epsilon}, {"xi_cutoff", xi_cutoff}, {"seed", seed}};
    std::vector<std::string> fmts;
    if (emit_csv) fmts.push_back("csv");
    if (emit_json) fmts.push_back("json");
    doc["outputs"] = {{"directory", out_dir}, {"formats", fmts}};
    doc["decay_study"] = {{"num_seeds", num_seeds}};
    doc["linearized"] = linearized;
    return doc.dump(2);
}

} // namespace fene
