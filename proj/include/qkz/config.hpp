#ifndef QKZ_CONFIG_HPP
#define QKZ_CONFIG_HPP

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qkz/errors.hpp"
#include "qkz/params.hpp"
#include "qkz/quadrature.hpp"

namespace qkz {

// flat key-value configuration file:  key = value, '#' comments
struct KeyValueConfig {
    std::map<std::string, std::string> kv;

    static KeyValueConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config file: " + path);
        KeyValueConfig c;
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw ConfigError("malformed config line: " + line);
                continue;
            }
            auto trim = [](std::string s) {
                size_t b = s.find_first_not_of(" \t\r");
                size_t e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            c.kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        return c;
    }

    bool has(const std::string& k) const { return kv.count(k) > 0; }
    std::string get(const std::string& k, const std::string& fallback) const {
        auto it = kv.find(k);
        return it == kv.end() ? fallback : it->second;
    }
    double get_num(const std::string& k, double fallback) const {
        auto it = kv.find(k);
        if (it == kv.end()) return fallback;
        try {
            size_t pos = 0;
            double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw ConfigError("bad number for " + k);
            return v;
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad number for key " + k + ": " + it->second);
        }
    }
    std::vector<double> get_list(const std::string& k) const {
        auto it = kv.find(k);
        if (it == kv.end()) throw ConfigError("missing config key: " + k);
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos])))
                    ++pos;
                if (pos != item.size()) throw ConfigError("bad list entry for " + k);
            } catch (const std::invalid_argument&) {
                throw ConfigError("bad list entry for key " + k + ": " + item);
            }
        }
        if (out.empty()) throw ConfigError("empty list for key: " + k);
        return out;
    }
};

struct RunConfig {
    ParameterSet params;
    QuadratureSpec spec;
    std::vector<std::string> suite;
    std::string output_dir = ".";
    unsigned long long seed = 12345;

    static RunConfig from_kv(const KeyValueConfig& c) {
        RunConfig r;
        r.params.n = static_cast<int>(c.get_num("n", 2));
        if (c.has("z"))
            r.params.z = c.get_list("z");
        else
            for (int k = 0; k < r.params.n; ++k) r.params.z.push_back(k);
        if (c.has("a_imag"))
            r.params.a_imag = c.get_list("a_imag");
        else
            for (int k = 0; k < r.params.n; ++k)
                r.params.a_imag.push_back(0.2 + 0.1 * k);
        r.params.p_imag = c.get_num("p_imag", 1.0);
        r.params.kappa = parse_complex(c.get("kappa", "2"));
        r.params.validate();
        r.spec.rel_tol = c.get_num("rel_tol", 1e-9);
        r.spec.eps_trunc = c.get_num("eps_trunc", 1e-12);
        r.spec.r_max = c.get_num("r_max", 1e4);
        r.spec.max_panels = static_cast<int>(c.get_num("max_panels", 20000));
        if (c.has("suite")) {
            std::stringstream ss(c.get("suite", ""));
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) r.suite.push_back(item);
        }
        r.output_dir = c.get("output", ".");
        r.seed = static_cast<unsigned long long>(c.get_num("seed", 12345));
        if (const char* env = std::getenv("QKZ_SEED")) r.seed = std::strtoull(env, nullptr, 10);
        return r;
    }
};

} // namespace qkz

#endif
