#include "itojump/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

namespace itojump {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError(std::string("missing '") + key + "' in " + where);
    }
    return j.at(key);
}

double number(const json& j, const char* key, const char* where) {
    const json& v = require(j, key, where);
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' in " + where + " must be a number");
    return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const char* where) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

std::vector<Atom> atoms_from_json(const json& j, const char* where) {
    if (!j.is_array()) throw ConfigError(std::string("atoms in ") + where + " must be an array");
    std::vector<Atom> atoms;
    for (const auto& a : j) {
        atoms.push_back({number(a, "x", where), number(a, "mass", where)});
    }
    return atoms;
}

Amplitude amplitude_from_json(const json& j, const char* where) {
    const std::string kind = require(j, "kind", where).get<std::string>();
    if (kind != "linear") throw ConfigError("amplitude kind '" + kind + "' is not supported");
    return Amplitude::linear(number_or(j, "scale", 1.0, where));
}

}  // namespace

LevyModel model_from_json(const json& j) {
    reject_unknown(j, {"small", "tail", "p", "q", "epsilon"}, "model");
    const json& small = require(j, "small", "model");
    const std::string kind = require(small, "kind", "model.small").get<std::string>();
    SmallJumps small_jumps;
    if (kind == "atoms") {
        small_jumps = FiniteSmallJumps{atoms_from_json(require(small, "atoms", "model.small"), "model.small")};
    } else if (kind == "power_law") {
        small_jumps = PowerLawSmallJumps{number(small, "c", "model.small"), number(small, "a", "model.small")};
    } else {
        throw ConfigError("model.small.kind must be 'atoms' or 'power_law'");
    }
    TailJumps tail;
    if (j.contains("tail")) tail.atoms = atoms_from_json(require(j["tail"], "atoms", "model.tail"), "model.tail");
    const Amplitude p = j.contains("p") ? amplitude_from_json(j["p"], "model.p") : Amplitude::linear();
    const Amplitude q = j.contains("q") ? amplitude_from_json(j["q"], "model.q") : Amplitude::linear();
    try {
        return LevyModel(std::move(small_jumps), std::move(tail), p, q);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
}

StudyConfig config_from_json(const json& j) {
    try {
        reject_unknown(j, {"model", "coefficients", "y0", "T", "scheme", "levels", "finest_level",
                           "paths", "seed", "oracle", "truncation", "term_form", "threads"},
                       "config");
        const json& model_json = require(j, "model", "config");
        StudyConfig cfg(model_from_json(model_json));
        if (model_json.contains("epsilon")) cfg.epsilon = number(model_json, "epsilon", "model");

        const json& coef = require(j, "coefficients", "config");
        reject_unknown(coef, {"b", "sigma", "F", "G"}, "coefficients");
        cfg.b = number_or(coef, "b", 0.0, "coefficients");
        cfg.sigma = number_or(coef, "sigma", 0.0, "coefficients");
        cfg.F = number_or(coef, "F", 0.0, "coefficients");
        cfg.G = number_or(coef, "G", 0.0, "coefficients");

        cfg.y0 = number_or(j, "y0", 1.0, "config");
        cfg.horizon = number_or(j, "T", 1.0, "config");
        if (j.contains("scheme")) cfg.scheme = parse_scheme(j["scheme"].get<std::string>());
        if (j.contains("levels")) cfg.levels = j["levels"].get<std::vector<int>>();
        if (j.contains("finest_level")) cfg.finest_level = j["finest_level"].get<int>();
        if (j.contains("paths")) cfg.paths = j["paths"].get<std::size_t>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
        if (j.contains("term_form")) {
            const auto form = j["term_form"].get<std::string>();
            if (form == "exact") cfg.term_form = TermForm::exact;
            else if (form == "as_typeset") cfg.term_form = TermForm::as_typeset;
            else throw ConfigError("term_form must be 'exact' or 'as_typeset'");
        }
        if (j.contains("oracle")) {
            const json& o = j["oracle"];
            const auto kind = require(o, "kind", "oracle").get<std::string>();
            if (kind == "exact") {
                cfg.oracle.kind = OracleConfig::Kind::exact_linear;
            } else if (kind == "fine_grid") {
                cfg.oracle.kind = OracleConfig::Kind::fine_grid;
                cfg.oracle.level = require(o, "level", "oracle").get<int>();
            } else {
                throw ConfigError("oracle.kind must be 'exact' or 'fine_grid'");
            }
        }
        if (j.contains("truncation")) {
            const json& t = j["truncation"];
            reject_unknown(t, {"epsilons", "level", "reference_epsilon"}, "truncation");
            cfg.truncation.epsilons = require(t, "epsilons", "truncation").get<std::vector<double>>();
            if (t.contains("level")) cfg.truncation.level = t["level"].get<int>();
            if (t.contains("reference_epsilon")) {
                cfg.truncation.reference_epsilon = number(t, "reference_epsilon", "truncation");
            }
        }
        // Worker count does not change results, so it stays out of the hash.
        json hashed = j;
        hashed.erase("threads");
        cfg.config_hash = config_hash(hashed);
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
}

ActiveModel StudyConfig::active_model() const {
    if (epsilon) return ActiveModel(truncate(model, *epsilon));
    return ActiveModel(model);
}

LinearCoefficients StudyConfig::coefficients(const ActiveModel& active) const {
    return LinearCoefficients::from_model(b, sigma, F, G, active);
}

void StudyConfig::validate() const {
    if (levels.empty()) throw ConfigError("levels must list at least one dyadic level");
    if (!std::is_sorted(levels.begin(), levels.end()) ||
        std::adjacent_find(levels.begin(), levels.end()) != levels.end() || levels.front() < 0) {
        throw ConfigError("levels must be distinct, non-negative and ascending");
    }
    if (finest_level < levels.back() + 2) {
        throw ConfigError("finest_level must be at least the finest ladder level + 2");
    }
    if (finest_level > 24) throw ConfigError("finest_level above 24 is not supported");
    if (paths < 2) throw ConfigError("paths must be at least 2 for standard errors");
    if (!(horizon > 0.0)) throw ConfigError("T must be positive");
    if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0)) throw ConfigError("model.epsilon must lie in (0,1)");
    if (!model.finite_small_activity() && !epsilon) {
        throw ConfigError(
            "infinite small-jump activity: no pathwise oracle or scheme exists; set model.epsilon");
    }
    if (oracle.kind == OracleConfig::Kind::fine_grid &&
        (oracle.level < levels.back() + 4 || oracle.level > finest_level)) {
        throw ConfigError("oracle.level must be >= finest ladder level + 4 and <= finest_level");
    }
}

void StudyConfig::validate_truncation() const {
    if (model.finite_small_activity()) {
        throw ConfigError("truncation study not applicable: the model has finite small-jump activity");
    }
    const auto& eps = truncation.epsilons;
    if (eps.empty()) throw ConfigError("truncation.epsilons must not be empty");
    for (double e : eps) {
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("truncation epsilons must lie in (0,1)");
    }
    const double reference = truncation.reference_epsilon.value_or(*std::min_element(eps.begin(), eps.end()) / 4.0);
    if (!(reference > 0.0 && reference <= *std::min_element(eps.begin(), eps.end()))) {
        throw ConfigError("reference epsilon must lie in (0, min epsilon]");
    }
    if (truncation.level < 0 || truncation.level > finest_level) {
        throw ConfigError("truncation.level must lie in [0, finest_level]");
    }
    if (paths < 2) throw ConfigError("paths must be at least 2 for standard errors");
}

json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse " + file.string() + ": " + e.what());
    }
}

std::string config_hash(const json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace itojump
