#include "calband/config.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "calband/error.hpp"
#include "calband/metrics.hpp"

namespace calband {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
    throw Error(ErrorCode::ConfigInvalid, field + ": " + why);
}

// Typed read of an optional key; a wrong type names the field.
template <class T>
void read(const json& obj, const char* key, const std::string& path, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        invalid(path + key, "wrong type");
    }
}

template <class T>
void require(const json& obj, const char* key, const std::string& path, T& out) {
    if (!obj.contains(key)) invalid(path + key, "missing");
    read(obj, key, path, out);
}

const json& section(const json& root, const char* key) {
    static const json empty = json::object();
    auto it = root.find(key);
    if (it == root.end()) return empty;
    if (!it->is_object()) invalid(key, "must be an object");
    return *it;
}

template <class E>
E enum_from(const std::string& field, const std::string& text, std::initializer_list<std::pair<const char*, E>> names) {
    for (const auto& [name, value] : names) {
        if (text == name) return value;
    }
    std::string options;
    for (const auto& [name, value] : names) options += std::string(options.empty() ? "" : ", ") + name;
    invalid(field, "unknown value '" + text + "' (expected one of " + options + ")");
}

template <class E>
const char* enum_name(E value, std::initializer_list<std::pair<const char*, E>> names) {
    for (const auto& [name, v] : names) {
        if (v == value) return name;
    }
    return "?";
}

const std::initializer_list<std::pair<const char*, AccessMode>> kAccess = {
    {"orthogonal", AccessMode::Orthogonal}, {"non-orthogonal", AccessMode::NonOrthogonal}};
const std::initializer_list<std::pair<const char*, TauModel::Kind>> kTau = {
    {"equal-share", TauModel::Kind::EqualShare}, {"fixed-fractions", TauModel::Kind::FixedFractions}};
const std::initializer_list<std::pair<const char*, LatticeMode>> kLattice = {
    {"auto", LatticeMode::Auto}, {"explicit", LatticeMode::Explicit}, {"implicit", LatticeMode::Implicit}};
const std::initializer_list<std::pair<const char*, PeriodFailure>> kFailure = {
    {"reset", PeriodFailure::Reset}, {"retry", PeriodFailure::Retry}, {"advance", PeriodFailure::Advance}};
const std::initializer_list<std::pair<const char*, BlackwellObjective>> kObjective = {
    {"min-slack", BlackwellObjective::MinSlack}, {"fewest-new-points", BlackwellObjective::FewestNewPoints}};
const std::initializer_list<std::pair<const char*, RunMode>> kMode = {{"game", RunMode::Game},
                                                                      {"forecaster", RunMode::Forecaster}};

void parse_radio(const json& j, RadioConfig& r) {
    require(j, "players", "radio.", r.players);
    require(j, "channels", "radio.", r.channels);
    require(j, "theta", "radio.", r.theta);
    read(j, "tx_power_w", "radio.", r.tx_power_w);
    read(j, "noise_w", "radio.", r.noise_w);
    if (!j.contains("mean_gain")) invalid("radio.mean_gain", "missing");
    if (j["mean_gain"].is_number()) {
        r.set_symmetric_gain(j["mean_gain"].get<double>());
    } else {
        read(j, "mean_gain", "radio.", r.mean_gain);
    }
    std::string access = "orthogonal";
    read(j, "access", "radio.", access);
    r.access = enum_from("radio.access", access, kAccess);
    if (j.contains("tau")) {
        const json& t = j["tau"];
        if (!t.is_object()) invalid("radio.tau", "must be an object");
        std::string model = "equal-share";
        read(t, "model", "radio.tau.", model);
        r.tau.kind = enum_from("radio.tau.model", model, kTau);
        read(t, "fractions", "radio.tau.", r.tau.fractions);
    }
}

json radio_json(const RadioConfig& r) {
    json j;
    j["players"] = r.players;
    j["channels"] = r.channels;
    j["theta"] = r.theta;
    j["tx_power_w"] = r.tx_power_w;
    j["noise_w"] = r.noise_w;
    const bool uniform = !r.mean_gain.empty() && std::all_of(r.mean_gain.begin(), r.mean_gain.end(),
                                                             [&](double g) { return g == r.mean_gain[0]; });
    if (uniform) {
        j["mean_gain"] = r.mean_gain[0];
    } else {
        j["mean_gain"] = r.mean_gain;
    }
    j["access"] = enum_name(r.access, kAccess);
    j["tau"] = {{"model", enum_name(r.tau.kind, kTau)}, {"fractions", r.tau.fractions}};
    return j;
}

PlayerSpec parse_player(const json& j) {
    PlayerSpec p;
    if (j.is_string()) {
        p.kind = strategy_from_string(j.get<std::string>());
        return p;
    }
    if (!j.is_object()) invalid("strategies", "entries must be names or objects");
    std::string kind;
    require(j, "kind", "strategies.", kind);
    p.kind = strategy_from_string(kind);
    read(j, "gql_epsilon", "strategies.", p.gql.epsilon);
    read(j, "gql_alpha", "strategies.", p.gql.alpha);
    return p;
}

json player_json(const PlayerSpec& p) {
    if (p.kind != StrategyKind::GQL) return to_string(p.kind);
    return {{"kind", "GQL"}, {"gql_epsilon", p.gql.epsilon}, {"gql_alpha", p.gql.alpha}};
}

}  // namespace

std::vector<std::size_t> RunConfig::effective_checkpoints() const {
    if (checkpoints.empty()) return geometric_checkpoints(horizon());
    std::vector<std::size_t> out;
    for (std::size_t c : checkpoints)
        if (c <= horizon()) out.push_back(c);
    return out;
}

void RunConfig::validate() const {
    if (mode == RunMode::Game) {
        game.validate();
    } else {
        if (study.law.size() < 2) invalid("forecaster_study.law", "needs at least 2 outcomes");
        double total = 0.0;
        for (double p : study.law) {
            if (!(p >= 0.0)) invalid("forecaster_study.law", "probabilities must be >= 0");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) invalid("forecaster_study.law", "must sum to 1");
        if (study.horizon < 1) invalid("forecaster_study.horizon_trials", "must be >= 1");
    }
    for (std::size_t c : checkpoints)
        if (c < 1) invalid("checkpoints_trials", "entries must be >= 1");
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        invalid("(document)", e.what());
    }
    if (!root.is_object()) invalid("(document)", "top level must be an object");

    RunConfig cfg;
    read(root, "name", "", cfg.name);
    std::string mode = "game";
    read(root, "mode", "", mode);
    cfg.mode = enum_from("mode", mode, kMode);
    read(root, "seed", "", cfg.game.seed);
    read(root, "checkpoints_trials", "", cfg.checkpoints);

    const json& sched = section(root, "schedule");
    read(sched, "gamma", "schedule.", cfg.game.schedule.gamma);

    const json& fc = section(root, "forecaster");
    std::string lattice = "auto", failure = "reset", objective = "fewest-new-points";
    read(fc, "lattice", "forecaster.", lattice);
    read(fc, "on_failure", "forecaster.", failure);
    read(fc, "objective", "forecaster.", objective);
    cfg.game.forecaster.mode = enum_from("forecaster.lattice", lattice, kLattice);
    cfg.game.forecaster.on_failure = enum_from("forecaster.on_failure", failure, kFailure);
    cfg.game.forecaster.objective = enum_from("forecaster.objective", objective, kObjective);
    read(fc, "explicit_cap_points", "forecaster.", cfg.game.forecaster.explicit_cap);
    read(fc, "grid_cap_points", "forecaster.", cfg.game.forecaster.grid_cap);
    read(fc, "carry_weight", "forecaster.", cfg.game.forecaster.carry_weight);

    if (cfg.mode == RunMode::Game) {
        if (!root.contains("radio")) invalid("radio", "missing");
        parse_radio(section(root, "radio"), cfg.game.radio);
        read(root, "horizon_trials", "", cfg.game.horizon);
        read(root, "oracle_samples", "", cfg.game.oracle_samples);
        read(root, "profile_cap", "", cfg.game.profile_cap);
        if (!root.contains("strategies")) invalid("strategies", "missing");
        const json& s = root["strategies"];
        if (s.is_string()) {
            cfg.game.strategies.assign(cfg.game.radio.players, parse_player(s));
        } else if (s.is_array()) {
            for (const json& p : s) cfg.game.strategies.push_back(parse_player(p));
        } else {
            invalid("strategies", "must be a name or a list");
        }
    } else {
        const json& st = section(root, "forecaster_study");
        require(st, "law", "forecaster_study.", cfg.study.law);
        read(st, "horizon_trials", "forecaster_study.", cfg.study.horizon);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json root;
    root["name"] = cfg.name;
    root["mode"] = enum_name(cfg.mode, kMode);
    root["seed"] = cfg.game.seed;
    root["checkpoints_trials"] = cfg.checkpoints;
    root["schedule"] = {{"gamma", cfg.game.schedule.gamma}};
    const ForecasterOptions& f = cfg.game.forecaster;
    root["forecaster"] = {{"lattice", enum_name(f.mode, kLattice)},
                          {"on_failure", enum_name(f.on_failure, kFailure)},
                          {"objective", enum_name(f.objective, kObjective)},
                          {"explicit_cap_points", f.explicit_cap},
                          {"grid_cap_points", f.grid_cap},
                          {"carry_weight", f.carry_weight}};
    if (cfg.mode == RunMode::Game) {
        root["radio"] = radio_json(cfg.game.radio);
        root["horizon_trials"] = cfg.game.horizon;
        root["oracle_samples"] = cfg.game.oracle_samples;
        root["profile_cap"] = cfg.game.profile_cap;
        json s = json::array();
        for (const auto& p : cfg.game.strategies) s.push_back(player_json(p));
        root["strategies"] = s;
    } else {
        root["forecaster_study"] = {{"law", cfg.study.law}, {"horizon_trials", cfg.study.horizon}};
    }
    return root.dump(2) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "SHA-256 computation failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string config_hash(const RunConfig& cfg) { return sha256_hex(serialize_config(cfg)); }

std::vector<std::string> preset_names() { return {"k2m2", "k4m4-ortho", "k4m4-nonortho", "forecaster-only"}; }

RunConfig preset(const std::string& name) {
    RunConfig cfg;
    cfg.name = name;
    GameConfig& g = cfg.game;
    if (name == "k2m2") {
        // Two pairs, one good and one poor channel: a coordination game in
        // which sharing the good channel competes with moving to the poor one.
        g.radio.players = 2;
        g.radio.channels = 2;
        g.radio.theta = {0.9, 0.35};
        g.radio.set_symmetric_gain(10.0);
        g.strategies.assign(2, PlayerSpec{StrategyKind::CB, {}});
        g.horizon = 1 << 14;
    } else if (name == "k4m4-ortho" || name == "k4m4-nonortho") {
        g.radio.players = 4;
        g.radio.channels = 4;
        g.radio.theta = {0.9, 0.8, 0.7, 0.6};
        g.radio.set_symmetric_gain(10.0);
        g.radio.access = name == "k4m4-ortho" ? AccessMode::Orthogonal : AccessMode::NonOrthogonal;
        g.strategies.assign(4, PlayerSpec{StrategyKind::CB, {}});
        g.horizon = 1 << 14;
    } else if (name == "forecaster-only") {
        cfg.mode = RunMode::Forecaster;
        cfg.study.law = {0.1, 0.2, 0.3, 0.4};
        cfg.study.horizon = 1 << 16;
    } else {
        invalid("preset", "unknown preset '" + name + "'");
    }
    return cfg;
}

}  // namespace calband
