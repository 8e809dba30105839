#include "mvp/config.hpp"

#include <fstream>
#include <sstream>

#include "mvp/errors.hpp"
#include "mvp/json_util.hpp"

namespace mvp {

namespace {

template <typename T>
T field(const nlohmann::json& doc, const char* key) {
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SchemaError(std::string("field '") + key + "' is missing or has the wrong type");
    }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    reject_unknown_keys(doc, {"env", "agent", "K", "delta", "seeds", "output_dir", "audit_level"}, "config");
    ExperimentConfig cfg;

    if (!doc.contains("env")) throw SchemaError("field 'env' is missing");
    const auto& env = doc["env"];
    if (env.is_object() && env.contains("mdp_file")) {
        reject_unknown_keys(env, {"mdp_file"}, "env");
        const std::filesystem::path p = field<std::string>(env, "mdp_file");
        cfg.env = MdpFile{p.is_absolute() ? p : base_dir / p};
    } else {
        cfg.env = env_spec_from_json(env);
    }

    cfg.agent = agent_kind_from_string(field<std::string>(doc, "agent"));

    if (!doc.contains("K") || !doc["K"].is_number_integer() || doc["K"].get<std::int64_t>() < 1) {
        throw SchemaError("field 'K' must be a positive integer");
    }
    cfg.episodes = doc["K"].get<std::uint64_t>();

    if (doc.contains("delta")) {
        if (!doc["delta"].is_number()) throw SchemaError("field 'delta' must be a number");
        cfg.delta = doc["delta"].get<double>();
    }
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw SchemaError("field 'delta' must lie in (0, 1)");

    const auto& seeds = doc.contains("seeds") ? doc["seeds"] : nlohmann::json();
    if (!seeds.is_array() || seeds.empty()) throw SchemaError("field 'seeds' must be a nonempty array");
    for (const auto& s : seeds) {
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
            throw SchemaError("field 'seeds' must hold nonnegative integers");
        }
        cfg.seeds.push_back(s.get<std::uint64_t>());
    }

    cfg.output_dir = field<std::string>(doc, "output_dir");
    if (doc.contains("audit_level")) {
        cfg.audit = audit_level_from_string(field<std::string>(doc, "audit_level"));
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return config_from_json(read_json_file(path), path.parent_path());
}

TabularMDP load_mdp(const std::filesystem::path& path) {
    return mdp_from_json(read_json_file(path));
}

TabularMDP resolve_environment(const EnvSource& env) {
    if (const auto* spec = std::get_if<EnvSpec>(&env)) return generate(*spec);
    TabularMDP mdp = load_mdp(std::get<MdpFile>(env).path);
    require_bounded_total_reward(mdp);
    return mdp;
}

}  // namespace mvp
