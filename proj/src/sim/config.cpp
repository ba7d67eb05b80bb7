#include "zkpot/sim/config.hpp"

#include <fstream>

#include "json.hpp"

namespace zkpot::sim {

LatencyModel LatencyModel::parse(std::string_view spec) {
    LatencyModel m;
    auto fail = [&] { throw ConfigError("bad latency spec: " + std::string(spec)); };
    if (spec.rfind("fixed:", 0) == 0) {
        m.kind = Kind::Fixed;
        try {
            m.fixed_ms = std::stod(std::string(spec.substr(6)));
        } catch (...) {
            fail();
        }
        if (m.fixed_ms < 0) fail();
    } else if (spec.rfind("uniform:", 0) == 0) {
        m.kind = Kind::Uniform;
        std::string rest(spec.substr(8));
        auto colon = rest.find(':');
        if (colon == std::string::npos) fail();
        try {
            m.lo_ms = std::stod(rest.substr(0, colon));
            m.hi_ms = std::stod(rest.substr(colon + 1));
        } catch (...) {
            fail();
        }
        if (m.lo_ms < 0 || m.hi_ms < m.lo_ms) fail();
    } else {
        fail();
    }
    return m;
}

std::string LatencyModel::to_string() const {
    if (kind == Kind::Fixed) return "fixed:" + std::to_string(fixed_ms);
    return "uniform:" + std::to_string(lo_ms) + ":" + std::to_string(hi_ms);
}

void SimConfig::validate() const {
    if (nodes < 2) throw ConfigError("need at least a publisher and one client");
    if (rounds == 0) throw ConfigError("rounds must be positive");
    if (byzantine_frac < 0.0 || byzantine_frac > 1.0 / 3.0 + 1e-12)
        throw ConfigError("byzantine_frac must lie in [0, 1/3]");
    if (byzantine_frac > 0.0 && nodes < 4)
        throw ConfigError("byzantine runs need at least 4 nodes");
    if (dataset != "mnist" && dataset != "synthetic")
        throw ConfigError("dataset must be mnist or synthetic");
    if (backend != "oracle" && backend != "snark")
        throw ConfigError("backend must be oracle or snark");
    if (prove_samples == 0) throw ConfigError("prove_samples must be positive");
    if (deadline_s <= 0) throw ConfigError("deadline must be positive");
    if (model_dims.size() < 2) throw ConfigError("model needs at least one layer");
    if (clients_per_round == 0) throw ConfigError("clients_per_round must be positive");
    if (local_epochs == 0) throw ConfigError("local_epochs must be positive");
    if (synth_train <= 0 || synth_test <= 0) throw ConfigError("synthetic sizes must be positive");
    latency_model();        // throws on bad spec
    (void)byz_kind();       // throws on bad kind
}

namespace {

template <typename T>
void maybe(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

SimConfig SimConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config file is not valid JSON");

    SimConfig cfg;
    maybe(j, "nodes", cfg.nodes);
    maybe(j, "rounds", cfg.rounds);
    maybe(j, "byzantine_frac", cfg.byzantine_frac);
    maybe(j, "byzantine_kind", cfg.byzantine_kind);
    maybe(j, "dataset", cfg.dataset);
    maybe(j, "data_dir", cfg.data_dir);
    maybe(j, "backend", cfg.backend);
    maybe(j, "seed", cfg.seed);
    maybe(j, "latency", cfg.latency);
    maybe(j, "prove_samples", cfg.prove_samples);
    maybe(j, "out_dir", cfg.out_dir);
    maybe(j, "deterministic", cfg.deterministic);
    maybe(j, "deadline_s", cfg.deadline_s);
    maybe(j, "local_epochs", cfg.local_epochs);
    maybe(j, "learning_rate", cfg.learning_rate);
    maybe(j, "batch_size", cfg.batch_size);
    maybe(j, "clients_per_round", cfg.clients_per_round);
    if (j.contains("model_dims")) {
        cfg.model_dims.clear();
        for (const auto& d : j.at("model_dims")) cfg.model_dims.push_back(d.get<quant::Index>());
    }
    maybe(j, "synth_train", cfg.synth_train);
    maybe(j, "synth_test", cfg.synth_test);
    return cfg;
}

std::string SimConfig::to_json() const {
    nlohmann::json j{{"nodes", nodes},
                     {"rounds", rounds},
                     {"byzantine_frac", byzantine_frac},
                     {"byzantine_kind", byzantine_kind},
                     {"dataset", dataset},
                     {"data_dir", data_dir},
                     {"backend", backend},
                     {"seed", seed},
                     {"latency", latency},
                     {"prove_samples", prove_samples},
                     {"out_dir", out_dir},
                     {"deterministic", deterministic},
                     {"deadline_s", deadline_s},
                     {"local_epochs", local_epochs},
                     {"learning_rate", learning_rate},
                     {"batch_size", batch_size},
                     {"clients_per_round", clients_per_round},
                     {"model_dims", model_dims},
                     {"synth_train", synth_train},
                     {"synth_test", synth_test}};
    return j.dump(2);
}

}  // namespace zkpot::sim
