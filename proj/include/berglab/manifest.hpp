#ifndef BERGLAB_MANIFEST_HPP
#define BERGLAB_MANIFEST_HPP

#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "berglab/config.hpp"
#include "berglab/io.hpp"
#include "berglab/version.hpp"

namespace berglab {

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline nlohmann::ordered_json config_echo(const RunConfig& cfg) {
    nlohmann::ordered_json echo;
    nlohmann::ordered_json potential = nlohmann::ordered_json::array();
    for (const auto& [k, v] : cfg.potential) potential.push_back({k, v});
    echo["potential"] = potential;
    echo["m"] = cfg.m_list;
    echo["nodes"] = cfg.nodes;
    echo["degree"] = cfg.degree;
    echo["lift"] = cfg.lift.str();
    if (!cfg.lift_at.empty()) {
        nlohmann::ordered_json lift_at = nlohmann::ordered_json::array();
        for (const auto& [m, r] : cfg.lift_at) lift_at.push_back({m, r.str()});
        echo["lift_at"] = lift_at;
    }
    echo["seed"] = cfg.seed;
    echo["steps"] = cfg.steps;
    if (!cfg.inject.empty()) {
        nlohmann::ordered_json inject = nlohmann::ordered_json::array();
        for (const auto& [k, v] : cfg.inject) inject.push_back({k, v});
        echo["inject"] = inject;
        echo["inject_order"] = cfg.inject_order;
    }
    echo["fit_order"] = cfg.fit_order;
    echo["out"] = cfg.out_dir;
    echo["tolerances"] = {{"balance", cfg.tol_balance},
                          {"identity", cfg.tol_identity},
                          {"a1", cfg.tol_a1},
                          {"fit_residual", cfg.tol_fit_residual},
                          {"kernel_residual", cfg.tol_kernel_residual},
                          {"slope_slack", cfg.slope_slack}};
    if (cfg.d0_scale != 1.0) echo["d0_scale"] = cfg.d0_scale;
    return echo;
}

// Every command writes one manifest referencing each emitted file with a
// content checksum; a run with no manifest produced no output at all.
class RunManifest {
public:
    RunManifest(std::string command, const RunConfig& cfg)
        : command_(std::move(command)), echo_(config_echo(cfg)), started_(utc_timestamp()) {}

    // Writes `content` under the output directory and records its checksum.
    void emit(const std::filesystem::path& out_dir, const std::string& name,
              const std::string& content) {
        write_file(out_dir / name, content);
        outputs_.push_back({name, fnv1a_hex(content)});
    }

    void summary(const std::string& key, const nlohmann::ordered_json& value) {
        summary_[key] = value;
    }

    void set_pass(bool pass) { pass_ = pass; }
    bool pass() const { return pass_; }

    void write(const std::filesystem::path& out_dir) {
        nlohmann::ordered_json doc;
        doc["command"] = command_;
        doc["library_version"] = kVersion;
        doc["started_at"] = started_;
        doc["finished_at"] = utc_timestamp();
        doc["config"] = echo_;
        nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
        for (const auto& [name, checksum] : outputs_)
            outputs.push_back({{"file", name}, {"fnv1a", checksum}});
        doc["outputs"] = outputs;
        doc["summary"] = summary_;
        doc["pass"] = pass_;
        write_file(out_dir / "manifest.json", doc.dump(2) + "\n");
    }

private:
    std::string command_;
    nlohmann::ordered_json echo_;
    std::string started_;
    std::vector<std::pair<std::string, std::string>> outputs_;
    nlohmann::ordered_json summary_;
    bool pass_ = true;
};

} // namespace berglab

#endif
