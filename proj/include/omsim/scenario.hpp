// scenario.hpp — Scenario configuration, presets, and the run pipeline
// behind the CLI: builds the regime Hamiltonian, propagates, and writes
// trajectory CSV, period reports and rerunnable metadata.

#pragma once

#include "omsim/analysis.hpp"
#include "omsim/dynamics.hpp"
#include "omsim/model.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace omsim::scenario {

inline constexpr const char* kVersion = "omsim 0.1.0";

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class regime_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat ordered key-value view of a config file ("section.key" -> value).
struct ConfigMap {
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const;
    void set(const std::string& key, const std::string& value);
};

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::filesystem::path& path);

// "section.key=value" override
void apply_override(ConfigMap& map, const std::string& key_eq_value);

enum class EvolutionMethod { Auto, Schrodinger, Lindblad };

struct ScenarioConfig {
    std::string name = "scenario";
    model::RegimeSpec regime;
    model::ModelParams params;
    double omega_scale_factor = 1.0;
    std::array<int, 4> cutoffs{1, 1, 1, 1};
    long dim_limit = fock::kDefaultDimLimit;
    std::vector<dyn::StateTerm> initial_state;
    dyn::TimeGrid grid;
    bool losses = false;
    EvolutionMethod method = EvolutionMethod::Auto;
    std::vector<std::string> observables{"n_opt1", "n_opt2", "n_mec1", "n_mec2"};
    bool period_report = false;
    long envelope_window_samples = 0;  // 0 = automatic
    bool rwa_report = false;
    std::vector<std::pair<std::string, std::string>> provenance;

    // Serializes every resolved field back to a flat map; feeding the result
    // through build_scenario reproduces this configuration exactly.
    ConfigMap to_config_map() const;
};

// Typed construction from a flat map; throws config_error naming the field.
ScenarioConfig build_scenario(const ConfigMap& map);

// Hard regime-detuning checks for nbs/omc/oms; throws regime_error naming
// the violated condition.
void validate_regime_conditions(const ScenarioConfig& config);

std::vector<dyn::StateTerm> parse_state_spec(const std::string& text);
std::string format_state_spec(const std::vector<dyn::StateTerm>& terms);

// --------------------------- Period reports ----------------------------

struct PeriodRow {
    std::string label;
    std::string observable;
    int n1 = 0;
    int n2 = 0;
    // Number-series cycles per full exchange period: direct two-level
    // exchange shows two excitation-number cycles per amplitude period,
    // the drive-dressed slow pair transfer shows one.
    int cycles_per_exchange = 1;
    bool measured_ok = false;
    double measured_number_period = 0.0;
    double measured_exchange_period = 0.0;
    double measured_uncertainty = 0.0;
    double predicted_period = 0.0;
    double relative_error = 0.0;
    std::string status;  // "ok" or the reason measurement failed
};

struct PeriodReport {
    std::vector<PeriodRow> rows;
};

PeriodReport make_period_report(const ScenarioConfig& config, const dyn::Trajectory& traj);

// --------------------------- RWA comparison ----------------------------

struct RwaReport {
    double bound = 0.0;  // max_j Omega_j / (omega_j + omega_d_j)
    std::array<double, 2> max_optical_deviation{};
    std::array<double, 2> max_mechanical_deviation{};
    bool optical_within_bound = false;
};

// --------------------------- Run pipeline ------------------------------

struct RunOutputs {
    dyn::Trajectory trajectory;
    std::optional<PeriodReport> periods;
    std::optional<RwaReport> rwa;
    std::vector<std::string> warnings;
    std::filesystem::path trajectory_csv;
    std::filesystem::path metadata_file;
    std::filesystem::path period_csv;   // empty when not requested
    std::filesystem::path rwa_file;     // empty when not requested
};

RunOutputs run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

// Scan variant: reruns the scenario over cutoff/series-order ladders and
// writes the convergence table.
analysis::ScanReport run_convergence_scan(const ScenarioConfig& config,
                                          const std::vector<std::array<int, 4>>& cutoff_ladder,
                                          const std::vector<int>& order_ladder,
                                          double tolerance, double leak_threshold,
                                          const std::filesystem::path& out_dir);

// --------------------------- Presets -----------------------------------

struct Preset {
    std::string name;
    std::string description;
    std::string provenance_note;
};

std::vector<Preset> preset_catalog();
std::string preset_config_text(const std::string& name);
std::string list_presets_text();

}  // namespace omsim::scenario
