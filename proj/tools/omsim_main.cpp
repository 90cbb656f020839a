// omsim — scenario runner for the two-nanobeam optomechanical model.
// Subcommands: run (propagate scenarios), presets (list built-ins),
// scan (cutoff/series-order convergence scan).

#include "omsim/scenario.hpp"

#include "CLI11.hpp"

#include <future>
#include <iostream>
#include <semaphore>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRegime = 3;
constexpr int kExitCapacity = 4;
constexpr int kExitIntegrator = 5;

using omsim::scenario::ConfigMap;

ConfigMap load_inputs(const std::string& config_path, const std::string& preset,
                      const std::vector<std::string>& overrides) {
    ConfigMap map;
    if (!preset.empty() && !config_path.empty()) {
        throw omsim::scenario::config_error("use either --config or --preset, not both");
    }
    if (!preset.empty()) {
        map = omsim::scenario::parse_config_text(omsim::scenario::preset_config_text(preset));
    } else if (!config_path.empty()) {
        map = omsim::scenario::load_config_file(config_path);
    } else {
        throw omsim::scenario::config_error("one of --config or --preset is required");
    }
    for (const auto& o : overrides) omsim::scenario::apply_override(map, o);
    return map;
}

int run_one(const ConfigMap& map, const std::string& out_dir) {
    auto config = omsim::scenario::build_scenario(map);
    auto outputs = omsim::scenario::run_scenario(config, out_dir);
    std::cout << "wrote " << outputs.trajectory_csv.string() << "\n";
    std::cout << "wrote " << outputs.metadata_file.string() << "\n";
    if (!outputs.period_csv.empty()) std::cout << "wrote " << outputs.period_csv.string() << "\n";
    if (!outputs.rwa_file.empty()) std::cout << "wrote " << outputs.rwa_file.string() << "\n";
    for (const auto& w : outputs.warnings) std::cout << "warning: " << w << "\n";
    for (const auto& w : outputs.trajectory.stats.warnings) std::cout << "warning: " << w << "\n";
    if (outputs.periods) {
        for (const auto& row : outputs.periods->rows) {
            std::cout << "period " << row.label << " [" << row.observable << "]: ";
            if (row.measured_ok) {
                std::cout << "measured " << row.measured_exchange_period << " vs predicted "
                          << row.predicted_period << " (rel err " << row.relative_error << ")";
            } else {
                std::cout << row.status;
            }
            std::cout << "\n";
        }
    }
    if (outputs.rwa) {
        std::cout << "rwa: optical deviation ("
                  << outputs.rwa->max_optical_deviation[0] << ", "
                  << outputs.rwa->max_optical_deviation[1] << ") vs bound "
                  << outputs.rwa->bound << "\n";
    }
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"two-nanobeam optomechanical simulator"};
    app.require_subcommand(1);

    std::vector<std::string> config_paths;
    std::string preset;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    int threads = 1;

    auto* run = app.add_subcommand("run", "run one or more scenarios");
    run->add_option("--config", config_paths, "config file path (repeatable)");
    run->add_option("--preset", preset, "built-in preset name");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--override", overrides, "section.key=value override (repeatable)");
    run->add_option("--threads", threads, "worker threads for scenario batches")
        ->check(CLI::PositiveNumber);

    auto* presets = app.add_subcommand("presets", "list built-in presets");

    auto* scan = app.add_subcommand("scan", "cutoff/series-order convergence scan");
    std::string scan_config, scan_preset;
    std::vector<std::string> scan_overrides;
    std::string scan_out = "out";
    scan->add_option("--config", scan_config, "config file path");
    scan->add_option("--preset", scan_preset, "built-in preset name");
    scan->add_option("--out", scan_out, "output directory");
    scan->add_option("--override", scan_overrides, "section.key=value override (repeatable)");

    CLI11_PARSE(app, argc, argv);

    if (presets->parsed()) {
        std::cout << omsim::scenario::list_presets_text();
        return 0;
    }

    if (run->parsed()) {
        std::vector<ConfigMap> maps;
        if (!preset.empty()) {
            maps.push_back(load_inputs("", preset, overrides));
        }
        for (const auto& path : config_paths) {
            maps.push_back(load_inputs(path, "", overrides));
        }
        if (maps.empty()) {
            throw omsim::scenario::config_error("one of --config or --preset is required");
        }
        if (maps.size() == 1 || threads <= 1) {
            for (const auto& map : maps) run_one(map, out_dir);
            return 0;
        }
        std::counting_semaphore<64> slots(std::min(threads, 64));
        std::vector<std::future<void>> futures;
        futures.reserve(maps.size());
        for (const auto& map : maps) {
            futures.push_back(std::async(std::launch::async, [&slots, map, out_dir] {
                slots.acquire();
                try {
                    run_one(map, out_dir);
                } catch (...) {
                    slots.release();
                    throw;
                }
                slots.release();
            }));
        }
        for (auto& f : futures) f.get();
        return 0;
    }

    if (scan->parsed()) {
        ConfigMap map = load_inputs(scan_config, scan_preset, scan_overrides);
        auto config = omsim::scenario::build_scenario(map);

        const std::string* ladder_str = map.find("scan.cutoff_ladder");
        if (ladder_str == nullptr) {
            throw omsim::scenario::config_error(
                "scan requires scan.cutoff_ladder (e.g. --override "
                "\"scan.cutoff_ladder=1,1,2,2;1,1,3,3\")");
        }
        std::vector<std::array<int, 4>> cutoff_ladder;
        {
            std::istringstream in(*ladder_str);
            std::string rung;
            while (std::getline(in, rung, ';')) {
                std::istringstream rs(rung);
                std::array<int, 4> c{};
                char sep = ',';
                if (!(rs >> c[0] >> sep >> c[1] >> sep >> c[2] >> sep >> c[3])) {
                    throw omsim::scenario::config_error("scan.cutoff_ladder: bad rung '" +
                                                        rung + "'");
                }
                cutoff_ladder.push_back(c);
            }
        }
        std::vector<int> order_ladder;
        if (const std::string* orders = map.find("scan.order_ladder")) {
            std::istringstream in(*orders);
            std::string item;
            while (std::getline(in, item, ',')) order_ladder.push_back(std::stoi(item));
        }
        double tolerance = 1e-6;
        if (const std::string* v = map.find("scan.tolerance")) tolerance = std::stod(*v);
        double leak = 1e-6;
        if (const std::string* v = map.find("scan.leak_threshold")) leak = std::stod(*v);

        auto report = omsim::scenario::run_convergence_scan(config, cutoff_ladder, order_ladder,
                                                            tolerance, leak, scan_out);
        std::cout << "scan rows: " << report.rows.size() << ", converged: "
                  << (report.converged ? "yes" : "no") << "\n";
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const omsim::scenario::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const omsim::scenario::regime_error& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return kExitRegime;
    } catch (const omsim::fock::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const omsim::dyn::integrator_error& e) {
        std::cerr << "integrator error: " << e.what() << "\n";
        return kExitIntegrator;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
