#include "qlink/cli/config.hpp"

#include <cmath>
#include <set>

#include "qlink/errors.hpp"

namespace qlink::cli {

namespace {

bool is_sweep(const std::string& experiment) {
    return experiment == "bell-decay" || experiment == "tmsv-separability" ||
           experiment == "amplifier-gain";
}

} // namespace

GridSpec SweepConfig::grid() const {
    GridSpec g;
    if (experiment == "amplifier-gain") {
        g = {1.0, 2.2, 61};
    } else {
        g = {0.0, 2.0, 81};
    }
    if (grid_start) g.start = *grid_start;
    if (grid_stop) g.stop = *grid_stop;
    if (grid_steps) g.steps = *grid_steps;
    return g;
}

double SweepConfig::n_th_value() const {
    if (n_th) return *n_th;
    return experiment == "tmsv-separability" ? 1.0 : 0.0;
}

int SweepConfig::sigma_value() const {
    if (sigma != 0) return sigma;
    return experiment == "amplifier-gain" ? -1 : +1;
}

int SweepConfig::field_cutoff_value() const {
    if (field_cutoff) return *field_cutoff;
    return experiment == "tmsv-separability" ? 14 : 6;
}

int SweepConfig::device_cutoff_value() const {
    if (device_cutoff) return *device_cutoff;
    return experiment == "tmsv-separability" ? 14 : 6;
}

void SweepConfig::validate() const {
    static const std::set<std::string> experiments = {
        "bell-decay", "tmsv-separability", "amplifier-gain", "channel-apply"};
    if (!experiments.count(experiment))
        throw domain_error("config: unknown experiment '" + experiment + "'");

    if (format != "csv" && format != "json")
        throw domain_error("config: format must be csv or json, got '" +
                           format + "'");

    if (is_sweep(experiment)) {
        const GridSpec g = grid();
        if (g.steps < 2) throw domain_error("config: grid_steps must be >= 2");
        if (!(g.start < g.stop))
            throw domain_error("config: grid_start must be < grid_stop");
        if (!std::isfinite(g.start) || !std::isfinite(g.stop))
            throw domain_error("config: grid bounds must be finite");
        if (!(zeta >= 0.0) || !std::isfinite(zeta))
            throw domain_error("config: zeta must be finite and >= 0");
        if (n_th_value() < 0.0)
            throw domain_error("config: n_th must be >= 0");
    }

    if (experiment == "bell-decay") {
        if (sigma_value() != +1)
            throw domain_error("config: bell-decay runs absorbing fibers "
                               "(sigma=+1)");
        if (n_th_value() != 0.0)
            throw domain_error("config: bell-decay assumes vacuum device "
                               "input (n_th=0); the closed-form bounds do not "
                               "hold otherwise");
        if (reflection != 0.0)
            throw domain_error("config: bell-decay requires reflection=0");
        if (kind != "plus" && kind != "minus")
            throw domain_error("config: kind must be plus or minus, got '" +
                               kind + "'");
        static const std::set<std::string> measures = {
            "ree", "negativity", "log-negativity", "ls"};
        if (!measures.count(measure))
            throw domain_error("config: measure must be one of ree, "
                               "negativity, log-negativity, ls");
        if (grid().start < 0.0)
            throw domain_error("config: l/L grid must start at >= 0");
        if (field_cutoff_value() < 1 || device_cutoff_value() < 1)
            throw domain_error("config: cutoffs must be >= 1");
    } else if (experiment == "tmsv-separability") {
        if (sigma_value() != +1)
            throw domain_error("config: tmsv-separability sweeps absorbing "
                               "fibers (sigma=+1)");
        if (n_th_value() <= 0.0)
            throw domain_error(
                "config: the maximal fiber length diverges for n_th=0 "
                "(entanglement survives every finite length); choose n_th>0");
        if (reflection != 0.0)
            throw domain_error("config: tmsv-separability requires "
                               "reflection=0");
        if (grid().start < 0.0)
            throw domain_error("config: l/L grid must start at >= 0");
    } else if (experiment == "amplifier-gain") {
        if (sigma_value() != -1)
            throw domain_error("config: amplifier-gain requires sigma=-1");
        if (n_th_value() != 0.0)
            throw domain_error("config: amplifier-gain compares against the "
                               "vacuum-device gain limit; n_th must be 0");
        if (reflection != 0.0)
            throw domain_error("config: the moment engine models reflection-"
                               "free devices; reflection must be 0 "
                               "(the closed-form threshold handles R only)");
        if (grid().start < 1.0)
            throw domain_error("config: amplifier |T|^2 grid must start at "
                               ">= 1");
    } else { // channel-apply
        if (input_path.empty())
            throw domain_error("config: channel-apply needs an input state "
                               "file (--input)");
        if (device_path.empty())
            throw domain_error("config: channel-apply needs a device spec "
                               "file (--device)");
        if (device_cutoff_value() < 1)
            throw domain_error("config: cutoffs must be >= 1");
    }
}

namespace {

template <typename T>
T get_as(const io::json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw domain_error("config: bad value for key '" + key +
                           "': " + e.what());
    }
}

} // namespace

void merge_config_json(SweepConfig& cfg, const io::json& j) {
    if (!j.is_object()) throw domain_error("config: root must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key == "experiment")
            cfg.experiment = get_as<std::string>(j, key);
        else if (key == "grid_start")
            cfg.grid_start = get_as<double>(j, key);
        else if (key == "grid_stop")
            cfg.grid_stop = get_as<double>(j, key);
        else if (key == "grid_steps")
            cfg.grid_steps = get_as<int>(j, key);
        else if (key == "kind")
            cfg.kind = get_as<std::string>(j, key);
        else if (key == "zeta")
            cfg.zeta = get_as<double>(j, key);
        else if (key == "n_th")
            cfg.n_th = get_as<double>(j, key);
        else if (key == "sigma")
            cfg.sigma = get_as<int>(j, key);
        else if (key == "reflection")
            cfg.reflection = get_as<double>(j, key);
        else if (key == "field_cutoff")
            cfg.field_cutoff = get_as<int>(j, key);
        else if (key == "device_cutoff")
            cfg.device_cutoff = get_as<int>(j, key);
        else if (key == "measure")
            cfg.measure = get_as<std::string>(j, key);
        else if (key == "input")
            cfg.input_path = get_as<std::string>(j, key);
        else if (key == "device")
            cfg.device_path = get_as<std::string>(j, key);
        else if (key == "out")
            cfg.out_path = get_as<std::string>(j, key);
        else if (key == "format")
            cfg.format = get_as<std::string>(j, key);
        else if (key == "verify")
            cfg.verify = get_as<bool>(j, key);
        else
            throw domain_error("config: unknown key '" + key + "'");
    }
}

void load_config_file(SweepConfig& cfg, const std::string& path) {
    merge_config_json(cfg, io::load_json_file(path));
}

} // namespace qlink::cli
