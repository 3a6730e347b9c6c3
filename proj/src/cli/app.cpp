#include "qlink/cli/app.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qlink/cli/experiments.hpp"
#include "qlink/errors.hpp"

namespace qlink::cli {

namespace {

/// Raw flag storage plus the CLI11 option handles needed to tell "user set
/// this" from "default"; flags override config-file values only when given.
struct FlagSet {
    std::string config_path;
    double grid_start = 0, grid_stop = 0;
    int grid_steps = 0;
    std::string kind, measure, input, device, out, format;
    double zeta = 0, n_th = 0, reflection = 0;
    int sigma = 0, field_cutoff = 0, device_cutoff = 0;
    bool verify = false;

    CLI::Option* o_grid_start = nullptr;
    CLI::Option* o_grid_stop = nullptr;
    CLI::Option* o_grid_steps = nullptr;
    CLI::Option* o_kind = nullptr;
    CLI::Option* o_measure = nullptr;
    CLI::Option* o_input = nullptr;
    CLI::Option* o_device = nullptr;
    CLI::Option* o_out = nullptr;
    CLI::Option* o_format = nullptr;
    CLI::Option* o_zeta = nullptr;
    CLI::Option* o_n_th = nullptr;
    CLI::Option* o_reflection = nullptr;
    CLI::Option* o_sigma = nullptr;
    CLI::Option* o_field_cutoff = nullptr;
    CLI::Option* o_device_cutoff = nullptr;
    CLI::Option* o_verify = nullptr;
};

void add_common_options(CLI::App& sub, FlagSet& f) {
    sub.add_option("-c,--config", f.config_path,
                   "JSON config file; flags given here override its keys");
    f.o_out = sub.add_option("-o,--out", f.out,
                             "output file (default: stdout)");
    f.o_format = sub.add_option("-f,--format", f.format,
                                "output format: csv (default) or json");
    f.o_verify = sub.add_flag("--verify", f.verify,
                              "re-check every 20th row against closed-form "
                              "oracles (and round-trip channel output)");
    f.o_grid_start = sub.add_option("--grid-start", f.grid_start,
                                    "first grid point");
    f.o_grid_stop = sub.add_option("--grid-stop", f.grid_stop,
                                   "last grid point");
    f.o_grid_steps = sub.add_option("--grid-steps", f.grid_steps,
                                    "number of grid points (>= 2)");
    f.o_kind = sub.add_option("--kind", f.kind,
                              "Bell sign family: plus or minus");
    f.o_measure = sub.add_option(
        "--measure", f.measure,
        "entanglement measure: ree, negativity, log-negativity, ls");
    f.o_zeta = sub.add_option("--zeta", f.zeta,
                              "two-mode squeezing parameter (>= 0)");
    f.o_n_th = sub.add_option("--n-th", f.n_th,
                              "thermal occupation of the device modes");
    f.o_reflection = sub.add_option(
        "--reflection", f.reflection,
        "reflection magnitude for the closed-form threshold");
    f.o_sigma = sub.add_option("--sigma", f.sigma,
                               "+1 absorber, -1 amplifier");
    f.o_field_cutoff = sub.add_option("--field-cutoff", f.field_cutoff,
                                      "highest Fock occupation per field mode");
    f.o_device_cutoff = sub.add_option(
        "--device-cutoff", f.device_cutoff,
        "highest Fock occupation per device mode");
    f.o_input = sub.add_option("-i,--input", f.input,
                               "input state JSON file (channel-apply)");
    f.o_device = sub.add_option("-d,--device", f.device,
                                "device spec JSON file (channel-apply)");
}

SweepConfig build_config(const std::string& experiment, const FlagSet& f) {
    SweepConfig cfg;
    cfg.experiment = experiment;
    if (!f.config_path.empty()) {
        load_config_file(cfg, f.config_path);
        if (cfg.experiment != experiment)
            throw domain_error("config: file targets experiment '" +
                               cfg.experiment + "' but the subcommand is '" +
                               experiment + "'");
    }
    if (f.o_grid_start->count()) cfg.grid_start = f.grid_start;
    if (f.o_grid_stop->count()) cfg.grid_stop = f.grid_stop;
    if (f.o_grid_steps->count()) cfg.grid_steps = f.grid_steps;
    if (f.o_kind->count()) cfg.kind = f.kind;
    if (f.o_measure->count()) cfg.measure = f.measure;
    if (f.o_zeta->count()) cfg.zeta = f.zeta;
    if (f.o_n_th->count()) cfg.n_th = f.n_th;
    if (f.o_reflection->count()) cfg.reflection = f.reflection;
    if (f.o_sigma->count()) cfg.sigma = f.sigma;
    if (f.o_field_cutoff->count()) cfg.field_cutoff = f.field_cutoff;
    if (f.o_device_cutoff->count()) cfg.device_cutoff = f.device_cutoff;
    if (f.o_input->count()) cfg.input_path = f.input;
    if (f.o_device->count()) cfg.device_path = f.device;
    if (f.o_out->count()) cfg.out_path = f.out;
    if (f.o_format->count()) cfg.format = f.format;
    if (f.o_verify->count()) cfg.verify = f.verify;
    return cfg;
}

void write_output(const SweepConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(cfg.out_path, std::ios::binary);
    if (!os) throw io_error("cannot open output file: " + cfg.out_path);
    os << text;
    if (!os) throw io_error("failed writing output file: " + cfg.out_path);
}

void run_experiment(const SweepConfig& cfg) {
    if (cfg.experiment == "channel-apply") {
        const io::json out = run_channel_apply(cfg);
        write_output(cfg, out.dump(2) + "\n");
        return;
    }
    Table table;
    if (cfg.experiment == "bell-decay")
        table = run_bell_decay(cfg);
    else if (cfg.experiment == "tmsv-separability")
        table = run_tmsv_separability(cfg);
    else
        table = run_amplifier_gain(cfg);
    if (cfg.format == "json") {
        write_output(cfg, table_to_json(table).dump(2) + "\n");
    } else {
        std::ostringstream os;
        write_csv(table, os);
        write_output(cfg, os.str());
    }
}

} // namespace

int run_app(int argc, const char* const* argv) {
    CLI::App app{
        "Entanglement degradation of optical fields in absorbing and "
        "amplifying four-port devices"};
    app.set_version_flag("--version", "qlink 1.0.0");
    app.require_subcommand(1);

    FlagSet flags[4];
    const char* names[4] = {"bell-decay", "tmsv-separability",
                            "amplifier-gain", "channel-apply"};
    const char* briefs[4] = {
        "entanglement decay of one-photon Bell states through equal fibers",
        "separability crossing of a squeezed vacuum along the fiber length",
        "PPT sign change of an amplified squeezed vacuum versus gain",
        "apply one device channel to a state file"};
    CLI::App* subs[4];
    for (int i = 0; i < 4; ++i) {
        subs[i] = app.add_subcommand(names[i], briefs[i]);
        add_common_options(*subs[i], flags[i]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    int which = 0;
    for (int i = 0; i < 4; ++i)
        if (subs[i]->parsed()) which = i;

    try {
        run_experiment(build_config(names[which], flags[which]));
        return 0;
    } catch (const invariant_violation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const truncation_error& e) {
        std::cerr << "truncation error: " << e.what() << "\n";
        return 3;
    } catch (const degenerate_device_error& e) {
        std::cerr << "degenerate device: " << e.what() << "\n";
        return 3;
    } catch (const singular_threshold_error& e) {
        std::cerr << "singular threshold: " << e.what() << "\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dimension_error& e) {
        std::cerr << "dimension error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_device_error& e) {
        std::cerr << "invalid device: " << e.what() << "\n";
        return 2;
    } catch (const unsupported_dimension_error& e) {
        std::cerr << "unsupported dimension: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "json error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace qlink::cli
