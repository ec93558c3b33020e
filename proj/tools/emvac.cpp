#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emvac/config.hpp"
#include "emvac/runners.hpp"
#include "emvac/types.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required) {
    auto* c = cmd->add_option("-c,--config", opts.config_path,
                              "INI config file");
    if (config_required) c->required();
    cmd->add_option("-s,--set", opts.overrides,
                    "override as section.key=value (repeatable)");
    cmd->add_option("-o,--output", opts.output_path,
                    "output CSV path (default: stdout)");
}

emvac::RunConfig load_config(const CommonOpts& opts) {
    emvac::RunConfig cfg = opts.config_path.empty()
                               ? emvac::RunConfig()
                               : emvac::RunConfig::parse_file(opts.config_path);
    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw emvac::ConfigError("--set expects section.key=value: '" +
                                     kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

int dispatch(const CommonOpts& opts,
             int (*runner)(const emvac::RunConfig&, std::ostream&)) {
    const auto cfg = load_config(opts);
    if (opts.output_path.empty()) return runner(cfg, std::cout);
    std::ofstream out(opts.output_path, std::ios::binary);
    if (!out)
        throw emvac::ConfigError("cannot open output file: " +
                                 opts.output_path);
    return runner(cfg, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"electromagnetic vacuum of point-dipole media"};
    app.set_version_flag("--version", std::string("emvac ") + emvac::kVersion);
    app.require_subcommand(1);

    CommonOpts ldos_opts, emis_opts, renorm_opts, vac_opts, cdm_opts;
    auto* ldos = app.add_subcommand(
        "ldos", "radiative density of states of an effective medium");
    add_common(ldos, ldos_opts, true);
    auto* emis = app.add_subcommand(
        "emission", "emission-power decomposition per momentum channel");
    add_common(emis, emis_opts, true);
    auto* renorm = app.add_subcommand(
        "renorm", "self-consistent polarizability and resonance shift");
    add_common(renorm, renorm_opts, true);
    auto* vac = app.add_subcommand(
        "vacuum-energy", "vacuum energy densities of a Lorentzian medium");
    add_common(vac, vac_opts, true);
    auto* cdm = app.add_subcommand(
        "cdm-validate",
        "Monte-Carlo dipole ensemble against the analytic self-propagator");
    add_common(cdm, cdm_opts, true);
    auto* self = app.add_subcommand("selftest", "fast consistency checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ldos->parsed()) return dispatch(ldos_opts, emvac::run_ldos);
        if (emis->parsed()) return dispatch(emis_opts, emvac::run_emission);
        if (renorm->parsed()) return dispatch(renorm_opts, emvac::run_renorm);
        if (vac->parsed())
            return dispatch(vac_opts, emvac::run_vacuum_energy);
        if (cdm->parsed()) return dispatch(cdm_opts, emvac::run_cdm_validate);
        if (self->parsed()) return emvac::run_selftest(std::cout);
    } catch (const emvac::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const emvac::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const emvac::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
