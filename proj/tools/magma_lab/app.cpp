#include "app.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "magma/error.hpp"

namespace magma::lab {
namespace {

struct KeyFlag {
    const char* flag;
    const char* help;
};

/// Registers "--flag VALUE" options that land in a key map when given.
class Overrides {
public:
    void add(CLI::App* sub, std::initializer_list<KeyFlag> flags) {
        for (const auto& f : flags) {
            std::string key = f.flag;
            for (auto& ch : key)
                if (ch == '-') ch = '_';
            auto& slot = values_[sub][key];
            sub->add_option(std::string("--") + f.flag, slot, f.help);
        }
    }

    Config for_command(CLI::App* sub) const {
        Config cfg;
        for (const auto& [key, value] : values_.at(sub)) {
            const auto opt = sub->get_option("--" + flag_of(key));
            if (opt->count() > 0) cfg.set(key, value);
        }
        return cfg;
    }

private:
    static std::string flag_of(std::string key) {
        for (auto& ch : key)
            if (ch == '_') ch = '-';
        return key;
    }
    std::map<CLI::App*, std::map<std::string, std::string>> values_;
};

constexpr KeyFlag kShootFlags[] = {
    {"d", "spatial dimension (real, > 0)"},
    {"n", "permeability exponent in [2, 3]"},
    {"c", "rescaled wave speed in [1.55, n)"},
    {"bisect-tol", "bisection stops when the bracket is this narrow"},
    {"r-max", "largest radius of a shot"},
    {"rtol", "relative tolerance of the shot integrator"},
    {"atol", "absolute tolerance of the shot integrator"},
    {"sample-dr", "sample spacing of the returned profile"},
    {"divergence-tol", "profile is kept while bracketing shots agree to this"},
};

constexpr KeyFlag kGridFlags[] = {
    {"d", "grid dimension (1, 2 or 3)"},
    {"n-points", "points per axis (even, >= 8)"},
    {"length", "period of every axis"},
    {"widths", "side in profile half widths when length is unset (profile data)"},
    {"center", "comma-separated wave centre (profile data)"},
};

unsigned default_jobs() {
    if (const char* env = std::getenv("MAGMA_LAB_JOBS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int code_of(ErrorKind k) {
    switch (k) {
        case ErrorKind::Config: return 1;
        case ErrorKind::Numerical: return 2;
        case ErrorKind::Io: return 3;
    }
    return 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical laboratory for the magma equation: solitary-wave shooting and pseudospectral evolution",
                 "magma_lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MAGMA_VERSION_STRING);

    Overrides overrides;
    std::map<CLI::App*, std::string> config_files;
    std::map<CLI::App*, std::string> out_dirs;
    auto common = [&](CLI::App* sub, const std::string& default_out) {
        out_dirs[sub] = default_out;
        sub->add_option("--config", config_files[sub], "key = value configuration file (flags override it)");
        sub->add_option("--out", out_dirs[sub], "output directory")->capture_default_str();
    };

    auto* shoot = app.add_subcommand("shoot", "construct the solitary-wave profile for (d, n, c)");
    common(shoot, "run_shoot");
    for (const auto& f : kShootFlags) overrides.add(shoot, {f});

    auto* evolve = app.add_subcommand("evolve", "time-step the magma equation on the torus");
    common(evolve, "run_evolve");
    for (const auto& f : kGridFlags) overrides.add(evolve, {f});
    overrides.add(evolve, {{"init", "constant:V | modes:BASE;AMP@m1,.. | random:AMP@SEED | file:PATH | profile:DIR"},
                           {"n", "permeability exponent"},
                           {"dt", "time step"},
                           {"t-end", "final time"},
                           {"s-monitor", "Sobolev index of the blow-up monitor"},
                           {"blowup-threshold", "monitor value that ends the run"},
                           {"elliptic-tol", "relative residual of each elliptic solve"},
                           {"snapshot-every", "steps between snapshots (0: none)"}});

    auto* sweep = app.add_subcommand("sweep", "tabulate mu_c, Q_tau, k and c_bar over a (d, n, c) grid");
    common(sweep, "run_sweep");
    overrides.add(sweep, {{"d", "comma-separated dimensions"},
                          {"n", "comma-separated exponents"},
                          {"c", "comma-separated speeds"}});
    for (const auto& f : kShootFlags) {
        const std::string name = f.flag;
        if (name != "d" && name != "n" && name != "c") overrides.add(sweep, {f});
    }
    unsigned jobs = default_jobs();
    sweep->add_option("--jobs", jobs, "worker threads (default: MAGMA_LAB_JOBS or the core count)");

    auto* embed = app.add_subcommand("embed", "place a shoot profile on a periodic grid as a snapshot");
    common(embed, "run_embed");
    overrides.add(embed, {{"profile", "shoot run directory holding profile.csv"}});
    for (const auto& f : kGridFlags) overrides.add(embed, {f});

    auto* diagnose = app.add_subcommand("diagnose", "dispersion fit, conserved energy or peak speed");
    common(diagnose, "run_diagnose");
    overrides.add(diagnose, {{"kind", "dispersion | energy | speed"},
                             {"run", "evolve run directory (energy, speed)"},
                             {"n", "permeability exponent"},
                             {"m", "generalised exponent of the energy (in [0, 1])"},
                             {"mode", "comma-separated integer mode numbers (dispersion)"},
                             {"epsilon", "perturbation amplitude (dispersion)"},
                             {"t-end", "fit duration (dispersion)"},
                             {"dt", "time step (dispersion)"},
                             {"elliptic-tol", "elliptic tolerance (dispersion)"},
                             {"speed-bound", "expected speed for the cadence check (speed)"}});
    overrides.add(diagnose, {{"d", "grid dimension (dispersion)"},
                             {"n-points", "points per axis (dispersion)"},
                             {"length", "period of every axis (dispersion)"}});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 1;
    }

    CLI::App* chosen = app.get_subcommands().front();
    try {
        Config cfg;
        if (!config_files[chosen].empty()) cfg = Config::load(config_files[chosen]);
        cfg.merge(overrides.for_command(chosen));
        const std::filesystem::path dir = out_dirs[chosen];
        if (chosen == shoot) cmd_shoot(cfg, dir, out);
        else if (chosen == evolve) cmd_evolve(cfg, dir, out);
        else if (chosen == sweep) cmd_sweep(cfg, dir, out, jobs);
        else if (chosen == embed) cmd_embed(cfg, dir, out);
        else cmd_diagnose(cfg, dir, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return code_of(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace magma::lab
