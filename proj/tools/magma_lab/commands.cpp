#include "commands.hpp"

#include <fmt/core.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <numbers>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "initial_data.hpp"
#include "magma/diagnostics.hpp"
#include "magma/error.hpp"
#include "magma/evolution.hpp"
#include "magma/profile.hpp"
#include "magma/snapshot.hpp"

namespace magma::lab {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Collects outputs and writes manifest.json on finish().
class Run {
public:
    Run(std::string command, const fs::path& dir) : command_(std::move(command)), dir_(dir), started_(utc_now()) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    fs::path path(const std::string& name) {
        outputs_.push_back(name);
        return dir_ / name;
    }

    void finish(const Config& cfg) const {
        json manifest;
        manifest["command"] = command_;
        manifest["config"] = cfg.resolved();
        manifest["config_hash"] = cfg.hash();
        manifest["started_at"] = started_;
        manifest["finished_at"] = utc_now();
        manifest["outputs"] = outputs_;
        manifest["version"] = MAGMA_VERSION_STRING;
        write_json(dir_ / "manifest.json", manifest);
    }

    static void write_json(const fs::path& p, const json& j) {
        std::ofstream out(p);
        if (!out) throw IoError("cannot open " + p.string() + " for writing");
        out << j.dump(2) << "\n";
        if (!out) throw IoError("write failed for " + p.string());
    }

private:
    std::string command_;
    fs::path dir_;
    std::string started_;
    std::vector<std::string> outputs_;
};

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw IoError("cannot open " + p.string() + " for writing");
    return out;
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

profile::ProfileParams profile_params(Config& cfg) {
    profile::ProfileParams p;
    p.d = cfg.get_double("d", 3.0);
    p.n = cfg.get_double("n", 2.5);
    p.c = cfg.get_double("c", 1.7);
    return p;
}

profile::MuSearchOptions search_options(Config& cfg) {
    profile::MuSearchOptions o;
    o.bisect_tol = cfg.get_double("bisect_tol", o.bisect_tol);
    o.shot.r_max = cfg.get_double("r_max", o.shot.r_max);
    o.shot.rtol = cfg.get_double("rtol", o.shot.rtol);
    o.shot.atol = cfg.get_double("atol", o.shot.atol);
    o.sample_dr = cfg.get_double("sample_dr", o.sample_dr);
    o.divergence_tol = cfg.get_double("divergence_tol", o.divergence_tol);
    return o;
}

int exit_code_of(ErrorKind k) {
    switch (k) {
        case ErrorKind::Config: return 1;
        case ErrorKind::Numerical: return 2;
        case ErrorKind::Io: return 3;
    }
    return 2;
}

struct SnapshotEntry {
    double t;
    std::size_t step;
    fs::path bin;
};

/// Snapshots of an evolve run directory in step order.
std::vector<SnapshotEntry> list_snapshots(const fs::path& run) {
    const auto dir = run / "snapshots";
    if (!fs::is_directory(dir)) throw IoError("no snapshots directory in " + run.string());
    std::vector<SnapshotEntry> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        std::ifstream in(e.path());
        json side;
        try {
            side = json::parse(in);
        } catch (const json::exception& ex) {
            throw IoError("bad sidecar " + e.path().string() + ": " + ex.what());
        }
        auto bin = e.path();
        bin.replace_extension(".bin");
        out.push_back({side.at("t").get<double>(), side.at("step").get<std::size_t>(), bin});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.step < b.step; });
    return out;
}

}  // namespace

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    return out + "\"";
}

void cmd_shoot(Config& cfg, const fs::path& out_dir, std::ostream& log) {
    const auto p = profile_params(cfg);
    const auto opts = search_options(cfg);
    cfg.reject_unused();
    profile::validate(p);

    Run run("shoot", out_dir);
    const auto res = profile::find_mu_c(p, opts);
    const auto decay = profile::decay_check(res.solution);
    profile::save_profile_archive(run.path("profile.csv"), {res.solution, decay});

    const auto& s = res.structure;
    json structure;
    structure["d"] = p.d;
    structure["n"] = p.n;
    structure["c"] = p.c;
    structure["Q_star"] = s.Q_star;
    structure["Q1"] = s.Q1;
    structure["Q2"] = s.Q2;
    structure["Q3"] = s.Q3;
    structure["mu1_min"] = s.mu1_min;
    structure["mu2_min"] = s.mu2_min;
    structure["mu3_min"] = s.mu3_min;
    structure["mu_c"] = res.mu_c;
    structure["mu_lo"] = res.mu_lo;
    structure["bisections"] = res.bisections;
    structure["Q_tau"] = res.solution.Q_tau;
    structure["c_bar"] = profile::physical_speed(res.solution);
    structure["half_width"] = profile::physical_half_width(res.solution);
    structure["r_last"] = res.solution.samples.r.back();
    Run::write_json(run.path("structure.json"), structure);

    json dj;
    const double threshold = std::pow(p.c / p.n, 1.0 / (p.n - 1.0));
    dj["threshold"] = threshold;
    dj["criterion_holds"] = res.solution.Q_tau < threshold;
    if (decay) {
        dj["L"] = decay->L;
        dj["k"] = decay->k;
        dj["M"] = decay->M;
        dj["fit_r_min"] = decay->r_min;
        dj["fit_r_max"] = decay->r_max;
        dj["fit_points"] = decay->points;
    } else {
        dj["L"] = nullptr;
        dj["k"] = nullptr;
        dj["M"] = nullptr;
    }
    Run::write_json(run.path("decay.json"), dj);
    run.finish(cfg);

    fmt::print(log, "mu_c = {:.16g} in [{:.16g}, {:.16g}]\n", res.mu_c, s.mu3_min, s.mu2_min);
    fmt::print(log, "Q_tau = {:.12g}, c_bar = {:.12g}", res.solution.Q_tau, profile::physical_speed(res.solution));
    if (decay) fmt::print(log, ", k = {:.6g}", decay->k);
    fmt::print(log, "\n");
}

void cmd_evolve(Config& cfg, const fs::path& out_dir, std::ostream& log) {
    const auto phi0 = build_initial(cfg);
    EvolveConfig ec;
    // An embedded wave evolves with the exponent it was built for unless overridden.
    const auto init = cfg.get_string("init", "constant:1");
    if (init.rfind("profile:", 0) == 0)
        ec.n_exponent = profile::load_profile_archive(fs::path(init.substr(8)) / "profile.csv").solution.params.n;
    ec.n_exponent = cfg.get_double("n", ec.n_exponent);
    ec.dt = cfg.get_double("dt", ec.dt);
    ec.t_end = cfg.get_double("t_end", ec.t_end);
    ec.s_monitor = cfg.get_optional_double("s_monitor");
    ec.blowup_threshold = cfg.get_double("blowup_threshold", ec.blowup_threshold);
    ec.elliptic_tol = cfg.get_double("elliptic_tol", ec.elliptic_tol);
    const auto every = cfg.get_int("snapshot_every", 0);
    if (every < 0) throw InvalidArgument("config: snapshot_every must be >= 0");
    ec.snapshot_every = static_cast<std::size_t>(every);
    if (!(ec.n_exponent >= 2.0 && ec.n_exponent <= 3.0)) throw InvalidArgument("config: n must lie in [2, 3]");
    cfg.reject_unused();

    Run run("evolve", out_dir);
    const auto hash = cfg.hash();
    const auto res = evolve(phi0, ec);

    {
        auto out = open_out(run.path("log.csv"));
        out << "t,mass,monitor,min_phi,cg_iters\n";
        for (const auto& row : res.log)
            out << format_double(row.t) << ',' << format_double(row.mass) << ',' << format_double(row.monitor) << ','
                << format_double(row.min_phi) << ',' << row.cg_iters << "\n";
    }
    if (!res.snapshots.empty()) fs::create_directories(out_dir / "snapshots");
    for (const auto& snap : res.snapshots) {
        const auto stem = fmt::format("snapshots/snap_{:08d}", snap.step);
        save_snapshot(run.path(stem + ".bin"), snap.phi);
        json side{{"t", snap.t}, {"step", snap.step}, {"monitor", num_or_null(snap.monitor)}, {"config_hash", hash}};
        Run::write_json(run.path(stem + ".json"), side);
    }
    save_snapshot(run.path("final.bin"), res.final_state);
    Run::write_json(run.path("final.json"), json{{"t", res.final_time},
                                                 {"step", res.log.size() - 1},
                                                 {"monitor", num_or_null(res.report.final_monitor)},
                                                 {"config_hash", hash}});

    const auto& rep = res.report;
    json rj;
    rj["verdict"] = verdict_name(rep.verdict);
    std::visit(
        [&](const auto& v) {
            if constexpr (requires { v.t; }) rj["verdict_time"] = v.t;
            else rj["verdict_time"] = nullptr;
        },
        rep.verdict);
    rj["final_time"] = res.final_time;
    rj["final_monitor"] = num_or_null(rep.final_monitor);
    rj["s_monitor"] = ec.s_monitor.value_or(default_monitor_index(phi0.grid().dim()));
    rj["blowup_threshold"] = ec.blowup_threshold;
    json times = json::array(), monitor = json::array();
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        times.push_back(rep.times[i]);
        monitor.push_back(num_or_null(rep.monitor[i]));
    }
    rj["times"] = times;
    rj["monitor"] = monitor;
    Run::write_json(run.path("report.json"), rj);
    run.finish(cfg);

    fmt::print(log, "{} at t = {:.6g}, final monitor {:.6g}\n", verdict_name(rep.verdict), res.final_time,
               rep.final_monitor);
    if (std::holds_alternative<EllipticFailure>(rep.verdict) || std::holds_alternative<PositivityLostAt>(rep.verdict))
        throw NumericalError(std::string("evolve ended with ") + verdict_name(rep.verdict));
}

void cmd_sweep(Config& cfg, const fs::path& out_dir, std::ostream& log, unsigned jobs) {
    const auto ds = cfg.get_list("d", {3.0});
    const auto ns = cfg.get_list("n", {2.5});
    const auto cs = cfg.get_list("c", {1.7});
    const auto opts = search_options(cfg);
    cfg.reject_unused();

    struct Row {
        profile::ProfileParams p;
        double mu_c = NAN, Q_tau = NAN, Q_star = NAN, k = NAN, c_bar = NAN;
        int code = 0;
        std::string error;
    };
    std::vector<Row> rows;
    for (double d : ds)
        for (double n : ns)
            for (double c : cs) {
                Row row;
                row.p = {d, n, c, 0.0};
                rows.push_back(std::move(row));
            }

    Run run("sweep", out_dir);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            auto& row = rows[i];
            try {
                const auto res = profile::find_mu_c(row.p, opts);
                row.mu_c = res.mu_c;
                row.Q_tau = res.solution.Q_tau;
                row.Q_star = res.solution.Q_star;
                row.c_bar = profile::physical_speed(res.solution);
                if (const auto decay = profile::decay_check(res.solution)) row.k = decay->k;
            } catch (const Error& e) {
                row.code = exit_code_of(e.kind());
                row.error = e.what();
            } catch (const std::exception& e) {
                row.code = 2;
                row.error = e.what();
            }
        }
    };
    const unsigned n_workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(rows.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    auto out = open_out(run.path("sweep.csv"));
    auto cell = [](double v) { return std::isfinite(v) ? format_double(v) : std::string(); };
    out << "d,n,c,mu_c,Q_tau,Q_star,k,c_bar,exit_code,error\n";
    std::size_t failed = 0;
    for (const auto& r : rows) {
        out << cell(r.p.d) << ',' << cell(r.p.n) << ',' << cell(r.p.c) << ',' << cell(r.mu_c) << ',' << cell(r.Q_tau)
            << ',' << cell(r.Q_star) << ',' << cell(r.k) << ',' << cell(r.c_bar) << ',' << r.code << ','
            << csv_field(r.error) << "\n";
        if (r.code != 0) ++failed;
    }
    out.close();
    run.finish(cfg);
    fmt::print(log, "{} points, {} failed\n", rows.size(), failed);
}

void cmd_embed(Config& cfg, const fs::path& out_dir, std::ostream& log) {
    const auto source = cfg.get_string("profile", "");
    if (source.empty()) throw InvalidArgument("embed: set profile to a shoot run directory");
    const auto phi = embed_profile(cfg, source);
    cfg.reject_unused();

    Run run("embed", out_dir);
    save_snapshot(run.path("field.bin"), phi);
    const double s = default_monitor_index(phi.grid().dim());
    Run::write_json(run.path("field.json"),
                    json{{"t", 0.0}, {"step", 0}, {"monitor", blowup_monitor(phi, s)}, {"config_hash", cfg.hash()}});
    run.finish(cfg);
    const auto st = field_stats(phi);
    fmt::print(log, "embedded on {} points, side {:.6g}, peak {:.12g}\n", phi.size(), phi.grid().length(0), st.max);
}

void cmd_diagnose(Config& cfg, const fs::path& out_dir, std::ostream& log) {
    const auto kind = cfg.get_string("kind", "dispersion");
    if (kind == "dispersion") {
        const auto grid = grid_from_config(cfg, 2.0 * std::numbers::pi);
        const double n = cfg.get_double("n", 2.0);
        const auto mode_real = cfg.get_list("mode", std::vector<double>(static_cast<std::size_t>(grid.dim()), 1.0));
        DispersionOptions o;
        o.epsilon = cfg.get_double("epsilon", o.epsilon);
        o.t_end = cfg.get_double("t_end", o.t_end);
        o.dt = cfg.get_double("dt", o.dt);
        o.elliptic_tol = cfg.get_double("elliptic_tol", o.elliptic_tol);
        cfg.reject_unused();
        std::vector<int> mode;
        for (double m : mode_real) {
            if (m != std::round(m)) throw InvalidArgument("config: mode entries must be integers");
            mode.push_back(static_cast<int>(m));
        }

        Run run("diagnose", out_dir);
        const auto fit = fit_dispersion(grid, n, mode, o);
        json dj{{"k", fit.k},
                {"omega_formula", fit.omega_formula},
                {"omega_measured", fit.omega_measured},
                {"epsilon", fit.epsilon}};
        Run::write_json(run.path("dispersion.json"), dj);
        run.finish(cfg);
        fmt::print(log, "omega measured {:.10g}, formula {:.10g}, relative error {:.3e}\n", fit.omega_measured,
                   fit.omega_formula, std::abs(fit.omega_measured / fit.omega_formula - 1.0));
        return;
    }
    if (kind == "energy") {
        const auto source = cfg.get_string("run", "");
        ConservedEnergyParams ep;
        ep.n = cfg.get_double("n", ep.n);
        ep.m = cfg.get_double("m", ep.m);
        cfg.reject_unused();
        const auto snaps = list_snapshots(source);
        if (snaps.empty()) throw IoError("no snapshots in " + source);

        Run run("diagnose", out_dir);
        auto out = open_out(run.path("energy.csv"));
        out << "step,t,energy,mass\n";
        double e0 = 0.0, m0 = 0.0, max_de = 0.0, max_dm = 0.0;
        for (std::size_t i = 0; i < snaps.size(); ++i) {
            const auto phi = load_snapshot(snaps[i].bin);
            const double e = conserved_energy(phi, ep), m = measure_mass(phi);
            if (i == 0) {
                e0 = e;
                m0 = m;
            }
            max_de = std::max(max_de, std::abs(e - e0));
            max_dm = std::max(max_dm, std::abs(m - m0));
            out << snaps[i].step << ',' << format_double(snaps[i].t) << ',' << format_double(e) << ','
                << format_double(m) << "\n";
        }
        out.close();
        json ej{{"energy_initial", e0},
                {"energy_max_drift", max_de},
                {"energy_relative_drift", e0 != 0.0 ? json(max_de / std::abs(e0)) : json(nullptr)},
                {"mass_initial", m0},
                {"mass_max_drift", max_dm},
                {"mass_relative_drift", m0 != 0.0 ? json(max_dm / std::abs(m0)) : json(nullptr)}};
        Run::write_json(run.path("energy.json"), ej);
        run.finish(cfg);
        fmt::print(log, "energy drift {:.3e} (initial {:.10g}), mass drift {:.3e}\n", max_de, e0, max_dm);
        return;
    }
    if (kind == "speed") {
        const auto source = cfg.get_string("run", "");
        const double bound = cfg.get_double("speed_bound", 0.0);
        cfg.reject_unused();
        const auto entries = list_snapshots(source);
        std::vector<Snapshot> snaps;
        for (const auto& e : entries) {
            auto phi = load_snapshot(e.bin);
            snaps.push_back({e.t, e.step, std::move(phi), NAN});
        }

        Run run("diagnose", out_dir);
        const auto track = track_peak(snaps, bound);
        Run::write_json(run.path("speed.json"),
                        json{{"speed", track.speed}, {"times", track.times}, {"positions", track.positions}});
        run.finish(cfg);
        fmt::print(log, "peak speed {:.10g}\n", track.speed);
        return;
    }
    throw InvalidArgument("diagnose: kind must be dispersion, energy or speed");
}

}  // namespace magma::lab
