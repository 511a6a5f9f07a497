#include "initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "magma/error.hpp"
#include "magma/profile.hpp"
#include "magma/snapshot.hpp"

namespace magma::lab {
namespace {

double parse_real(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw InvalidArgument("init: bad " + what + " '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

Field modes_field(const TorusGrid& grid, const std::string& body) {
    const auto parts = split(body, ';');
    if (parts.empty()) throw InvalidArgument("init: modes needs a base value");
    const double base = parse_real(parts[0], "base value");
    struct Mode {
        double amp;
        std::vector<double> k;
    };
    std::vector<Mode> modes;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto at = parts[i].find('@');
        if (at == std::string::npos) throw InvalidArgument("init: mode '" + parts[i] + "' must be AMP@m1,...");
        Mode m{parse_real(parts[i].substr(0, at), "amplitude"), {}};
        const auto ints = split(parts[i].substr(at + 1), ',');
        if (ints.size() != static_cast<std::size_t>(grid.dim()))
            throw InvalidArgument("init: mode '" + parts[i] + "' needs one integer per axis");
        for (int j = 0; j < grid.dim(); ++j) {
            const double mj = parse_real(ints[static_cast<std::size_t>(j)], "mode number");
            if (mj != std::round(mj)) throw InvalidArgument("init: mode numbers must be integers");
            m.k.push_back(grid.wavenumber(j, static_cast<int>(mj)));
        }
        modes.push_back(std::move(m));
    }
    return Field::sample(grid, [&](std::span<const double> x) {
        double v = base;
        for (const auto& m : modes) {
            double th = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) th += m.k[j] * x[j];
            v += m.amp * std::cos(th);
        }
        return v;
    });
}

/// Random trigonometric polynomial with |m_j| <= 4, rescaled to max |phi - 1| = amp.
Field random_field(const TorusGrid& grid, const std::string& body) {
    const auto at = body.find('@');
    if (at == std::string::npos) throw InvalidArgument("init: random needs AMP@SEED");
    const double amp = parse_real(body.substr(0, at), "amplitude");
    const double seed = parse_real(body.substr(at + 1), "seed");
    if (!(amp > 0.0 && amp < 1.0)) throw InvalidArgument("init: random amplitude must lie in (0, 1)");
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    constexpr int kMax = 4;
    struct Term {
        std::vector<double> k;
        double a, b;
    };
    std::vector<Term> terms;
    std::vector<int> m(static_cast<std::size_t>(grid.dim()), -kMax);
    while (true) {
        bool nonzero = false;
        for (int v : m) nonzero = nonzero || v != 0;
        if (nonzero) {
            Term t{{}, u(rng), u(rng)};
            double norm2 = 0.0;
            for (int j = 0; j < grid.dim(); ++j) {
                t.k.push_back(grid.wavenumber(j, m[static_cast<std::size_t>(j)]));
                norm2 += static_cast<double>(m[static_cast<std::size_t>(j)] * m[static_cast<std::size_t>(j)]);
            }
            const double decay = std::exp(-0.5 * norm2);
            t.a *= decay;
            t.b *= decay;
            terms.push_back(std::move(t));
        }
        std::size_t j = 0;
        while (j < m.size() && ++m[j] > kMax) m[j++] = -kMax;
        if (j == m.size()) break;
    }
    auto raw = Field::sample(grid, [&](std::span<const double> x) {
        double v = 0.0;
        for (const auto& t : terms) {
            double th = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) th += t.k[j] * x[j];
            v += t.a * std::cos(th) + t.b * std::sin(th);
        }
        return v;
    });
    const auto st = field_stats(raw);
    const double peak = std::max(std::abs(st.min), std::abs(st.max));
    return raw.map([&](double v) { return 1.0 + amp * v / peak; });
}

}  // namespace

TorusGrid grid_from_config(Config& cfg, double default_length, long long default_d) {
    const auto d = cfg.get_int("d", default_d);
    const auto n = cfg.get_int("n_points", 64);
    const double length = cfg.get_double("length", default_length);
    if (d < 1 || d > 3) throw InvalidArgument("config: d must be 1, 2 or 3 for fields");
    if (n < 8) throw InvalidArgument("config: n_points must be at least 8");
    return TorusGrid(std::vector<std::size_t>(static_cast<std::size_t>(d), static_cast<std::size_t>(n)),
                     std::vector<double>(static_cast<std::size_t>(d), length));
}

Field embed_profile(Config& cfg, const std::string& run_dir) {
    const auto archive = profile::load_profile_archive(std::filesystem::path(run_dir) / "profile.csv");
    const double widths = cfg.get_double("widths", 40.0);
    const double side = widths * profile::physical_half_width(archive.solution);
    auto grid = grid_from_config(cfg, side, static_cast<long long>(archive.solution.params.d));
    if (static_cast<double>(grid.dim()) != archive.solution.params.d)
        throw InvalidArgument("profile was built for d = " + format_double(archive.solution.params.d) +
                              " but the grid has d = " + std::to_string(grid.dim()));
    std::vector<double> centre(static_cast<std::size_t>(grid.dim()));
    for (int j = 0; j < grid.dim(); ++j) centre[static_cast<std::size_t>(j)] = 0.5 * grid.length(j);
    const auto given = cfg.get_list("center", centre);
    if (given.size() != centre.size()) throw InvalidArgument("config: center needs one coordinate per axis");
    return profile::embed_on_torus(archive.solution, grid, given);
}

Field build_initial(Config& cfg) {
    const auto spec = cfg.get_string("init", "constant:1");
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw InvalidArgument("init: expected KIND:ARGS, got '" + spec + "'");
    const auto kind = spec.substr(0, colon);
    const auto body = spec.substr(colon + 1);

    if (kind == "file") return load_snapshot(body);
    if (kind == "constant") return Field::constant(grid_from_config(cfg, 2.0 * std::numbers::pi), parse_real(body, "constant"));
    if (kind == "modes") return modes_field(grid_from_config(cfg, 2.0 * std::numbers::pi), body);
    if (kind == "random") return random_field(grid_from_config(cfg, 2.0 * std::numbers::pi), body);
    if (kind == "profile") return embed_profile(cfg, body);
    throw InvalidArgument("init: unknown kind '" + kind + "'");
}

}  // namespace magma::lab
