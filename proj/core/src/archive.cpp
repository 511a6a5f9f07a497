#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "magma/profile.hpp"

namespace magma::profile {
namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double parse_num(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size())
        throw IoError("profile archive: cannot parse number '" + std::string(s) + "'");
    return v;
}

}  // namespace

void write_profile_archive(std::ostream& out, const ProfileArchive& a) {
    const auto& sol = a.solution;
    const auto& p = sol.params;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out << "# d=" << num(p.d) << ", n=" << num(p.n) << ", c=" << num(p.c) << ", mu_c=" << num(p.mu)
        << ", Q_tau=" << num(sol.Q_tau) << ", Q_star=" << num(sol.Q_star)
        << ", k=" << num(a.decay ? a.decay->k : nan) << ", M=" << num(a.decay ? a.decay->M : nan) << "\n";
    out << "r,Q,Q_r,Q_rr\n";
    const auto& s = sol.samples;
    for (std::size_t i = 0; i < s.size(); ++i)
        out << num(s.r[i]) << ',' << num(s.Q[i]) << ',' << num(s.Q_r[i]) << ',' << num(s.Q_rr[i]) << "\n";
    if (!out) throw IoError("profile archive: write failed");
}

ProfileArchive read_profile_archive(std::istream& in) {
    std::map<std::string, double> header;
    std::string line;
    bool columns_seen = false;
    ProfileArchive a;
    auto& s = a.solution.samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::stringstream ss(line.substr(1));
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto eq = item.find('=');
                if (eq == std::string::npos) continue;
                auto key = item.substr(0, eq);
                key.erase(0, key.find_first_not_of(' '));
                header[key] = parse_num(std::string_view(item).substr(eq + 1));
            }
            continue;
        }
        if (!columns_seen) {
            if (line.rfind("r,Q,Q_r,Q_rr", 0) != 0) throw IoError("profile archive: missing column header");
            columns_seen = true;
            continue;
        }
        std::string_view rest(line);
        double v[4];
        for (int j = 0; j < 4; ++j) {
            const auto comma = rest.find(',');
            v[j] = parse_num(rest.substr(0, comma));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        s.r.push_back(v[0]);
        s.Q.push_back(v[1]);
        s.Q_r.push_back(v[2]);
        s.Q_rr.push_back(v[3]);
    }
    for (const char* key : {"d", "n", "c", "mu_c", "Q_tau", "Q_star"})
        if (!header.count(key)) throw IoError(std::string("profile archive: header lacks ") + key);
    a.solution.params = {header["d"], header["n"], header["c"], header["mu_c"]};
    a.solution.Q_tau = header["Q_tau"];
    a.solution.Q_star = header["Q_star"];
    if (header.count("k") && !std::isnan(header["k"])) {
        DecayFit fit{};
        fit.k = header["k"];
        fit.M = header.count("M") ? header["M"] : std::numeric_limits<double>::quiet_NaN();
        fit.L = dF1_dQ(a.solution.Q_tau, a.solution.params);
        a.decay = fit;
    }
    return a;
}

void save_profile_archive(const std::filesystem::path& path, const ProfileArchive& archive) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_profile_archive(out, archive);
}

ProfileArchive load_profile_archive(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_profile_archive(in);
}

}  // namespace magma::profile
