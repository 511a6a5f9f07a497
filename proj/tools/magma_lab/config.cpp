#include "config.hpp"

#include <openssl/sha.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "magma/error.hpp"

namespace magma::lab {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const auto t = trim(text);
    double v = 0.0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || end != t.data() + t.size() || !std::isfinite(v))
        throw InvalidArgument("config: '" + key + "' expects a number, got '" + text + "'");
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string git_blob_sha1(const std::string& data) {
    std::string framed = "blob " + std::to_string(data.size());
    framed.push_back('\0');
    framed += data;
    unsigned char digest[SHA_DIGEST_LENGTH];
    SHA1(reinterpret_cast<const unsigned char*>(framed.data()), framed.size(), digest);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned char b : digest) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 15]);
    }
    return out;
}

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;  // blank or TOML table header
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
        for (auto& ch : key)
            if (ch == '-') ch = '_';
        cfg.raw_[key] = value;
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void Config::merge(const Config& other) {
    for (const auto& [k, v] : other.raw_) raw_[k] = v;
}

double Config::get_double(const std::string& key, double fallback) {
    const double v = has(key) ? parse_double(key, raw_.at(key)) : fallback;
    resolved_[key] = format_double(v);
    return v;
}

std::optional<double> Config::get_optional_double(const std::string& key) {
    if (!has(key) || trim(raw_.at(key)).empty()) {
        resolved_[key] = "";
        return std::nullopt;
    }
    return get_double(key, 0.0);
}

long long Config::get_int(const std::string& key, long long fallback) {
    long long v = fallback;
    if (has(key)) {
        const auto t = trim(raw_.at(key));
        auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || end != t.data() + t.size())
            throw InvalidArgument("config: '" + key + "' expects an integer, got '" + raw_.at(key) + "'");
    }
    resolved_[key] = std::to_string(v);
    return v;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
    auto v = has(key) ? raw_.at(key) : fallback;
    resolved_[key] = v;
    return v;
}

std::optional<std::string> Config::get_optional_string(const std::string& key) {
    if (!has(key) || raw_.at(key).empty()) {
        resolved_[key] = "";
        return std::nullopt;
    }
    return get_string(key, "");
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) {
    std::vector<double> out;
    if (!has(key)) {
        out = fallback;
    } else {
        std::stringstream ss(raw_.at(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (trim(item).empty()) continue;
            out.push_back(parse_double(key, item));
        }
    }
    std::string text;
    for (std::size_t i = 0; i < out.size(); ++i) text += (i ? "," : "") + format_double(out[i]);
    resolved_[key] = text;
    return out;
}

void Config::reject_unused() const {
    for (const auto& [k, v] : raw_)
        if (!resolved_.count(k)) throw InvalidArgument("config: unknown key '" + k + "'");
}

std::string Config::canonical_text() const {
    std::string out;
    for (const auto& [k, v] : resolved_) out += k + "=" + v + "\n";
    return out;
}

std::string Config::hash() const { return git_blob_sha1(canonical_text()); }

}  // namespace magma::lab
