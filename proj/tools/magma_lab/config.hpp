#ifndef MAGMA_LAB_CONFIG_HPP
#define MAGMA_LAB_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace magma::lab {

/// Flat key=value configuration. Layers are merged defaults <- file <- flags;
/// every key read through a getter is recorded in the resolved set, which is
/// what manifests echo and hash.
class Config {
public:
    Config() = default;

    /// Parses "key = value" lines; '#' starts a comment, values may be quoted.
    static Config parse(const std::string& text);
    static Config load(const std::filesystem::path& path);

    /// Later layers win.
    void merge(const Config& other);
    void set(const std::string& key, const std::string& value) { raw_[key] = value; }
    bool has(const std::string& key) const { return raw_.count(key) != 0; }

    double get_double(const std::string& key, double fallback);
    std::optional<double> get_optional_double(const std::string& key);
    long long get_int(const std::string& key, long long fallback);
    std::string get_string(const std::string& key, const std::string& fallback);
    std::optional<std::string> get_optional_string(const std::string& key);
    /// Comma-separated list of reals; empty string gives an empty list.
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback);

    /// Throws InvalidArgument naming any key that was supplied but never read.
    void reject_unused() const;

    const std::map<std::string, std::string>& resolved() const noexcept { return resolved_; }
    /// "key=value\n" lines in key order.
    std::string canonical_text() const;
    /// SHA-1 of the canonical text framed as a git blob ("blob <len>\0...").
    std::string hash() const;

private:
    std::map<std::string, std::string> raw_;
    std::map<std::string, std::string> resolved_;
};

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Hex SHA-1 of `data` framed as a git blob.
std::string git_blob_sha1(const std::string& data);

}  // namespace magma::lab

#endif  // MAGMA_LAB_CONFIG_HPP
