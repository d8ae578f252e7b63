#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qgol {

/// Flat `key = value` configuration with `#` comments. Every accessor that
/// fails names the key and, when it came from a file, the line.
class Config {
public:
    static Config parse(std::istream& is, const std::string& source = "<config>");
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    void set(const std::string& key, const std::string& value);

    std::string text(const std::string& key) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    long long integer(const std::string& key) const;
    long long integer(const std::string& key, long long fallback) const;
    double real(const std::string& key) const;
    double real(const std::string& key, double fallback) const;
    bool flag(const std::string& key, bool fallback) const;

    /// Comma-separated reals, or `lo:hi:n` for n evenly spaced values from lo to hi.
    std::vector<double> reals(const std::string& key) const;

    /// Throws UsageError on the first key outside `known`.
    void require_known(const std::set<std::string>& known) const;

    std::map<std::string, std::string> values() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::string where(const std::string& key) const;
    const Entry& entry(const std::string& key) const;

    std::string source_;
    std::map<std::string, Entry> entries_;
};

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_real(double x);

} // namespace qgol
