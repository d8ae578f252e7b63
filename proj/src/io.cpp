#include "qgol/io.hpp"

#include "qgol/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace qgol {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out)
{
    if (s.empty())
        return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size();
}

} // namespace

Config Config::parse(std::istream& is, const std::string& source)
{
    Config cfg;
    cfg.source_ = source;
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw UsageError(source + ":" + std::to_string(line) + ": expected `key = value`, got `" + body + "`");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            throw UsageError(source + ":" + std::to_string(line) + ": missing key before `=`");
        if (cfg.entries_.count(key))
            throw UsageError(source + ":" + std::to_string(line) + ": duplicate key `" + key + "`");
        cfg.entries_[key] = Entry{value, line};
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file " + path.string());
    return parse(in, path.string());
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = Entry{value, 0}; }

std::string Config::where(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end() || it->second.line == 0)
        return "key `" + key + "`";
    return source_ + ":" + std::to_string(it->second.line) + ": key `" + key + "`";
}

const Config::Entry& Config::entry(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw UsageError("missing required key `" + key + "`" + (source_.empty() ? "" : " in " + source_));
    return it->second;
}

std::string Config::text(const std::string& key) const { return entry(key).value; }

std::string Config::text(const std::string& key, const std::string& fallback) const
{
    return has(key) ? text(key) : fallback;
}

long long Config::integer(const std::string& key) const
{
    const auto& v = entry(key).value;
    char* end = nullptr;
    errno = 0;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || errno != 0 || end != v.c_str() + v.size())
        throw UsageError(where(key) + ": expected an integer, got `" + v + "`");
    return x;
}

long long Config::integer(const std::string& key, long long fallback) const
{
    return has(key) ? integer(key) : fallback;
}

double Config::real(const std::string& key) const
{
    const auto& v = entry(key).value;
    double x = 0.0;
    if (!parse_double(v, x))
        throw UsageError(where(key) + ": expected a number, got `" + v + "`");
    return x;
}

double Config::real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

bool Config::flag(const std::string& key, bool fallback) const
{
    if (!has(key))
        return fallback;
    const auto& v = entry(key).value;
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw UsageError(where(key) + ": expected a boolean, got `" + v + "`");
}

std::vector<double> Config::reals(const std::string& key) const
{
    const auto& v = entry(key).value;
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(v);
        std::string part;
        while (std::getline(ss, part, ':'))
            parts.push_back(trim(part));
        double lo = 0.0;
        double hi = 0.0;
        double n = 0.0;
        if (parts.size() != 3 || !parse_double(parts[0], lo) || !parse_double(parts[1], hi) ||
            !parse_double(parts[2], n) || n < 1 || n != static_cast<double>(static_cast<long long>(n)))
            throw UsageError(where(key) + ": expected `lo:hi:n`, got `" + v + "`");
        const auto count = static_cast<long long>(n);
        for (long long i = 0; i < count; ++i)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
        return out;
    }
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double x = 0.0;
        if (!parse_double(trim(item), x))
            throw UsageError(where(key) + ": bad list entry `" + trim(item) + "`");
        out.push_back(x);
    }
    if (out.empty())
        throw UsageError(where(key) + ": empty list");
    return out;
}

void Config::require_known(const std::set<std::string>& known) const
{
    for (const auto& [key, e] : entries_)
        if (!known.count(key))
            throw UsageError(where(key) + ": unknown key");
}

std::map<std::string, std::string> Config::values() const
{
    std::map<std::string, std::string> out;
    for (const auto& [k, e] : entries_)
        out[k] = e.value;
    return out;
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 initialisation failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0)
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

std::string format_real(double x)
{
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

} // namespace qgol
