#include "wk/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace wk {

namespace {

constexpr const char* kHeader = "WKCACHE 1";

[[noreturn]] void bad_line(const std::string& path, std::size_t line, const std::string& what) {
    std::ostringstream os;
    os << path << ":" << line << ": " << what;
    throw io_error(os.str());
}

// Strict decimal-digits-only parse; no sign, no blanks, no overflow.
bool parse_u32(const std::string& text, uint32_t& out) {
    if (text.empty()) return false;
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

std::size_t cache_load(CorrelatorEngine& engine, const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) return 0;  // absent file is an empty cache
    std::string line;
    if (!std::getline(in, line)) bad_line(path, 1, "missing cache header");
    if (line != kHeader) {
        if (line.rfind("WKCACHE ", 0) == 0)
            throw io_error(path + ": cache version " + line.substr(8) +
                           " is not supported; this build reads version 1 "
                           "(delete the file or regenerate it with this tool)");
        bad_line(path, 1, "not a correlator cache (expected '" + std::string(kHeader) + "')");
    }
    std::set<CorrelatorKey> seen;
    std::size_t count = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::string> fields = split(line, ';');
        if (fields.size() != 3) bad_line(path, lineno, "expected 'g;d1,...,dn;p/q'");
        CorrelatorKey key;
        if (!parse_u32(fields[0], key.genus)) bad_line(path, lineno, "unreadable genus");
        for (const std::string& part : split(fields[1], ',')) {
            uint32_t d = 0;
            if (!parse_u32(part, d)) bad_line(path, lineno, "unreadable degree list");
            key.degrees.push_back(d);
        }
        for (std::size_t i = 1; i < key.degrees.size(); ++i)
            if (key.degrees[i - 1] < key.degrees[i])
                bad_line(path, lineno, "degrees not sorted descending");
        if (!CorrelatorEngine::stable(key.genus, key.degrees.size()))
            bad_line(path, lineno, "unstable surface type");
        uint64_t total = 0;
        for (uint32_t d : key.degrees) total += d;
        if (total != CorrelatorEngine::dimension(key.genus, key.degrees.size()))
            bad_line(path, lineno, "degree sum does not match the dimension");
        Rational value;
        try {
            value = parse_rational(fields[2]);
        } catch (const domain_error&) {
            bad_line(path, lineno, "unreadable value (want p/q)");
        }
        if (!seen.insert(key).second) bad_line(path, lineno, "duplicate key");
        engine.preload(std::move(key), std::move(value));
        ++count;
    }
    return count;
}

std::size_t cache_flush(const CorrelatorEngine& engine, const std::string& path) {
    const std::string tmp = path + ".tmp";
    std::size_t count = 0;
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out.is_open()) throw io_error("cannot write cache file " + tmp);
        out << kHeader << "\n";
        for (const auto& [key, value] : engine.snapshot()) {
            out << key.genus << ';';
            for (std::size_t i = 0; i < key.degrees.size(); ++i)
                out << (i ? "," : "") << key.degrees[i];
            out << ';' << fraction_string(value) << "\n";
            ++count;
        }
        out.flush();
        if (!out) throw io_error("write failed on cache file " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw io_error("cannot replace cache file " + path);
    return count;
}

CacheLock::CacheLock(const std::string& cache_path) {
    const std::string lock_path = cache_path + ".lock";
    fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) throw io_error("cannot open lock file " + lock_path);
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw io_error("cache " + cache_path + " is in use by another process");
    }
}

CacheLock::~CacheLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

}  // namespace wk
