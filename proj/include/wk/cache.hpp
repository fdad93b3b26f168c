#pragma once

#include <string>

#include "wk/engine.hpp"

namespace wk {

/// Plain-text correlator store, one record per line after the "WKCACHE 1"
/// header:   g;d1,...,dn;p/q   with the degrees sorted descending and the
/// value always in p/q form. Loads into the engine memo; a missing file is
/// a valid empty cache. Malformed content raises io_error naming the line;
/// an unsupported version is refused with an upgrade hint. Returns the
/// number of records loaded.
std::size_t cache_load(CorrelatorEngine& engine, const std::string& path);

/// Rewrites the file from the engine memo in canonical order (the snapshot
/// order: genus, then insertion count, then degrees). Writes to a sibling
/// temporary and renames, so readers never see a half-written file. Returns
/// the record count.
std::size_t cache_flush(const CorrelatorEngine& engine, const std::string& path);

/// Advisory exclusive lock on the sidecar "<path>.lock", held for the
/// lifetime of the object. A second holder raises io_error immediately
/// rather than blocking. The sidecar is left in place on release; only the
/// flock matters.
class CacheLock {
public:
    explicit CacheLock(const std::string& cache_path);
    ~CacheLock();
    CacheLock(const CacheLock&) = delete;
    CacheLock& operator=(const CacheLock&) = delete;

private:
    int fd_ = -1;
};

}  // namespace wk
