#pragma once

#include "wk/rational.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace wk {

/// Integer partition: weakly decreasing positive parts. The empty partition
/// is the multiplicative unit everywhere it appears as a key.
class Partition {
public:
    Partition() = default;

    /// Accepts parts in any order, drops zeros, sorts descending.
    explicit Partition(std::vector<uint32_t> parts);

    /// Trusts the input to be descending and zero-free (checked).
    static Partition from_sorted(std::vector<uint32_t> parts);

    const std::vector<uint32_t>& parts() const { return parts_; }
    std::size_t length() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }
    uint64_t size() const;                       // sum of parts
    uint32_t part(std::size_t i) const { return parts_[i]; }
    uint32_t largest() const { return parts_.empty() ? 0 : parts_.front(); }
    uint32_t smallest() const { return parts_.empty() ? 0 : parts_.back(); }

    uint32_t mult(uint32_t value) const;         // multiplicity of a part value
    Partition conjugate() const;

    Partition appended(uint32_t part) const;     // union with one extra part
    Partition removed_at(std::size_t i) const;   // drop parts_[i]
    Partition dropped_largest() const;           // drop parts_[0] (pre: nonempty)

    /// Adds 1 to parts_[i]; valid only when i is a step index.
    Partition incremented_at(std::size_t i) const;

    /// Indices i where parts_[i] may grow by 1 without breaking monotonicity:
    /// index 0 plus every i with parts_[i] < parts_[i-1].
    std::vector<std::size_t> step_indices() const;

    /// Product over distinct part values of (multiplicity!).
    Integer zstab() const;

    std::string to_string() const;               // "(5,5,2)" or "()"

    bool operator==(const Partition&) const = default;
    /// Lexicographic order on the (descending) part vectors.
    std::strong_ordering operator<=>(const Partition& o) const {
        return parts_ <=> o.parts_;
    }

private:
    std::vector<uint32_t> parts_;
};

struct PartitionHash {
    std::size_t operator()(const Partition& p) const noexcept;
};

/// All partitions of `size` with parts <= max_part and length <= max_len,
/// in descending lexicographic order, e.g. 4 -> (4),(3,1),(2,2),(2,1,1),(1,1,1,1).
std::vector<Partition> partitions_of(uint64_t size, uint32_t max_part, std::size_t max_len);
std::vector<Partition> partitions_of(uint64_t size);

/// All partitions with min_part <= parts <= max_part and size <= max_size
/// (the empty partition included), ordered by size then descending lex.
std::vector<Partition> partitions_up_to(uint64_t max_size, uint32_t min_part, uint32_t max_part);

}  // namespace wk
