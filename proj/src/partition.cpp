#include "wk/partition.hpp"

#include <algorithm>
#include <functional>

namespace wk {

Partition::Partition(std::vector<uint32_t> parts) : parts_(std::move(parts)) {
    std::sort(parts_.begin(), parts_.end(), std::greater<uint32_t>());
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
}

Partition Partition::from_sorted(std::vector<uint32_t> parts) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] == 0 || (i > 0 && parts[i] > parts[i - 1]))
            throw domain_error("Partition::from_sorted: parts not descending/positive");
    }
    Partition p;
    p.parts_ = std::move(parts);
    return p;
}

uint64_t Partition::size() const {
    uint64_t s = 0;
    for (uint32_t p : parts_) s += p;
    return s;
}

uint32_t Partition::mult(uint32_t value) const {
    uint32_t m = 0;
    for (uint32_t p : parts_) m += (p == value);
    return m;
}

Partition Partition::conjugate() const {
    Partition c;
    if (parts_.empty()) return c;
    c.parts_.resize(parts_.front());
    for (uint32_t col = 0; col < parts_.front(); ++col) {
        uint32_t rows = 0;
        for (uint32_t p : parts_) rows += (p > col);
        c.parts_[col] = rows;
    }
    return c;
}

Partition Partition::appended(uint32_t part) const {
    if (part == 0) throw domain_error("Partition::appended: zero part");
    Partition r = *this;
    auto it = std::lower_bound(r.parts_.begin(), r.parts_.end(), part, std::greater<uint32_t>());
    r.parts_.insert(it, part);
    return r;
}

Partition Partition::removed_at(std::size_t i) const {
    if (i >= parts_.size()) throw domain_error("Partition::removed_at: index out of range");
    Partition r = *this;
    r.parts_.erase(r.parts_.begin() + static_cast<std::ptrdiff_t>(i));
    return r;
}

Partition Partition::dropped_largest() const {
    if (parts_.empty()) throw domain_error("Partition::dropped_largest: empty partition");
    return removed_at(0);
}

Partition Partition::incremented_at(std::size_t i) const {
    if (i >= parts_.size()) throw domain_error("Partition::incremented_at: index out of range");
    if (i > 0 && parts_[i] >= parts_[i - 1])
        throw domain_error("Partition::incremented_at: not a step index");
    Partition r = *this;
    ++r.parts_[i];
    return r;
}

std::vector<std::size_t> Partition::step_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < parts_.size(); ++i)
        if (i == 0 || parts_[i] < parts_[i - 1]) idx.push_back(i);
    return idx;
}

Integer Partition::zstab() const {
    Integer z = 1;
    std::size_t i = 0;
    while (i < parts_.size()) {
        std::size_t j = i;
        while (j < parts_.size() && parts_[j] == parts_[i]) ++j;
        z *= factorial(static_cast<long>(j - i));
        i = j;
    }
    return z;
}

std::string Partition::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(parts_[i]);
    }
    return s + ")";
}

std::size_t PartitionHash::operator()(const Partition& p) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (uint32_t v : p.parts()) h = (h ^ v) * 0x100000001b3ull;
    return h;
}

namespace {

void emit_partitions(uint64_t size, uint32_t max_part, std::size_t max_len,
                     std::vector<uint32_t>& stack, std::vector<Partition>& out) {
    if (size == 0) {
        out.push_back(Partition::from_sorted(stack));
        return;
    }
    if (max_len == 0) return;
    uint32_t hi = static_cast<uint32_t>(std::min<uint64_t>(size, max_part));
    for (uint32_t p = hi; p >= 1; --p) {
        // remaining parts are each <= p, so feasibility needs size - p <= p*(max_len-1)
        if (size - p > static_cast<uint64_t>(p) * (max_len - 1)) break;
        stack.push_back(p);
        emit_partitions(size - p, p, max_len - 1, stack, out);
        stack.pop_back();
    }
}

}  // namespace

std::vector<Partition> partitions_of(uint64_t size, uint32_t max_part, std::size_t max_len) {
    std::vector<Partition> out;
    std::vector<uint32_t> stack;
    if (size == 0) {
        out.emplace_back();
        return out;
    }
    if (max_part == 0 || max_len == 0) return out;
    emit_partitions(size, max_part, max_len, stack, out);
    return out;
}

std::vector<Partition> partitions_of(uint64_t size) {
    return partitions_of(size, size > 0 ? static_cast<uint32_t>(size) : 1, size);
}

std::vector<Partition> partitions_up_to(uint64_t max_size, uint32_t min_part, uint32_t max_part) {
    std::vector<Partition> out;
    for (uint64_t s = 0; s <= max_size; ++s) {
        for (auto& p : partitions_of(s, max_part, s)) {
            if (p.empty() || p.smallest() >= min_part) out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace wk
