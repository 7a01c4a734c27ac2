/*
Copyright 2026 The permreduce Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "permreduce/error.hpp"
#include "permreduce/group.hpp"
#include "permreduce/permutation.hpp"

namespace permreduce {

/// Fixed-universe bitset over {0..n-1}.
class SourceSet {
public:
    SourceSet() = default;
    explicit SourceSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

    static SourceSet single(std::size_t universe, std::size_t member) {
        SourceSet s(universe);
        s.insert(member);
        return s;
    }

    static SourceSet full(std::size_t universe) {
        SourceSet s(universe);
        for (std::size_t x = 0; x < universe; ++x) s.insert(x);
        return s;
    }

    std::size_t universe() const noexcept { return universe_; }

    void insert(std::size_t x) { words_[x / 64] |= std::uint64_t{1} << (x % 64); }
    bool contains(std::size_t x) const { return (words_[x / 64] >> (x % 64)) & 1U; }

    std::size_t size() const noexcept {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    bool empty() const noexcept { return size() == 0; }
    bool is_full() const noexcept { return size() == universe_; }

    bool intersects(const SourceSet& other) const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & other.words_[k]) return true;
        return false;
    }

    SourceSet& operator|=(const SourceSet& other) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
        return *this;
    }

    friend SourceSet operator|(SourceSet a, const SourceSet& b) { return a |= b; }

    /// Members in increasing order.
    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w) {
                out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return out;
    }

    std::size_t hash() const noexcept {
        std::size_t h = universe_;
        for (auto w : words_) h = h * 0x9E3779B97F4A7C15ULL ^ std::hash<std::uint64_t>{}(w);
        return h;
    }

    friend bool operator==(const SourceSet&, const SourceSet&) = default;
    friend auto operator<=>(const SourceSet&, const SourceSet&) = default;

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BlockId {
    std::size_t index = 0;  // row i
    std::size_t source = 0; // column j: the process that owned it initially
};

/// Value carried by block (i, j). Injective over blocks, so an exact checksum
/// over a contribution set is a second witness for that set.
constexpr std::uint64_t block_value(std::size_t index, std::size_t source, std::size_t p) noexcept {
    return static_cast<std::uint64_t>(index) * p + source + 1;
}

/// Sum of block_value over every source: the checksum of a completed block.
constexpr std::uint64_t full_checksum(std::size_t index, std::size_t p) noexcept {
    return static_cast<std::uint64_t>(index) * p * p + static_cast<std::uint64_t>(p) * (p + 1) / 2;
}

struct BlockContent {
    std::size_t index = 0;
    SourceSet contributions;
    std::uint64_t checksum = 0;

    bool is_complete() const {
        return contributions.is_full() && checksum == full_checksum(index, contributions.universe());
    }
};

enum class VectorId : std::uint32_t {};

constexpr std::uint32_t to_underlying(VectorId id) noexcept { return static_cast<std::uint32_t>(id); }

/// A set of P blocks, one per index, where block i sits on process placement(i).
struct DistributedVector {
    VectorId id{};
    Permutation placement;
    std::vector<BlockContent> blocks;

    std::size_t degree() const noexcept { return placement.degree(); }
    bool is_complete() const {
        for (const auto& b : blocks)
            if (!b.is_complete()) return false;
        return true;
    }
};

struct VectorSet {
    std::size_t degree = 0;
    std::vector<DistributedVector> vectors;
};

/// Q_k for k = 0..P-1: placement element(k) o h, block i holding u_{i, t_k(h(i))}.
/// Vector ids equal k.
inline VectorSet initial_vector_set(const PermutationGroup& group, const Permutation& h) {
    const std::size_t p = group.degree();
    if (h.degree() != p)
        throw Error(ErrorKind::degree_mismatch, "h has degree " + std::to_string(h.degree()) +
                                                    ", group has degree " + std::to_string(p));
    VectorSet set{p, {}};
    set.vectors.reserve(p);
    for (std::size_t k = 0; k < p; ++k) {
        DistributedVector v{VectorId(static_cast<std::uint32_t>(k)), compose(group.element(k), h), {}};
        v.blocks.reserve(p);
        for (std::size_t i = 0; i < p; ++i) {
            const std::size_t source = v.placement(i);
            v.blocks.push_back({i, SourceSet::single(p, source), block_value(i, source, p)});
        }
        set.vectors.push_back(std::move(v));
    }
    return set;
}

/// One parallel exchange: the process holding block i sends it to op(that process).
inline DistributedVector apply_operator(const Permutation& op, const DistributedVector& v) {
    if (op.degree() != v.degree())
        throw Error(ErrorKind::degree_mismatch, "operator degree " + std::to_string(op.degree()) +
                                                    " vs vector degree " + std::to_string(v.degree()));
    DistributedVector out = v;
    out.placement = compose(op, v.placement);
    return out;
}

/// Per-index union of two co-located vectors. The result keeps a's id.
inline DistributedVector combine(const DistributedVector& a, const DistributedVector& b) {
    if (a.placement != b.placement)
        throw Error(ErrorKind::placement_mismatch,
                    "vectors " + std::to_string(to_underlying(a.id)) + " and " +
                        std::to_string(to_underlying(b.id)) + " are placed differently");
    DistributedVector out = a;
    for (std::size_t i = 0; i < out.blocks.size(); ++i) {
        if (a.blocks[i].contributions.intersects(b.blocks[i].contributions))
            throw Error(ErrorKind::overlapping_contribution,
                        "vectors " + std::to_string(to_underlying(a.id)) + " and " +
                            std::to_string(to_underlying(b.id)) + " share a source at index " +
                            std::to_string(i));
        out.blocks[i].contributions |= b.blocks[i].contributions;
        out.blocks[i].checksum += b.blocks[i].checksum;
    }
    return out;
}

inline Process block_owner(const DistributedVector& v, std::size_t index) {
    if (index >= v.degree())
        throw Error(ErrorKind::out_of_range, "block index " + std::to_string(index) + " out of range");
    return v.placement(index);
}

} // namespace permreduce

template <>
struct std::hash<permreduce::SourceSet> {
    std::size_t operator()(const permreduce::SourceSet& s) const noexcept { return s.hash(); }
};
