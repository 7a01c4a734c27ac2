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

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "permreduce/error.hpp"

namespace permreduce {

using Process = std::uint32_t;

inline constexpr std::size_t max_degree = std::size_t{1} << 16;

/// A bijection on {0..P-1}, stored as its image table: images()[x] is where x goes.
class Permutation {
public:
    /// Identity of the given degree.
    explicit Permutation(std::size_t degree = 1) : images_(check_degree(degree)) {
        for (std::size_t x = 0; x < images_.size(); ++x) images_[x] = static_cast<Process>(x);
    }

    /// Validates that `images` is a bijection.
    explicit Permutation(std::vector<Process> images) : images_(std::move(images)) {
        check_degree(images_.size());
        std::vector<bool> seen(images_.size(), false);
        for (Process y : images_) {
            if (y >= images_.size())
                throw Error(ErrorKind::invalid_permutation,
                            "image " + std::to_string(y) + " out of range for degree " +
                                std::to_string(images_.size()));
            if (seen[y])
                throw Error(ErrorKind::invalid_permutation,
                            "image " + std::to_string(y) + " repeated");
            seen[y] = true;
        }
    }

    static Permutation identity(std::size_t degree) { return Permutation(degree); }

    /// x -> x + k (mod degree).
    static Permutation shift(std::size_t degree, std::size_t k) {
        std::vector<Process> images(check_degree(degree));
        for (std::size_t x = 0; x < degree; ++x) images[x] = static_cast<Process>((x + k) % degree);
        return Permutation(std::move(images), unchecked_tag{});
    }

    /// x -> x XOR mask; degree must be a power of two and mask < degree.
    static Permutation xor_mask(std::size_t degree, std::size_t mask) {
        std::vector<Process> images(check_degree(degree));
        for (std::size_t x = 0; x < degree; ++x) images[x] = static_cast<Process>(x ^ mask);
        return Permutation(std::vector<Process>(images));
    }

    std::size_t degree() const noexcept { return images_.size(); }
    Process operator()(std::size_t x) const { return images_[x]; }
    std::span<const Process> images() const noexcept { return images_; }

    bool is_identity() const noexcept {
        for (std::size_t x = 0; x < images_.size(); ++x)
            if (images_[x] != x) return false;
        return true;
    }

    /// Length of the orbit of 0 equals the degree.
    bool is_full_cycle() const noexcept {
        std::size_t length = 0;
        Process x = 0;
        do {
            x = images_[x];
            ++length;
        } while (x != 0 && length <= images_.size());
        return length == images_.size();
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation& a, const Permutation& b) {
        return a.images_ <=> b.images_;
    }

private:
    struct unchecked_tag {};
    Permutation(std::vector<Process> images, unchecked_tag) : images_(std::move(images)) {}

    static std::size_t check_degree(std::size_t degree) {
        if (degree < 1 || degree > max_degree)
            throw Error(ErrorKind::out_of_range,
                        "permutation degree " + std::to_string(degree) + " outside [1, " +
                            std::to_string(max_degree) + "]");
        return degree;
    }

    friend Permutation compose(const Permutation&, const Permutation&);
    friend Permutation inverse(const Permutation&);

    std::vector<Process> images_;
};

/// compose(a, b)(x) == a(b(x)): b acts first. With this order (0 1)(1 2) == (0 1 2).
inline Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree())
        throw Error(ErrorKind::degree_mismatch,
                    "cannot compose degree " + std::to_string(a.degree()) + " with degree " +
                        std::to_string(b.degree()));
    std::vector<Process> images(a.degree());
    for (std::size_t x = 0; x < images.size(); ++x) images[x] = a.images_[b.images_[x]];
    return Permutation(std::move(images), Permutation::unchecked_tag{});
}

inline Permutation inverse(const Permutation& a) {
    std::vector<Process> images(a.degree());
    for (std::size_t x = 0; x < images.size(); ++x) images[a.images_[x]] = static_cast<Process>(x);
    return Permutation(std::move(images), Permutation::unchecked_tag{});
}

/// a^k for k >= 0, by repeated squaring.
inline Permutation power(const Permutation& a, std::size_t k) {
    Permutation result = Permutation::identity(a.degree());
    Permutation base = a;
    while (k > 0) {
        if (k & 1U) result = compose(base, result);
        base = compose(base, base);
        k >>= 1U;
    }
    return result;
}

/// Canonical cycle notation: each cycle starts at its smallest member, cycles are
/// ordered by that member, fixed points are omitted and the identity prints "()".
inline std::string format_cycles(const Permutation& p) {
    std::string out;
    std::vector<bool> visited(p.degree(), false);
    for (std::size_t start = 0; start < p.degree(); ++start) {
        if (visited[start] || p(start) == start) continue;
        out += '(';
        std::size_t x = start;
        bool first = true;
        while (!visited[x]) {
            visited[x] = true;
            if (!first) out += ' ';
            out += std::to_string(x);
            first = false;
            x = p(x);
        }
        out += ')';
    }
    return out.empty() ? "()" : out;
}

/// Parses whitespace-tolerant cycle notation such as "(0 1)(2 3)" or "()".
/// Disjoint cycles may come in any order; each index may appear only once.
inline Permutation parse_cycles(std::string_view text, std::size_t degree) {
    if (degree < 1 || degree > max_degree)
        throw Error(ErrorKind::out_of_range, "degree " + std::to_string(degree) + " out of range");

    std::vector<Process> images(degree);
    for (std::size_t x = 0; x < degree; ++x) images[x] = static_cast<Process>(x);
    std::vector<bool> used(degree, false);

    auto fail = [&](const std::string& why, std::size_t pos) -> Error {
        return Error(ErrorKind::parse_error,
                     why + " at offset " + std::to_string(pos) + " in \"" + std::string(text) + "\"");
    };

    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };

    skip_ws();
    if (pos == text.size()) throw fail("empty cycle notation", pos);
    while (pos < text.size()) {
        if (text[pos] != '(') throw fail("expected '('", pos);
        ++pos;
        std::vector<std::size_t> cycle;
        for (;;) {
            skip_ws();
            if (pos == text.size()) throw fail("unterminated cycle", pos);
            if (text[pos] == ')') {
                ++pos;
                break;
            }
            if (!std::isdigit(static_cast<unsigned char>(text[pos]))) throw fail("expected index", pos);
            std::size_t value = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                value = value * 10 + static_cast<std::size_t>(text[pos] - '0');
                if (value > max_degree) throw fail("index too large", pos);
                ++pos;
            }
            if (value >= degree)
                throw Error(ErrorKind::out_of_range, "index " + std::to_string(value) +
                                                         " not below degree " + std::to_string(degree));
            if (used[value])
                throw Error(ErrorKind::parse_error, "index " + std::to_string(value) + " repeated");
            used[value] = true;
            cycle.push_back(value);
        }
        for (std::size_t k = 0; k < cycle.size(); ++k)
            images[cycle[k]] = static_cast<Process>(cycle[(k + 1) % cycle.size()]);
        skip_ws();
    }
    return Permutation(std::move(images));
}

} // namespace permreduce
