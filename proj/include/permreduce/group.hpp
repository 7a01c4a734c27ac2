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

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "permreduce/error.hpp"
#include "permreduce/math.hpp"
#include "permreduce/permutation.hpp"

namespace permreduce {

enum class GroupKind { cyclic, hypercube, custom };

inline std::string_view to_string(GroupKind kind) {
    switch (kind) {
    case GroupKind::cyclic: return "cyclic";
    case GroupKind::hypercube: return "hypercube";
    case GroupKind::custom: return "custom";
    }
    return "custom";
}

/// Groups materialize all P elements of degree P, so memory grows as P^2.
inline constexpr std::size_t max_group_degree = 4096;

/// A transitive abelian permutation group of order P acting on {0..P-1}.
///
/// Such a group acts regularly: every element is determined by the image of 0.
/// Elements are indexed so that element(0) is the identity. Cyclic groups are
/// indexed by generator power (element(k) == generator^k); all other groups are
/// indexed by the image of 0 (element(k)(0) == k), which for the XOR hypercube
/// group gives element(k) == "x -> x XOR k".
///
/// Instances are only produced by the generate_* factories, which validate the
/// group axioms; there is no way to hold an unvalidated group.
class PermutationGroup {
public:
    std::size_t degree() const noexcept { return elements_.size(); }
    std::size_t order() const noexcept { return elements_.size(); }
    GroupKind kind() const noexcept { return kind_; }
    const std::vector<Permutation>& elements() const noexcept { return elements_; }
    const Permutation& element(std::size_t k) const { return elements_.at(k); }
    const std::vector<Permutation>& generators() const noexcept { return generators_; }

    /// String form accepted by group_from_descriptor.
    const std::string& descriptor() const noexcept { return descriptor_; }

    std::optional<std::size_t> index_of(const Permutation& p) const {
        if (p.degree() != degree()) return std::nullopt;
        std::size_t k = by_image_of_zero_[p(0)];
        if (elements_[k] == p) return k;
        return std::nullopt;
    }

    bool contains(const Permutation& p) const { return index_of(p).has_value(); }

    /// Index of element(i) composed with element(j) (element(j) acts first).
    std::size_t multiply(std::size_t i, std::size_t j) const {
        return by_image_of_zero_[elements_[i](image_of_zero_[j])];
    }

    std::size_t inverse_index(std::size_t i) const { return inverse_[i]; }

    /// Signed operator index: j >= 0 names element(j mod P), j < 0 names the
    /// inverse of element(|j| mod P).
    std::size_t resolve(long long j) const {
        const auto p = static_cast<long long>(degree());
        if (j >= 0) return static_cast<std::size_t>(j % p);
        return inverse_[static_cast<std::size_t>((-j) % p)];
    }

    /// The signed spelling used in schedules: k when k is not larger than its
    /// inverse's index, otherwise minus the inverse's index (t^{P-f} prints as t^{-f}).
    long long signed_index(std::size_t k) const {
        const std::size_t inv = inverse_[k];
        if (k <= inv) return static_cast<long long>(k);
        return -static_cast<long long>(inv);
    }

private:
    friend PermutationGroup generate_cyclic_group(const Permutation&);
    friend PermutationGroup generate_group(const std::vector<Permutation>&, std::size_t);
    friend PermutationGroup default_group(std::size_t, GroupKind);

    PermutationGroup() = default;

    void finish_indexing() {
        const std::size_t p = elements_.size();
        image_of_zero_.assign(p, 0);
        by_image_of_zero_.assign(p, 0);
        for (std::size_t k = 0; k < p; ++k) {
            image_of_zero_[k] = elements_[k](0);
            by_image_of_zero_[image_of_zero_[k]] = k;
        }
        inverse_.assign(p, 0);
        for (std::size_t k = 0; k < p; ++k) inverse_[k] = by_image_of_zero_[inverse(elements_[k])(0)];
    }

    std::vector<Permutation> elements_;
    std::vector<Permutation> generators_;
    GroupKind kind_ = GroupKind::custom;
    std::string descriptor_;
    std::vector<std::size_t> image_of_zero_;
    std::vector<std::size_t> by_image_of_zero_;
    std::vector<std::size_t> inverse_;
};

namespace detail {

inline void check_group_degree(std::size_t degree) {
    if (degree < 1 || degree > max_group_degree)
        throw Error(ErrorKind::out_of_range, "group degree " + std::to_string(degree) +
                                                 " outside [1, " + std::to_string(max_group_degree) + "]");
}

// Orbit of 0 under the generators covers every point.
inline bool generators_transitive(const std::vector<Permutation>& generators, std::size_t degree) {
    std::vector<bool> seen(degree, false);
    std::vector<Process> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        Process x = stack.back();
        stack.pop_back();
        for (const auto& g : generators) {
            Process y = g(x);
            if (!seen[y]) {
                seen[y] = true;
                ++count;
                stack.push_back(y);
            }
        }
    }
    return count == degree;
}

inline std::string join_cycles(const std::vector<Permutation>& perms) {
    std::string out;
    for (std::size_t k = 0; k < perms.size(); ++k) {
        if (k) out += ';';
        out += format_cycles(perms[k]);
    }
    return out;
}

} // namespace detail

/// The cyclic group {generator^k}. The generator must be a single P-cycle.
inline PermutationGroup generate_cyclic_group(const Permutation& generator) {
    const std::size_t p = generator.degree();
    detail::check_group_degree(p);
    if (!generator.is_full_cycle())
        throw Error(ErrorKind::not_a_full_cycle,
                    format_cycles(generator) + " is not a single " + std::to_string(p) + "-cycle");

    PermutationGroup group;
    group.kind_ = GroupKind::cyclic;
    group.generators_ = {generator};
    group.descriptor_ = (generator == Permutation::shift(p, 1 % p)) ? "cyclic"
                                                                   : "cyclic:" + format_cycles(generator);
    group.elements_.reserve(p);
    Permutation current = Permutation::identity(p);
    for (std::size_t k = 0; k < p; ++k) {
        group.elements_.push_back(current);
        current = compose(generator, current);
    }
    group.finish_indexing();
    return group;
}

/// Closure of the generators, validated to be transitive, abelian and of order
/// exactly `degree`, checked in that order. A group whose elements are all
/// self-inverse is reported as the hypercube kind.
inline PermutationGroup generate_group(const std::vector<Permutation>& generators, std::size_t degree) {
    detail::check_group_degree(degree);
    for (const auto& g : generators)
        if (g.degree() != degree)
            throw Error(ErrorKind::degree_mismatch, "generator " + format_cycles(g) + " has degree " +
                                                        std::to_string(g.degree()) + ", expected " +
                                                        std::to_string(degree));

    if (!detail::generators_transitive(generators, degree))
        throw Error(ErrorKind::not_transitive,
                    "group generated by {" + detail::join_cycles(generators) + "} is not transitive on {0.." +
                        std::to_string(degree - 1) + "}");

    for (std::size_t a = 0; a < generators.size(); ++a)
        for (std::size_t b = a + 1; b < generators.size(); ++b)
            if (compose(generators[a], generators[b]) != compose(generators[b], generators[a]))
                throw Error(ErrorKind::non_abelian, format_cycles(generators[a]) + " and " +
                                                        format_cycles(generators[b]) + " do not commute");

    // Breadth-first closure keyed by the image of 0; a second element with the same
    // image of 0 means the order exceeds the degree.
    std::vector<std::optional<Permutation>> by_zero(degree);
    std::deque<std::size_t> queue;
    by_zero[0] = Permutation::identity(degree);
    queue.push_back(0);
    std::size_t found = 1;
    while (!queue.empty()) {
        const Permutation x = *by_zero[queue.front()];
        queue.pop_front();
        for (const auto& g : generators) {
            Permutation y = compose(g, x);
            auto& slot = by_zero[y(0)];
            if (!slot) {
                slot = std::move(y);
                ++found;
                queue.push_back(slot->operator()(0));
            } else if (*slot != y) {
                throw Error(ErrorKind::order_mismatch,
                            "closure has more than " + std::to_string(degree) + " elements");
            }
        }
    }
    if (found != degree)
        throw Error(ErrorKind::order_mismatch,
                    "closure has " + std::to_string(found) + " elements, expected " + std::to_string(degree));

    PermutationGroup group;
    group.generators_ = generators;
    group.elements_.reserve(degree);
    bool self_inverse = true;
    for (auto& e : by_zero) {
        group.elements_.push_back(std::move(*e));
        if (compose(group.elements_.back(), group.elements_.back()) != Permutation::identity(degree))
            self_inverse = false;
    }
    group.kind_ = self_inverse ? GroupKind::hypercube : GroupKind::custom;
    group.descriptor_ = "generators:" + detail::join_cycles(generators);
    group.finish_indexing();
    return group;
}

/// Built-in groups: cyclic uses the +1 shift as generator, hypercube uses the
/// XOR-by-2^i transpositions (P must be a power of two).
inline PermutationGroup default_group(std::size_t p, GroupKind kind) {
    detail::check_group_degree(p);
    switch (kind) {
    case GroupKind::cyclic: return generate_cyclic_group(Permutation::shift(p, 1 % p));
    case GroupKind::hypercube: {
        if (!is_power_of_two(p))
            throw Error(ErrorKind::not_power_of_two, "P must be a power of two, got " + std::to_string(p));
        std::vector<Permutation> generators;
        for (std::size_t bit = 1; bit < p; bit <<= 1U) generators.push_back(Permutation::xor_mask(p, bit));
        PermutationGroup group = generate_group(generators, p);
        group.descriptor_ = "hypercube";
        return group;
    }
    case GroupKind::custom: break;
    }
    throw Error(ErrorKind::out_of_range, "no default group for kind custom");
}

/// Inverse of PermutationGroup::descriptor(): "cyclic", "hypercube",
/// "cyclic:<cycles>" or "generators:<cycles>;<cycles>;...".
inline PermutationGroup group_from_descriptor(std::string_view text, std::size_t p) {
    if (text == "cyclic") return default_group(p, GroupKind::cyclic);
    if (text == "hypercube") return default_group(p, GroupKind::hypercube);
    if (text.starts_with("cyclic:")) return generate_cyclic_group(parse_cycles(text.substr(7), p));
    if (text.starts_with("generators:")) {
        std::vector<Permutation> generators;
        std::string_view rest = text.substr(11);
        while (!rest.empty()) {
            const auto cut = rest.find(';');
            generators.push_back(parse_cycles(rest.substr(0, cut), p));
            if (cut == std::string_view::npos) break;
            rest = rest.substr(cut + 1);
        }
        return generate_group(generators, p);
    }
    throw Error(ErrorKind::parse_error, "unknown group descriptor \"" + std::string(text) + "\"");
}

} // namespace permreduce
