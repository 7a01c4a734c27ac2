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
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "permreduce/data_model.hpp"
#include "permreduce/error.hpp"
#include "permreduce/group.hpp"
#include "permreduce/math.hpp"
#include "permreduce/permutation.hpp"

namespace permreduce {

enum class Algorithm { naive, ring, bandwidth_optimal, intermediate, latency_optimal };

inline std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::naive: return "naive";
    case Algorithm::ring: return "ring";
    case Algorithm::bandwidth_optimal: return "bandwidth_optimal";
    case Algorithm::intermediate: return "intermediate";
    case Algorithm::latency_optimal: return "latency_optimal";
    }
    return "naive";
}

/// Accepts the canonical names plus the short forms "bo" and "lo".
inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
    if (name == "naive") return Algorithm::naive;
    if (name == "ring") return Algorithm::ring;
    if (name == "bo" || name == "bandwidth_optimal") return Algorithm::bandwidth_optimal;
    if (name == "intermediate") return Algorithm::intermediate;
    if (name == "lo" || name == "latency_optimal") return Algorithm::latency_optimal;
    return std::nullopt;
}

/// Moves a vector by the group element named by `op` (see PermutationGroup::resolve).
/// With `copy_as` set, a copy under that new id moves and the source stays put.
struct TransferAction {
    VectorId vector{};
    long long op = 0;
    std::optional<VectorId> copy_as;

    friend bool operator==(const TransferAction&, const TransferAction&) = default;
};

/// dst <- dst (+) src, src retired. With `into` set, the sum is a new vector and
/// both operands stay live.
struct CombineAction {
    VectorId dst{};
    VectorId src{};
    std::optional<VectorId> into;

    friend bool operator==(const CombineAction&, const CombineAction&) = default;
};

/// One latency unit: all transfers run concurrently, then the combines in order,
/// then the listed vectors are dropped.
struct ScheduleStep {
    std::vector<TransferAction> transfers;
    std::vector<CombineAction> combines;
    std::vector<VectorId> retire;

    friend bool operator==(const ScheduleStep&, const ScheduleStep&) = default;
};

struct Schedule {
    Algorithm algorithm = Algorithm::naive;
    std::size_t p = 1;
    std::size_t r = 0;
    std::shared_ptr<const PermutationGroup> group;
    Permutation h;
    std::vector<ScheduleStep> steps;
    std::size_t reduction_steps = 0;
    std::size_t expected_result_copies = 0;

    /// Same algorithm, parameters and steps; groups compared by descriptor.
    bool structurally_equal(const Schedule& other) const {
        return algorithm == other.algorithm && p == other.p && r == other.r &&
               group->descriptor() == other.group->descriptor() && h == other.h && steps == other.steps;
    }
};

/// Closed-form step count: 2(P-1), 2L, 2L-r or L with L = ceil(log2 P).
inline std::size_t step_count(Algorithm algorithm, std::size_t p, std::size_t r = 0) {
    const std::size_t levels = ceil_log2(p);
    switch (algorithm) {
    case Algorithm::naive:
    case Algorithm::ring: return 2 * (p - 1);
    case Algorithm::bandwidth_optimal: return 2 * levels;
    case Algorithm::intermediate:
        if (r >= levels)
            throw Error(ErrorKind::out_of_range, "r = " + std::to_string(r) + " must satisfy 0 <= r < " +
                                                     std::to_string(levels) + " for P = " + std::to_string(p));
        return 2 * levels - r;
    case Algorithm::latency_optimal: return levels;
    }
    return 0;
}

inline std::shared_ptr<const PermutationGroup> make_group(std::size_t p, GroupKind kind) {
    return std::make_shared<const PermutationGroup>(default_group(p, kind));
}

namespace detail {

inline void check_inputs(const std::shared_ptr<const PermutationGroup>& group, const Permutation& h) {
    if (!group) throw Error(ErrorKind::invalid_schedule, "no group given");
    if (h.degree() != group->degree())
        throw Error(ErrorKind::degree_mismatch, "h has degree " + std::to_string(h.degree()) +
                                                    ", group has degree " + std::to_string(group->degree()));
}

inline Schedule empty_schedule(Algorithm algorithm, std::size_t r, std::shared_ptr<const PermutationGroup> group,
                               Permutation h) {
    Schedule s;
    s.algorithm = algorithm;
    s.p = group->degree();
    s.r = r;
    s.group = std::move(group);
    s.h = std::move(h);
    s.expected_result_copies = s.p;
    return s;
}

// Builds the halving reduction simultaneously for `replicas` copies of the vector
// set, copy s shifted by group element s with the operators unchanged, then the
// mirrored distribution for the first `mirrors` reduction levels.
//
// Vector identity during construction is (slot, origin set): entries of different
// copies that agree on both are the same vector and are sent or combined once.
// The slot of a vector is the group index k of its placement element(k) o h; the
// origin set lists the initial vectors Q_k summed into it.
class ReplicatedBuilder {
public:
    ReplicatedBuilder(const PermutationGroup& group, std::size_t replicas)
        : group_(group), p_(group.degree()), replicas_(replicas) {}

    void run(Schedule& out, std::size_t mirrors) {
        std::vector<std::vector<std::uint32_t>> current(replicas_, std::vector<std::uint32_t>(p_));
        for (std::size_t k = 0; k < p_; ++k) new_node(k, SourceSet::single(p_, k));
        for (std::size_t s = 0; s < replicas_; ++s)
            for (std::size_t a = 0; a < p_; ++a)
                current[s][a] = static_cast<std::uint32_t>(group_.multiply(s, a));

        std::vector<std::size_t> level_sizes;
        for (std::size_t n = p_; n > 1; n -= n / 2) {
            level_sizes.push_back(n);
            out.steps.push_back(reduce_level(current, n));
        }
        out.reduction_steps = out.steps.size();

        std::vector<std::optional<std::uint32_t>> holder(p_);
        for (std::size_t s = 0; s < replicas_; ++s) holder[node_[current[s][0]].slot] = current[s][0];

        for (std::size_t j = mirrors; j-- > 0;) {
            const std::size_t n = level_sizes[j];
            const std::size_t half = n / 2;
            const std::size_t upper = n - half;
            ScheduleStep step;
            for (std::size_t b = upper - half; b < upper; ++b) {
                const std::size_t a = b + half;
                if (holder[a]) continue;
                const std::uint32_t copy = new_node(a, node_[*holder[b]].origins);
                const std::size_t op = group_.multiply(a, group_.inverse_index(b));
                step.transfers.push_back({VectorId(*holder[b]), group_.signed_index(op), VectorId(copy)});
                holder[a] = copy;
            }
            out.steps.push_back(std::move(step));
        }
    }

private:
    struct Node {
        std::size_t slot;
        SourceSet origins;
    };

    struct Move {
        std::uint32_t source;
        std::size_t op;
        std::size_t dest_slot;
        std::size_t uses = 0;
        std::uint32_t moved = 0;
    };

    struct Result {
        std::uint32_t stationary;
        std::size_t move;
        SourceSet origins;
        std::uint32_t id = 0;
    };

    std::uint32_t new_node(std::size_t slot, SourceSet origins) {
        node_.push_back({slot, std::move(origins)});
        alive_.push_back(true);
        return static_cast<std::uint32_t>(node_.size() - 1);
    }

    ScheduleStep reduce_level(std::vector<std::vector<std::uint32_t>>& current, std::size_t n) {
        const std::size_t half = n / 2;
        const std::size_t upper = n - half; // logical slots [upper, n) are sent down by `half`
        const std::size_t idle = upper - half;

        std::vector<Move> moves;
        std::map<std::pair<std::uint32_t, std::size_t>, std::size_t> move_index;
        std::vector<Result> results;
        std::map<std::pair<std::size_t, SourceSet>, std::size_t> result_index;
        std::map<std::uint32_t, std::size_t> uses; // distinct roles of each pre-step vector
        std::vector<std::vector<long long>> next(replicas_, std::vector<long long>(upper));

        for (std::size_t s = 0; s < replicas_; ++s) {
            for (std::size_t b = 0; b < idle; ++b) {
                next[s][b] = current[s][b];
            }
            for (std::size_t b = idle; b < upper; ++b) {
                const std::uint32_t source = current[s][b + half];
                const std::uint32_t stationary = current[s][b];
                const std::size_t dest = node_[stationary].slot;
                const std::size_t op = group_.multiply(dest, group_.inverse_index(node_[source].slot));

                SourceSet origins = node_[stationary].origins | node_[source].origins;
                auto [rit, new_result] = result_index.try_emplace({dest, origins}, results.size());
                if (new_result) {
                    auto [mit, new_move] = move_index.try_emplace({source, op}, moves.size());
                    if (new_move) moves.push_back({source, op, dest});
                    ++moves[mit->second].uses;
                    results.push_back({stationary, mit->second, std::move(origins)});
                }
                next[s][b] = -static_cast<long long>(rit->second) - 1;
            }
        }

        // A vector can be moved or combined in place only if nothing else needs it.
        std::map<std::uint32_t, bool> persists;
        for (std::size_t s = 0; s < replicas_; ++s)
            for (std::size_t b = 0; b < idle; ++b) persists[current[s][b]] = true;
        for (const auto& [id, flag] : persists) ++uses[id];
        for (const auto& m : moves) ++uses[m.source];
        for (const auto& r : results) ++uses[r.stationary];

        ScheduleStep step;
        std::vector<std::uint32_t> touched;
        for (auto& m : moves) {
            if (uses[m.source] == 1) {
                m.moved = m.source;
                step.transfers.push_back({VectorId(m.source), group_.signed_index(m.op), std::nullopt});
            } else {
                m.moved = new_node(node_[m.source].slot, node_[m.source].origins);
                step.transfers.push_back({VectorId(m.source), group_.signed_index(m.op), VectorId(m.moved)});
            }
            node_[m.moved].slot = m.dest_slot;
            touched.push_back(m.source);
            touched.push_back(m.moved);
        }
        for (auto& r : results) {
            const Move& m = moves[r.move];
            if (uses[r.stationary] == 1 && m.uses == 1) {
                r.id = r.stationary;
                node_[r.id].origins = r.origins;
                alive_[m.moved] = false;
                step.combines.push_back({VectorId(r.stationary), VectorId(m.moved), std::nullopt});
            } else {
                r.id = new_node(m.dest_slot, r.origins);
                step.combines.push_back({VectorId(r.stationary), VectorId(m.moved), VectorId(r.id)});
                touched.push_back(r.id);
            }
            touched.push_back(r.stationary);
        }

        std::vector<bool> kept(node_.size(), false);
        for (std::size_t s = 0; s < replicas_; ++s) {
            current[s].resize(upper);
            for (std::size_t b = 0; b < upper; ++b) {
                const long long v = next[s][b];
                current[s][b] = v >= 0 ? static_cast<std::uint32_t>(v)
                                       : results[static_cast<std::size_t>(-v - 1)].id;
                kept[current[s][b]] = true;
            }
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (std::uint32_t id : touched) {
            if (alive_[id] && !kept[id]) {
                alive_[id] = false;
                step.retire.push_back(VectorId(id));
            }
        }
        return step;
    }

    const PermutationGroup& group_;
    std::size_t p_;
    std::size_t replicas_;
    std::vector<Node> node_;
    std::vector<bool> alive_;
};

inline Schedule build_replicated(Algorithm algorithm, std::size_t r, std::size_t replicas, std::size_t mirrors,
                                 std::shared_ptr<const PermutationGroup> group, Permutation h) {
    check_inputs(group, h);
    Schedule s = empty_schedule(algorithm, r, group, std::move(h));
    ReplicatedBuilder(*group, replicas).run(s, mirrors);
    return s;
}

} // namespace detail

/// Reduction moves each Q_i straight onto Q_0's placement and combines it there;
/// distribution sends copies of the result back out with the inverse operators.
inline Schedule build_naive(std::shared_ptr<const PermutationGroup> group, Permutation h) {
    detail::check_inputs(group, h);
    const std::size_t p = group->degree();
    Schedule s = detail::empty_schedule(Algorithm::naive, 0, group, std::move(h));
    for (std::size_t i = 1; i < p; ++i) {
        const auto id = VectorId(static_cast<std::uint32_t>(i));
        ScheduleStep step;
        step.transfers.push_back({id, group->signed_index(group->inverse_index(i)), std::nullopt});
        step.combines.push_back({VectorId(0), id, std::nullopt});
        s.steps.push_back(std::move(step));
    }
    s.reduction_steps = s.steps.size();
    std::uint32_t next_id = static_cast<std::uint32_t>(p);
    for (std::size_t i = 1; i < p; ++i) {
        ScheduleStep step;
        step.transfers.push_back({VectorId(0), group->signed_index(i), VectorId(next_id++)});
        s.steps.push_back(std::move(step));
    }
    return s;
}

/// The accumulator travels around the ring under the +1 generator, absorbing each
/// Q_k it reaches; the result then travels on around, leaving a copy at each stop.
inline Schedule build_ring(std::size_t p, Permutation h) {
    auto group = make_group(p, GroupKind::cyclic);
    detail::check_inputs(group, h);
    Schedule s = detail::empty_schedule(Algorithm::ring, 0, group, std::move(h));
    const long long t = group->signed_index(1 % p);
    std::uint32_t accumulator = 0;
    for (std::uint32_t k = 1; k < p; ++k) {
        ScheduleStep step;
        step.transfers.push_back({VectorId(accumulator), t, std::nullopt});
        step.combines.push_back({VectorId(k), VectorId(accumulator), std::nullopt});
        s.steps.push_back(std::move(step));
        accumulator = k;
    }
    s.reduction_steps = s.steps.size();
    std::uint32_t next_id = static_cast<std::uint32_t>(p);
    for (std::size_t k = 1; k < p; ++k) {
        ScheduleStep step;
        step.transfers.push_back({VectorId(accumulator), t, VectorId(next_id)});
        accumulator = next_id++;
        s.steps.push_back(std::move(step));
    }
    return s;
}

/// Halving reduction: with N live vectors the top floor(N/2) move down by
/// t^-floor(N/2) and combine, the bottom one idling when N is odd. Distribution
/// replays the levels in reverse with inverse operators, copying instead of
/// combining. 2*ceil(log2 P) steps in total.
inline Schedule build_bandwidth_optimal(std::shared_ptr<const PermutationGroup> group, Permutation h) {
    detail::check_inputs(group, h);
    const std::size_t levels = ceil_log2(group->degree());
    return detail::build_replicated(Algorithm::bandwidth_optimal, 0, 1, levels, std::move(group), std::move(h));
}

/// The halving reduction run for 2^r copies shifted by t^0..t^(2^r - 1), so the
/// reduction yields 2^r placed copies of the result and the last r distribution
/// levels can be dropped.
inline Schedule build_intermediate(std::size_t r, std::shared_ptr<const PermutationGroup> group, Permutation h) {
    detail::check_inputs(group, h);
    const std::size_t p = group->degree();
    const std::size_t levels = ceil_log2(p);
    if (r >= levels)
        throw Error(ErrorKind::out_of_range, "r = " + std::to_string(r) + " must satisfy 0 <= r < " +
                                                 std::to_string(levels) + " for P = " + std::to_string(p));
    return detail::build_replicated(Algorithm::intermediate, r, std::size_t{1} << r, levels - r, std::move(group),
                                    std::move(h));
}

/// All P shifted copies at once: ceil(log2 P) steps and no distribution phase.
inline Schedule build_latency_optimal(std::shared_ptr<const PermutationGroup> group, Permutation h) {
    detail::check_inputs(group, h);
    const std::size_t p = group->degree();
    return detail::build_replicated(Algorithm::latency_optimal, ceil_log2(p), p, 0, std::move(group), std::move(h));
}

/// Dispatch by algorithm. Ring ignores `group` beyond its degree.
inline Schedule build_schedule(Algorithm algorithm, std::size_t r, std::shared_ptr<const PermutationGroup> group,
                               Permutation h) {
    detail::check_inputs(group, h);
    switch (algorithm) {
    case Algorithm::naive: return build_naive(std::move(group), std::move(h));
    case Algorithm::ring: return build_ring(group->degree(), std::move(h));
    case Algorithm::bandwidth_optimal: return build_bandwidth_optimal(std::move(group), std::move(h));
    case Algorithm::intermediate: return build_intermediate(r, std::move(group), std::move(h));
    case Algorithm::latency_optimal: return build_latency_optimal(std::move(group), std::move(h));
    }
    throw Error(ErrorKind::invalid_schedule, "unknown algorithm");
}

/// Process pairs {p, op(p)} exchanged by each transfer of a step.
inline std::vector<std::pair<Process, Process>> step_send_pairs(const Schedule& s, std::size_t step) {
    std::vector<std::pair<Process, Process>> pairs;
    for (const auto& t : s.steps.at(step).transfers) {
        const Permutation& op = s.group->element(s.group->resolve(t.op));
        for (std::size_t x = 0; x < s.p; ++x) pairs.emplace_back(static_cast<Process>(x), op(x));
    }
    return pairs;
}

} // namespace permreduce
