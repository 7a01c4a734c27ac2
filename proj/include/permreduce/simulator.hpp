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
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "permreduce/cost_model.hpp"
#include "permreduce/data_model.hpp"
#include "permreduce/error.hpp"
#include "permreduce/schedule.hpp"

namespace permreduce {

struct SimOptions {
    bool verify = true;
    bool trace = false;
};

struct SimFailure {
    ErrorKind kind;
    std::size_t step; // 0-based step at which it happened; steps_executed for verification
    std::string message;
};

/// A live vector as seen after a step.
struct VectorSnapshot {
    VectorId id{};
    std::optional<std::size_t> slot; // k when the placement is element(k) o h
    SourceSet origins;               // initial vectors Q_k summed into it
    bool complete = false;
};

struct StepSnapshot {
    std::vector<long long> operators; // distinct, in first-use order
    std::vector<VectorSnapshot> vectors;
};

struct SimReport {
    std::size_t p = 0;
    std::size_t steps_executed = 0;
    std::vector<std::uint64_t> per_process_blocks_sent;
    std::vector<std::uint64_t> per_process_blocks_received;
    std::vector<std::uint64_t> per_process_blocks_combined;
    std::uint64_t max_blocks_sent = 0;
    std::uint64_t max_blocks_combined = 0;
    bool verified = false;
    std::optional<SimFailure> failure;
    /// final_checksums[process][index]: checksum of a complete block held there, 0 if none.
    std::vector<std::vector<std::uint64_t>> final_checksums;
    /// Live vectors that hold the full result at the end.
    std::size_t result_copies = 0;
    std::vector<StepSnapshot> trace;
};

namespace detail {

class Simulation {
public:
    Simulation(const Schedule& schedule, SimOptions options)
        : schedule_(schedule), options_(options), p_(schedule.p), h_inverse_(inverse(schedule.h)) {}

    SimReport run() {
        report_.p = p_;
        report_.per_process_blocks_sent.assign(p_, 0);
        report_.per_process_blocks_received.assign(p_, 0);
        report_.per_process_blocks_combined.assign(p_, 0);

        try {
            if (!schedule_.group || schedule_.group->degree() != p_ || schedule_.h.degree() != p_)
                throw Error(ErrorKind::invalid_schedule, "group, h and P disagree");
            VectorSet initial = initial_vector_set(*schedule_.group, schedule_.h);
            for (auto& v : initial.vectors) {
                SourceSet origins = SourceSet::single(p_, to_underlying(v.id));
                live_.emplace(to_underlying(v.id), Entry{std::move(v), std::move(origins)});
            }
            for (const auto& step : schedule_.steps) {
                execute(step);
                ++report_.steps_executed;
                if (options_.trace) report_.trace.push_back(snapshot(step));
            }
        } catch (const Error& e) {
            fail(e.kind(), report_.steps_executed, e.what());
        }

        for (std::size_t x = 0; x < p_; ++x) {
            report_.max_blocks_sent = std::max(report_.max_blocks_sent, report_.per_process_blocks_sent[x]);
            report_.max_blocks_combined =
                std::max(report_.max_blocks_combined, report_.per_process_blocks_combined[x]);
        }
        if (!report_.failure) finish();
        return report_;
    }

private:
    struct Entry {
        DistributedVector vector;
        SourceSet origins;
    };

    void fail(ErrorKind kind, std::size_t step, std::string message) {
        if (!report_.failure) report_.failure = SimFailure{kind, step, std::move(message)};
        report_.verified = false;
    }

    Entry& find(VectorId id) {
        auto it = live_.find(to_underlying(id));
        if (it == live_.end())
            throw Error(ErrorKind::unknown_vector, "vector " + std::to_string(to_underlying(id)) + " is not live");
        return it->second;
    }

    void insert_new(VectorId id, Entry entry) {
        auto [it, fresh] = live_.emplace(to_underlying(id), std::move(entry));
        if (!fresh)
            throw Error(ErrorKind::illegal_step,
                        "vector id " + std::to_string(to_underlying(id)) + " is already live");
    }

    void execute(const ScheduleStep& step) {
        const PermutationGroup& group = *schedule_.group;

        // Transfers read the state from before the step.
        std::set<std::uint32_t> moved_in_place;
        struct Arrival {
            VectorId id;
            Entry entry;
            bool in_place;
        };
        std::vector<Arrival> arrivals;
        for (const auto& t : step.transfers) {
            const Entry& source = find(t.vector);
            if (!t.copy_as && !moved_in_place.insert(to_underlying(t.vector)).second)
                throw Error(ErrorKind::illegal_step, "vector " + std::to_string(to_underlying(t.vector)) +
                                                         " moved by two operators in one step");
            const Permutation& op = group.element(group.resolve(t.op));
            Entry moved{apply_operator(op, source.vector), source.origins};

            // Realized sends: process placement(i) ships block i to op(placement(i)).
            std::vector<std::uint8_t> sends(p_, 0), receives(p_, 0);
            for (std::size_t i = 0; i < p_; ++i) {
                const Process from = source.vector.placement(i);
                const Process to = moved.vector.placement(i);
                if (++sends[from] > 1 || ++receives[to] > 1)
                    throw Error(ErrorKind::illegal_step, "transfer of vector " +
                                                             std::to_string(to_underlying(t.vector)) +
                                                             " is not a permutation pattern");
            }
            for (std::size_t x = 0; x < p_; ++x) {
                ++report_.per_process_blocks_sent[x];
                ++report_.per_process_blocks_received[x];
            }

            const VectorId target = t.copy_as.value_or(t.vector);
            moved.vector.id = target;
            arrivals.push_back({target, std::move(moved), !t.copy_as});
        }
        for (auto& a : arrivals)
            if (a.in_place) live_.at(to_underlying(a.id)) = std::move(a.entry);
        for (auto& a : arrivals)
            if (!a.in_place) insert_new(a.id, std::move(a.entry));

        for (const auto& c : step.combines) {
            Entry& dst = find(c.dst);
            Entry& src = find(c.src);
            if (c.dst == c.src)
                throw Error(ErrorKind::overlapping_contribution,
                            "vector " + std::to_string(to_underlying(c.dst)) + " combined with itself");
            if (dst.vector.placement != src.vector.placement)
                throw Error(ErrorKind::combine_placement_mismatch,
                            "vectors " + std::to_string(to_underlying(c.dst)) + " and " +
                                std::to_string(to_underlying(c.src)) + " are placed differently");
            Entry sum{combine(dst.vector, src.vector), dst.origins | src.origins};
            for (std::size_t x = 0; x < p_; ++x) ++report_.per_process_blocks_combined[x];
            if (c.into) {
                sum.vector.id = *c.into;
                insert_new(*c.into, std::move(sum));
            } else {
                dst = std::move(sum);
                live_.erase(to_underlying(c.src));
            }
        }

        for (VectorId id : step.retire) {
            find(id);
            live_.erase(to_underlying(id));
        }
    }

    StepSnapshot snapshot(const ScheduleStep& step) const {
        StepSnapshot snap;
        for (const auto& t : step.transfers)
            if (std::find(snap.operators.begin(), snap.operators.end(), t.op) == snap.operators.end())
                snap.operators.push_back(t.op);
        for (const auto& [id, entry] : live_) {
            VectorSnapshot v;
            v.id = VectorId(id);
            v.slot = schedule_.group->index_of(compose(entry.vector.placement, h_inverse_));
            v.origins = entry.origins;
            v.complete = entry.vector.is_complete();
            snap.vectors.push_back(std::move(v));
        }
        return snap;
    }

    void finish() {
        // best[x][i]: largest contribution set for index i found on process x.
        std::vector<std::vector<const BlockContent*>> best(p_, std::vector<const BlockContent*>(p_, nullptr));
        report_.final_checksums.assign(p_, std::vector<std::uint64_t>(p_, 0));
        report_.result_copies = 0;
        for (const auto& [id, entry] : live_) {
            bool complete = true;
            for (std::size_t i = 0; i < p_; ++i) {
                const BlockContent& block = entry.vector.blocks[i];
                const Process owner = entry.vector.placement(i);
                const BlockContent*& slot = best[owner][i];
                if (!slot || block.contributions.size() > slot->contributions.size()) slot = &block;
                if (block.is_complete())
                    report_.final_checksums[owner][i] = block.checksum;
                else
                    complete = false;
            }
            if (complete) ++report_.result_copies;
        }

        if (!options_.verify) {
            report_.verified = false;
            return;
        }
        for (std::size_t x = 0; x < p_; ++x) {
            for (std::size_t i = 0; i < p_; ++i) {
                const BlockContent* block = best[x][i];
                if (block && block->is_complete()) continue;
                std::ostringstream msg;
                msg << "process " << x << " has no complete block for index " << i;
                if (block) {
                    msg << "; missing sources";
                    for (std::size_t j = 0; j < p_; ++j)
                        if (!block->contributions.contains(j)) msg << ' ' << j;
                } else {
                    msg << "; holds no block of that index";
                }
                fail(ErrorKind::verification_failed, report_.steps_executed, msg.str());
                return;
            }
        }
        report_.verified = true;
    }

    const Schedule& schedule_;
    SimOptions options_;
    std::size_t p_;
    Permutation h_inverse_;
    std::map<std::uint32_t, Entry> live_;
    SimReport report_;
};

} // namespace detail

/// Executes the schedule over P virtual processes. Failures do not throw: they
/// come back as report.failure with verified == false.
inline SimReport simulate(const Schedule& schedule, SimOptions options = {}) {
    return detail::Simulation(schedule, options).run();
}

/// steps * alpha + max_sent * u * beta + max_combined * u * gamma, with u = m / P.
inline CostBreakdown predicted_cost(const SimReport& report, const CostParams& params) {
    return breakdown_from_counts("simulated", 0, static_cast<double>(report.steps_executed),
                                 static_cast<double>(report.max_blocks_sent),
                                 static_cast<double>(report.max_blocks_combined), params);
}

inline double predicted_time(const SimReport& report, const CostParams& params) {
    return predicted_cost(report, params).total;
}

namespace detail {

inline std::string operator_label(const PermutationGroup& group, long long op) {
    const char* sep = group.kind() == GroupKind::cyclic ? "^" : "_";
    if (group.kind() == GroupKind::cyclic && op == 1) return "t";
    if (op == 0) return "e";
    return std::string("t") + sep + std::to_string(op);
}

inline std::string origin_label(const SourceSet& origins) {
    if (origins.is_full()) return "q_sum";
    auto members = origins.members();
    if (members.size() == 1) return "q_" + std::to_string(members.front());
    std::string out = "q'_{";
    for (std::size_t k = 0; k < members.size();) {
        std::size_t run = k;
        while (run + 1 < members.size() && members[run + 1] == members[run] + 1) ++run;
        if (k) out += ',';
        out += std::to_string(members[k]);
        if (run > k + 1) out += "-" + std::to_string(members[run]);
        else if (run == k + 1) out += "," + std::to_string(members[run]);
        k = run + 1;
    }
    return out + "}";
}

} // namespace detail

/// One row per executed step: the operators used and every live vector as
/// "t^k q_..." (k is the placement's group index). Requires a traced run.
inline std::string render_trace(const Schedule& schedule, const SimReport& report) {
    const PermutationGroup& group = *schedule.group;
    const char* sep = group.kind() == GroupKind::cyclic ? "^" : "_";
    std::ostringstream out;
    out << "# " << to_string(schedule.algorithm) << " P=" << schedule.p << " r=" << schedule.r
        << " group=" << group.descriptor() << " h=" << format_cycles(schedule.h) << '\n';
    out << "step | operators | vectors\n";
    for (std::size_t s = 0; s < report.trace.size(); ++s) {
        const StepSnapshot& snap = report.trace[s];
        std::string ops;
        for (long long op : snap.operators) {
            if (!ops.empty()) ops += ',';
            ops += detail::operator_label(group, op);
        }
        if (ops.empty()) ops = "-";
        out << s + 1 << (s < schedule.reduction_steps ? " R" : " D") << " | " << ops << " |";
        for (const auto& v : snap.vectors) {
            out << ' ';
            if (v.slot)
                out << 't' << sep << *v.slot;
            else
                out << "t?";
            out << ' ' << detail::origin_label(v.origins) << ';';
        }
        out << '\n';
    }
    return out.str();
}

} // namespace permreduce
