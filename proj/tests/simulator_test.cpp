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

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "permreduce/cost_model.hpp"
#include "permreduce/schedule.hpp"
#include "permreduce/simulator.hpp"

namespace {

using namespace permreduce;

Schedule build(Algorithm a, std::size_t p, std::size_t r = 0, GroupKind kind = GroupKind::cyclic) {
    return build_schedule(a, r, make_group(p, kind), Permutation::identity(p));
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

TEST(Simulator, BandwidthOptimalSeven) {
    const auto report = simulate(build(Algorithm::bandwidth_optimal, 7));
    EXPECT_TRUE(report.verified);
    EXPECT_EQ(report.steps_executed, 6U);
    EXPECT_EQ(report.max_blocks_sent, 12U);
    EXPECT_EQ(report.max_blocks_combined, 6U);
}

TEST(Simulator, RingThree) {
    const auto report = simulate(build(Algorithm::ring, 3));
    EXPECT_TRUE(report.verified);
    EXPECT_EQ(report.steps_executed, 4U);
    EXPECT_EQ(report.per_process_blocks_sent, (std::vector<std::uint64_t>{4, 4, 4}));
    EXPECT_EQ(report.per_process_blocks_received, (std::vector<std::uint64_t>{4, 4, 4}));
    EXPECT_EQ(report.per_process_blocks_combined, (std::vector<std::uint64_t>{2, 2, 2}));
}

TEST(Simulator, MissingLastStepFailsVerification) {
    auto s = build(Algorithm::bandwidth_optimal, 7);
    s.steps.pop_back();
    const auto report = simulate(s);
    EXPECT_FALSE(report.verified);
    ASSERT_TRUE(report.failure.has_value());
    EXPECT_EQ(report.failure->kind, ErrorKind::verification_failed);
    EXPECT_NE(report.failure->message.find("process"), std::string::npos);
}

TEST(Simulator, MissingCombineReportsMissingSources) {
    auto s = build(Algorithm::naive, 3);
    s.steps[0].combines.clear();
    const auto report = simulate(s);
    ASSERT_TRUE(report.failure.has_value());
    EXPECT_NE(report.failure->message.find("missing sources"), std::string::npos);
}

TEST(Simulator, IllegalStepOnDoubleMove) {
    auto s = build(Algorithm::naive, 4);
    s.steps[0].transfers.push_back(s.steps[0].transfers.front());
    const auto report = simulate(s);
    ASSERT_TRUE(report.failure.has_value());
    EXPECT_EQ(report.failure->kind, ErrorKind::illegal_step);
    EXPECT_EQ(report.failure->step, 0U);
}

TEST(Simulator, UnknownVector) {
    auto s = build(Algorithm::naive, 4);
    s.steps[1].transfers.front().vector = VectorId(99);
    const auto report = simulate(s);
    ASSERT_TRUE(report.failure.has_value());
    EXPECT_EQ(report.failure->kind, ErrorKind::unknown_vector);
    EXPECT_EQ(report.failure->step, 1U);
}

TEST(Simulator, CombinePlacementMismatch) {
    auto s = build(Algorithm::naive, 4);
    s.steps[0].transfers.clear();
    const auto report = simulate(s);
    ASSERT_TRUE(report.failure.has_value());
    EXPECT_EQ(report.failure->kind, ErrorKind::combine_placement_mismatch);
}

TEST(Simulator, OverlappingContribution) {
    auto s = build(Algorithm::naive, 4);
    ScheduleStep step;
    step.transfers.push_back({VectorId(0), 0, VectorId(50)});
    step.combines.push_back({VectorId(0), VectorId(50), std::nullopt});
    s.steps.insert(s.steps.begin(), step);
    const auto report = simulate(s);
    ASSERT_TRUE(report.failure.has_value());
    EXPECT_EQ(report.failure->kind, ErrorKind::overlapping_contribution);

    auto self = build(Algorithm::naive, 4);
    self.steps[0].combines.front().src = VectorId(0);
    EXPECT_EQ(simulate(self).failure->kind, ErrorKind::overlapping_contribution);
}

TEST(Simulator, PredictedTimeArithmetic) {
    SimReport report;
    report.p = 4;
    report.steps_executed = 6;
    report.max_blocks_sent = 12;
    report.max_blocks_combined = 6;
    CostParams params;
    params.p = 4;
    params.m = 400;
    EXPECT_NEAR(predicted_time(report, params), 1.9212e-4, 1e-18);
    params.m = 0;
    EXPECT_DOUBLE_EQ(predicted_time(report, params), 6 * 3e-5);
}

TEST(Simulator, PredictedTimeMatchesBandwidthOptimalCost) {
    for (double m : {1e3, 1e6}) {
        CostParams params;
        params.p = 8;
        params.m = m;
        EXPECT_EQ(predicted_time(simulate(build(Algorithm::bandwidth_optimal, 8)), params), tau_bo(params).total);
    }
}

TEST(Simulator, ResultCopies) {
    EXPECT_EQ(simulate(build(Algorithm::latency_optimal, 7)).result_copies, 7U);
    EXPECT_EQ(simulate(build(Algorithm::bandwidth_optimal, 7)).result_copies, 7U);
    // Two placed copies of the result exist once the reduction of r = 1 ends.
    const auto s = build(Algorithm::intermediate, 7, 1);
    const auto report = simulate(s, {.verify = true, .trace = true});
    std::size_t complete = 0;
    for (const auto& v : report.trace[s.reduction_steps - 1].vectors) complete += v.complete ? 1 : 0;
    EXPECT_EQ(complete, 2U);
}

TEST(Simulator, TraceRingSeven) {
    const auto s = build(Algorithm::ring, 7);
    const auto text = render_trace(s, simulate(s, {.verify = true, .trace = true}));
    const auto rows = lines(text);
    ASSERT_EQ(rows.size(), 2U + 12U);
    for (std::size_t k = 2; k < rows.size(); ++k) EXPECT_NE(rows[k].find("| t |"), std::string::npos) << rows[k];
}

TEST(Simulator, TraceRows) {
    const auto bo = build(Algorithm::bandwidth_optimal, 2);
    EXPECT_EQ(lines(render_trace(bo, simulate(bo, {.verify = true, .trace = true}))).size(), 2U + 2U);

    const auto im = build(Algorithm::intermediate, 7, 1);
    const auto rows = lines(render_trace(im, simulate(im, {.verify = true, .trace = true})));
    ASSERT_EQ(rows.size(), 2U + 5U);
    EXPECT_EQ(count_of(rows[4], "q_sum"), 2U);
    EXPECT_EQ(count_of(rows.back(), "q_sum"), 7U);
}

TEST(Simulator, TraceLabels) {
    EXPECT_EQ(detail::origin_label(SourceSet::single(7, 3)), "q_3");
    EXPECT_EQ(detail::origin_label(SourceSet::full(7)), "q_sum");
    SourceSet s(9);
    for (std::size_t x : {0U, 1U, 2U, 3U, 5U, 7U, 8U}) s.insert(x);
    EXPECT_EQ(detail::origin_label(s), "q'_{0-3,5,7,8}");
    const auto cyclic = default_group(7, GroupKind::cyclic);
    EXPECT_EQ(detail::operator_label(cyclic, 1), "t");
    EXPECT_EQ(detail::operator_label(cyclic, -3), "t^-3");
    EXPECT_EQ(detail::operator_label(cyclic, 0), "e");
    EXPECT_EQ(detail::operator_label(default_group(8, GroupKind::hypercube), 4), "t_4");
}

TEST(SimulatorProperty, TrafficIsBalanced) {
    for (std::size_t p = 2; p <= 40; ++p) {
        for (auto alg : {Algorithm::naive, Algorithm::ring, Algorithm::bandwidth_optimal, Algorithm::latency_optimal}) {
            const auto report = simulate(build(alg, p));
            const auto sent = std::accumulate(report.per_process_blocks_sent.begin(),
                                              report.per_process_blocks_sent.end(), std::uint64_t{0});
            const auto received = std::accumulate(report.per_process_blocks_received.begin(),
                                                  report.per_process_blocks_received.end(), std::uint64_t{0});
            ASSERT_EQ(sent, received);
        }
    }
}

TEST(SimulatorProperty, CountsMatchCostCoefficients) {
    for (std::size_t p = 2; p <= 64; ++p) {
        const std::size_t levels = ceil_log2(p);
        for (auto alg : {Algorithm::naive, Algorithm::ring, Algorithm::bandwidth_optimal}) {
            const auto report = simulate(build(alg, p));
            ASSERT_EQ(report.max_blocks_sent, 2 * (p - 1));
            ASSERT_EQ(report.max_blocks_combined, p - 1);
            for (std::size_t x = 0; x < p; ++x) ASSERT_EQ(report.per_process_blocks_sent[x], 2 * (p - 1));
        }
        const auto lo = simulate(build(Algorithm::latency_optimal, p));
        ASSERT_EQ(lo.max_blocks_sent, p * levels);
        if (levels >= 2) {
            ASSERT_LE(lo.max_blocks_combined, p * (2 * levels - 2));
        }
        for (std::size_t r = 1; r < levels; ++r) {
            const auto report = simulate(build(Algorithm::intermediate, p, r));
            const std::size_t extra = (std::size_t{1} << r) - 1;
            ASSERT_LE(report.max_blocks_sent, 2 * (p - 1) + extra * (levels - 1)) << "P=" << p << " r=" << r;
            ASSERT_LE(report.max_blocks_sent, 2 * (p - 1) + extra * levels);
            ASSERT_LE(report.max_blocks_combined, (p - 1) + extra * (2 * levels - 2)) << "P=" << p << " r=" << r;
        }
    }
}

TEST(SimulatorProperty, WorstCaseParityIsTight) {
    // With P = 2^L - 1 every reduction level has an odd vector count and the
    // combine bounds are met exactly.
    for (std::size_t levels = 2; levels <= 6; ++levels) {
        const std::size_t p = (std::size_t{1} << levels) - 1;
        EXPECT_EQ(simulate(build(Algorithm::latency_optimal, p)).max_blocks_combined, p * (2 * levels - 2));
        for (std::size_t r = 1; r < levels; ++r) {
            const std::size_t extra = (std::size_t{1} << r) - 1;
            const auto report = simulate(build(Algorithm::intermediate, p, r));
            EXPECT_EQ(report.max_blocks_sent, 2 * (p - 1) + extra * (levels - 1));
            EXPECT_EQ(report.max_blocks_combined, (p - 1) + extra * (2 * levels - 2));
        }
    }
}

TEST(SimulatorProperty, PredictedTimeWithinFormula) {
    oracle::Gen gen(51);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t p = gen.between(3, 64);
        CostParams params;
        params.p = p;
        params.m = gen.log_uniform(1e2, 1e9);
        const std::size_t levels = ceil_log2(p);
        EXPECT_EQ(predicted_time(simulate(build(Algorithm::naive, p)), params), tau_naive(params).total);
        EXPECT_EQ(predicted_time(simulate(build(Algorithm::ring, p)), params), tau_naive(params).total);
        EXPECT_EQ(predicted_time(simulate(build(Algorithm::bandwidth_optimal, p)), params), tau_bo(params).total);
        EXPECT_LE(predicted_time(simulate(build(Algorithm::latency_optimal, p)), params), tau_lo(params).total);
        const std::size_t r = gen.between(1, levels - 1);
        EXPECT_LE(predicted_time(simulate(build(Algorithm::intermediate, p, r)), params),
                  tau_intermediate(params, r).total);
    }
}

TEST(SimulatorProperty, RandomMutationsAreRejected) {
    oracle::Gen gen(52);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t p = gen.between(2, 24);
        const std::size_t levels = ceil_log2(p);
        const auto alg = static_cast<Algorithm>(gen.below(5));
        const std::size_t r = alg == Algorithm::intermediate ? gen.below(levels) : 0;
        auto s = build(alg, p, r);
        std::vector<std::pair<std::size_t, std::size_t>> sites;
        for (std::size_t k = 0; k < s.steps.size(); ++k)
            for (std::size_t t = 0; t < s.steps[k].transfers.size(); ++t) sites.emplace_back(k, t);
        const auto [k, t] = sites[gen.below(sites.size())];
        auto& transfers = s.steps[k].transfers;
        if (gen.below(2) == 0)
            transfers.erase(transfers.begin() + static_cast<std::ptrdiff_t>(t));
        else
            transfers.push_back(transfers[t]);
        const auto report = simulate(s);
        ASSERT_FALSE(report.verified) << to_string(alg) << " P=" << p << " step " << k;
        ASSERT_TRUE(report.failure.has_value());
    }
}

TEST(SimulatorProperty, Deterministic) {
    for (std::size_t p : {6U, 11U, 16U}) {
        const auto s = build(Algorithm::intermediate, p, 1);
        const auto a = simulate(s, {.verify = true, .trace = true});
        const auto b = simulate(s, {.verify = true, .trace = true});
        EXPECT_EQ(render_trace(s, a), render_trace(s, b));
        EXPECT_EQ(a.per_process_blocks_sent, b.per_process_blocks_sent);
        EXPECT_EQ(a.final_checksums, b.final_checksums);
    }
}

} // namespace
