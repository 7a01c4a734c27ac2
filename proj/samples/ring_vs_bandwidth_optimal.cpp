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

// Simulates ring and bandwidth-optimal allreduce at P = 12 and compares
// per-process traffic and predicted time.

#include <cstdio>

#include "permreduce.hpp"

int main() {
    using namespace permreduce;
    const std::size_t p = 12;
    const auto h = Permutation::identity(p);
    CostParams params;
    params.p = p;
    params.m = 1e6;
    for (const auto& s : {build_ring(p, h), build_bandwidth_optimal(make_group(p, GroupKind::cyclic), h)}) {
        const auto report = simulate(s);
        if (!report.verified) return 1;
        std::printf("%-18s steps=%2zu sent=%llu combined=%llu time=%.6g s\n",
                    std::string(to_string(s.algorithm)).c_str(), report.steps_executed,
                    static_cast<unsigned long long>(report.max_blocks_sent),
                    static_cast<unsigned long long>(report.max_blocks_combined), predicted_time(report, params));
    }
    return 0;
}
