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

// Chooses the number of latency-saving steps r for P = 127 across message sizes.

#include <cstdio>

#include "permreduce.hpp"

int main() {
    using namespace permreduce;
    CostParams params;
    params.p = 127;
    for (double m : {1e2, 425.0, 1e4, 1e6, 1e8}) {
        params.m = m;
        const auto o = optimal_r(params);
        std::printf("m=%-8g r=%zu analytic=%.3f %s total=%.6g s\n", m, o.r, o.analytic_r,
                    o.chosen.algorithm.c_str(), o.chosen.total);
    }
    return 0;
}
