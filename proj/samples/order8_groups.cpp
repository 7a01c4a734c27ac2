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

// Prints the cyclic and self-inverse groups of order 8 in cycle notation.

#include <cstdio>

#include "permreduce.hpp"

int main() {
    using namespace permreduce;
    for (auto kind : {GroupKind::cyclic, GroupKind::hypercube}) {
        const auto group = default_group(8, kind);
        std::printf("%s group of order %zu\n", std::string(to_string(kind)).c_str(), group.order());
        for (std::size_t k = 0; k < group.order(); ++k)
            std::printf("  t^%zu = %s\n", k, format_cycles(group.element(k)).c_str());
    }
    return 0;
}
