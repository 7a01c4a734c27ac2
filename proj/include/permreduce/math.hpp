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

namespace permreduce {

constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && std::has_single_bit(n); }

/// Smallest L with 2^L >= n; 0 for n <= 1.
constexpr std::size_t ceil_log2(std::size_t n) noexcept {
    return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
}

/// Largest power of two strictly below n (n >= 2).
constexpr std::size_t largest_power_of_two_below(std::size_t n) noexcept {
    return std::bit_floor(n - 1);
}

} // namespace permreduce
