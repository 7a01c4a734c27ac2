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

#include <stdexcept>
#include <string>
#include <string_view>

namespace permreduce {

enum class ErrorKind {
    degree_mismatch,
    invalid_permutation,
    parse_error,
    out_of_range,
    not_a_full_cycle,
    order_mismatch,
    non_abelian,
    not_transitive,
    not_power_of_two,
    placement_mismatch,
    overlapping_contribution,
    combine_placement_mismatch,
    illegal_step,
    unknown_vector,
    verification_failed,
    invalid_params,
    invalid_schedule,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::degree_mismatch: return "DegreeMismatch";
    case ErrorKind::invalid_permutation: return "InvalidPermutation";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::out_of_range: return "OutOfRange";
    case ErrorKind::not_a_full_cycle: return "NotAFullCycle";
    case ErrorKind::order_mismatch: return "OrderMismatch";
    case ErrorKind::non_abelian: return "NonAbelian";
    case ErrorKind::not_transitive: return "NotTransitive";
    case ErrorKind::not_power_of_two: return "NotPowerOfTwo";
    case ErrorKind::placement_mismatch: return "PlacementMismatch";
    case ErrorKind::overlapping_contribution: return "OverlappingContribution";
    case ErrorKind::combine_placement_mismatch: return "CombinePlacementMismatch";
    case ErrorKind::illegal_step: return "IllegalStep";
    case ErrorKind::unknown_vector: return "UnknownVector";
    case ErrorKind::verification_failed: return "VerificationFailed";
    case ErrorKind::invalid_params: return "InvalidParams";
    case ErrorKind::invalid_schedule: return "InvalidSchedule";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a kind so callers can branch
/// without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace permreduce
