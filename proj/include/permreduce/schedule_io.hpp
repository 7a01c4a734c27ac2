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
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "permreduce/cost_model.hpp"
#include "permreduce/error.hpp"
#include "permreduce/group.hpp"
#include "permreduce/permutation.hpp"
#include "permreduce/schedule.hpp"
#include "permreduce/simulator.hpp"

namespace permreduce {

inline constexpr int schedule_format_version = 1;

/// Schedule as JSON:
///   { "version": 1, "algorithm": str, "P": int, "r": int, "group": str, "h": cycles,
///     "steps": [ { "transfers": [ {"vector": id, "operator": int, "copy_as"?: id} ],
///                  "combines": [ {"dst": id, "src": id, "into"?: id} ],
///                  "retire"?: [id] } ] }
inline nlohmann::ordered_json schedule_to_json(const Schedule& s) {
    nlohmann::ordered_json j;
    j["version"] = schedule_format_version;
    j["algorithm"] = std::string(to_string(s.algorithm));
    j["P"] = s.p;
    j["r"] = s.r;
    j["group"] = s.group->descriptor();
    j["h"] = format_cycles(s.h);
    auto steps = nlohmann::ordered_json::array();
    for (const auto& step : s.steps) {
        nlohmann::ordered_json js;
        js["transfers"] = nlohmann::ordered_json::array();
        for (const auto& t : step.transfers) {
            nlohmann::ordered_json jt;
            jt["vector"] = to_underlying(t.vector);
            jt["operator"] = t.op;
            if (t.copy_as) jt["copy_as"] = to_underlying(*t.copy_as);
            js["transfers"].push_back(std::move(jt));
        }
        js["combines"] = nlohmann::ordered_json::array();
        for (const auto& c : step.combines) {
            nlohmann::ordered_json jc;
            jc["dst"] = to_underlying(c.dst);
            jc["src"] = to_underlying(c.src);
            if (c.into) jc["into"] = to_underlying(*c.into);
            js["combines"].push_back(std::move(jc));
        }
        if (!step.retire.empty()) {
            js["retire"] = nlohmann::ordered_json::array();
            for (VectorId id : step.retire) js["retire"].push_back(to_underlying(id));
        }
        steps.push_back(std::move(js));
    }
    j["steps"] = std::move(steps);
    return j;
}

inline std::string write_schedule_json(const Schedule& s) { return schedule_to_json(s).dump(2) + "\n"; }

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::invalid_schedule, where + ": " + what);
}

inline void only_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                      const std::string& where) {
    if (!j.is_object()) schema_error(where, "expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (auto k : allowed) known = known || item.key() == k;
        if (!known) schema_error(where, "unknown key \"" + item.key() + "\"");
    }
}

inline const nlohmann::json& required(const nlohmann::json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) schema_error(where, std::string("missing key \"") + key + "\"");
    return *it;
}

inline long long as_integer(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number_integer()) schema_error(where, "expected an integer");
    return j.get<long long>();
}

inline VectorId as_vector_id(const nlohmann::json& j, const std::string& where) {
    const long long v = as_integer(j, where);
    if (v < 0 || v > std::numeric_limits<std::uint32_t>::max()) schema_error(where, "vector id out of range");
    return VectorId(static_cast<std::uint32_t>(v));
}

inline std::string as_string(const nlohmann::json& j, const std::string& where) {
    if (!j.is_string()) schema_error(where, "expected a string");
    return j.get<std::string>();
}

inline const nlohmann::json& as_array(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) schema_error(where, "expected an array");
    return j;
}

} // namespace detail

/// Validates against the schema above and rebuilds the group from its descriptor.
/// Unknown keys are rejected. The step contents are not checked for legality:
/// that is the simulator's job.
inline Schedule schedule_from_json(const nlohmann::json& j) {
    using namespace detail;
    only_keys(j, {"version", "algorithm", "P", "r", "group", "h", "steps"}, "schedule");
    if (as_integer(required(j, "version", "schedule"), "version") != schedule_format_version)
        schema_error("version", "unsupported, expected " + std::to_string(schedule_format_version));

    Schedule s;
    const std::string alg = as_string(required(j, "algorithm", "schedule"), "algorithm");
    auto parsed = parse_algorithm(alg);
    if (!parsed) schema_error("algorithm", "unknown algorithm \"" + alg + "\"");
    s.algorithm = *parsed;

    const long long p = as_integer(required(j, "P", "schedule"), "P");
    if (p < 1 || static_cast<std::size_t>(p) > max_group_degree)
        schema_error("P", "must be in [1, " + std::to_string(max_group_degree) + "]");
    s.p = static_cast<std::size_t>(p);
    const long long r = as_integer(required(j, "r", "schedule"), "r");
    if (r < 0) schema_error("r", "must be non-negative");
    s.r = static_cast<std::size_t>(r);

    s.group = std::make_shared<const PermutationGroup>(
        group_from_descriptor(as_string(required(j, "group", "schedule"), "group"), s.p));
    s.h = parse_cycles(as_string(required(j, "h", "schedule"), "h"), s.p);
    s.expected_result_copies = s.p;

    const auto& steps = as_array(required(j, "steps", "schedule"), "steps");
    bool reducing = true;
    for (std::size_t n = 0; n < steps.size(); ++n) {
        const std::string where = "steps[" + std::to_string(n) + "]";
        const auto& js = steps[n];
        only_keys(js, {"transfers", "combines", "retire"}, where);
        ScheduleStep step;
        const auto& transfers = as_array(required(js, "transfers", where), where + ".transfers");
        for (std::size_t k = 0; k < transfers.size(); ++k) {
            const std::string at = where + ".transfers[" + std::to_string(k) + "]";
            only_keys(transfers[k], {"vector", "operator", "copy_as"}, at);
            TransferAction t;
            t.vector = as_vector_id(required(transfers[k], "vector", at), at + ".vector");
            t.op = as_integer(required(transfers[k], "operator", at), at + ".operator");
            if (transfers[k].contains("copy_as")) t.copy_as = as_vector_id(transfers[k]["copy_as"], at + ".copy_as");
            step.transfers.push_back(t);
        }
        const auto& combines = as_array(required(js, "combines", where), where + ".combines");
        for (std::size_t k = 0; k < combines.size(); ++k) {
            const std::string at = where + ".combines[" + std::to_string(k) + "]";
            only_keys(combines[k], {"dst", "src", "into"}, at);
            CombineAction c;
            c.dst = as_vector_id(required(combines[k], "dst", at), at + ".dst");
            c.src = as_vector_id(required(combines[k], "src", at), at + ".src");
            if (combines[k].contains("into")) c.into = as_vector_id(combines[k]["into"], at + ".into");
            step.combines.push_back(c);
        }
        if (js.contains("retire")) {
            const auto& retire = as_array(js["retire"], where + ".retire");
            for (const auto& id : retire) step.retire.push_back(as_vector_id(id, where + ".retire"));
        }
        if (reducing && !step.combines.empty()) ++s.reduction_steps;
        else reducing = false;
        s.steps.push_back(std::move(step));
    }
    return s;
}

inline Schedule read_schedule_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::parse_error, std::string("schedule is not valid JSON: ") + e.what());
    }
    return schedule_from_json(j);
}

/// { "steps": int, "sent": [int], "received": [int], "combined": [int], "verified": bool,
///   "predicted_time_s": float, "failure"?: { "kind": str, "step": int, "message": str } }
inline nlohmann::ordered_json report_to_json(const SimReport& report, const CostParams& params) {
    nlohmann::ordered_json j;
    j["steps"] = report.steps_executed;
    j["sent"] = report.per_process_blocks_sent;
    j["received"] = report.per_process_blocks_received;
    j["combined"] = report.per_process_blocks_combined;
    j["verified"] = report.verified;
    j["predicted_time_s"] = predicted_time(report, params);
    if (report.failure) {
        nlohmann::ordered_json f;
        f["kind"] = std::string(to_string(report.failure->kind));
        f["step"] = report.failure->step;
        f["message"] = report.failure->message;
        j["failure"] = std::move(f);
    }
    return j;
}

/// Network parameters from JSON with optional keys alpha, beta, gamma; any other
/// key is rejected. Missing keys keep the defaults in `base`.
inline CostParams params_from_json(std::string_view text, CostParams base = {}) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::invalid_params, std::string("params file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::invalid_params, "params file must hold a JSON object");
    for (const auto& item : j.items()) {
        double* field = nullptr;
        if (item.key() == "alpha") field = &base.alpha;
        else if (item.key() == "beta") field = &base.beta;
        else if (item.key() == "gamma") field = &base.gamma;
        else throw Error(ErrorKind::invalid_params, "unknown key \"" + item.key() + "\"");
        if (!item.value().is_number())
            throw Error(ErrorKind::invalid_params, "\"" + item.key() + "\" must be a number");
        *field = item.value().get<double>();
    }
    base.validate();
    return base;
}

} // namespace permreduce
