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

#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "permreduce/error.hpp"
#include "permreduce/math.hpp"

namespace permreduce {

/// Point-to-point model tau = alpha + beta*m + gamma*m, with the vector split
/// into P equal parts of u = m / P bytes.
struct CostParams {
    double alpha = 3e-5;  // s
    double beta = 1e-8;   // s / byte
    double gamma = 2e-10; // s / byte
    double m = 0.0;       // bytes, whole vector
    std::size_t p = 1;

    double u() const noexcept { return m / static_cast<double>(p); }

    void validate() const {
        auto bad = [](double x) { return !(x >= 0.0) || std::isinf(x); };
        if (bad(alpha) || bad(beta) || bad(gamma))
            throw Error(ErrorKind::invalid_params, "alpha, beta and gamma must be finite and non-negative");
        if (bad(m)) throw Error(ErrorKind::invalid_params, "m must be finite and non-negative");
        if (p < 1) throw Error(ErrorKind::invalid_params, "P must be at least 1");
    }

    CostParams with(std::size_t new_p, double new_m) const {
        CostParams c = *this;
        c.p = new_p;
        c.m = new_m;
        return c;
    }
};

struct CostBreakdown {
    std::string algorithm;
    std::size_t r = 0;
    double latency_term = 0.0;
    double bandwidth_term = 0.0;
    double compute_term = 0.0;
    double total = 0.0;
};

/// steps*alpha + sent*u*beta + combined*u*gamma. Every tau_* below and the
/// simulator's prediction go through here, so equal coefficients give equal bits.
inline CostBreakdown breakdown_from_counts(std::string algorithm, std::size_t r, double steps, double sent_blocks,
                                           double combined_blocks, const CostParams& params) {
    CostBreakdown b;
    b.algorithm = std::move(algorithm);
    b.r = r;
    b.latency_term = steps * params.alpha;
    b.bandwidth_term = sent_blocks * params.u() * params.beta;
    b.compute_term = combined_blocks * params.u() * params.gamma;
    b.total = b.latency_term + b.bandwidth_term + b.compute_term;
    return b;
}

inline double as_real(std::size_t n) { return static_cast<double>(n); }

/// 2(P-1) alpha + 2(P-1) u beta + (P-1) u gamma. Also the Ring cost.
inline CostBreakdown tau_naive(const CostParams& params) {
    params.validate();
    const double k = as_real(params.p - 1);
    return breakdown_from_counts("naive", 0, 2 * k, 2 * k, k, params);
}

inline CostBreakdown tau_ring(const CostParams& params) {
    CostBreakdown b = tau_naive(params);
    b.algorithm = "ring";
    return b;
}

/// 2L alpha + 2(P-1) u beta + (P-1) u gamma, L = ceil(log2 P).
inline CostBreakdown tau_bo(const CostParams& params) {
    params.validate();
    const double levels = as_real(ceil_log2(params.p));
    const double k = as_real(params.p - 1);
    return breakdown_from_counts("bandwidth_optimal", 0, 2 * levels, 2 * k, k, params);
}

/// (2L - r) alpha + (2(P-1) + (2^r - 1)(L - 1)) u beta + ((P-1) + (2^r - 1)(2L - 2)) u gamma,
/// for 0 <= r < L.
inline CostBreakdown tau_intermediate(const CostParams& params, std::size_t r) {
    params.validate();
    const std::size_t levels = ceil_log2(params.p);
    if (r >= levels)
        throw Error(ErrorKind::out_of_range, "r = " + std::to_string(r) + " must satisfy 0 <= r < " +
                                                 std::to_string(levels) + " for P = " + std::to_string(params.p));
    const double extra = as_real((std::size_t{1} << r) - 1);
    const double l = as_real(levels);
    const double k = as_real(params.p - 1);
    return breakdown_from_counts("intermediate", r, 2 * l - as_real(r), 2 * k + extra * (l - 1),
                                 k + extra * (2 * l - 2), params);
}

/// L alpha + P L u beta + P (2L - 2) u gamma. The compute coefficient is the
/// worst case for L >= 2; at P = 2 (L = 1) it is 0.
inline CostBreakdown tau_lo(const CostParams& params) {
    params.validate();
    const std::size_t levels = ceil_log2(params.p);
    const double l = as_real(levels);
    const double p = as_real(params.p);
    const double compute = levels >= 1 ? p * (2 * l - 2) : 0.0;
    return breakdown_from_counts("latency_optimal", levels, l, p * l, compute, params);
}

enum class Baseline { recursive_doubling, recursive_halving, ring };

inline std::string_view to_string(Baseline b) {
    switch (b) {
    case Baseline::recursive_doubling: return "rd";
    case Baseline::recursive_halving: return "rh";
    case Baseline::ring: return "ring";
    }
    return "ring";
}

/// Standard forms of the classic algorithms. For P a power of two:
///   rd = L (alpha + m beta + m gamma)
///   rh = 2L alpha + 2(P-1) u beta + (P-1) u gamma
/// Otherwise both run on P' = the largest power of two below P, with one
/// preparation and one finalization step moving an extra 2m bytes.
inline CostBreakdown tau_baseline(Baseline which, const CostParams& params) {
    params.validate();
    if (which == Baseline::ring) return tau_ring(params);

    const bool folded = params.p > 1 && !is_power_of_two(params.p);
    const std::size_t core_p = folded ? largest_power_of_two_below(params.p) : params.p;
    const double l = as_real(ceil_log2(core_p));
    const double m = params.m;
    const double core_u = m / as_real(core_p);

    CostBreakdown b;
    b.algorithm = std::string(to_string(which));
    if (which == Baseline::recursive_doubling) {
        b.latency_term = l * params.alpha;
        b.bandwidth_term = l * m * params.beta;
        b.compute_term = l * m * params.gamma;
    } else {
        const double k = as_real(core_p - 1);
        b.latency_term = 2 * l * params.alpha;
        b.bandwidth_term = 2 * k * core_u * params.beta;
        b.compute_term = k * core_u * params.gamma;
    }
    if (folded) {
        b.latency_term += 2 * params.alpha;
        b.bandwidth_term += 2 * m * params.beta;
    }
    b.total = b.latency_term + b.bandwidth_term + b.compute_term;
    return b;
}

/// min(rd, rh, ring); ties go to the earlier of that list.
inline CostBreakdown tau_best_baseline(const CostParams& params) {
    CostBreakdown best = tau_baseline(Baseline::recursive_doubling, params);
    for (Baseline b : {Baseline::recursive_halving, Baseline::ring}) {
        CostBreakdown c = tau_baseline(b, params);
        if (c.total < best.total) best = c;
    }
    return best;
}

struct OptimalR {
    std::size_t r = 0;         // ceil(log2 P) means the latency-optimal variant
    double analytic_r = 0.0;   // unclamped real minimizer, may be +-inf
    bool latency_optimal = false;
    CostBreakdown chosen;
};

/// Real minimizer of the intermediate cost in r:
///   log2(alpha / (m (beta + 2 gamma))) + log2(P / ((log2 P - 1) ln 2)).
inline double analytic_optimal_r(const CostParams& params) {
    const double denom = params.m * (params.beta + 2 * params.gamma);
    const double lp = std::log2(as_real(params.p)) - 1.0;
    if (denom <= 0.0 || lp <= 0.0) return std::numeric_limits<double>::infinity();
    if (params.alpha <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log2(params.alpha / denom) + std::log2(as_real(params.p) / (lp * std::log(2.0)));
}

/// Cost of the variant that removes r distribution steps, r in [0, L]; r == L is
/// the latency-optimal variant.
inline CostBreakdown tau_variant(const CostParams& params, std::size_t r) {
    const std::size_t levels = ceil_log2(params.p);
    if (r == levels) return tau_lo(params);
    if (r == 0) return tau_bo(params);
    return tau_intermediate(params, r);
}

/// Picks the cheapest r in [0, L]. The analytic minimizer is reported, but the
/// choice comes from evaluating every integer r, ties going to the smaller r.
/// When beta + 2 gamma == 0 nothing is gained by sending less, and the
/// latency-optimal variant is chosen.
inline OptimalR optimal_r(const CostParams& params) {
    params.validate();
    if (params.p < 2) throw Error(ErrorKind::invalid_params, "optimal_r needs P >= 2");
    const std::size_t levels = ceil_log2(params.p);

    OptimalR out;
    out.analytic_r = analytic_optimal_r(params);
    if (params.beta + 2 * params.gamma == 0.0) {
        out.r = levels;
        out.latency_optimal = true;
        out.chosen = tau_lo(params);
        return out;
    }
    out.r = 0;
    out.chosen = tau_variant(params, 0);
    for (std::size_t r = 1; r <= levels; ++r) {
        CostBreakdown c = tau_variant(params, r);
        if (c.total < out.chosen.total) {
            out.chosen = c;
            out.r = r;
        }
    }
    out.latency_optimal = out.r == levels;
    return out;
}

struct RatioRow {
    std::size_t p = 0;
    double m = 0.0;
    CostBreakdown best_new;
    CostBreakdown best_baseline;
    double ratio = 0.0;
};

/// For every (P, m) in grid order: the cheapest new variant against min(rd, rh, ring).
inline std::vector<RatioRow> ratio_sweep(const std::vector<std::size_t>& p_list, const std::vector<double>& m_list,
                                         const CostParams& params) {
    if (p_list.empty() || m_list.empty()) throw Error(ErrorKind::invalid_params, "sweep grid is empty");
    std::vector<RatioRow> rows;
    rows.reserve(p_list.size() * m_list.size());
    for (std::size_t p : p_list) {
        for (double m : m_list) {
            const CostParams at = params.with(p, m);
            at.validate();
            RatioRow row;
            row.p = p;
            row.m = m;
            row.best_new = tau_variant(at, 0);
            for (std::size_t r = 1; r <= ceil_log2(p); ++r) {
                CostBreakdown c = tau_variant(at, r);
                if (c.total < row.best_new.total) row.best_new = c;
            }
            row.best_baseline = tau_best_baseline(at);
            row.ratio = row.best_baseline.total > 0.0 ? row.best_new.total / row.best_baseline.total : 1.0;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

/// `count` points from lo to hi inclusive, evenly spaced in log10.
inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || count == 0)
        throw Error(ErrorKind::invalid_params, "log grid needs 0 < lo <= hi and count > 0");
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) return {lo};
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t k = 0; k < count; ++k) {
        if (k == 0) out.push_back(lo);
        else if (k + 1 == count) out.push_back(hi);
        else out.push_back(std::pow(10.0, a + (b - a) * as_real(k) / as_real(count - 1)));
    }
    return out;
}

/// Shortest round-trip decimal form.
inline std::string format_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline constexpr std::string_view sweep_csv_header =
    "P,m,algorithm,r,latency_term,bandwidth_term,compute_term,total,ratio";

inline void write_csv_row(std::ostream& out, std::size_t p, double m, const CostBreakdown& b, double ratio) {
    out << p << ',' << format_real(m) << ',' << b.algorithm << ',' << b.r << ',' << format_real(b.latency_term)
        << ',' << format_real(b.bandwidth_term) << ',' << format_real(b.compute_term) << ','
        << format_real(b.total) << ',' << format_real(ratio);
}

} // namespace permreduce
