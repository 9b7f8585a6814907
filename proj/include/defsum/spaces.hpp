#pragma once

#include <optional>
#include <string>

#include "defsum/detect.hpp"
#include "defsum/means.hpp"
#include "defsum/schedule.hpp"
#include "defsum/seq.hpp"

namespace defsum {

enum class SpaceTag { C, C0, L1, BV, BV0, LINF, SigmaPQ };

// One of the concrete sequence spaces the toolkit can take norms in. SigmaPQ
// carries the deferment schedule that defines it.
struct SpaceId {
    SpaceTag tag = SpaceTag::C;
    std::optional<DefermentSchedule> schedule;

    static SpaceId c() { return {SpaceTag::C, std::nullopt}; }
    static SpaceId c0() { return {SpaceTag::C0, std::nullopt}; }
    static SpaceId l1() { return {SpaceTag::L1, std::nullopt}; }
    static SpaceId bv() { return {SpaceTag::BV, std::nullopt}; }
    static SpaceId bv0() { return {SpaceTag::BV0, std::nullopt}; }
    static SpaceId linf() { return {SpaceTag::LINF, std::nullopt}; }
    static SpaceId sigma_pq(DefermentSchedule d) { return {SpaceTag::SigmaPQ, std::move(d)}; }

    std::string name() const;
    bool sup_like() const { return tag == SpaceTag::C || tag == SpaceTag::C0 || tag == SpaceTag::LINF; }
};

SpaceId space_from_name(const std::string& name);

struct NormReport {
    double value = 0.0;
    bool exact = false; // truncation error provably < 1e-12
    Index trunc = 0;
    std::string note;
};

struct NormOptions {
    Index trunc = 1000; // coordinate cutoff; n-horizon for the SigmaPQ norm
    DetectOptions detect = {.tol = 1e-8, .window = 12, .horizon = 1000};
};

// Truncated norm of x in the given space. For L1/BV the exact flag reflects
// whether the tail descriptor bounds the remainder; a constant nonzero tail
// makes the l1 norm provably infinite.
NormReport norm(const SpaceId& space, const Seq& x, const NormOptions& opt = {});

// sup_k |x_1 + ... + x_k|, the cs seminorm, offered as a utility.
double cs_norm(const Seq& x, Index trunc);

// Membership of x in sigma_p^q[s]: do the deferred averages of the partial
// sums of x settle?
Verdict member_sigma_pq_s(const Seq& x, const DefermentSchedule& d, const DetectOptions& opt = {});

// d-dual pairing: x.y in sigma_p^q[s].
Verdict d_dual_test(const Seq& x, const Seq& y, const DefermentSchedule& d,
                    const DetectOptions& opt = {});

// sigma-dual pairing: the d-dual pairing under the classical windows.
Verdict sigma_dual_test(const Seq& x, const Seq& y, const DetectOptions& opt = {});

struct KTestOptions {
    DetectOptions detect = {.tol = 1e-5, .window = 16, .horizon = 400};
    Index trunc = 256;      // floor for the per-n coordinate cutoff
    double zero_tol = 1e-3; // "converged to zero" threshold
};

struct KTestReport {
    Verdict verdict;
    bool holds = false; // T_n settled below zero_tol
    std::string note;
};

// Sectional convergence test: T_n = ||x - window-average of sections||, with
// the residual evaluated as x .* zeta^n. The property holds at truncation
// when T_n settles at zero.
KTestReport sigma_pq_K_test(const SpaceId& space, const Seq& x, const DefermentSchedule& d,
                            const KTestOptions& opt = {});

} // namespace defsum
