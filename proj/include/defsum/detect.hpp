#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "defsum/means.hpp"
#include "defsum/seq.hpp"

namespace defsum {

struct DetectOptions {
    double tol = 1e-8;
    Index window = 16;
    Index horizon = 10000;
    double divergence_bound = 1e12;
    // Oscillation floor; negative means the default 1e3 * tol.
    double oscillation_floor = -1.0;
    Index trace_cap = 512;

    double floor() const { return oscillation_floor < 0 ? 1e3 * tol : oscillation_floor; }
};

enum class Status { Converged, Diverged, Inconclusive };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::Converged: return "converged";
    case Status::Diverged: return "diverged";
    default: return "inconclusive";
    }
}

template <class S>
struct BasicVerdict {
    Status status = Status::Inconclusive;
    std::optional<S> limit;      // present iff Converged
    double residual = 0.0;       // max pairwise spread over the decision window
    std::vector<std::pair<Index, S>> trace;
    std::string note;

    bool converged() const { return status == Status::Converged; }
    // Converged with |limit| below the given tolerance.
    bool converged_to_zero(double zero_tol) const {
        return converged() && limit && std::abs(*limit) <= zero_tol;
    }
};

using Verdict = BasicVerdict<double>;

namespace detail {
template <class S>
double spread(const S* v, std::size_t count) {
    if constexpr (std::is_same_v<S, double>) {
        double lo = v[0], hi = v[0];
        for (std::size_t i = 1; i < count; ++i) {
            lo = std::min(lo, v[i]);
            hi = std::max(hi, v[i]);
        }
        return hi - lo;
    } else {
        double m = 0.0;
        for (std::size_t a = 0; a < count; ++a)
            for (std::size_t b = a + 1; b < count; ++b) m = std::max(m, std::abs(v[a] - v[b]));
        return m;
    }
}
} // namespace detail

// Decides whether the value stream v_1..v_horizon settles. Converged means
// the final `window` values agree within tol (limit = their mean, residual =
// their spread). Diverged means a value escaped the divergence bound, or the
// final window oscillates above the floor without the oscillation shrinking.
// Everything else is Inconclusive: a truncated run never proves a limit.
template <class S>
BasicVerdict<S> detect_limit(const std::vector<S>& values, const DetectOptions& opt = {}) {
    BasicVerdict<S> out;
    if (opt.window < 2 || opt.horizon < opt.window)
        throw std::invalid_argument("detect_limit: need horizon >= window >= 2");
    if (values.empty()) throw std::invalid_argument("detect_limit: empty stream");
    const std::size_t n = values.size();
    const std::size_t w = static_cast<std::size_t>(std::min<Index>(opt.window, Index(n)));

    // thinned trace: subsample evenly, always keeping the final window
    const std::size_t cap = std::max<std::size_t>(static_cast<std::size_t>(opt.trace_cap), w + 2);
    const std::size_t stride = n <= cap ? 1 : (n + cap - 1) / cap;
    for (std::size_t i = 0; i < n; i += stride)
        out.trace.emplace_back(static_cast<Index>(i + 1), values[i]);
    for (std::size_t i = n >= w ? n - w : 0; i < n; ++i)
        if ((i % stride) != 0) out.trace.emplace_back(static_cast<Index>(i + 1), values[i]);
    std::sort(out.trace.begin(), out.trace.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.trace.erase(std::unique(out.trace.begin(), out.trace.end(),
                                [](const auto& a, const auto& b) { return a.first == b.first; }),
                    out.trace.end());

    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::abs(values[i]) <= opt.divergence_bound)) {
            out.status = Status::Diverged;
            out.note = "value exceeded divergence bound at n=" + std::to_string(i + 1);
            const double r = detail::spread(values.data() + (n - w), w);
            out.residual = std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
            return out;
        }
    }

    const S* tailv = values.data() + (n - w);
    out.residual = detail::spread(tailv, w);
    if (n >= w && out.residual < opt.tol) {
        CompensatedSum<S> acc;
        for (std::size_t i = 0; i < w; ++i) acc.add(tailv[i]);
        out.status = Status::Converged;
        out.limit = acc.value() / double(w);
        return out;
    }
    if (out.residual > opt.floor() && w >= 4) {
        const std::size_t half = w / 2;
        const double first = detail::spread(tailv, half);
        const double second = detail::spread(tailv + half, w - half);
        if (second >= first) {
            out.status = Status::Diverged;
            out.note = "persistent oscillation over the final window";
            return out;
        }
    }
    out.status = Status::Inconclusive;
    out.note = "spread " + std::to_string(out.residual) + " above tol at horizon";
    return out;
}

template <class S>
BasicVerdict<S> detect_limit(const std::function<S(Index)>& fn, const DetectOptions& opt = {}) {
    if (opt.window < 2 || opt.horizon < opt.window)
        throw std::invalid_argument("detect_limit: need horizon >= window >= 2");
    std::vector<S> values;
    values.reserve(static_cast<std::size_t>(opt.horizon));
    for (Index n = 1; n <= opt.horizon; ++n) values.push_back(fn(n));
    return detect_limit(values, opt);
}

template <class S>
BasicVerdict<S> detect_limit(const BasicSeq<S>& x, const DetectOptions& opt = {}) {
    return detect_limit<S>([&x](Index n) { return x.at(n); }, opt);
}

// Deferred-mean membership streams evaluated through the trace engine.
template <class S>
BasicVerdict<S> detect_deferred_mean(const BasicSeq<S>& x, const DefermentSchedule& d,
                                     const DetectOptions& opt = {}) {
    if (opt.window < 2 || opt.horizon < opt.window)
        throw std::invalid_argument("detect_limit: need horizon >= window >= 2");
    return detect_limit(deferred_mean_trace(x, d, 1, opt.horizon), opt);
}

} // namespace defsum
