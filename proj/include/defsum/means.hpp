#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <vector>

#include "defsum/schedule.hpp"
#include "defsum/seq.hpp"
#include "defsum/summation.hpp"

namespace defsum {

// Compensated sum of x over the window (p, q].
template <class S>
S window_sum(const BasicSeq<S>& x, Window w) {
    CompensatedSum<S> acc;
    for (Index k = w.p + 1; k <= w.q; ++k) acc.add(x.at(k));
    return acc.value();
}

// S map: (Sx)_k = x_1 + ... + x_k. Values are cached behind the sequence so
// ascending traversals cost O(1) per coordinate.
template <class S>
BasicSeq<S> forward_sum(const BasicSeq<S>& x) {
    struct Cache {
        std::mutex m;
        CompensatedSum<S> acc;
        std::vector<S> vals;
        S at(const BasicSeq<S>& src, Index k) {
            std::scoped_lock lock(m);
            while (static_cast<Index>(vals.size()) < k) {
                acc.add(src.at(static_cast<Index>(vals.size()) + 1));
                vals.push_back(acc.value());
            }
            return vals[static_cast<std::size_t>(k - 1)];
        }
    };
    auto cache = std::make_shared<Cache>();
    Tail<S> tail = Tail<S>::unknown();
    if (x.tail().kind == TailKind::EventuallyZero) {
        const Index m = x.tail().from;
        tail = (m <= 1) ? Tail<S>::zero(1)
                        : Tail<S>::constant(std::max<Index>(m - 1, 1), cache->at(x, m - 1));
    }
    return BasicSeq<S>::from_fn([x, cache](Index k) { return cache->at(x, k); }, tail,
                                "S(" + x.describe() + ")");
}

template <class S>
BasicSeq<S> partial_sums(const BasicSeq<S>& x) {
    return forward_sum(x);
}

// S^{-1} map: y_1 = x_1, y_j = x_j - x_{j-1}.
template <class S>
BasicSeq<S> backward_diff(const BasicSeq<S>& x) {
    Tail<S> tail = Tail<S>::unknown();
    switch (x.tail().kind) {
    case TailKind::EventuallyZero:
    case TailKind::EventuallyConstant:
        tail = Tail<S>::zero(x.tail().from + 1);
        break;
    case TailKind::AbsBound:
        tail = Tail<S>::abs_bound(x.tail().from + 1, x.tail().ratio,
                                  x.tail().coeff * (1.0 + 1.0 / x.tail().ratio));
        break;
    default:
        break;
    }
    return BasicSeq<S>::from_fn(
        [x](Index j) { return j == 1 ? x.at(1) : S{x.at(j) - x.at(j - 1)}; }, tail,
        "Sinv(" + x.describe() + ")");
}

// Dense trace of the deferred mean for n in [n_lo, n_hi]. When the window
// boundaries are nondecreasing in n and a single pass is cheaper, window sums
// are taken as differences of compensated prefix states; otherwise each
// window is summed directly. For p == 0 the two agree bit for bit.
template <class S>
std::vector<S> deferred_mean_trace(const BasicSeq<S>& x, const DefermentSchedule& d, Index n_lo,
                                   Index n_hi) {
    std::vector<S> out;
    if (n_hi < n_lo) return out;
    const std::size_t count = static_cast<std::size_t>(n_hi - n_lo + 1);
    std::vector<Window> wins;
    wins.reserve(count);
    bool monotone = true;
    Index total_width = 0, max_q = 0;
    for (Index n = n_lo; n <= n_hi; ++n) {
        const Window w = d.window(n);
        if (!wins.empty() && (w.p < wins.back().p || w.q < wins.back().q)) monotone = false;
        total_width += w.width();
        max_q = std::max(max_q, w.q);
        wins.push_back(w);
    }
    out.reserve(count);
    if (monotone && total_width > 2 * max_q) {
        // One compensated pass over the coordinates, with state snapshots at
        // every window boundary.
        std::vector<Index> bounds;
        bounds.reserve(2 * count);
        for (const Window& w : wins) {
            bounds.push_back(w.p);
            bounds.push_back(w.q);
        }
        std::sort(bounds.begin(), bounds.end());
        bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
        std::map<Index, CompensatedSum<S>> snaps;
        CompensatedSum<S> acc;
        std::size_t bi = 0;
        if (bi < bounds.size() && bounds[bi] == 0) snaps.emplace(0, acc), ++bi;
        for (Index j = 1; j <= max_q && bi < bounds.size(); ++j) {
            acc.add(x.at(j));
            if (bounds[bi] == j) snaps.emplace(j, acc), ++bi;
        }
        for (const Window& w : wins)
            out.push_back(CompensatedSum<S>::between(snaps.at(w.q), snaps.at(w.p)) /
                          double(w.width()));
    } else {
        CompensatedSum<S> acc;
        Index cur_p = 0, cur_q = 0;
        bool have = false;
        for (const Window& w : wins) {
            if (!(have && cur_p == w.p && cur_q <= w.q)) {
                acc = CompensatedSum<S>{};
                cur_p = w.p;
                cur_q = w.p;
                have = true;
            }
            while (cur_q < w.q) acc.add(x.at(++cur_q));
            out.push_back(acc.value() / double(w.width()));
        }
    }
    return out;
}

// The deferred Cesaro mean as a lazy sequence:
//   (D_{p,q} x)_n = (1/(q(n)-p(n))) * sum_{k=p(n)+1}^{q(n)} x_k.
// Repeated evaluation with the same p and growing q extends the previous
// window sum instead of starting over.
template <class S>
BasicSeq<S> deferred_mean(const BasicSeq<S>& x, const DefermentSchedule& d) {
    struct Memo {
        std::mutex m;
        bool valid = false;
        Index p = 0, q = 0;
        CompensatedSum<S> acc;
    };
    auto memo = std::make_shared<Memo>();
    auto fn = [x, d, memo](Index n) -> S {
        const Window w = d.window(n);
        std::scoped_lock lock(memo->m);
        if (!(memo->valid && memo->p == w.p && memo->q <= w.q)) {
            memo->acc = CompensatedSum<S>{};
            memo->p = w.p;
            memo->q = w.p;
            memo->valid = true;
        }
        while (memo->q < w.q) memo->acc.add(x.at(++memo->q));
        return memo->acc.value() / double(w.width());
    };
    return BasicSeq<S>::from_fn(fn, Tail<S>::unknown(),
                                "D[" + d.name() + "](" + x.describe() + ")");
}

template <class S>
BasicSeq<S> cesaro_mean(const BasicSeq<S>& x) {
    return deferred_mean(x, DefermentSchedule::cesaro());
}

// zeta^n = e - (1/(q-p)) sum_{k=p+1}^{q} e^{(k)}, written in closed form:
// coordinate j is clamp(j-1-p, 0, q-p)/(q-p), so the first p+1 coordinates
// vanish, a ramp climbs to (q-p-1)/(q-p) at j = q, and the tail is 1.
inline Seq zeta(const DefermentSchedule& d, Index n) {
    const Window w = d.window(n);
    const double width = double(w.width());
    return Seq::from_fn(
        [w, width](Index j) {
            const Index c = std::clamp(j - 1 - w.p, Index{0}, w.q - w.p);
            return double(c) / width;
        },
        Tail<double>::constant(w.q + 1, 1.0),
        "zeta[" + d.name() + "](" + std::to_string(n) + ")");
}

// (1/(q-p)) sum_{k=p+1}^{q} delta^k: the averaged block of impulses.
inline Seq deferred_wedge_elem(const DefermentSchedule& d, Index n) {
    const Window w = d.window(n);
    const double width = double(w.width());
    return Seq::from_fn(
        [w, width](Index j) { return (j > w.p && j <= w.q) ? 1.0 / width : 0.0; },
        Tail<double>::zero(w.q + 1), "wedge[" + d.name() + "](" + std::to_string(n) + ")");
}

// x - (1/(q-p)) sum_{k=p+1}^{q} x^{(k)}, which collapses to x .* zeta^n.
inline Seq section_residual(const Seq& x, const DefermentSchedule& d, Index n) {
    return pointwise_product(x, zeta(d, n));
}

} // namespace defsum
