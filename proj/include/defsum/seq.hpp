#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "defsum/summation.hpp"

namespace defsum {

using Index = std::int64_t;

// What is known about a sequence beyond any finite prefix. `from` is the
// first index at which the description applies.
enum class TailKind { Unknown, EventuallyZero, EventuallyConstant, AbsBound };

template <class S>
struct Tail {
    TailKind kind = TailKind::Unknown;
    Index from = 0;
    S value{};           // EventuallyConstant
    double ratio = 0.0;  // AbsBound: |x_j| <= coeff * ratio^j for j >= from, ratio < 1
    double coeff = 0.0;

    static Tail unknown() { return {}; }
    static Tail zero(Index from) { return {TailKind::EventuallyZero, from, S{}, 0.0, 0.0}; }
    static Tail constant(Index from, S v) {
        if (v == S{}) return zero(from);
        return {TailKind::EventuallyConstant, from, v, 0.0, 0.0};
    }
    static Tail abs_bound(Index from, double ratio, double coeff) {
        return {TailKind::AbsBound, from, S{}, ratio, coeff};
    }

    // Upper bound for sum_{j>k} |x_j|, when the descriptor provides one.
    // Requires k+1 >= from.
    double abs_sum_beyond(Index k) const {
        switch (kind) {
        case TailKind::EventuallyZero: return 0.0;
        case TailKind::AbsBound: return coeff * std::pow(ratio, double(k + 1)) / (1.0 - ratio);
        default: return std::numeric_limits<double>::infinity();
        }
    }
};

// A lazily evaluated scalar sequence with 1-based coordinates. Immutable and
// cheap to copy; any internal caching is synchronized, so instances may be
// shared across threads.
template <class S>
class BasicSeq {
public:
    using value_type = S;

    BasicSeq() : BasicSeq(zeros()) {}

    S at(Index j) const {
        if (j < 1) throw std::out_of_range("BasicSeq::at: index must be >= 1");
        return impl_->fn(j);
    }
    const Tail<S>& tail() const { return impl_->tail; }
    const std::string& describe() const { return impl_->name; }

    std::vector<S> head(Index count) const {
        std::vector<S> out;
        out.reserve(static_cast<std::size_t>(count));
        for (Index j = 1; j <= count; ++j) out.push_back(at(j));
        return out;
    }

    static BasicSeq from_fn(std::function<S(Index)> fn, Tail<S> tail = Tail<S>::unknown(),
                            std::string name = "fn") {
        return BasicSeq(std::make_shared<Impl>(Impl{std::move(fn), tail, std::move(name)}));
    }

    static BasicSeq zeros() {
        return from_fn([](Index) { return S{}; }, Tail<S>::zero(1), "zero");
    }

    static BasicSeq constant(S c) {
        return from_fn([c](Index) { return c; }, Tail<S>::constant(1, c), "constant");
    }

    static BasicSeq ones() { return constant(S{1}); }

    // delta(j): the impulse with a single one at position j.
    static BasicSeq delta(Index pos) {
        if (pos < 1) throw std::invalid_argument("delta: position must be >= 1");
        return from_fn([pos](Index j) { return j == pos ? S{1} : S{}; },
                       Tail<S>::zero(pos + 1), "delta(" + std::to_string(pos) + ")");
    }

    // (+1, -1, +1, ...): sign (-1)^{k+1}.
    static BasicSeq alternating() {
        return from_fn([](Index j) { return (j % 2 == 1) ? S{1} : S{-1}; },
                       Tail<S>::unknown(), "alternating");
    }

    // x_k = k^{-s}.
    static BasicSeq harmonic_power(double s) {
        return from_fn([s](Index j) { return S{std::pow(double(j), -s)}; },
                       Tail<S>::unknown(), "harmonic-power(" + std::to_string(s) + ")");
    }

    // x_k = u_k * decay^k with u_k deterministic noise in [-1, 1].
    static BasicSeq random_decay(std::uint64_t seed, double decay) {
        if (!(decay > 0.0) || decay >= 1.0)
            throw std::invalid_argument("random_decay: decay must be in (0, 1)");
        return from_fn(
            [seed, decay](Index j) {
                return S{unit_noise(seed, std::uint64_t(j)) * std::pow(decay, double(j))};
            },
            Tail<S>::abs_bound(1, decay, 1.0), "random(" + std::to_string(seed) + ")");
    }

    // Finite head followed by a constant (default zero) tail.
    static BasicSeq from_table(std::vector<S> head, S rest = S{}) {
        const Index n = static_cast<Index>(head.size());
        auto shared = std::make_shared<const std::vector<S>>(std::move(head));
        Tail<S> tail = (rest == S{}) ? Tail<S>::zero(n + 1) : Tail<S>::constant(n + 1, rest);
        return from_fn(
            [shared, rest, n](Index j) {
                return j <= n ? (*shared)[static_cast<std::size_t>(j - 1)] : rest;
            },
            tail, "table");
    }

private:
    struct Impl {
        std::function<S(Index)> fn;
        Tail<S> tail;
        std::string name;
    };
    explicit BasicSeq(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

using Seq = BasicSeq<double>;
using CSeq = BasicSeq<std::complex<double>>;

namespace detail {
template <class S>
Tail<S> product_tail(const Tail<S>& a, const Tail<S>& b) {
    if (a.kind == TailKind::EventuallyZero) return Tail<S>::zero(a.from);
    if (b.kind == TailKind::EventuallyZero) return Tail<S>::zero(b.from);
    const Index from = std::max(a.from, b.from);
    if (a.kind == TailKind::EventuallyConstant && b.kind == TailKind::EventuallyConstant)
        return Tail<S>::constant(from, a.value * b.value);
    if (a.kind == TailKind::AbsBound && b.kind == TailKind::AbsBound)
        return Tail<S>::abs_bound(from, a.ratio * b.ratio, a.coeff * b.coeff);
    if (a.kind == TailKind::AbsBound && b.kind == TailKind::EventuallyConstant)
        return Tail<S>::abs_bound(from, a.ratio, a.coeff * std::abs(b.value));
    if (a.kind == TailKind::EventuallyConstant && b.kind == TailKind::AbsBound)
        return Tail<S>::abs_bound(from, b.ratio, b.coeff * std::abs(a.value));
    return Tail<S>::unknown();
}

template <class S>
Tail<S> sum_tail(const Tail<S>& a, const Tail<S>& b, S alpha, S beta) {
    const Index from = std::max(a.from, b.from);
    auto scaled_const = [](const Tail<S>& t, S c) -> std::pair<bool, S> {
        if (t.kind == TailKind::EventuallyZero) return {true, S{}};
        if (t.kind == TailKind::EventuallyConstant) return {true, c * t.value};
        return {false, S{}};
    };
    auto [ca, va] = scaled_const(a, alpha);
    auto [cb, vb] = scaled_const(b, beta);
    if (ca && cb) return Tail<S>::constant(from, va + vb);
    auto bound = [](const Tail<S>& t, S c) -> std::pair<bool, Tail<S>> {
        if (t.kind == TailKind::AbsBound)
            return {true, Tail<S>::abs_bound(t.from, t.ratio, t.coeff * std::abs(c))};
        if (t.kind == TailKind::EventuallyZero) return {true, Tail<S>::abs_bound(t.from, 0.5, 0.0)};
        return {false, {}};
    };
    auto [ba, ta] = bound(a, alpha);
    auto [bb, tb] = bound(b, beta);
    if (ba && bb) {
        const double r = std::max(ta.ratio, tb.ratio);
        const double c = ta.coeff + tb.coeff;
        if (c == 0.0) return Tail<S>::zero(from);
        return Tail<S>::abs_bound(from, r, c);
    }
    return Tail<S>::unknown();
}
} // namespace detail

template <class S>
BasicSeq<S> pointwise_product(const BasicSeq<S>& x, const BasicSeq<S>& y) {
    return BasicSeq<S>::from_fn([x, y](Index j) { return x.at(j) * y.at(j); },
                                detail::product_tail(x.tail(), y.tail()),
                                x.describe() + "*" + y.describe());
}

template <class S>
BasicSeq<S> linear_combination(S alpha, const BasicSeq<S>& x, S beta, const BasicSeq<S>& y) {
    return BasicSeq<S>::from_fn(
        [alpha, x, beta, y](Index j) { return alpha * x.at(j) + beta * y.at(j); },
        detail::sum_tail(x.tail(), y.tail(), alpha, beta), "lincomb");
}

template <class S>
BasicSeq<S> scale(S alpha, const BasicSeq<S>& x) {
    return linear_combination(alpha, x, S{}, BasicSeq<S>::zeros());
}

} // namespace defsum
