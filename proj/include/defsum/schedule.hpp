#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "defsum/seq.hpp"

namespace defsum {

// Summation window (p, q]: the indices p+1 .. q.
struct Window {
    Index p = 0;
    Index q = 1;
    Index width() const { return q - p; }
};

class ScheduleError : public std::runtime_error {
public:
    ScheduleError(Index n, Index p, Index q)
        : std::runtime_error("invalid deferment window at n=" + std::to_string(n) + ": p=" +
                             std::to_string(p) + " >= q=" + std::to_string(q)),
          n(n), p(p), q(q) {}
    Index n, p, q;
};

// The pair of integer sequences p(n), q(n) with p(n) < q(n) and q unbounded.
// Immutable; evaluation validates the window at each requested n.
class DefermentSchedule {
public:
    using Fn = std::function<Index(Index)>;

    static DefermentSchedule custom(Fn p, Fn q, std::string name) {
        return DefermentSchedule(std::move(p), std::move(q), std::move(name));
    }

    // p = 0, q = n: the classical Cesaro windows.
    static DefermentSchedule cesaro() {
        return custom([](Index) { return Index{0}; }, [](Index n) { return n; }, "cesaro");
    }

    // p = n, q = 2n: windows that escape to the right.
    static DefermentSchedule block() {
        return custom([](Index n) { return n; }, [](Index n) { return 2 * n; }, "block");
    }

    // p = floor(n^a), q = floor(n^b). q is bumped to p+1 where the floors
    // collide (only possible at small n).
    static DefermentSchedule poly(double a, double b) {
        if (!(b > a) || a < 0.0)
            throw std::invalid_argument("poly schedule requires 0 <= a < b");
        auto pf = [a](Index n) { return static_cast<Index>(std::floor(std::pow(double(n), a))); };
        auto qf = [a, b](Index n) {
            const Index p = static_cast<Index>(std::floor(std::pow(double(n), a)));
            const Index q = static_cast<Index>(std::floor(std::pow(double(n), b)));
            return std::max(q, p + 1);
        };
        return custom(pf, qf, "poly(" + std::to_string(a) + "," + std::to_string(b) + ")");
    }

    // p = n, q = n+1: bounded windows, used to probe schedule sensitivity.
    static DefermentSchedule unit_window() {
        return custom([](Index n) { return n; }, [](Index n) { return n + 1; }, "unit");
    }

    static DefermentSchedule from_table(std::vector<std::pair<Index, Index>> rows) {
        if (rows.empty()) throw std::invalid_argument("schedule table must be nonempty");
        auto shared = std::make_shared<const std::vector<std::pair<Index, Index>>>(std::move(rows));
        const Index n_max = static_cast<Index>(shared->size());
        auto at = [shared, n_max](Index n) {
            if (n < 1 || n > n_max)
                throw std::out_of_range("schedule table has no row for n=" + std::to_string(n));
            return (*shared)[static_cast<std::size_t>(n - 1)];
        };
        return custom([at](Index n) { return at(n).first; },
                      [at](Index n) { return at(n).second; }, "custom-table");
    }

    Index p(Index n) const { return p_(n); }
    Index q(Index n) const { return q_(n); }

    Window window(Index n) const {
        if (n < 1) throw std::out_of_range("schedule evaluated at n < 1");
        const Index pn = p_(n);
        const Index qn = q_(n);
        if (pn < 0 || pn >= qn) throw ScheduleError(n, pn, qn);
        return {pn, qn};
    }

    const std::string& name() const { return name_; }

    // Finite-sample proxy for lim q(n) = infinity: the running max of q over
    // the second half of [1, 2*horizon] must exceed the max over the first.
    bool q_unbounded_proxy(Index horizon) const {
        Index first = 0, second = 0;
        for (Index n = 1; n <= horizon; ++n) first = std::max(first, q_(n));
        for (Index n = horizon + 1; n <= 2 * horizon; ++n) second = std::max(second, q_(n));
        return second > first;
    }

private:
    DefermentSchedule(Fn p, Fn q, std::string name)
        : p_(std::move(p)), q_(std::move(q)), name_(std::move(name)) {}
    Fn p_;
    Fn q_;
    std::string name_;
};

} // namespace defsum
