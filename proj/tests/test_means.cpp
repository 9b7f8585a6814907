#include "doctest.h"

#include <complex>
#include <vector>

#include "defsum/detect.hpp"
#include "defsum/means.hpp"

using namespace defsum;

namespace {

// Independent oracle: plain left-to-right window sum, no compensation.
double brute_window_mean(const Seq& x, const DefermentSchedule& d, Index n) {
    const Window w = d.window(n);
    long double s = 0.0L;
    for (Index k = w.p + 1; k <= w.q; ++k) s += x.at(k);
    return double(s / (long double)(w.width()));
}

Seq seeded(std::uint64_t seed) {
    return Seq::from_fn([seed](Index j) { return unit_noise(seed, std::uint64_t(j)); });
}

} // namespace

TEST_CASE("partial sums: impulses, ones, alternating") {
    auto s3 = partial_sums(Seq::delta(3));
    CHECK(s3.at(1) == 0.0);
    CHECK(s3.at(2) == 0.0);
    CHECK(s3.at(3) == 1.0);
    CHECK(s3.at(4) == 1.0);
    CHECK(s3.at(100) == 1.0);
    CHECK(s3.tail().kind == TailKind::EventuallyConstant);
    CHECK(s3.tail().value == 1.0);

    auto se = partial_sums(Seq::ones());
    for (Index k = 1; k <= 20; ++k) CHECK(se.at(k) == double(k));

    // direct summation oracle for (-1)^{k+1}
    auto sa = partial_sums(Seq::alternating());
    long double acc = 0.0L;
    for (Index k = 1; k <= 200; ++k) {
        acc += (k % 2 == 1) ? 1.0 : -1.0;
        CHECK(sa.at(k) == doctest::Approx(double(acc)).epsilon(1e-15));
        CHECK(sa.at(k) == ((k % 2 == 1) ? 1.0 : 0.0));
    }
}

TEST_CASE("deferred mean: definition, reduction, windows") {
    auto d = DefermentSchedule::block(); // p=n, q=2n
    auto k_seq = Seq::from_fn([](Index j) { return double(j); });
    auto m = deferred_mean(k_seq, d);
    for (Index n = 1; n <= 50; ++n) {
        // brute-force window sum oracle gives (3n+1)/2
        CHECK(m.at(n) == doctest::Approx((3.0 * double(n) + 1.0) / 2.0).epsilon(1e-14));
        CHECK(m.at(n) == doctest::Approx(brute_window_mean(k_seq, d, n)).epsilon(1e-13));
    }

    auto c = deferred_mean(Seq::constant(2.5), DefermentSchedule::cesaro());
    for (Index n = 1; n <= 30; ++n) CHECK(c.at(n) == doctest::Approx(2.5).epsilon(1e-15));

    // reduction: p=0, q=n is the classical mean, bit for bit
    auto x = seeded(11);
    auto dm = deferred_mean(x, DefermentSchedule::cesaro());
    auto cm = cesaro_mean(x);
    for (Index n = 1; n <= 300; ++n) CHECK(dm.at(n) == cm.at(n));
}

TEST_CASE("cesaro mean examples") {
    auto me = cesaro_mean(Seq::ones());
    for (Index n = 1; n <= 20; ++n) CHECK(me.at(n) == doctest::Approx(1.0).epsilon(1e-15));

    auto ma = cesaro_mean(Seq::alternating());
    for (Index mth = 1; mth <= 40; ++mth) {
        CHECK(ma.at(2 * mth) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(ma.at(2 * mth - 1) ==
              doctest::Approx(1.0 / double(2 * mth - 1)).epsilon(1e-14));
    }

    auto md = cesaro_mean(Seq::delta(1));
    for (Index n = 1; n <= 40; ++n) CHECK(md.at(n) == doctest::Approx(1.0 / double(n)));
}

TEST_CASE("deferred mean is linear") {
    auto x = seeded(3);
    auto y = seeded(4);
    auto d = DefermentSchedule::block();
    const double a = 1.75, b = -0.5;
    auto lhs = deferred_mean(linear_combination(a, x, b, y), d);
    auto rx = deferred_mean(x, d);
    auto ry = deferred_mean(y, d);
    for (Index n = 1; n <= 120; ++n)
        CHECK(lhs.at(n) == doctest::Approx(a * rx.at(n) + b * ry.at(n)).epsilon(1e-12));
}

TEST_CASE("schedule validation and unboundedness proxy") {
    auto bad = DefermentSchedule::custom([](Index n) { return n; },
                                         [](Index n) { return n <= 3 ? 2 * n : 2; }, "bad");
    CHECK_NOTHROW(bad.window(2));
    CHECK_THROWS_AS(bad.window(5), ScheduleError);
    try {
        bad.window(7);
        CHECK(false);
    } catch (const ScheduleError& e) {
        CHECK(e.n == 7);
        CHECK(e.p == 7);
        CHECK(e.q == 2);
    }

    CHECK(DefermentSchedule::cesaro().q_unbounded_proxy(64));
    CHECK(DefermentSchedule::block().q_unbounded_proxy(64));
    CHECK(DefermentSchedule::poly(1.0, 2.0).q_unbounded_proxy(64));
    auto flat = DefermentSchedule::custom([](Index) { return Index{0}; },
                                          [](Index) { return Index{5}; }, "flat");
    CHECK_FALSE(flat.q_unbounded_proxy(64));

    auto m = deferred_mean(Seq::ones(), bad);
    CHECK_THROWS_AS((void)m.at(5), ScheduleError);
}

TEST_CASE("zeta coordinates match the displayed form") {
    auto table = DefermentSchedule::from_table({{2, 6}});
    auto z = zeta(table, 1);
    const std::vector<double> want{0, 0, 0, 0.25, 0.5, 0.75, 1, 1, 1};
    for (std::size_t j = 0; j < want.size(); ++j) CHECK(z.at(Index(j + 1)) == want[j]);
    CHECK(z.tail().kind == TailKind::EventuallyConstant);
    CHECK(z.tail().from == 7);
    CHECK(z.tail().value == 1.0);

    // p=0, q=1: e - e^{(1)}
    auto z01 = zeta(DefermentSchedule::cesaro(), 1);
    CHECK(z01.at(1) == 0.0);
    CHECK(z01.at(2) == 1.0);
    CHECK(z01.at(3) == 1.0);

    // brute-force oracle: average the explicit sections e^{(k)}
    for (auto& d : {DefermentSchedule::cesaro(), DefermentSchedule::block(),
                    DefermentSchedule::poly(1.0, 2.0)}) {
        for (Index n : {1, 2, 3, 5, 8}) {
            const Window w = d.window(n);
            auto zn = zeta(d, n);
            for (Index j = 1; j <= w.q + 3; ++j) {
                long double acc = 0.0L;
                for (Index k = w.p + 1; k <= w.q; ++k) acc += (j <= k) ? 1.0 : 0.0;
                const double want_j = 1.0 - double(acc / (long double)w.width());
                CHECK(zn.at(j) == doctest::Approx(want_j).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("wedge element block and tail") {
    auto table = DefermentSchedule::from_table({{2, 6}});
    auto wdg = deferred_wedge_elem(table, 1);
    const std::vector<double> want{0, 0, 0.25, 0.25, 0.25, 0.25, 0, 0};
    for (std::size_t j = 0; j < want.size(); ++j) CHECK(wdg.at(Index(j + 1)) == want[j]);
    CHECK(wdg.tail().kind == TailKind::EventuallyZero);
    CHECK(wdg.tail().from == 7);

    auto w01 = deferred_wedge_elem(DefermentSchedule::cesaro(), 1);
    CHECK(w01.at(1) == 1.0);
    CHECK(w01.at(2) == 0.0);
}

TEST_CASE("forward/backward round trips") {
    CHECK(forward_sum(Seq::delta(1)).at(7) == 1.0);
    auto bd = backward_diff(Seq::ones());
    CHECK(bd.at(1) == 1.0);
    for (Index j = 2; j <= 30; ++j) CHECK(bd.at(j) == 0.0);

    for (std::uint64_t seed : {1ULL, 2ULL, 9ULL}) {
        auto x = seeded(seed);
        auto rt1 = backward_diff(forward_sum(x));
        auto rt2 = forward_sum(backward_diff(x));
        for (Index j = 1; j <= 200; ++j) {
            CHECK(rt1.at(j) == doctest::Approx(x.at(j)).epsilon(1e-12));
            CHECK(rt2.at(j) == doctest::Approx(x.at(j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("forward sum of the wedge element is zeta shifted by one slot") {
    // Exact content of the S-map lemma: the image of the averaged impulse
    // block is the zeta ramp displaced one coordinate to the left,
    // S(wedge)_j = zeta_{j+1}. Equality holds to rounding.
    for (auto& d : {DefermentSchedule::cesaro(), DefermentSchedule::block(),
                    DefermentSchedule::poly(1.0, 2.0)}) {
        for (Index n : {1, 2, 3, 7, 12}) {
            auto img = forward_sum(deferred_wedge_elem(d, n));
            auto zn = zeta(d, n);
            const Window w = d.window(n);
            for (Index j = 1; j <= w.q + 4; ++j)
                CHECK(img.at(j) == doctest::Approx(zn.at(j + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("trace engine matches per-window brute force") {
    auto x = seeded(21);
    for (auto& d : {DefermentSchedule::cesaro(), DefermentSchedule::block(),
                    DefermentSchedule::poly(1.0, 2.0), DefermentSchedule::unit_window()}) {
        auto tr = deferred_mean_trace(x, d, 1, 60);
        REQUIRE(tr.size() == 60);
        for (Index n = 1; n <= 60; ++n)
            CHECK(tr[std::size_t(n - 1)] ==
                  doctest::Approx(brute_window_mean(x, d, n)).epsilon(1e-12));
    }

    // p = 0: prefix-difference evaluation is bitwise the fresh window sum
    auto tr = deferred_mean_trace(x, DefermentSchedule::cesaro(), 1, 400);
    auto lazy = deferred_mean(x, DefermentSchedule::cesaro());
    for (Index n = 1; n <= 400; ++n) CHECK(tr[std::size_t(n - 1)] == lazy.at(n));
}

TEST_CASE("complex scalars run through the same mean machinery") {
    using C = std::complex<double>;
    auto xc = CSeq::from_fn([](Index j) {
        return C{unit_noise(5, std::uint64_t(j)), unit_noise(6, std::uint64_t(j))};
    });
    auto d = DefermentSchedule::block();
    auto m = deferred_mean(xc, d);
    for (Index n = 1; n <= 40; ++n) {
        const Window w = d.window(n);
        std::complex<long double> acc{0.0L, 0.0L};
        for (Index k = w.p + 1; k <= w.q; ++k) {
            const C v = xc.at(k);
            acc += std::complex<long double>{v.real(), v.imag()};
        }
        acc /= (long double)w.width();
        CHECK(std::abs(m.at(n) - C{double(acc.real()), double(acc.imag())}) < 1e-13);
    }
    auto mc = deferred_mean(CSeq::constant(C{1.0, -2.0}), d);
    CHECK(std::abs(mc.at(9) - C{1.0, -2.0}) < 1e-15);
}
