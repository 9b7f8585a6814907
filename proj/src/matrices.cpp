#include "defsum/matrices.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace defsum {

namespace {

Index clamp_count(Index v, Index hi) { return std::clamp<Index>(v, 0, hi); }

class IdentityMatrix final : public InfiniteMatrix {
public:
    double entry(Index i, Index j) const override { return i == j ? 1.0 : 0.0; }
    double row_tail(Index i, Index k) const override { return i > k ? 1.0 : 0.0; }
    double abs_row_tail(Index i, Index k) const override { return row_tail(i, k); }
    std::optional<Index> row_support_end(Index i) const override { return i; }
    double window_tail_average(Window w, Index i) const override {
        return double(clamp_count(std::min(w.q, i - 1) - w.p, w.width())) / double(w.width());
    }
    std::optional<ZiEventual> zi_eventual(Window w) const override {
        return ZiEventual{ZiEventual::Kind::ConstantFrom, w.q + 1, 1.0};
    }
    std::optional<double> head_average_bound() const override { return 1.0; }
    std::optional<double> column_limit(Index) const override { return 0.0; }
    bool phi1_declared() const override { return true; }
    Tail<double> transform_tail(const Tail<double>& t) const override { return t; }
    std::string describe() const override { return "identity"; }
};

class CesaroC1Matrix final : public InfiniteMatrix {
public:
    double entry(Index i, Index j) const override { return j <= i ? 1.0 / double(i) : 0.0; }
    double row_tail(Index i, Index k) const override {
        return k >= i ? 0.0 : double(i - k) / double(i);
    }
    double abs_row_tail(Index i, Index k) const override { return row_tail(i, k); }
    std::optional<Index> row_support_end(Index i) const override { return i; }
    double window_tail_average(Window w, Index i) const override {
        const Index hi = std::min(w.q, i - 1);
        if (hi <= w.p) return 0.0;
        const Index count = hi - w.p;
        const double sum_k = 0.5 * (double(hi) * double(hi + 1) - double(w.p) * double(w.p + 1));
        return (double(count) - sum_k / double(i)) / double(w.width());
    }
    std::optional<ZiEventual> zi_eventual(Window) const override {
        return ZiEventual{ZiEventual::Kind::MonotoneLimit, 1, 1.0};
    }
    std::optional<double> head_average_bound() const override { return 1.0; }
    std::optional<double> column_limit(Index) const override { return 0.0; }
    bool phi1_declared() const override { return true; }
    std::string describe() const override { return "cesaro-c1"; }
};

class DifferenceMatrix final : public InfiniteMatrix {
public:
    double entry(Index i, Index j) const override {
        if (j == i) return 1.0;
        if (j == i + 1) return -1.0;
        return 0.0;
    }
    double row_tail(Index i, Index k) const override { return k == i ? -1.0 : 0.0; }
    double abs_row_tail(Index i, Index k) const override {
        if (k < i) return 2.0;
        if (k == i) return 1.0;
        return 0.0;
    }
    std::optional<Index> row_support_end(Index i) const override { return i + 1; }
    double window_tail_average(Window w, Index i) const override {
        return (i > w.p && i <= w.q) ? -1.0 / double(w.width()) : 0.0;
    }
    std::optional<ZiEventual> zi_eventual(Window w) const override {
        return ZiEventual{ZiEventual::Kind::ConstantFrom, w.q + 1, 0.0};
    }
    std::optional<double> head_average_bound() const override { return 1.0; }
    std::optional<double> column_limit(Index) const override { return 0.0; }
    bool phi1_declared() const override { return true; }
    Tail<double> transform_tail(const Tail<double>& t) const override {
        switch (t.kind) {
        case TailKind::EventuallyZero:
        case TailKind::EventuallyConstant: return Tail<double>::zero(t.from);
        case TailKind::AbsBound:
            return Tail<double>::abs_bound(t.from, t.ratio, t.coeff * (1.0 + t.ratio));
        default: return Tail<double>::unknown();
        }
    }
    std::string describe() const override { return "difference"; }
};

class ZweierMatrix final : public InfiniteMatrix {
public:
    explicit ZweierMatrix(double alpha) : alpha_(alpha) {}
    double entry(Index i, Index j) const override {
        if (j == i) return alpha_;
        if (i >= 2 && j == i - 1) return 1.0 - alpha_;
        return 0.0;
    }
    double row_tail(Index i, Index k) const override {
        double t = 0.0;
        if (i >= 2 && k <= i - 2) t += 1.0 - alpha_;
        if (k <= i - 1) t += alpha_;
        return t;
    }
    double abs_row_tail(Index i, Index k) const override {
        double t = 0.0;
        if (i >= 2 && k <= i - 2) t += std::abs(1.0 - alpha_);
        if (k <= i - 1) t += std::abs(alpha_);
        return t;
    }
    std::optional<Index> row_support_end(Index i) const override { return i; }
    double window_tail_average(Window w, Index i) const override {
        const Index c1 = i >= 2 ? clamp_count(std::min(w.q, i - 2) - w.p, w.width()) : 0;
        const Index c2 = clamp_count(std::min(w.q, i - 1) - w.p, w.width());
        return (double(c1) * (1.0 - alpha_) + double(c2) * alpha_) / double(w.width());
    }
    std::optional<ZiEventual> zi_eventual(Window w) const override {
        return ZiEventual{ZiEventual::Kind::ConstantFrom, w.q + 2, 1.0};
    }
    std::optional<double> head_average_bound() const override {
        return std::max({1.0, std::abs(alpha_), std::abs(1.0 - alpha_)});
    }
    std::optional<double> column_limit(Index) const override { return 0.0; }
    bool phi1_declared() const override { return true; }
    Tail<double> transform_tail(const Tail<double>& t) const override {
        switch (t.kind) {
        case TailKind::EventuallyZero: return Tail<double>::zero(t.from + 1);
        case TailKind::EventuallyConstant: return Tail<double>::constant(t.from + 1, t.value);
        case TailKind::AbsBound:
            return Tail<double>::abs_bound(t.from + 1, t.ratio,
                                           t.coeff * (std::abs(alpha_) +
                                                      std::abs(1.0 - alpha_) / t.ratio));
        default: return Tail<double>::unknown();
        }
    }
    std::string describe() const override { return "zweier(" + std::to_string(alpha_) + ")"; }

private:
    double alpha_;
};

class DeferredMeanMatrix final : public InfiniteMatrix {
public:
    enum class Family { Cesaro, Escaping, Custom };

    explicit DeferredMeanMatrix(DefermentSchedule d) : d_(std::move(d)) {
        const std::string& n = d_.name();
        if (n == "cesaro") family_ = Family::Cesaro;
        else if (n == "block" || n == "unit") family_ = Family::Escaping;
        else if (n.rfind("poly(", 0) == 0) {
            const double a = std::stod(n.substr(5));
            family_ = a > 0.0 ? Family::Escaping : Family::Cesaro;
        } else family_ = Family::Custom;
    }

    double entry(Index i, Index j) const override {
        const Window r = d_.window(i);
        return (j > r.p && j <= r.q) ? 1.0 / double(r.width()) : 0.0;
    }
    double row_tail(Index i, Index k) const override {
        const Window r = d_.window(i);
        return double(clamp_count(r.q - std::max(r.p, k), r.width())) / double(r.width());
    }
    double abs_row_tail(Index i, Index k) const override { return row_tail(i, k); }
    std::optional<Index> row_support_end(Index i) const override { return d_.window(i).q; }
    double window_tail_average(Window w, Index i) const override {
        const Window r = d_.window(i);
        const Index ones = clamp_count(std::min(w.q, r.p) - w.p, w.width());
        const Index a = std::max(w.p, r.p) + 1;
        const Index b = std::min(w.q, r.q);
        double lin = 0.0;
        if (b >= a) {
            const double count = double(b - a + 1);
            const double sum_k = 0.5 * double(a + b) * count;
            lin = (count * double(r.q) - sum_k) / double(r.width());
        }
        return (double(ones) + lin) / double(w.width());
    }
    std::optional<ZiEventual> zi_eventual(Window w) const override {
        switch (family_) {
        case Family::Cesaro: return ZiEventual{ZiEventual::Kind::MonotoneLimit, 1, 1.0};
        case Family::Escaping: {
            // p' is nondecreasing and unbounded: rows beyond the first i with
            // p'(i) >= q see the whole window inside their tails.
            for (Index i = 1; i <= kScanCap; ++i)
                if (d_.p(i) >= w.q) return ZiEventual{ZiEventual::Kind::ConstantFrom, i, 1.0};
            return std::nullopt;
        }
        default: return std::nullopt;
        }
    }
    std::optional<double> head_average_bound() const override { return 1.0; }
    std::optional<double> column_limit(Index) const override {
        return family_ == Family::Custom ? std::nullopt : std::optional<double>(0.0);
    }
    bool phi1_declared() const override { return family_ != Family::Custom; }
    Tail<double> transform_tail(const Tail<double>& t) const override {
        if (family_ == Family::Escaping && t.kind == TailKind::EventuallyZero) {
            for (Index i = 1; i <= kScanCap; ++i)
                if (d_.p(i) >= t.from - 1) return Tail<double>::zero(i);
        }
        return Tail<double>::unknown();
    }
    std::string describe() const override { return "deferred-mean(" + d_.name() + ")"; }

private:
    static constexpr Index kScanCap = 1 << 22;
    DefermentSchedule d_;
    Family family_;
};

class WeightedMeanPowerMatrix final : public InfiniteMatrix {
public:
    explicit WeightedMeanPowerMatrix(double a) : a_(a) {
        if (a < 0.0) throw std::invalid_argument("weighted-mean: exponent must be >= 0");
    }
    double entry(Index i, Index j) const override {
        return j <= i ? std::pow(double(j), a_) / W(i) : 0.0;
    }
    double row_tail(Index i, Index k) const override {
        if (k >= i) return 0.0;
        return (W(i) - W(k)) / W(i);
    }
    double abs_row_tail(Index i, Index k) const override { return row_tail(i, k); }
    std::optional<Index> row_support_end(Index i) const override { return i; }
    std::optional<ZiEventual> zi_eventual(Window) const override {
        return ZiEventual{ZiEventual::Kind::MonotoneLimit, 1, 1.0};
    }
    std::optional<double> head_average_bound() const override { return 1.0; }
    std::optional<double> column_limit(Index) const override { return 0.0; }
    bool phi1_declared() const override { return true; }
    std::string describe() const override { return "weighted-mean(" + std::to_string(a_) + ")"; }

private:
    double W(Index i) const {
        if (i <= 0) return 0.0;
        std::scoped_lock lock(m_);
        while (static_cast<Index>(w_.size()) < i) {
            const Index j = static_cast<Index>(w_.size()) + 1;
            w_.push_back((w_.empty() ? 0.0 : w_.back()) + std::pow(double(j), a_));
        }
        return w_[static_cast<std::size_t>(i - 1)];
    }
    double a_;
    mutable std::mutex m_;
    mutable std::vector<double> w_;
};

class ShiftLeftMatrix final : public InfiniteMatrix {
public:
    double entry(Index i, Index j) const override { return j == i + 1 ? 1.0 : 0.0; }
    double row_tail(Index i, Index k) const override { return k <= i ? 1.0 : 0.0; }
    double abs_row_tail(Index i, Index k) const override { return row_tail(i, k); }
    std::optional<Index> row_support_end(Index i) const override { return i + 1; }
    double window_tail_average(Window w, Index i) const override {
        return double(clamp_count(std::min(w.q, i) - w.p, w.width())) / double(w.width());
    }
    std::optional<ZiEventual> zi_eventual(Window w) const override {
        return ZiEventual{ZiEventual::Kind::ConstantFrom, std::max<Index>(w.q, 1), 1.0};
    }
    std::optional<double> head_average_bound() const override { return 1.0; }
    std::optional<double> column_limit(Index) const override { return 0.0; }
    bool phi1_declared() const override { return true; }
    Tail<double> transform_tail(const Tail<double>& t) const override {
        const Index from = std::max<Index>(t.from - 1, 1);
        switch (t.kind) {
        case TailKind::EventuallyZero: return Tail<double>::zero(from);
        case TailKind::EventuallyConstant: return Tail<double>::constant(from, t.value);
        case TailKind::AbsBound:
            return Tail<double>::abs_bound(from, t.ratio, t.coeff * t.ratio);
        default: return Tail<double>::unknown();
        }
    }
    std::string describe() const override { return "shift-left"; }
};

class UserTableMatrix final : public InfiniteMatrix {
public:
    UserTableMatrix(std::vector<std::vector<double>> rows, std::string name)
        : rows_(std::move(rows)), name_(std::move(name)) {
        suffix_.reserve(rows_.size());
        abs_suffix_.reserve(rows_.size());
        double head_max = 0.0;
        for (const auto& row : rows_) {
            std::vector<double> s(row.size() + 1, 0.0), as(row.size() + 1, 0.0);
            for (std::size_t j = row.size(); j-- > 0;) {
                s[j] = s[j + 1] + row[j];
                as[j] = as[j + 1] + std::abs(row[j]);
            }
            // |head(i,k)| = |total - tail(i,k)|
            for (std::size_t j = 0; j <= row.size(); ++j)
                head_max = std::max(head_max, std::abs(s[0] - s[j]));
            suffix_.push_back(std::move(s));
            abs_suffix_.push_back(std::move(as));
        }
        head_bound_ = head_max;
    }

    double entry(Index i, Index j) const override {
        if (i < 1 || i > static_cast<Index>(rows_.size())) return 0.0;
        const auto& row = rows_[static_cast<std::size_t>(i - 1)];
        if (j < 1 || j > static_cast<Index>(row.size())) return 0.0;
        return row[static_cast<std::size_t>(j - 1)];
    }
    double row_tail(Index i, Index k) const override { return suffix(suffix_, i, k); }
    double abs_row_tail(Index i, Index k) const override { return suffix(abs_suffix_, i, k); }
    std::optional<Index> row_support_end(Index i) const override {
        if (i < 1 || i > static_cast<Index>(rows_.size())) return Index{0};
        return static_cast<Index>(rows_[static_cast<std::size_t>(i - 1)].size());
    }
    std::optional<ZiEventual> zi_eventual(Window) const override {
        return ZiEventual{ZiEventual::Kind::ConstantFrom,
                          static_cast<Index>(rows_.size()) + 1, 0.0};
    }
    std::optional<double> head_average_bound() const override { return head_bound_; }
    std::optional<double> column_limit(Index) const override { return 0.0; }
    bool phi1_declared() const override { return true; }
    Tail<double> transform_tail(const Tail<double>&) const override {
        return Tail<double>::zero(static_cast<Index>(rows_.size()) + 1);
    }
    std::string describe() const override { return name_; }

private:
    double suffix(const std::vector<std::vector<double>>& table, Index i, Index k) const {
        if (i < 1 || i > static_cast<Index>(table.size())) return 0.0;
        const auto& s = table[static_cast<std::size_t>(i - 1)];
        const Index cols = static_cast<Index>(s.size()) - 1;
        const Index at = std::clamp<Index>(k, 0, cols);
        return s[static_cast<std::size_t>(at)];
    }
    std::vector<std::vector<double>> rows_;
    std::vector<std::vector<double>> suffix_, abs_suffix_;
    double head_bound_ = 0.0;
    std::string name_;
};

} // namespace

MatrixPtr make_identity() { return std::make_shared<IdentityMatrix>(); }
MatrixPtr make_cesaro_c1() { return std::make_shared<CesaroC1Matrix>(); }
MatrixPtr make_difference() { return std::make_shared<DifferenceMatrix>(); }
MatrixPtr make_zweier(double alpha) { return std::make_shared<ZweierMatrix>(alpha); }
MatrixPtr make_deferred_mean_matrix(const DefermentSchedule& d) {
    return std::make_shared<DeferredMeanMatrix>(d);
}
MatrixPtr make_weighted_mean_power(double a) {
    return std::make_shared<WeightedMeanPowerMatrix>(a);
}
MatrixPtr make_shift_left() { return std::make_shared<ShiftLeftMatrix>(); }
MatrixPtr make_user_table(std::vector<std::vector<double>> rows) {
    const std::string name = "user-table(" + std::to_string(rows.size()) + " rows)";
    return std::make_shared<UserTableMatrix>(std::move(rows), name);
}
MatrixPtr make_zero() {
    return std::make_shared<UserTableMatrix>(std::vector<std::vector<double>>{}, "zero");
}

std::vector<MatrixPtr> catalog_matrices() {
    return {make_identity(),
            make_cesaro_c1(),
            make_difference(),
            make_zweier(0.5),
            make_deferred_mean_matrix(DefermentSchedule::block()),
            make_weighted_mean_power(1.0),
            make_shift_left(),
            make_user_table({{1.0, 0.0, 2.0}, {0.0, 0.5, -0.5}, {0.25, 0.25, 0.25, 0.25}}),
            make_zero()};
}

RowValue apply_row(const InfiniteMatrix& A, const Seq& x, Index i, Index trunc) {
    if (i < 1 || trunc < 1) throw std::invalid_argument("apply_row: need i >= 1, trunc >= 1");
    const std::optional<Index> send = A.row_support_end(i);
    const Index cutoff = send ? std::min(trunc, *send) : trunc;
    CompensatedSum<double> acc;
    for (Index j = 1; j <= cutoff; ++j) {
        const double a = A.entry(i, j);
        if (a != 0.0) acc.add(a * x.at(j));
    }
    RowValue rv{acc.value(), std::nullopt};
    if (send && *send <= trunc) {
        rv.error_bound = 0.0;
        return rv;
    }
    const Tail<double>& t = x.tail();
    if (t.from <= trunc + 1) {
        switch (t.kind) {
        case TailKind::EventuallyZero:
            rv.error_bound = 0.0;
            return rv;
        case TailKind::EventuallyConstant:
            rv.value += t.value * A.row_tail(i, trunc);
            rv.error_bound = 0.0;
            return rv;
        case TailKind::AbsBound:
            rv.error_bound =
                A.abs_row_tail(i, trunc) * t.coeff * std::pow(t.ratio, double(trunc + 1));
            return rv;
        default:
            break;
        }
    }
    return rv; // no certificate: both tails unknown past the cutoff
}

namespace {
bool provably_zero(const Seq& x) {
    if (x.tail().kind != TailKind::EventuallyZero) return false;
    for (Index j = 1; j < x.tail().from; ++j)
        if (x.at(j) != 0.0) return false;
    return true;
}
} // namespace

Seq transform(const MatrixPtr& A, const Seq& x, Index trunc) {
    if (!A) throw std::invalid_argument("transform: null matrix");
    if (provably_zero(x)) return Seq::zeros();
    return Seq::from_fn(
        [A, x, trunc](Index i) { return apply_row(*A, x, i, trunc).value; },
        A->transform_tail(x.tail()), A->describe() + "*" + x.describe());
}

std::vector<RowValue> transform_rows(const InfiniteMatrix& A, const Seq& x, Index i_horizon,
                                     Index trunc) {
    std::vector<RowValue> rows;
    rows.reserve(static_cast<std::size_t>(i_horizon));
    const bool zero = provably_zero(x);
    for (Index i = 1; i <= i_horizon; ++i)
        rows.push_back(zero ? RowValue{0.0, 0.0} : apply_row(A, x, i, trunc));
    return rows;
}

Seq zeta_image_seq(const MatrixPtr& A, const DefermentSchedule& d, Index n) {
    if (!A) throw std::invalid_argument("zeta_image_seq: null matrix");
    const Window w = d.window(n);
    Tail<double> tail = Tail<double>::unknown();
    if (auto ev = A->zi_eventual(w); ev && ev->kind == ZiEventual::Kind::ConstantFrom)
        tail = Tail<double>::constant(ev->from, ev->value);
    return Seq::from_fn([A, w](Index i) { return A->window_tail_average(w, i); }, tail,
                        "zeta-image(" + A->describe() + ")");
}

DomainReport domain_member(const SpaceId& Y, const InfiniteMatrix& A, const Seq& x,
                           const DomainOptions& opt) {
    DomainReport rep;
    const Index horizon = opt.detect.horizon;
    const Index rows_needed = (Y.tag == SpaceTag::BV || Y.tag == SpaceTag::BV0) ? horizon + 1
                                                                                : horizon;
    auto rows = transform_rows(A, x, rows_needed, opt.trunc);
    double worst_bound = 0.0;
    for (Index i = 0; i < rows_needed; ++i) {
        if (!rows[std::size_t(i)].error_bound) {
            rep.verdict.status = Status::Inconclusive;
            rep.note = "row " + std::to_string(i + 1) + " has no truncation-error certificate";
            return rep;
        }
        worst_bound = std::max(worst_bound, *rows[std::size_t(i)].error_bound);
    }
    std::vector<double> y(static_cast<std::size_t>(rows_needed));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = rows[i].value;

    switch (Y.tag) {
    case SpaceTag::C: {
        rep.verdict = detect_limit(std::vector<double>(y.begin(), y.begin() + horizon),
                                   opt.detect);
        rep.member = rep.verdict.converged();
        break;
    }
    case SpaceTag::C0: {
        rep.verdict = detect_limit(std::vector<double>(y.begin(), y.begin() + horizon),
                                   opt.detect);
        rep.member = rep.verdict.converged_to_zero(opt.zero_tol);
        if (rep.verdict.converged() && !rep.member) rep.note = "limit away from zero";
        break;
    }
    case SpaceTag::LINF: {
        std::vector<double> sup(static_cast<std::size_t>(horizon));
        double m = 0.0;
        for (Index i = 0; i < horizon; ++i) {
            m = std::max(m, std::abs(y[std::size_t(i)]));
            sup[std::size_t(i)] = m;
        }
        rep.verdict = detect_limit(sup, opt.detect);
        rep.member = rep.verdict.converged();
        break;
    }
    case SpaceTag::L1: {
        std::vector<double> partial(static_cast<std::size_t>(horizon));
        CompensatedSum<double> acc;
        for (Index i = 0; i < horizon; ++i) {
            acc.add(std::abs(y[std::size_t(i)]));
            partial[std::size_t(i)] = acc.value();
        }
        rep.verdict = detect_limit(partial, opt.detect);
        rep.member = rep.verdict.converged();
        break;
    }
    case SpaceTag::BV:
    case SpaceTag::BV0: {
        std::vector<double> partial(static_cast<std::size_t>(horizon));
        CompensatedSum<double> acc;
        for (Index i = 0; i < horizon; ++i) {
            acc.add(std::abs(y[std::size_t(i)] - y[std::size_t(i + 1)]));
            partial[std::size_t(i)] = acc.value();
        }
        rep.verdict = detect_limit(partial, opt.detect);
        rep.member = rep.verdict.converged();
        if (Y.tag == SpaceTag::BV0 && rep.member) {
            auto lim = detect_limit(std::vector<double>(y.begin(), y.begin() + horizon),
                                    opt.detect);
            rep.member = lim.converged_to_zero(opt.zero_tol);
        }
        break;
    }
    default:
        throw std::invalid_argument("domain_member: unsupported target space " + Y.name());
    }
    if (worst_bound > 0.0)
        rep.note += (rep.note.empty() ? "" : "; ") +
                    ("max row truncation bound " + std::to_string(worst_bound));
    return rep;
}

} // namespace defsum
