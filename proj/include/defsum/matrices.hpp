#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "defsum/detect.hpp"
#include "defsum/schedule.hpp"
#include "defsum/seq.hpp"
#include "defsum/spaces.hpp"

namespace defsum {

// Eventual behaviour of i -> window-averaged row tail, declared per catalog
// entry so suprema and sums over all rows can be closed out exactly.
struct ZiEventual {
    enum class Kind {
        ConstantFrom,  // equals `value` for every i >= from
        MonotoneLimit, // nonnegative, nondecreasing for i >= from, tends to `value`
    };
    Kind kind = Kind::ConstantFrom;
    Index from = 1;
    double value = 0.0;
};

// An infinite matrix given by an entry rule plus a row-tail oracle
// tail(i,k) = sum_{j>k} a_ij. The consistency identity
// entry(i,k+1) + tail(i,k+1) = tail(i,k) ties the two together.
class InfiniteMatrix {
public:
    virtual ~InfiniteMatrix() = default;

    virtual double entry(Index i, Index j) const = 0;
    virtual double row_tail(Index i, Index k) const = 0;
    virtual double abs_row_tail(Index i, Index k) const = 0;
    // Last nonzero column of row i; nullopt when the row never ends.
    virtual std::optional<Index> row_support_end(Index i) const = 0;

    // (1/(q-p)) sum_{k=p+1}^{q} row_tail(i, k). Overridden with closed forms
    // where the generic loop would dominate the criteria sweeps.
    virtual double window_tail_average(Window w, Index i) const {
        CompensatedSum<double> acc;
        for (Index k = w.p + 1; k <= w.q; ++k) acc.add(row_tail(i, k));
        return acc.value() / double(w.width());
    }

    // Declared structure of i -> window_tail_average(w, i); nullopt when the
    // matrix cannot vouch for its own rows at infinity.
    virtual std::optional<ZiEventual> zi_eventual(Window w) const {
        (void)w;
        return std::nullopt;
    }

    // Uniform bound for |(1/(q-p)) sum_{k in window} sum_{j<=k} a_ij| over
    // all rows and windows, when one is known.
    virtual std::optional<double> head_average_bound() const { return std::nullopt; }

    // lim_i a_ij for fixed j, when declared.
    virtual std::optional<double> column_limit(Index j) const {
        (void)j;
        return std::nullopt;
    }

    // Catalog matrices ship with phi_1 inside their summability domains.
    virtual bool phi1_declared() const { return false; }

    // Tail descriptor of Ax derived from the tail of x (Unknown by default).
    virtual Tail<double> transform_tail(const Tail<double>& x_tail) const {
        (void)x_tail;
        return Tail<double>::unknown();
    }

    virtual std::string describe() const = 0;
};

using MatrixPtr = std::shared_ptr<const InfiniteMatrix>;

MatrixPtr make_identity();
MatrixPtr make_cesaro_c1();
MatrixPtr make_difference();
MatrixPtr make_zweier(double alpha);
MatrixPtr make_deferred_mean_matrix(const DefermentSchedule& d);
MatrixPtr make_weighted_mean_power(double a); // weights j^a, a >= 0
MatrixPtr make_shift_left();
MatrixPtr make_user_table(std::vector<std::vector<double>> rows);
MatrixPtr make_zero();

// Every catalog entry under its default parameters, for sweep-style suites.
std::vector<MatrixPtr> catalog_matrices();

struct RowValue {
    double value = 0.0;
    // Bound on the dropped tail of the inner product; nullopt means no bound
    // could be certified.
    std::optional<double> error_bound;
};

// Truncated inner product of row i with x, with the remainder taken from the
// tail descriptors (exactly, for an eventually constant x against the
// row-tail oracle).
RowValue apply_row(const InfiniteMatrix& A, const Seq& x, Index i, Index trunc);

// y = Ax as a lazy sequence of row values.
Seq transform(const MatrixPtr& A, const Seq& x, Index trunc);

// Row values with error bounds for i = 1..i_horizon.
std::vector<RowValue> transform_rows(const InfiniteMatrix& A, const Seq& x, Index i_horizon,
                                     Index trunc);

// A * zeta^n computed through the row-tail oracle:
// coordinate i = (1/(q-p)) sum_{k=p+1}^{q} tail(i, k).
Seq zeta_image_seq(const MatrixPtr& A, const DefermentSchedule& d, Index n);

struct DomainOptions {
    DetectOptions detect = {.tol = 1e-5, .window = 16, .horizon = 2000};
    Index trunc = 4000;
    double zero_tol = 1e-3; // c0 limit threshold
};

struct DomainReport {
    Verdict verdict;
    bool member = false;
    std::string note;
};

// Does Ax exist at truncation and land in Y? Y ranges over the concrete
// spaces c, c0, l1, bv, linf.
DomainReport domain_member(const SpaceId& Y, const InfiniteMatrix& A, const Seq& x,
                           const DomainOptions& opt = {});

} // namespace defsum
