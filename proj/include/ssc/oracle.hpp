#pragma once

#include "ssc/geometry.hpp"
#include "ssc/surrogate.hpp"

#include <atomic>
#include <functional>

namespace ssc {

/// One oracle evaluation: function value and region label.
struct Evaluation {
    double value = 0.0;
    RegionLabel label = 0;
};

/// Black-box function on [0,1]^d. Every call through evaluate() is counted.
class Oracle {
public:
    explicit Oracle(int d)
        : dim_(d)
    {
    }
    virtual ~Oracle() = default;
    Oracle(const Oracle&) = delete;
    Oracle& operator=(const Oracle&) = delete;

    int dimension() const { return dim_; }

    Evaluation evaluate(PointView x) const
    {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return do_evaluate(x);
    }

    std::size_t calls() const { return calls_.load(std::memory_order_relaxed); }
    void reset_calls() { calls_.store(0); }

protected:
    virtual Evaluation do_evaluate(PointView x) const = 0;

private:
    int dim_;
    mutable std::atomic<std::size_t> calls_{0};
};

/// Oracle backed by a callable.
class FunctionOracle : public Oracle {
public:
    using Function = std::function<Evaluation(PointView)>;

    FunctionOracle(int d, Function f)
        : Oracle(d)
        , f_(std::move(f))
    {
    }

protected:
    Evaluation do_evaluate(PointView x) const override { return f_(x); }

private:
    Function f_;
};

} // namespace ssc
