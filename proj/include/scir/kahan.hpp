#pragma once

// Kahan compensated accumulator. The estimator sums mix heavy-tailed
// terms of wildly different magnitudes, where naive accumulation loses
// precision that the exact-recovery tests can actually detect.

namespace scir {

class kahan_sum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }

    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

} // namespace scir
