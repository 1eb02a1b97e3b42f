#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qoslab {

/// Exponent p in [1, inf]. Infinity is a distinct state, never a sentinel
/// double, so conjugation and norm code can branch on it explicitly.
class Exponent {
public:
    static Exponent inf() { return Exponent(true, 0.0); }

    Exponent(double p) : infinite_(false), value_(p) {  // NOLINT: implicit by design
        if (!(p >= 1.0) || std::isinf(p) || std::isnan(p))
            throw std::invalid_argument("Exponent: p must be a finite real >= 1 (use Exponent::inf())");
    }

    bool is_inf() const { return infinite_; }
    double value() const {
        if (infinite_) throw std::logic_error("Exponent: value() on infinite exponent");
        return value_;
    }

    /// Conjugate exponent p' = p/(p-1), with 1' = inf and inf' = 1.
    Exponent conjugate() const {
        if (infinite_) return Exponent(1.0);
        if (value_ == 1.0) return inf();
        return Exponent(value_ / (value_ - 1.0));
    }

    bool operator==(const Exponent& o) const {
        return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
    }
    bool operator!=(const Exponent& o) const { return !(*this == o); }

    std::string str() const { return infinite_ ? "inf" : std::to_string(value_); }

private:
    Exponent(bool infinite, double v) : infinite_(infinite), value_(v) {}
    bool infinite_;
    double value_;
};

}  // namespace qoslab
