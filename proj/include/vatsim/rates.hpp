#pragma once

#include "vatsim/error.hpp"

namespace vatsim {

/// Whether a rate is quoted on the tax-inclusive price ("inside") or on the
/// tax-exclusive price ("outside").
enum class RateBasis { Inside, Outside };

/// An ad valorem tax rate together with the basis it is quoted on.
///
/// Inside rates live in [0, 1); outside rates in [0, inf). Construction
/// through inside()/outside() enforces that.
class Rate {
public:
    constexpr Rate() = default;

    static Rate inside(double value);
    static Rate outside(double value);

    constexpr double value() const noexcept { return value_; }
    constexpr RateBasis basis() const noexcept { return basis_; }
    constexpr bool is_inside() const noexcept { return basis_ == RateBasis::Inside; }

    friend constexpr bool operator==(const Rate&, const Rate&) = default;

private:
    constexpr Rate(double value, RateBasis basis) : value_(value), basis_(basis) {}

    double value_ = 0.0;
    RateBasis basis_ = RateBasis::Outside;
};

/// t / (1 - t) for inside rates; identity for outside rates.
Rate to_outside(Rate r);

/// t / (1 + t) for outside rates; identity for inside rates.
Rate to_inside(Rate r);

/// Effective outside rate of an excise levied first and then included in the
/// VAT base: (1 + excise)(1 + vat) - 1. Both arguments must be outside rates.
Rate compose_selective(Rate excise, Rate vat);

/// A fraction in (0, 1] of an outside reference rate, as an outside rate.
Rate apply_fraction(double fraction, Rate reference);

const char* to_string(RateBasis basis) noexcept;
RateBasis parse_basis(const char* text);

}  // namespace vatsim
