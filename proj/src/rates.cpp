#include "vatsim/rates.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace vatsim {

Rate Rate::inside(double value) {
    if (!std::isfinite(value) || value < 0.0)
        throw DomainError("inside rate must be finite and non-negative, got " + std::to_string(value));
    if (value >= 1.0)
        throw DomainError("inside rate must be below 1 (the tax would consume the whole price), got " +
                          std::to_string(value));
    return Rate(value, RateBasis::Inside);
}

Rate Rate::outside(double value) {
    if (!std::isfinite(value) || value < 0.0)
        throw DomainError("outside rate must be finite and non-negative, got " + std::to_string(value));
    return Rate(value, RateBasis::Outside);
}

Rate to_outside(Rate r) {
    if (!r.is_inside())
        return r;
    const double t = r.value();
    return Rate::outside(t / (1.0 - t));
}

Rate to_inside(Rate r) {
    if (r.is_inside())
        return r;
    const double t = r.value();
    return Rate::inside(t / (1.0 + t));
}

Rate compose_selective(Rate excise, Rate vat) {
    if (excise.is_inside() || vat.is_inside())
        throw DomainError("compose_selective expects outside rates; convert with to_outside first");
    return Rate::outside((1.0 + excise.value()) * (1.0 + vat.value()) - 1.0);
}

Rate apply_fraction(double fraction, Rate reference) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw ConfigError("rate fraction must lie in (0, 1], got " + std::to_string(fraction));
    if (reference.is_inside())
        throw DomainError("apply_fraction expects an outside reference rate");
    return Rate::outside(fraction * reference.value());
}

const char* to_string(RateBasis basis) noexcept {
    return basis == RateBasis::Inside ? "inside" : "outside";
}

RateBasis parse_basis(const char* text) {
    if (std::strcmp(text, "inside") == 0)
        return RateBasis::Inside;
    if (std::strcmp(text, "outside") == 0)
        return RateBasis::Outside;
    throw ConfigError(std::string("rate basis must be \"inside\" or \"outside\", got \"") + text + "\"");
}

}  // namespace vatsim
