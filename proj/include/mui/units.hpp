#ifndef MUI_UNITS_HPP
#define MUI_UNITS_HPP

#include <cmath>
#include <string>
#include <stdexcept>

namespace mui {

/// Unit for information quantities. Internally everything is computed in
/// nats; conversion happens at the API boundary.
enum class InfoUnit { bits, nats };

inline constexpr double kLn2 = 0.6931471805599453094172321214581766;

inline double from_nats(double nats, InfoUnit unit) {
    return unit == InfoUnit::nats ? nats : nats / kLn2;
}

inline double to_nats(double value, InfoUnit unit) {
    return unit == InfoUnit::nats ? value : value * kLn2;
}

inline std::string unit_name(InfoUnit unit) {
    return unit == InfoUnit::nats ? "nats" : "bits";
}

inline InfoUnit parse_unit(const std::string& s) {
    if (s == "bits") return InfoUnit::bits;
    if (s == "nats") return InfoUnit::nats;
    throw std::invalid_argument("unknown unit: " + s);
}

}  // namespace mui

#endif  // MUI_UNITS_HPP
