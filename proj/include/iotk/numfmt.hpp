#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace iotk {

/// Shortest decimal text that parses back to exactly `value`
/// (e.g. 0.015 -> "0.015", 1.0 -> "1", 1e-5 -> "1e-05").
/// Non-finite values print as "nan", "inf" and "-inf".
std::string format_real(double value);

/// Parses a full string as a 64-bit real; nullopt on any trailing garbage.
std::optional<double> parse_real(std::string_view text);

}  // namespace iotk
