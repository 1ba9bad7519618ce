// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace citeneed::util {

/// The field as-is, or double-quoted with inner quotes doubled when it holds
/// a comma, quote, CR or LF.
std::string csv_field(std::string_view s);

/// printf "%.*f".
std::string fixed(double value, int digits);

}  // namespace citeneed::util
