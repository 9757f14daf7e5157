#pragma once

#include <functional>
#include <string_view>

namespace scl {

using WarningHandler = std::function<void(std::string_view)>;

/// Routes library warnings; the default handler writes to stderr.
/// Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace scl
