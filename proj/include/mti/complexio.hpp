/// Complex literals in the "a+bi" form used by the CLI and config files.
#pragma once

#include <optional>
#include <string>

#include "mti/model.hpp"

namespace mti {

/// Accepts "1", "-2.5", "1+0i", "0.5-1e-3i", "2i", "i", "-i".
std::optional<Complex> parse_complex(const std::string& text);

/// Prints in the same "a+bi" form, round-trippable at 17 significant digits.
std::string format_complex(Complex z);

}  // namespace mti
