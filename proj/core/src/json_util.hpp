#pragma once

// Internal serialization glue shared by the module .cpp files.

#include <json.hpp>

#include "chromopt/format.hpp"

namespace chromopt {

/// Inserts a double rounded to the project-wide 12 significant digits.
inline nlohmann::ordered_json json_num(double x) { return round_sig12(x); }

}  // namespace chromopt
