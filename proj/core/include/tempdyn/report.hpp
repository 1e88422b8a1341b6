#pragma once

#include <string>
#include <vector>

#include "tempdyn/serialize.hpp"

namespace tempdyn {

// Section names render_table understands.
std::vector<std::string> renderable_tables();

// Renders one report section as a fixed-width text table covering every
// station in the report. Values print with 4 decimals (scientific notation
// for magnitudes below 1e-4 or at 1e7 and above); null fields print as "-".
// Throws validation_error naming the section if the report lacks it, no
// station carries it, or `which` is not a known table.
std::string render_table(const ordered_json& report, const std::string& which);

// The exact cell formatting used by render_table, exposed so tables can be
// parsed back and compared at printed precision.
std::string format_table_number(double v);

} // namespace tempdyn
