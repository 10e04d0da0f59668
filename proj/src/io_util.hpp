#pragma once
#include <string>
#include <vector>

namespace slab {

// Shortest-roundtrip decimal formatting. All file output goes through this (or
// nlohmann's dump, which uses the same scheme) so repeated runs are byte-identical.
std::string format_double(double v);

std::string read_text_file(const std::string& path);  // throws std::runtime_error on failure

// Write via temp file + rename so partially written artifacts never appear.
void write_text_file_atomic(const std::string& path, const std::string& content);

// CSV with a schema comment line on top ("# <name> v1: col,col,...").
std::string csv_table(const std::string& schema_name,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows);

}  // namespace slab
