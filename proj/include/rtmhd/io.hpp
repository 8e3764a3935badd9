#pragma once

#include <string>

namespace rtmhd {

/// Decimal text with 17 significant digits.
std::string fmt_double(double v);

/// Opens path for writing; throws Io on an empty path or failure.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace rtmhd
