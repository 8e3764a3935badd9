#include "rtmhd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rtmhd/errors.hpp"

namespace rtmhd {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    if (path.empty()) throw Error(ErrorKind::Io, "empty output path");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    if (path.empty()) throw Error(ErrorKind::Io, "empty input path");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace rtmhd
