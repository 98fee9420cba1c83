#pragma once

#include <filesystem>
#include <iosfwd>

#include "collapse/complex.hpp"

namespace collapse {

// Text format: header line "n d", then one facet per line as d+1 increasing
// vertex indices, lines in ascending colex rank. Blank lines and lines
// starting with '#' are ignored.

Complex read_complex(std::istream& in);
Complex read_complex(const std::filesystem::path& path);

void write_complex(const Complex& complex, std::ostream& out);
void write_complex(const Complex& complex, const std::filesystem::path& path);

}  // namespace collapse
