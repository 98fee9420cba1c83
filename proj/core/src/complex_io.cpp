#include "collapse/complex_io.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "collapse/errors.hpp"

namespace collapse {
namespace {

bool skippable(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::vector<std::uint64_t> parse_integers(const std::string& line, std::size_t line_no) {
  std::istringstream fields(line);
  std::vector<std::uint64_t> values;
  std::string token;
  while (fields >> token) {
    if (token.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError(line_no, "expected a nonnegative integer, got '" + token + "'");
    }
    try {
      values.push_back(std::stoull(token));
    } catch (const std::out_of_range&) {
      throw ParseError(line_no, "integer '" + token + "' out of range");
    }
  }
  return values;
}

}  // namespace

Complex read_complex(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<Complex> complex;
  std::optional<FacetId> previous;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto values = parse_integers(line, line_no);
    if (!complex) {
      if (values.size() != 2) throw ParseError(line_no, "header must be 'n d'");
      if (values[0] > std::numeric_limits<std::uint32_t>::max() || values[1] > values[0]) {
        throw ParseError(line_no, "invalid header values");
      }
      try {
        complex.emplace(static_cast<std::uint32_t>(values[0]), static_cast<std::uint32_t>(values[1]));
      } catch (const InputError& e) {
        throw ParseError(line_no, e.what());
      }
      continue;
    }
    const std::uint32_t d = complex->d();
    if (values.size() != d + 1) {
      throw ParseError(line_no, "expected " + std::to_string(d + 1) + " vertices, got " +
                                    std::to_string(values.size()));
    }
    std::vector<Vertex> face(d + 1);
    for (std::uint32_t i = 0; i <= d; ++i) {
      if (values[i] >= complex->n()) {
        throw ParseError(line_no, "vertex " + std::to_string(values[i]) + " is not below n=" +
                                      std::to_string(complex->n()));
      }
      face[i] = static_cast<Vertex>(values[i]);
      if (i > 0 && face[i] <= face[i - 1]) throw ParseError(line_no, "vertices must be strictly increasing");
    }
    const FacetId sigma = complex->facet_id(face);
    if (previous && sigma == *previous) throw ParseError(line_no, "duplicate face");
    if (previous && sigma < *previous) throw ParseError(line_no, "faces must be sorted by colex rank");
    complex->add_facet(sigma);
    previous = sigma;
  }
  if (!complex) throw ParseError(line_no, "missing 'n d' header");
  return std::move(*complex);
}

Complex read_complex(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_complex(in);
}

void write_complex(const Complex& complex, std::ostream& out) {
  out << complex.n() << ' ' << complex.d() << '\n';
  for (FacetId sigma : complex.facets()) {
    const auto v = complex.vertices(sigma);
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
    out << '\n';
  }
}

void write_complex(const Complex& complex, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_complex(complex, out);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace collapse
