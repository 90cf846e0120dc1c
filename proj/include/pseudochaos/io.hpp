#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pseudochaos/ensembles.hpp"
#include "pseudochaos/state.hpp"

namespace pchaos {

class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// "PCHM", u32 d, u8 kind, then d*d row-major (re, im) f64, little-endian.
struct MatrixDump {
  std::uint8_t kind = 0;
  ComplexMatrix<double> matrix;
};
void write_matrix_dump(std::ostream& os, const ComplexMatrix<double>& m, std::uint8_t kind);
MatrixDump read_matrix_dump(std::istream& is);

// "PCSV", u32 n_total, then 2^n (re, im) f64, little-endian.
void write_state_dump(std::ostream& os, const StateVector& psi);
StateVector read_state_dump(std::istream& is);

// %.17g, round-trip exact for doubles.
std::string format_double(double v);

using CsvCell = std::variant<std::string, double, std::int64_t>;

// RFC-4180 quoting; the header row is written on construction.
class CsvWriter {
public:
  CsvWriter(std::ostream& os, std::vector<std::string> header);
  void row(const std::vector<CsvCell>& cells);
  std::size_t columns() const { return header_.size(); }

  static std::string quote(std::string_view field);

private:
  void write_fields(const std::vector<std::string>& fields);
  std::ostream& os_;
  std::vector<std::string> header_;
};

}  // namespace pchaos
