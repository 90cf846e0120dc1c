#include "pseudochaos/io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

namespace pchaos {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b.data(), 4);
}

void put_f64(std::ostream& os, double v) {
  const auto u = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
  os.write(b.data(), 8);
}

template <std::size_t N>
std::array<unsigned char, N> get_bytes(std::istream& is) {
  std::array<unsigned char, N> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), N)) throw FormatError("truncated dump");
  return b;
}

std::uint32_t get_u32(std::istream& is) {
  const auto b = get_bytes<4>(is);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double get_f64(std::istream& is) {
  const auto b = get_bytes<8>(is);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return std::bit_cast<double>(v);
}

void expect_magic(std::istream& is, const char* magic) {
  const auto b = get_bytes<4>(is);
  if (std::memcmp(b.data(), magic, 4) != 0) throw FormatError(std::string("bad magic, expected ") + magic);
}

}  // namespace

void write_matrix_dump(std::ostream& os, const ComplexMatrix<double>& m, std::uint8_t kind) {
  if (m.rows() != m.cols()) throw std::invalid_argument("write_matrix_dump: matrix not square");
  os.write("PCHM", 4);
  put_u32(os, static_cast<std::uint32_t>(m.rows()));
  os.put(static_cast<char>(kind));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      put_f64(os, m(r, c).real());
      put_f64(os, m(r, c).imag());
    }
}

MatrixDump read_matrix_dump(std::istream& is) {
  expect_magic(is, "PCHM");
  const auto d = static_cast<Eigen::Index>(get_u32(is));
  if (d > (1 << 15)) throw FormatError("matrix dump: dimension too large");
  MatrixDump out;
  out.kind = get_bytes<1>(is)[0];
  out.matrix.resize(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      const double re = get_f64(is);
      out.matrix(r, c) = {re, get_f64(is)};
    }
  return out;
}

void write_state_dump(std::ostream& os, const StateVector& psi) {
  os.write("PCSV", 4);
  put_u32(os, psi.n_total);
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) {
    put_f64(os, psi.amplitudes[i].real());
    put_f64(os, psi.amplitudes[i].imag());
  }
}

StateVector read_state_dump(std::istream& is) {
  expect_magic(is, "PCSV");
  const auto n = get_u32(is);
  if (n > 30) throw FormatError("state dump: too many qubits");
  StateVector psi;
  psi.n_total = n;
  psi.amplitudes.resize(static_cast<Eigen::Index>(psi.dim()));
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) {
    const double re = get_f64(is);
    psi.amplitudes[i] = {re, get_f64(is)};
  }
  return psi;
}

std::string format_double(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header)
    : os_(os), header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CsvWriter: empty header");
  write_fields(header_);
}

std::string CsvWriter::quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != header_.size()) throw std::invalid_argument("CsvWriter: column count mismatch");
  std::vector<std::string> fields;
  fields.reserve(cells.size());
  for (const auto& c : cells) {
    if (const auto* s = std::get_if<std::string>(&c))
      fields.push_back(*s);
    else if (const auto* d = std::get_if<double>(&c))
      fields.push_back(format_double(*d));
    else
      fields.push_back(std::to_string(std::get<std::int64_t>(c)));
  }
  write_fields(fields);
}

void CsvWriter::write_fields(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os_ << ',';
    os_ << quote(fields[i]);
  }
  os_ << "\r\n";
}

}  // namespace pchaos
