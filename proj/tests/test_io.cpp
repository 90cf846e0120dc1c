#include <doctest.h>

#include <sstream>

#include "pseudochaos/io.hpp"

using namespace pchaos;

TEST_CASE("matrix dump round trip and layout") {
  SeededRng rng(1);
  const auto h = sample_gue(4, rng);
  std::stringstream ss;
  write_matrix_dump(ss, h, 2);
  const std::string bytes = ss.str();
  CHECK(bytes.size() == 4 + 4 + 1 + 16 * 16);
  CHECK(bytes.substr(0, 4) == "PCHM");
  CHECK(static_cast<unsigned char>(bytes[4]) == 4);
  CHECK(bytes[5] == 0);
  CHECK(bytes[8] == 2);
  const auto back = read_matrix_dump(ss);
  CHECK(back.kind == 2);
  CHECK(back.matrix == h);
}

TEST_CASE("state dump round trip") {
  auto psi = StateVector::basis(3, 5);
  psi.amplitudes[2] = {0.25, -0.5};
  std::stringstream ss;
  write_state_dump(ss, psi);
  // 1.0 as little-endian f64 for amplitude 5 (re).
  const std::string bytes = ss.str();
  CHECK(bytes.size() == 8 + 8 * 16);
  CHECK(static_cast<unsigned char>(bytes[8 + 5 * 16 + 7]) == 0x3f);
  CHECK(static_cast<unsigned char>(bytes[8 + 5 * 16 + 6]) == 0xf0);
  const auto back = read_state_dump(ss);
  CHECK(back.n_total == 3);
  CHECK(back.amplitudes == psi.amplitudes);
}

TEST_CASE("dump errors") {
  std::stringstream bad("PCXX\x01\x00\x00\x00");
  CHECK_THROWS_AS(read_state_dump(bad), FormatError);
  std::stringstream truncated(std::string("PCSV\x02\x00\x00\x00", 8));
  CHECK_THROWS_AS(read_state_dump(truncated), FormatError);
}

TEST_CASE("csv writer") {
  std::ostringstream os;
  CsvWriter w(os, {"name", "value", "count"});
  w.row({std::string("plain"), 0.1, std::int64_t{3}});
  w.row({std::string("a,b \"q\""), 1e-300, std::int64_t{-1}});
  CHECK(os.str() == "name,value,count\r\nplain,0.10000000000000001,3\r\n\"a,b \"\"q\"\"\",1e-300,-1\r\n");
  CHECK_THROWS(w.row({0.5}));
  CHECK(std::stod(format_double(0.1)) == 0.1);
  CHECK(CsvWriter::quote("line\nbreak") == "\"line\nbreak\"");
}
