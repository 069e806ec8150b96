#include "dataio.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace gprc::dataio {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Status::io_error, "cannot open '" + path + "'");
  return in;
}

bool skippable(const std::string& line) {
  for (const char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;  // blank
}

std::vector<double> parse_numbers(const std::string& line, const std::string& path,
                                  std::size_t line_no) {
  std::vector<double> values;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    require(consumed == token.size(), Status::parse_error,
            path + ": line " + std::to_string(line_no) + ": expected number, got '" +
                token + "'");
    values.push_back(value);
  }
  return values;
}

}  // namespace

std::vector<double> read_column(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto values = parse_numbers(line, path, line_no);
    require(values.size() == 1, Status::parse_error,
            path + ": line " + std::to_string(line_no) +
                ": expected one value per line");
    out.push_back(values[0]);
  }
  return out;
}

RegressionData read_regression(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    auto values = parse_numbers(line, path, line_no);
    require(values.size() >= 2, Status::parse_error,
            path + ": line " + std::to_string(line_no) +
                ": expected covariates followed by a response");
    if (width == 0) width = values.size();
    require(values.size() == width, Status::parse_error,
            path + ": line " + std::to_string(line_no) + ": expected " +
                std::to_string(width) + " values");
    rows.push_back(std::move(values));
  }
  require(!rows.empty(), Status::insufficient_data, path + ": no data rows");
  RegressionData data;
  const std::size_t q = width - 1;
  data.x = math::Matrix(rows.size(), q);
  data.y.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < q; ++j) data.x(i, j) = rows[i][j];
    data.y[i] = rows[i][q];
  }
  return data;
}

SpatialFile read_spatial(const std::string& path) {
  std::ifstream in = open_input(path);
  SpatialFile out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto values = parse_numbers(line, path, line_no);
    require(values.size() == 3, Status::parse_error,
            path + ": line " + std::to_string(line_no) +
                ": expected (x, y, value) triples");
    out.sites.push_back({values[0], values[1]});
    out.values.push_back(values[2]);
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    require(out.good(), Status::io_error, "cannot write '" + tmp + "'");
    out << text;
    out.flush();
    require(out.good(), Status::io_error, "write failed for '" + tmp + "'");
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, Status::io_error,
          "cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace gprc::dataio
