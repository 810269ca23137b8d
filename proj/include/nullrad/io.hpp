#pragma once

#include "nullrad/core.hpp"
#include "nullrad/field.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace nullrad::io {

using Json = nlohmann::ordered_json;

/// Columnar text: a "# nullrad <tag> <timestamp>" line, optional "# key value"
/// lines, a header naming the columns, then rows printed with 17 significant
/// digits.
struct Series {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<std::pair<std::string, std::string>> meta;
};

void write_series(const std::string &path, const Series &s,
                  const std::string &tag = "series");
Series read_series(const std::string &path);

void save_profile(const std::string &path, const RadiationProfile &F);
RadiationProfile load_profile(const std::string &path);

void save_data(const std::string &path, const CauchyData &d);
CauchyData load_data(const std::string &path);

/// Raw little-endian binary64 block after four 64-bit header words:
/// magic "NULLRAD1", rows, cols, reserved (0).
void write_blob(const std::string &path, std::size_t rows, std::size_t cols,
                const std::vector<double> &values);
std::vector<double> read_blob(const std::string &path, std::size_t &rows,
                              std::size_t &cols);

/// <prefix>.w.bin, <prefix>.wt.bin and the metadata sidecar <prefix>.json.
void save_field(const std::string &prefix, const SolutionField &sol);
SolutionField load_field(const std::string &prefix);

void write_json(const std::string &path, const Json &j);
Json read_json(const std::string &path);

/// Decimal text that parses back to the same binary64.
std::string exact(double x);

} // namespace nullrad::io
