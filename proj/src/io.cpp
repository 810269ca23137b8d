#include "nullrad/io.hpp"

#include <bit>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

namespace nullrad::io {

namespace {

constexpr char kMagic[8] = {'N', 'U', 'L', 'L', 'R', 'A', 'D', '1'};

std::ifstream open_in(const std::string &path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in)
    throw Error(ErrorKind::io, "cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string &path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out)
    throw Error(ErrorKind::io, "cannot write " + path);
  return out;
}

std::string timestamp() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double parse(const std::string &s, const std::string &path) {
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str())
    throw Error(ErrorKind::io, "bad number '" + s + "' in " + path);
  return v;
}

std::string meta_value(const Series &s, const std::string &key,
                       const std::string &path) {
  for (const auto &[k, v] : s.meta)
    if (k == key)
      return v;
  throw Error(ErrorKind::io, "missing '" + key + "' in " + path);
}

void put_u64(std::ostream &out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i)
    b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char *>(b), 8);
}

std::uint64_t get_u64(std::istream &in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char *>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

} // namespace

std::string exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_series(const std::string &path, const Series &s,
                  const std::string &tag) {
  if (s.names.size() != s.columns.size())
    throw Error(ErrorKind::io, "column names and data differ in count");
  const std::size_t n = s.columns.empty() ? 0 : s.columns.front().size();
  for (const auto &c : s.columns)
    if (c.size() != n)
      throw Error(ErrorKind::io, "columns differ in length");
  std::ofstream out = open_out(path);
  out << "# nullrad " << tag << ' ' << timestamp() << '\n';
  for (const auto &[k, v] : s.meta)
    out << "# " << k << ' ' << v << '\n';
  for (std::size_t c = 0; c < s.names.size(); ++c)
    out << (c ? "," : "") << s.names[c];
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < s.columns.size(); ++c)
      out << (c ? "," : "") << exact(s.columns[c][i]);
    out << '\n';
  }
  if (!out)
    throw Error(ErrorKind::io, "write failed: " + path);
}

Series read_series(const std::string &path) {
  std::ifstream in = open_in(path);
  Series s;
  std::string line;
  bool first = true, header = false;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    if (line[0] == '#') {
      if (!first) {
        std::istringstream ls(line.substr(1));
        std::string k, v;
        ls >> k;
        std::getline(ls >> std::ws, v);
        s.meta.emplace_back(k, v);
      }
      first = false;
      continue;
    }
    first = false;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      cells.push_back(cell);
    if (!header) {
      s.names = cells;
      s.columns.assign(cells.size(), {});
      header = true;
      continue;
    }
    if (cells.size() != s.names.size())
      throw Error(ErrorKind::io, "ragged row in " + path);
    for (std::size_t c = 0; c < cells.size(); ++c)
      s.columns[c].push_back(parse(cells[c], path));
  }
  if (!header)
    throw Error(ErrorKind::io, "no header in " + path);
  return s;
}

void save_profile(const std::string &path, const RadiationProfile &F) {
  Series s;
  s.names = {"s", "F"};
  s.meta = {{"s_min", exact(F.s_min())}, {"ds", exact(F.ds())}};
  std::vector<double> sv(F.size());
  for (std::size_t k = 0; k < F.size(); ++k)
    sv[k] = F.s(k);
  s.columns = {sv, std::vector<double>(F.values().begin(), F.values().end())};
  write_series(path, s, "profile");
}

RadiationProfile load_profile(const std::string &path) {
  const Series s = read_series(path);
  if (s.columns.size() != 2)
    throw Error(ErrorKind::io, "expected columns s,F in " + path);
  return RadiationProfile(parse(meta_value(s, "s_min", path), path),
                          parse(meta_value(s, "ds", path), path), s.columns[1]);
}

void save_data(const std::string &path, const CauchyData &d) {
  Series s;
  s.names = {"r", "phi", "psi"};
  s.meta = {{"dr", exact(d.dr())}, {"support_radius", exact(d.support_radius)}};
  std::vector<double> r(d.size());
  for (std::size_t j = 0; j < d.size(); ++j)
    r[j] = d.phi.r(j);
  s.columns = {r,
               std::vector<double>(d.phi.values().begin(), d.phi.values().end()),
               std::vector<double>(d.psi.values().begin(), d.psi.values().end())};
  write_series(path, s, "data");
}

CauchyData load_data(const std::string &path) {
  const Series s = read_series(path);
  if (s.columns.size() != 3)
    throw Error(ErrorKind::io, "expected columns r,phi,psi in " + path);
  const double dr = parse(meta_value(s, "dr", path), path);
  return CauchyData(RadialProfile(dr, s.columns[1]), RadialProfile(dr, s.columns[2]),
                    parse(meta_value(s, "support_radius", path), path));
}

void write_blob(const std::string &path, std::size_t rows, std::size_t cols,
                const std::vector<double> &values) {
  if (values.size() != rows * cols)
    throw Error(ErrorKind::io, "blob size does not match rows x cols");
  std::ofstream out = open_out(path, true);
  out.write(kMagic, 8);
  put_u64(out, rows);
  put_u64(out, cols);
  put_u64(out, 0);
  for (double v : values)
    put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out)
    throw Error(ErrorKind::io, "write failed: " + path);
}

std::vector<double> read_blob(const std::string &path, std::size_t &rows,
                              std::size_t &cols) {
  std::ifstream in = open_in(path, true);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw Error(ErrorKind::io, "not a nullrad blob: " + path);
  rows = get_u64(in);
  cols = get_u64(in);
  get_u64(in);
  std::vector<double> v(rows * cols);
  for (double &x : v)
    x = std::bit_cast<double>(get_u64(in));
  if (!in)
    throw Error(ErrorKind::io, "truncated blob: " + path);
  return v;
}

void save_field(const std::string &prefix, const SolutionField &sol) {
  write_blob(prefix + ".w.bin", sol.N + 1, sol.J + 1, sol.w);
  write_blob(prefix + ".wt.bin", sol.N + 1, sol.J + 1, sol.wt);
  save_data(prefix + ".data.csv", sol.data);
  Json meta;
  meta["h"] = exact(sol.h);
  meta["N"] = sol.N;
  meta["J"] = sol.J;
  meta["nonlinearity"] = sol.nl_name;
  meta["coupling"] = exact(sol.coupling);
  meta["w"] = prefix + ".w.bin";
  meta["wt"] = prefix + ".wt.bin";
  write_json(prefix + ".json", meta);
}

SolutionField load_field(const std::string &prefix) {
  const Json meta = read_json(prefix + ".json");
  SolutionField sol;
  sol.h = std::stod(meta.at("h").get<std::string>());
  sol.N = meta.at("N").get<std::size_t>();
  sol.J = meta.at("J").get<std::size_t>();
  sol.nl_name = meta.at("nonlinearity").get<std::string>();
  sol.coupling = std::stod(meta.at("coupling").get<std::string>());
  std::size_t r = 0, c = 0;
  sol.w = read_blob(prefix + ".w.bin", r, c);
  if (r != sol.N + 1 || c != sol.J + 1)
    throw Error(ErrorKind::io, "field shape does not match its metadata");
  sol.wt = read_blob(prefix + ".wt.bin", r, c);
  sol.data = load_data(prefix + ".data.csv");
  return sol;
}

void write_json(const std::string &path, const Json &j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out)
    throw Error(ErrorKind::io, "write failed: " + path);
}

Json read_json(const std::string &path) {
  std::ifstream in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::io, path + ": " + e.what());
  }
}

} // namespace nullrad::io
