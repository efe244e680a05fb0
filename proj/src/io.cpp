#include "fkstar/io.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace fkstar {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

}  // namespace

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const auto& r : rows) {
    const auto& e = r.estimate;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.run_id, r.graph, e.params.q, e.params.lambda,
                       e.params.delta, to_string(e.params.bc), r.region, r.n, e.observable, e.mean, e.std_error,
                       e.n_samples, r.seed);
  }
  return out;
}

std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) throw Error(ErrorCode::kParseError, "unexpected CSV header");
  std::vector<ResultRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 13) throw Error(ErrorCode::kParseError, fmt::format("line {}: expected 13 fields", lineno));
    try {
      ResultRow r;
      r.run_id = f[0];
      r.graph = f[1];
      r.estimate.params.q = to_double(f[2]);
      r.estimate.params.lambda = to_double(f[3]);
      r.estimate.params.delta = to_double(f[4]);
      r.estimate.params.bc = parse_boundary(f[5]);
      r.region = f[6];
      r.n = std::stoll(f[7]);
      r.estimate.observable = f[8];
      r.estimate.mean = to_double(f[9]);
      r.estimate.std_error = to_double(f[10]);
      r.estimate.n_samples = std::stoll(f[11]);
      r.seed = std::stoull(f[12]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParseError, fmt::format("line {}: bad number", lineno));
    }
  }
  return rows;
}

nlohmann::ordered_json make_manifest(const std::string& command, nlohmann::ordered_json spec, std::uint64_t seed,
                                     double wall_time_seconds) {
  nlohmann::ordered_json m;
  m["command"] = command;
  m["spec"] = std::move(spec);
  m["seed"] = seed;
  m["versions"] = {{"fkstar", kVersion},
                   {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
                   {"boost", fmt::format("{}.{}.{}", BOOST_VERSION / 100000, BOOST_VERSION / 100 % 1000,
                                         BOOST_VERSION % 100)},
                   {"fmt", fmt::format("{}", FMT_VERSION)}};
  m["wall_time"] = wall_time_seconds;
  return m;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, fmt::format("cannot write {}", path));
  out << text;
  if (!out) throw Error(ErrorCode::kInvalidArgument, fmt::format("write to {} failed", path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, fmt::format("cannot read {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fkstar
