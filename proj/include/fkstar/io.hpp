#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "fkstar/estimate.hpp"

namespace fkstar {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kResultsHeader =
    "run_id,graph,q,lambda,delta,bc,region,n,observable,mean,stderr,n_samples,seed";

struct ResultRow {
  std::string run_id;
  std::string graph;
  std::string region;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  EstimateCI estimate;
};

// Header line plus one line per row; numbers in shortest round-trip form.
std::string results_csv(const std::vector<ResultRow>& rows);

// Parses a file written by results_csv (ParseError on a bad header or row).
std::vector<ResultRow> parse_results_csv(const std::string& text);

// {command, spec, seed, versions, wall_time}; spec carries the caller's inputs verbatim.
nlohmann::ordered_json make_manifest(const std::string& command, nlohmann::ordered_json spec, std::uint64_t seed,
                                     double wall_time_seconds);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace fkstar
