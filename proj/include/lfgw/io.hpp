#ifndef LFGW_IO_HPP
#define LFGW_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "lfgw/affine.hpp"
#include "lfgw/sim.hpp"

namespace lfgw {

inline constexpr const char* kSchemaVersion = "1";

// Environment paths travel as JSONL, one {"A": ..., "B": ...} object per
// line, with shortest-round-trip decimals (bit-stable round trips).
std::string path_to_jsonl(const std::vector<EnvPair>& pairs);
std::vector<EnvPair> path_from_jsonl(const std::string& text);

std::string records_to_jsonl(const std::vector<ReplicateRecord>& batch);

// Two-column key,value summary with a schema header row.
std::string summary_csv(
    const std::vector<std::pair<std::string, std::string>>& rows);

// Write to <path>.tmp then rename, so partial results are never visible.
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace lfgw

#endif
