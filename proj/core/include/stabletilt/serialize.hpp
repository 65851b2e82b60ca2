#pragma once

#include <iosfwd>
#include <string>

#include "stabletilt/stable_process.hpp"

namespace stabletilt {

/// One JSONL record per path:
///   {"seed":..,"start":[..],"horizon":..,"cutoff":..,"policy":"drop",
///    "events":[{"t":..,"pre":[..],"post":[..]},...],"end":[..]}
/// Doubles are written in shortest round-trip form, so records are
/// byte-stable for identical paths.
std::string path_to_jsonl(const JumpPath& path);
JumpPath path_from_jsonl(const std::string& line);

void write_paths_jsonl(std::ostream& os, const std::vector<JumpPath>& paths);

}  // namespace stabletilt
