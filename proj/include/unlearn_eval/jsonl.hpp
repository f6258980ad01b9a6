#pragma once

#include <string>
#include <vector>

#include "unlearn_eval/records.hpp"

namespace uleval {

// JSON-lines readers/writers, one record per line, UTF-8. All text fields
// are NFC-normalized on read. Unknown fields survive a read-write round
// trip. Readers throw IoError for unreadable paths and SchemaError naming
// the line number and field for malformed records; an empty file reads as
// an empty list.

std::vector<Profile> read_profiles(const std::string& path);
std::vector<QAPair> read_qa(const std::string& path);
std::vector<GenerationRecord> read_generations(const std::string& path);
std::vector<LogProbRecord> read_logprobs(const std::string& path);

void write_profiles(const std::string& path, const std::vector<Profile>& rows);
void write_qa(const std::string& path, const std::vector<QAPair>& rows);
void write_generations(const std::string& path,
                       const std::vector<GenerationRecord>& rows);
void write_logprobs(const std::string& path,
                    const std::vector<LogProbRecord>& rows);

}  // namespace uleval
