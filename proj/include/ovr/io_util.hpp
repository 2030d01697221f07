#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ovr/common.hpp"

namespace ovr::io {

// Writes via a temp file in the same directory plus rename, so readers
// never observe a partially written file.
void atomic_write(const std::filesystem::path& path, const std::vector<uint8_t>& bytes);
void atomic_write_text(const std::filesystem::path& path, const std::string& text);

std::string read_text(const std::filesystem::path& path);

// JSON Lines: one object per non-empty line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

std::string base64_encode(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> base64_decode(const std::string& text);

// OVR_LOG=debug enables stderr diagnostics.
bool log_enabled();
void log(const std::string& message);

}  // namespace ovr::io
