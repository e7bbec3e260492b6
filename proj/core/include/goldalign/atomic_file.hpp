#pragma once

#include <filesystem>
#include <string_view>

namespace goldalign {

/// Replaces `path` with `data` atomically: writes a sibling temp file,
/// fsyncs it, renames it over `path` and fsyncs the directory. Readers see
/// either the old or the new content, never a mix, even across a crash.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

}  // namespace goldalign
