#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace kg {

/// Lowercase + collapse whitespace runs to single spaces + trim.
std::string normalize_term(std::string_view raw);

/// Split on single tab characters; empty fields preserved.
std::vector<std::string> split_tsv(std::string_view line);

/// Whitespace-separated tokens of an already normalized string.
std::vector<std::string> tokenize(std::string_view normalized);

/// Locale-independent shortest round-trip-safe formatting ("%.17g").
std::string format_double(double v);

std::uint64_t fnv1a(std::string_view bytes);
std::uint64_t fnv1a_file(const std::filesystem::path& p);

/// Write via temporary file + rename so readers never see partial content.
void write_file_atomic(const std::filesystem::path& p, std::string_view content);

std::string read_file(const std::filesystem::path& p);

/// Run fn(i) for i in [0, n) on `workers` threads. Work items are claimed
/// from an atomic counter; fn must write only to per-index slots.
void parallel_for_index(std::size_t n, int workers,
                        const std::function<void(std::size_t)>& fn);

}  // namespace kg
