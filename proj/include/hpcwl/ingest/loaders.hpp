#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "hpcwl/ingest/types.hpp"

namespace hpcwl {

enum class InputFormat { jsonl, csv };

// ".csv" selects CSV; anything else is treated as JSON-lines.
InputFormat detect_format(const std::filesystem::path& path);

// Rows violating a hard invariant are rejected individually. If no row survives and
// at least one was rejected, the first rejection is rethrown as its original error.
Loaded<JobRecord> load_jobs(const std::filesystem::path& path, InputFormat format);
Loaded<JobRecord> load_jobs(std::istream& in, InputFormat format);

Loaded<AllocationRecord> load_allocations(const std::filesystem::path& path, InputFormat format);
Loaded<AllocationRecord> load_allocations(std::istream& in, InputFormat format);

// Resource descriptions are a JSON array. Factor windows in the file carry an inclusive
// "end" date (or null for open-ended) and are stored closed-open internally.
ResourceMap load_resources(const std::filesystem::path& path);
ResourceMap load_resources_from_string(const std::string& json_text);

// One JSON object per line: {"code":..,"field":..,"row":..}.
void write_rejection_report(std::ostream& out, std::span<const Rejection> rejections);

}  // namespace hpcwl
