#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "memini/ingest.hpp"

namespace memini {

// Event-log file: CSV with header `doc_index,src_label,dst_label`,
// one directed co-occurrence event per row, rows in emission order.
void write_event_log(std::ostream& out, std::span<const CooccurrenceEvent> events);

// Throws FormatError with the offending line number on a bad header,
// wrong field count, bad doc index, or empty label.
std::vector<CooccurrenceEvent> read_event_log(std::istream& in);
std::vector<CooccurrenceEvent> load_event_log_file(const std::filesystem::path& path);

}  // namespace memini
