#include "memini/event_log.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "memini/errors.hpp"
#include "memini/strings.hpp"

namespace memini {

namespace {
constexpr std::string_view kHeader = "doc_index,src_label,dst_label";
}

void write_event_log(std::ostream& out, std::span<const CooccurrenceEvent> events) {
    out << kHeader << '\n';
    for (const CooccurrenceEvent& e : events) {
        out << e.doc_index << ',' << percent_encode(e.src) << ','
            << percent_encode(e.dst) << '\n';
    }
}

std::vector<CooccurrenceEvent> read_event_log(std::istream& in) {
    std::vector<CooccurrenceEvent> events;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw FormatError("empty event log", 1);
    ++line_no;
    if (trim(line) != kHeader) {
        throw FormatError("event log header must be '" + std::string(kHeader) + "'",
                          line_no);
    }
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = trim(line);
        if (body.empty()) continue;
        auto c1 = body.find(',');
        auto c2 = c1 == std::string::npos ? std::string::npos : body.find(',', c1 + 1);
        if (c2 == std::string::npos || body.find(',', c2 + 1) != std::string::npos) {
            throw FormatError("event row needs exactly 3 fields", line_no);
        }
        std::string_view doc_field = std::string_view(body).substr(0, c1);
        std::uint32_t doc = 0;
        auto [ptr, ec] =
            std::from_chars(doc_field.data(), doc_field.data() + doc_field.size(), doc);
        if (ec != std::errc{} || ptr != doc_field.data() + doc_field.size()) {
            throw FormatError("bad doc_index '" + std::string(doc_field) + "'", line_no);
        }
        std::string src;
        std::string dst;
        try {
            src = percent_decode(body.substr(c1 + 1, c2 - c1 - 1));
            dst = percent_decode(body.substr(c2 + 1));
        } catch (const InvalidArgument& e) {
            throw FormatError(e.what(), line_no);
        }
        if (src.empty() || dst.empty()) throw FormatError("empty label", line_no);
        if (src == dst) throw FormatError("event src equals dst", line_no);
        events.push_back(CooccurrenceEvent{std::move(src), std::move(dst), doc});
    }
    return events;
}

std::vector<CooccurrenceEvent> load_event_log_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open event log " + path.string());
    return read_event_log(in);
}

}  // namespace memini
