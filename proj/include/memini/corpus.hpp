#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "memini/wikitext.hpp"

namespace memini {

// One row of the revision-pinned document stream.
struct ManifestRow {
    std::uint32_t step = 0;
    int phase = 0;
    std::uint64_t revision_id = 0;
    std::string revision_date;
    std::string title;

    friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

using StreamManifest = std::vector<ManifestRow>;

// Line format: `step,phase,revision_id,revision_date,title`, UTF-8,
// `#` comments. Step indices must be 0..N-1 contiguous. Throws
// FormatError with the offending line number.
StreamManifest parse_manifest(std::istream& in);
StreamManifest load_manifest_file(const std::filesystem::path& path);

// The 13-step COVID-19 Wikipedia stream the repository reproduces.
const StreamManifest& default_manifest();

enum class StreamMode { fixture, cached, live };
StreamMode parse_stream_mode(std::string_view name);

enum class DocumentSource { cache, network, fixture };

struct Document {
    std::uint32_t step_index = 0;
    std::string title;
    std::string plain_text;
    DocumentSource source = DocumentSource::fixture;
};

struct FetchOptions {
    std::string endpoint = "https://en.wikipedia.org/w/api.php";
    std::string user_agent =
        "memini/0.1 (associative-memory research prototype; run by local operator)";
    std::filesystem::path cache_dir = "cache";
    // Minimum gap between live requests; polite default of one per second.
    std::chrono::milliseconds min_request_gap{1000};
};

// MediaWiki revision client with a write-through on-disk cache. Cache
// entries are raw wikitext keyed as `<cache_dir>/<revision_id>.wikitext`;
// writes are atomic (temp file then rename). Safe for concurrent use;
// the request gap is enforced across threads.
class RevisionFetcher {
public:
    explicit RevisionFetcher(FetchOptions options);

    // Cache hit or network fetch of exactly this revision's wikitext.
    // Throws FetchError on HTTP/API failure, CacheError on cache I/O.
    std::string fetch(std::uint64_t revision_id,
                      DocumentSource* source_out = nullptr);

    // Id of the last revision of `title` made on or before `date`
    // (YYYY-MM-DD). Always a network call; used to pin new manifests.
    std::uint64_t resolve_revision(const std::string& title,
                                   const std::string& date);

    // Cache-only lookup; nullopt when the revision is not cached.
    std::optional<std::string> cached(std::uint64_t revision_id) const;

    std::filesystem::path cache_path(std::uint64_t revision_id) const;

private:
    std::string fetch_network(std::uint64_t revision_id);
    std::string api_get(const std::vector<std::pair<std::string, std::string>>&
                            query_params,
                        std::uint64_t revision_id_for_errors);
    void write_cache(std::uint64_t revision_id, const std::string& wikitext);

    FetchOptions options_;
    std::mutex gap_mutex_;
    std::chrono::steady_clock::time_point last_request_;
    bool any_request_ = false;
};

struct StreamOptions {
    StreamMode mode = StreamMode::fixture;
    std::filesystem::path fixtures_dir = "data/fixtures";
    FetchOptions fetch;
};

// Loads the whole stream in step order, stripping wikitext to plain
// text. Fixture mode reads bundled `<revision_id>.wikitext` excerpts;
// cached mode requires a warm cache; live mode fetches through the
// API. Throws LoadError naming the step that could not be loaded.
std::vector<Document> load_stream(const StreamManifest& manifest,
                                  const StreamOptions& options);

}  // namespace memini
