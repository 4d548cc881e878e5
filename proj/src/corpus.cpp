#include "memini/corpus.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "memini/errors.hpp"
#include "memini/strings.hpp"

namespace memini {

namespace {

using nlohmann::json;

std::uint64_t parse_uint(std::string_view field, const char* what,
                         std::size_t line_no) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw FormatError(std::string("bad ") + what + " field '" +
                              std::string(field) + "'",
                          line_no);
    }
    return value;
}

// Splits an endpoint URL into (scheme://host[:port], path).
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw InvalidArgument("endpoint URL must include a scheme: " + endpoint);
    }
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {endpoint, "/"};
    }
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw CacheError("read failure on " + path.string());
    return buf.str();
}

}  // namespace

StreamManifest parse_manifest(std::istream& in) {
    StreamManifest manifest;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string body = trim(line);
        if (body.empty()) continue;

        // step,phase,revision_id,revision_date,title — title is the
        // tail and may itself contain commas.
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (int i = 0; i < 4; ++i) {
            auto comma = body.find(',', start);
            if (comma == std::string::npos) {
                throw FormatError("manifest row needs 5 comma-separated fields",
                                  line_no);
            }
            fields.push_back(trim(body.substr(start, comma - start)));
            start = comma + 1;
        }
        fields.push_back(trim(body.substr(start)));
        if (fields[4].empty()) throw FormatError("empty title", line_no);

        ManifestRow row;
        row.step = static_cast<std::uint32_t>(parse_uint(fields[0], "step", line_no));
        row.phase = static_cast<int>(parse_uint(fields[1], "phase", line_no));
        row.revision_id = parse_uint(fields[2], "revision_id", line_no);
        if (row.revision_id == 0) throw FormatError("revision_id must be positive", line_no);
        row.revision_date = fields[3];
        row.title = fields[4];
        if (row.step != manifest.size()) {
            throw FormatError("step indices must be contiguous from 0", line_no);
        }
        manifest.push_back(std::move(row));
    }
    return manifest;
}

StreamManifest load_manifest_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open manifest file " + path.string());
    return parse_manifest(in);
}

const StreamManifest& default_manifest() {
    static const StreamManifest manifest = {
        {0, 1, 943272842ULL, "2020-02-29", "SARS-CoV-2"},
        {1, 2, 954085088ULL, "2020-04-30", "COVID-19 lockdowns"},
        {2, 2, 960065515ULL, "2020-05-31", "Face masks during the COVID-19 pandemic"},
        {3, 2, 965344908ULL, "2020-06-30", "COVID-19 testing"},
        {4, 2, 970150834ULL, "2020-07-29", "Hydroxychloroquine"},
        {5, 3, 991568447ULL, "2020-11-30", "COVID-19 vaccine"},
        {6, 3, 1003792446ULL, "2021-01-30", "Moderna COVID-19 vaccine"},
        {7, 3, 1009464972ULL, "2021-02-28", "mRNA vaccine"},
        {8, 4, 1036472511ULL, "2021-07-31", "SARS-CoV-2 Delta variant"},
        {9, 4, 1058010984ULL, "2021-11-30", "SARS-CoV-2 Omicron variant"},
        {10, 4, 1062765134ULL, "2021-12-30", "Booster dose"},
        {11, 4, 1095797409ULL, "2022-06-30", "Long COVID"},
        {12, 4, 1130409555ULL, "2022-12-30", "Endemic COVID-19"},
    };
    return manifest;
}

StreamMode parse_stream_mode(std::string_view name) {
    if (name == "fixture") return StreamMode::fixture;
    if (name == "cached") return StreamMode::cached;
    if (name == "live") return StreamMode::live;
    throw InvalidArgument("unknown stream mode '" + std::string(name) +
                          "' (expected fixture, cached, or live)");
}

RevisionFetcher::RevisionFetcher(FetchOptions options)
    : options_(std::move(options)) {}

std::filesystem::path RevisionFetcher::cache_path(std::uint64_t revision_id) const {
    return options_.cache_dir / (std::to_string(revision_id) + ".wikitext");
}

std::optional<std::string> RevisionFetcher::cached(std::uint64_t revision_id) const {
    auto path = cache_path(revision_id);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    return read_file(path);
}

std::string RevisionFetcher::fetch(std::uint64_t revision_id,
                                   DocumentSource* source_out) {
    if (auto hit = cached(revision_id)) {
        if (source_out != nullptr) *source_out = DocumentSource::cache;
        return *hit;
    }
    std::string wikitext = fetch_network(revision_id);
    write_cache(revision_id, wikitext);
    if (source_out != nullptr) *source_out = DocumentSource::network;
    return wikitext;
}

std::string RevisionFetcher::api_get(
    const std::vector<std::pair<std::string, std::string>>& query_params,
    std::uint64_t revision_id_for_errors) {
    {
        std::unique_lock lock(gap_mutex_);
        auto now = std::chrono::steady_clock::now();
        if (any_request_) {
            auto next_allowed = last_request_ + options_.min_request_gap;
            if (now < next_allowed) {
                std::this_thread::sleep_for(next_allowed - now);
                now = std::chrono::steady_clock::now();
            }
        }
        last_request_ = now;
        any_request_ = true;
    }

    auto [base, path] = split_endpoint(options_.endpoint);
    httplib::Client client(base);
    client.set_default_headers({{"User-Agent", options_.user_agent}});
    client.set_connection_timeout(15);
    client.set_read_timeout(30);
    client.set_follow_location(true);

    httplib::Params params{{"action", "query"},
                           {"format", "json"},
                           {"formatversion", "2"},
                           {"prop", "revisions"}};
    for (const auto& [key, value] : query_params) params.emplace(key, value);
    auto res = client.Get(path, params, httplib::Headers{});
    if (!res) {
        throw FetchError("HTTP request failed: " + httplib::to_string(res.error()),
                         revision_id_for_errors);
    }
    if (res->status != 200) {
        throw FetchError("HTTP status " + std::to_string(res->status),
                         revision_id_for_errors);
    }
    return res->body;
}

std::string RevisionFetcher::fetch_network(std::uint64_t revision_id) {
    std::string body = api_get({{"revids", std::to_string(revision_id)},
                                {"rvprop", "ids|timestamp|content"},
                                {"rvslots", "main"}},
                               revision_id);
    json answer;
    try {
        answer = json::parse(body);
    } catch (const json::exception& e) {
        throw FetchError(std::string("malformed API response: ") + e.what(),
                         revision_id);
    }
    if (answer.contains("error")) {
        throw FetchError("API error: " + answer["error"].value("info", "unknown"),
                         revision_id);
    }
    const json& query = answer.value("query", json::object());
    if (query.contains("badrevids")) {
        throw FetchError("revision does not exist or was deleted", revision_id);
    }
    try {
        const json& pages = query.at("pages");
        for (const json& page : pages) {
            for (const json& rev : page.value("revisions", json::array())) {
                if (rev.value("revid", 0ULL) != revision_id) continue;
                const json& slot = rev.at("slots").at("main");
                return slot.at("content").get<std::string>();
            }
        }
    } catch (const json::exception& e) {
        throw FetchError(std::string("malformed API response: ") + e.what(),
                         revision_id);
    }
    throw FetchError("API response carries no content for this revision",
                     revision_id);
}

std::uint64_t RevisionFetcher::resolve_revision(const std::string& title,
                                                const std::string& date) {
    std::string body = api_get({{"titles", title},
                                {"rvprop", "ids|timestamp"},
                                {"rvlimit", "1"},
                                {"rvdir", "older"},
                                {"rvstart", date + "T23:59:59Z"}},
                               0);
    try {
        json answer = json::parse(body);
        const json& pages = answer.at("query").at("pages");
        for (const json& page : pages) {
            if (page.contains("missing")) break;
            for (const json& rev : page.value("revisions", json::array())) {
                return rev.at("revid").get<std::uint64_t>();
            }
        }
    } catch (const json::exception& e) {
        throw FetchError(std::string("malformed API response for '") + title +
                             "': " + e.what(),
                         0);
    }
    throw FetchError("no revision of '" + title + "' on or before " + date, 0);
}

void RevisionFetcher::write_cache(std::uint64_t revision_id,
                                  const std::string& wikitext) {
    std::error_code ec;
    std::filesystem::create_directories(options_.cache_dir, ec);
    if (ec) {
        throw CacheError("cannot create cache directory " +
                         options_.cache_dir.string() + ": " + ec.message());
    }
    auto final_path = cache_path(revision_id);
    auto temp_path = final_path;
    temp_path += ".tmp";
    {
        std::ofstream out(temp_path, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("cannot write " + temp_path.string());
        out << wikitext;
        if (!out.good()) throw CacheError("write failure on " + temp_path.string());
    }
    std::filesystem::rename(temp_path, final_path, ec);
    if (ec) {
        throw CacheError("cannot finalize cache entry " + final_path.string() +
                         ": " + ec.message());
    }
}

std::vector<Document> load_stream(const StreamManifest& manifest,
                                  const StreamOptions& options) {
    std::vector<Document> documents;
    documents.reserve(manifest.size());
    std::optional<RevisionFetcher> fetcher;
    if (options.mode != StreamMode::fixture) fetcher.emplace(options.fetch);

    for (const ManifestRow& row : manifest) {
        Document doc;
        doc.step_index = row.step;
        doc.title = row.title;
        std::string wikitext;
        switch (options.mode) {
            case StreamMode::fixture: {
                auto path = options.fixtures_dir /
                            (std::to_string(row.revision_id) + ".wikitext");
                std::ifstream in(path, std::ios::binary);
                if (!in) {
                    throw LoadError("step " + std::to_string(row.step) +
                                    ": missing fixture " + path.string());
                }
                std::ostringstream buf;
                buf << in.rdbuf();
                wikitext = buf.str();
                doc.source = DocumentSource::fixture;
                break;
            }
            case StreamMode::cached: {
                auto hit = fetcher->cached(row.revision_id);
                if (!hit) {
                    throw LoadError("step " + std::to_string(row.step) +
                                    ": revision " + std::to_string(row.revision_id) +
                                    " not in cache " +
                                    options.fetch.cache_dir.string());
                }
                wikitext = std::move(*hit);
                doc.source = DocumentSource::cache;
                break;
            }
            case StreamMode::live: {
                try {
                    wikitext = fetcher->fetch(row.revision_id, &doc.source);
                } catch (const FetchError& e) {
                    throw LoadError("step " + std::to_string(row.step) + ": " +
                                    e.what());
                }
                break;
            }
        }
        doc.plain_text = strip_wikitext(wikitext);
        documents.push_back(std::move(doc));
    }
    return documents;
}

}  // namespace memini
