#include <doctest.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fixture_server.hpp"

#include "memini/corpus.hpp"
#include "memini/errors.hpp"

using namespace memini;
namespace fs = std::filesystem;

namespace {

const std::string kDataDir = MEMINI_DATA_DIR;

fs::path fresh_temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() /
                   ("memini_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

using memini_test::FixtureServer;

FetchOptions local_options(const FixtureServer& server, const fs::path& cache,
                           int gap_ms = 0) {
    FetchOptions options;
    options.endpoint = server.endpoint();
    options.cache_dir = cache;
    options.min_request_gap = std::chrono::milliseconds(gap_ms);
    return options;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("the default manifest is the 13-step pinned stream") {
    const StreamManifest& manifest = default_manifest();
    REQUIRE(manifest.size() == 13);
    CHECK(manifest[0] == ManifestRow{0, 1, 943272842ULL, "2020-02-29", "SARS-CoV-2"});
    CHECK(manifest[7] ==
          ManifestRow{7, 3, 1009464972ULL, "2021-02-28", "mRNA vaccine"});
    CHECK(manifest[12] ==
          ManifestRow{12, 4, 1130409555ULL, "2022-12-30", "Endemic COVID-19"});
    // Phase layout: origin, containment x4, vaccines x3, variants x5.
    std::vector<int> phases;
    for (const auto& row : manifest) phases.push_back(row.phase);
    CHECK(phases == std::vector<int>{1, 2, 2, 2, 2, 3, 3, 3, 4, 4, 4, 4, 4});
}

TEST_CASE("the bundled manifest file equals the built-in table") {
    StreamManifest manifest = load_manifest_file(kDataDir + "/manifest.csv");
    CHECK(manifest == default_manifest());
}

TEST_CASE("manifest parsing rejects malformed rows with line numbers") {
    std::istringstream missing("0,1,943272842,2020-02-29\n");
    CHECK_THROWS_AS(parse_manifest(missing), FormatError);
    std::istringstream gap("0,1,10,2020-01-01,A\n2,1,11,2020-01-02,B\n");
    CHECK_THROWS_AS(parse_manifest(gap), FormatError);
    std::istringstream zero_rev("0,1,0,2020-01-01,A\n");
    CHECK_THROWS_AS(parse_manifest(zero_rev), FormatError);
    try {
        std::istringstream bad("0,1,10,2020-01-01,A\n1,x,11,2020-01-02,B\n");
        parse_manifest(bad);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("fixture mode loads 13 stripped documents in step order") {
    StreamOptions options;
    options.mode = StreamMode::fixture;
    options.fixtures_dir = kDataDir + "/fixtures";
    std::vector<Document> docs = load_stream(default_manifest(), options);
    REQUIRE(docs.size() == 13);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        CAPTURE(docs[i].title);
        CHECK(docs[i].step_index == i);
        CHECK(docs[i].source == DocumentSource::fixture);
        CHECK_FALSE(docs[i].plain_text.empty());
        // Markup absence invariant.
        CHECK(docs[i].plain_text.find("{{") == std::string::npos);
        CHECK(docs[i].plain_text.find("[[") == std::string::npos);
        CHECK(docs[i].plain_text.find("<ref") == std::string::npos);
    }
}

TEST_CASE("cached mode with a cold cache names the failing step") {
    StreamOptions options;
    options.mode = StreamMode::cached;
    options.fetch.cache_dir = fresh_temp_dir("cold_cache");
    try {
        load_stream(default_manifest(), options);
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(std::string(e.what()).find("step 0") != std::string::npos);
    }
}

TEST_CASE("missing fixture names the step") {
    StreamOptions options;
    options.mode = StreamMode::fixture;
    options.fixtures_dir = fresh_temp_dir("no_fixtures");
    CHECK_THROWS_AS(load_stream(default_manifest(), options), LoadError);
}

TEST_CASE("fetch: network then warm cache, byte-identical, no second request") {
    FixtureServer server;
    fs::path cache = fresh_temp_dir("fetch_cache");
    RevisionFetcher fetcher(local_options(server, cache));

    DocumentSource source = DocumentSource::fixture;
    std::string first = fetcher.fetch(4242, &source);
    CHECK(source == DocumentSource::network);
    CHECK(first == memini_test::kCannedWikitext);
    CHECK(server.hits() == 1);
    CHECK(fs::exists(cache / "4242.wikitext"));

    std::string second = fetcher.fetch(4242, &source);
    CHECK(source == DocumentSource::cache);
    CHECK(second == first);
    CHECK(server.hits() == 1);  // cache hit never touches the network
}

TEST_CASE("fetch errors: bad revision, malformed response, dead endpoint") {
    FixtureServer server;
    fs::path cache = fresh_temp_dir("fetch_err");
    RevisionFetcher fetcher(local_options(server, cache));
    try {
        fetcher.fetch(1);
        FAIL("expected FetchError");
    } catch (const FetchError& e) {
        CHECK(e.revision_id() == 1);
    }
    CHECK_THROWS_AS(fetcher.fetch(7777), FetchError);

    FetchOptions dead;
    dead.endpoint = "http://127.0.0.1:1/w/api.php";
    dead.cache_dir = cache;
    dead.min_request_gap = std::chrono::milliseconds(0);
    RevisionFetcher unreachable(dead);
    CHECK_THROWS_AS(unreachable.fetch(4242), FetchError);
}

TEST_CASE("rate limiting enforces the configured request gap") {
    FixtureServer server;
    fs::path cache = fresh_temp_dir("rate_limit");
    RevisionFetcher fetcher(local_options(server, cache, 200));

    auto start = std::chrono::steady_clock::now();
    fetcher.fetch(4242);
    fs::remove(cache / "4242.wikitext");  // force a second network request
    fetcher.fetch(4242);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    CHECK(elapsed.count() >= 200);
}

TEST_CASE("cache write failure surfaces as CacheError") {
    FixtureServer server;
    fs::path parent = fresh_temp_dir("cache_as_file");
    fs::path bogus = parent / "occupied";
    std::ofstream(bogus) << "not a directory";
    RevisionFetcher fetcher(local_options(server, bogus));
    CHECK_THROWS_AS(fetcher.fetch(4242), CacheError);
}

TEST_CASE("resolve_revision pins the last revision on or before a date") {
    FixtureServer server;
    fs::path cache = fresh_temp_dir("resolve");
    RevisionFetcher fetcher(local_options(server, cache));
    CHECK(fetcher.resolve_revision("Test", "2020-02-29") == 4242ULL);
    CHECK_THROWS_AS(fetcher.resolve_revision("No Such Page", "2020-02-29"),
                    FetchError);
}

TEST_CASE("live mode against the local fixture API, then cached replay") {
    FixtureServer server;
    fs::path cache = fresh_temp_dir("live_stream");
    StreamManifest manifest = {{0, 1, 4242ULL, "2020-01-01", "Test"}};

    StreamOptions live;
    live.mode = StreamMode::live;
    live.fetch = local_options(server, cache);
    std::vector<Document> docs = load_stream(manifest, live);
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].plain_text == "Hello planet.");
    CHECK(docs[0].source == DocumentSource::network);

    StreamOptions cached = live;
    cached.mode = StreamMode::cached;
    std::vector<Document> again = load_stream(manifest, cached);
    CHECK(again[0].plain_text == docs[0].plain_text);
    CHECK(again[0].source == DocumentSource::cache);
    CHECK(server.hits() == 1);
}

}  // TEST_SUITE
