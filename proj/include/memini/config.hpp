#pragma once

#include <string>

#include "memini/analysis.hpp"
#include "memini/corpus.hpp"
#include "memini/dynamics.hpp"
#include "memini/ingest.hpp"
#include "memini/retrieval.hpp"

namespace memini {

// Everything a pipeline run needs. Values come from built-in defaults,
// then an optional key=value config file, then command-line flags of
// the same name; later sources win.
struct RunConfig {
    std::string manifest = "data/manifest.csv";
    std::string lexicon = "data/lexicon.txt";
    std::string cache_dir = "cache";
    std::string fixtures_dir = "data/fixtures";
    std::string snapshot = "memini.snapshot";
    std::string event_log = "events.csv";
    std::string mode = "fixture";  // fixture | cached | live
    std::string direction_mode = "symmetric";  // symmetric | textual
    std::string endpoint = FetchOptions{}.endpoint;
    std::string user_agent = FetchOptions{}.user_agent;
    int request_gap_ms = 1000;
    int horizon = 0;  // 0: derive from the manifest (or the event log)

    DynamicsParams dynamics;
    RetrievalParams retrieval;
    ClassificationThresholds thresholds;

    // Re-validates every owned parameter set; throws InvalidArgument.
    void validate() const;

    StreamMode stream_mode() const { return parse_stream_mode(mode); }
    DirectionMode direction() const { return parse_direction_mode(direction_mode); }
    FetchOptions fetch_options() const;
    StreamOptions stream_options() const;
};

}  // namespace memini
