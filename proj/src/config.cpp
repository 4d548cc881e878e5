#include "memini/config.hpp"

#include "memini/errors.hpp"

namespace memini {

void RunConfig::validate() const {
    dynamics.validate();
    retrieval.validate();
    thresholds.validate();
    parse_stream_mode(mode);
    parse_direction_mode(direction_mode);
    if (request_gap_ms < 0) throw InvalidArgument("request_gap_ms must be >= 0");
    if (horizon < 0) throw InvalidArgument("horizon must be >= 0");
}

FetchOptions RunConfig::fetch_options() const {
    FetchOptions options;
    options.endpoint = endpoint;
    options.user_agent = user_agent;
    options.cache_dir = cache_dir;
    options.min_request_gap = std::chrono::milliseconds(request_gap_ms);
    return options;
}

StreamOptions RunConfig::stream_options() const {
    StreamOptions options;
    options.mode = stream_mode();
    options.fixtures_dir = fixtures_dir;
    options.fetch = fetch_options();
    return options;
}

}  // namespace memini
