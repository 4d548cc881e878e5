#pragma once

#include <string>
#include <string_view>

namespace memini {

// Strip leading and trailing ASCII whitespace.
std::string trim(std::string_view s);

// ASCII lowercase; bytes outside A-Z pass through untouched.
std::string to_lower(std::string_view s);

// Canonical form of an entity label: lowercased, trimmed, internal
// whitespace runs collapsed to a single space.
std::string canonical_label(std::string_view s);

// Percent-encode '%', ',' and whitespace so encoded fields survive
// space- and comma-separated line formats.
std::string percent_encode(std::string_view s);

// Inverse of percent_encode. Throws InvalidArgument on a bad escape.
std::string percent_decode(std::string_view s);

// Shortest-round-trip decimal for a double (17 significant digits).
std::string format_real(double v);

// Parse a double; throws InvalidArgument if the field is not a full,
// valid real literal.
double parse_real(std::string_view s);

}  // namespace memini
