#pragma once

#include <string>
#include <string_view>

namespace memini {

// Reduces raw wikitext to plain prose: drops templates (nested),
// <ref> elements, HTML comments and tags, tables, and file/image
// links entirely; converts [[target|display]] to display and
// [[target]] to target; strips heading, list, bold and italic
// markup; unescapes a few common character entities; collapses all
// whitespace to single spaces.
//
// Best effort, not a parser: unbalanced markup is handled by bounded
// scanning (worst case the remainder of the input is dropped), so the
// function always terminates and never emits `{{`, `[[` or `<ref`.
std::string strip_wikitext(std::string_view wikitext);

}  // namespace memini
