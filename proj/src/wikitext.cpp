#include "memini/wikitext.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace memini {

namespace {

char ascii_lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool iequal_at(std::string_view s, std::size_t pos, std::string_view token) {
    if (pos + token.size() > s.size()) return false;
    for (std::size_t i = 0; i < token.size(); ++i) {
        if (ascii_lower(s[pos + i]) != token[i]) return false;
    }
    return true;
}

std::size_t ifind(std::string_view s, std::string_view token, std::size_t from) {
    if (token.empty()) return from;
    for (std::size_t i = from; i + token.size() <= s.size(); ++i) {
        if (iequal_at(s, i, token)) return i;
    }
    return std::string_view::npos;
}

// Removes every region delimited by open/close with nesting. An
// unmatched opener drops the remainder of the input.
std::string remove_nested(std::string_view s, std::string_view open,
                          std::string_view close) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s.compare(i, open.size(), open) == 0) {
            int depth = 1;
            std::size_t j = i + open.size();
            while (j < s.size() && depth > 0) {
                if (s.compare(j, open.size(), open) == 0) {
                    ++depth;
                    j += open.size();
                } else if (s.compare(j, close.size(), close) == 0) {
                    --depth;
                    j += close.size();
                } else {
                    ++j;
                }
            }
            if (depth > 0) return out;  // unterminated: drop the rest
            i = j;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

std::string remove_comments(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s.compare(i, 4, "<!--") == 0) {
            std::size_t end = s.find("-->", i + 4);
            if (end == std::string_view::npos) return out;
            i = end + 3;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

std::string remove_refs(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (iequal_at(s, i, "<ref") &&
            (i + 4 == s.size() || s[i + 4] == '>' || s[i + 4] == ' ' ||
             s[i + 4] == '/' || s[i + 4] == '\t' || s[i + 4] == '\n')) {
            std::size_t gt = s.find('>', i);
            if (gt == std::string_view::npos) return out;
            if (s[gt - 1] == '/') {  // self-closing <ref name=x/>
                i = gt + 1;
                continue;
            }
            std::size_t close = ifind(s, "</ref", gt + 1);
            if (close == std::string_view::npos) return out;
            std::size_t close_gt = s.find('>', close);
            if (close_gt == std::string_view::npos) return out;
            i = close_gt + 1;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

bool is_media_link(std::string_view inner) {
    std::size_t p = 0;
    while (p < inner.size() && (inner[p] == ' ' || inner[p] == '\t')) ++p;
    return iequal_at(inner, p, "file:") || iequal_at(inner, p, "image:");
}

// Converts [[target|display]] -> display and [[target]] -> target;
// drops file/image links with their captions. Nested brackets (media
// captions may contain links) are resolved innermost first.
std::string process_links(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s.compare(i, 2, "[[") != 0) {
            out.push_back(s[i++]);
            continue;
        }
        int depth = 1;
        std::size_t j = i + 2;
        while (j < s.size() && depth > 0) {
            if (s.compare(j, 2, "[[") == 0) {
                ++depth;
                j += 2;
            } else if (s.compare(j, 2, "]]") == 0) {
                --depth;
                j += 2;
            } else {
                ++j;
            }
        }
        if (depth > 0) {  // unterminated: drop the brackets, keep scanning
            i += 2;
            continue;
        }
        std::string_view inner = s.substr(i + 2, j - 2 - (i + 2));
        if (!is_media_link(inner)) {
            std::string resolved = process_links(inner);
            std::size_t pipe = resolved.find('|');
            out += pipe == std::string::npos ? resolved : resolved.substr(pipe + 1);
        }
        i = j;
    }
    return out;
}

std::string remove_html_tags(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '<' && i + 1 < s.size() &&
            (std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '/')) {
            std::size_t gt = s.find('>', i);
            if (gt == std::string_view::npos) return out;
            i = gt + 1;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

std::string remove_quote_markup(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '\'') {
            std::size_t run = 1;
            while (i + run < s.size() && s[i + run] == '\'') ++run;
            if (run == 1) out.push_back('\'');
            i += run;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

// Heading and list markup is line-oriented; handle it before the final
// whitespace collapse destroys line boundaries.
std::string strip_line_markup(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t eol = s.find('\n', pos);
        std::string_view line =
            s.substr(pos, eol == std::string_view::npos ? s.size() - pos : eol - pos);

        std::size_t b = 0;
        std::size_t e = line.size();
        while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
        while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t')) --e;
        std::string_view body = line.substr(b, e - b);
        if (!body.empty() && body.front() == '=' && body.back() == '=' &&
            body.size() >= 2) {
            std::size_t hb = 0;
            std::size_t he = body.size();
            while (hb < he && body[hb] == '=') ++hb;
            while (he > hb && body[he - 1] == '=') --he;
            out.append(body.substr(hb, he - hb));
        } else if (!body.empty() &&
                   (body[0] == '*' || body[0] == '#' || body[0] == ':' ||
                    body[0] == ';')) {
            std::size_t lb = 0;
            while (lb < body.size() &&
                   (body[lb] == '*' || body[lb] == '#' || body[lb] == ':' ||
                    body[lb] == ';')) {
                ++lb;
            }
            out.append(body.substr(lb));
        } else {
            out.append(body);
        }
        out.push_back('\n');
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return out;
}

std::string unescape_entities(std::string_view s) {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 5>
        entities{{{"&nbsp;", " "},
                  {"&amp;", "&"},
                  {"&quot;", "\""},
                  {"&ndash;", "-"},
                  {"&mdash;", "-"}}};
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        bool replaced = false;
        if (s[i] == '&') {
            for (const auto& [name, value] : entities) {
                if (s.compare(i, name.size(), name) == 0) {
                    out += value;
                    i += name.size();
                    replaced = true;
                    break;
                }
            }
        }
        if (!replaced) out.push_back(s[i++]);
    }
    return out;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending = !out.empty();
            continue;
        }
        if (pending) {
            out.push_back(' ');
            pending = false;
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string strip_wikitext(std::string_view wikitext) {
    std::string text = remove_comments(wikitext);
    text = remove_refs(text);
    text = remove_nested(text, "{{", "}}");
    text = remove_nested(text, "{|", "|}");
    text = process_links(text);
    text = remove_html_tags(text);
    text = remove_quote_markup(text);
    text = strip_line_markup(text);
    text = unescape_entities(text);
    return collapse_whitespace(text);
}

}  // namespace memini
