#include "memini/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "memini/errors.hpp"
#include "memini/strings.hpp"

namespace memini {

namespace {

bool is_word_char(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

}  // namespace

std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        if (is_word_char(static_cast<unsigned char>(ch))) {
            current.push_back(
                static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

void EntityLexicon::add_entity(std::string_view canonical,
                               const std::vector<std::string>& aliases) {
    std::string label = canonical_label(canonical);
    if (label.empty()) throw InvalidArgument("canonical label must be non-empty");
    if (label.find(',') != std::string::npos) {
        throw InvalidArgument("canonical label may not contain ',': " + label);
    }
    if (has_canonical(label)) {
        throw InvalidArgument("duplicate canonical label '" + label + "'");
    }

    std::vector<Alias> pending;
    auto add_alias = [&](std::string_view surface) {
        std::vector<std::string> tokens = tokenize_words(surface);
        if (tokens.empty()) {
            throw InvalidArgument("alias with no word characters for '" + label + "'");
        }
        Alias alias{std::move(tokens), label, join_tokens(tokenize_words(surface))};
        for (const Alias& existing : aliases_) {
            if (existing.tokens == alias.tokens) {
                throw InvalidArgument("alias '" + alias.surface + "' of '" + label +
                                      "' already claimed by '" + existing.canonical + "'");
            }
        }
        for (const Alias& queued : pending) {
            if (queued.tokens == alias.tokens) return;  // same entity, same surface
        }
        pending.push_back(std::move(alias));
    };

    add_alias(label);
    for (const std::string& a : aliases) add_alias(a);

    canonical_labels_.push_back(label);
    for (Alias& a : pending) aliases_.push_back(std::move(a));
    std::sort(aliases_.begin(), aliases_.end(), [](const Alias& a, const Alias& b) {
        if (a.tokens.size() != b.tokens.size()) {
            return a.tokens.size() > b.tokens.size();
        }
        return a.surface < b.surface;
    });
}

bool EntityLexicon::has_canonical(std::string_view label) const {
    return std::find(canonical_labels_.begin(), canonical_labels_.end(), label) !=
           canonical_labels_.end();
}

EntityLexicon EntityLexicon::parse(std::istream& in) {
    EntityLexicon lexicon;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::string body = trim(line);
        if (body.empty()) continue;

        std::string canonical = body;
        std::vector<std::string> aliases;
        if (auto colon = body.find(':'); colon != std::string::npos) {
            canonical = trim(body.substr(0, colon));
            std::string rest = body.substr(colon + 1);
            if (trim(rest).empty()) rest.clear();
            std::size_t start = 0;
            while (start < rest.size()) {
                std::size_t bar = rest.find('|', start);
                std::string alias = trim(rest.substr(
                    start, bar == std::string::npos ? std::string::npos : bar - start));
                if (alias.empty()) {
                    throw FormatError("empty alias", line_no);
                }
                aliases.push_back(std::move(alias));
                if (bar == std::string::npos) break;
                start = bar + 1;
            }
        }
        try {
            lexicon.add_entity(canonical, aliases);
        } catch (const InvalidArgument& e) {
            throw FormatError(e.what(), line_no);
        }
    }
    return lexicon;
}

EntityLexicon EntityLexicon::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open lexicon file " + path.string());
    return parse(in);
}

}  // namespace memini
