#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace memini {

// Lowercased word token with its position in the token sequence kept
// implicitly by index. Word characters are ASCII letters/digits plus
// any non-ASCII byte; everything else separates tokens.
std::vector<std::string> tokenize_words(std::string_view text);

// Entity lexicon: canonical labels with surface aliases. The canonical
// label itself always matches; listed aliases add further surfaces.
// Matching is whole-word over tokenize_words output.
class EntityLexicon {
public:
    struct Alias {
        std::vector<std::string> tokens;
        std::string canonical;
        std::string surface;  // canonicalized alias text, for diagnostics
    };

    // Registers an entity. Throws InvalidArgument on empty labels,
    // duplicate canonical labels, or an alias already claimed by any
    // entity (comparison is on canonicalized token sequences).
    void add_entity(std::string_view canonical,
                    const std::vector<std::string>& aliases = {});

    std::size_t size() const { return canonical_labels_.size(); }
    const std::vector<std::string>& canonical_labels() const {
        return canonical_labels_;
    }
    bool has_canonical(std::string_view label) const;

    // Aliases ordered longest token sequence first (ties by surface),
    // which is the matcher's scan order.
    const std::vector<Alias>& aliases() const { return aliases_; }

    // File format: one entity per line, `canonical: alias1 | alias2`,
    // aliases optional, `#` starts a comment. Throws FormatError with
    // the offending line number.
    static EntityLexicon parse(std::istream& in);
    static EntityLexicon load_file(const std::filesystem::path& path);

private:
    std::vector<std::string> canonical_labels_;
    std::vector<Alias> aliases_;
};

}  // namespace memini
