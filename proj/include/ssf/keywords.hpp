#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ssf {

enum class DecodeLayer : unsigned { url_percent = 1u << 0, hex_literal = 1u << 1 };

class KeywordError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Suspicious keywords ("magic words") plus the decodings applied to the
/// query before matching.
class KeywordSet {
public:
    KeywordSet() = default;
    /// Entries are lowercased and whitespace-normalized; duplicates dropped.
    explicit KeywordSet(const std::vector<std::string>& entries,
                        unsigned layers = all_layers());

    static constexpr unsigned all_layers() {
        return static_cast<unsigned>(DecodeLayer::url_percent) |
               static_cast<unsigned>(DecodeLayer::hex_literal);
    }

    /// ' ; -- union exec "order by" "union select"
    static KeywordSet defaults();

    const std::vector<std::string>& entries() const { return entries_; }
    unsigned layers() const { return layers_; }
    bool has_layer(DecodeLayer l) const { return (layers_ & static_cast<unsigned>(l)) != 0; }
    bool empty() const { return entries_.empty(); }

    bool operator==(const KeywordSet&) const = default;

private:
    std::vector<std::string> entries_;
    unsigned layers_ = all_layers();
};

/// Canonical keyword form: lowercase, whitespace runs collapsed to one
/// space, trimmed.
std::string canonical_keyword(std::string_view raw);

struct KeywordHit {
    std::string keyword;
    std::size_t offset = 0; // byte index of the match start in the source
    bool encoded = false;   // only visible after URL or hex decoding

    bool operator==(const KeywordHit&) const = default;
};

/// Matches every keyword against the raw text and against each decoded view
/// (percent-decoding, 0x hex literal decoding, and both combined). Matching
/// is case-insensitive; a space inside a keyword matches any whitespace run.
/// Hits are ordered by offset, then keyword.
std::vector<KeywordHit> keyword_scan(std::string_view source, const KeywordSet& keywords);

/// A decoded rendering of the source with, for every byte, the source offset
/// it came from.
struct DecodedView {
    std::string text;
    std::vector<std::size_t> source_offset;

    static DecodedView identity(std::string_view source);
};

DecodedView url_percent_decode(const DecodedView& in);
/// Replaces each `0x<hex digits>` run that is not part of a longer word
/// (even digit count) by the bytes it encodes.
DecodedView hex_literal_decode(const DecodedView& in);

/// Keyword file: one keyword per line, `#` comments, blank lines ignored;
/// lines starting with `0x` are hex-decoded. Throws KeywordError (with the
/// line number) on bad hex or when no keyword remains.
KeywordSet parse_keyword_file(std::string_view text);
std::string format_keyword_file(const KeywordSet& keywords);

} // namespace ssf
