#include "ssf/keywords.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <tuple>

namespace ssf {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

// Length of the match of `keyword` at `pos`, or 0.
std::size_t match_at(std::string_view text, std::size_t pos, std::string_view keyword) {
    std::size_t i = pos;
    for (std::size_t k = 0; k < keyword.size(); ++k) {
        if (keyword[k] == ' ') {
            if (i >= text.size() || !is_space(text[i])) return 0;
            while (i < text.size() && is_space(text[i])) ++i;
            continue;
        }
        if (i >= text.size() || lower(text[i]) != keyword[k]) return 0;
        ++i;
    }
    return i - pos;
}

void scan_view(const DecodedView& view, const KeywordSet& keywords, bool encoded,
               std::vector<KeywordHit>& hits) {
    for (const auto& kw : keywords.entries()) {
        for (std::size_t pos = 0; pos < view.text.size(); ++pos) {
            if (match_at(view.text, pos, kw) > 0) {
                hits.push_back({kw, view.source_offset[pos], encoded});
            }
        }
    }
}

std::string hex_decode_line(std::string_view line, std::size_t line_no) {
    std::string_view digits = line.substr(2);
    if (digits.empty() || digits.size() % 2 != 0) {
        throw KeywordError("line " + std::to_string(line_no) + ": hex keyword needs an even, non-zero digit count");
    }
    std::string out;
    for (std::size_t i = 0; i < digits.size(); i += 2) {
        const int hi = hex_value(digits[i]);
        const int lo = hex_value(digits[i + 1]);
        if (hi < 0 || lo < 0) {
            throw KeywordError("line " + std::to_string(line_no) + ": invalid hex digit");
        }
        out += static_cast<char>(hi * 16 + lo);
    }
    return out;
}

} // namespace

std::string canonical_keyword(std::string_view raw) {
    std::string out;
    bool pending_space = false;
    for (char c : raw) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out += ' ';
        pending_space = false;
        out += lower(c);
    }
    return out;
}

KeywordSet::KeywordSet(const std::vector<std::string>& entries, unsigned layers) : layers_(layers) {
    for (const auto& e : entries) {
        auto kw = canonical_keyword(e);
        if (kw.empty()) continue;
        if (std::find(entries_.begin(), entries_.end(), kw) == entries_.end()) {
            entries_.push_back(std::move(kw));
        }
    }
}

KeywordSet KeywordSet::defaults() {
    return KeywordSet({"'", ";", "--", "union", "exec", "order by", "union select"});
}

DecodedView DecodedView::identity(std::string_view source) {
    DecodedView v;
    v.text.assign(source);
    v.source_offset.resize(source.size());
    for (std::size_t i = 0; i < source.size(); ++i) v.source_offset[i] = i;
    return v;
}

DecodedView url_percent_decode(const DecodedView& in) {
    DecodedView out;
    const auto& t = in.text;
    for (std::size_t i = 0; i < t.size();) {
        if (t[i] == '%' && i + 2 < t.size() && hex_value(t[i + 1]) >= 0 && hex_value(t[i + 2]) >= 0) {
            out.text += static_cast<char>(hex_value(t[i + 1]) * 16 + hex_value(t[i + 2]));
            out.source_offset.push_back(in.source_offset[i]);
            i += 3;
        } else {
            out.text += t[i];
            out.source_offset.push_back(in.source_offset[i]);
            ++i;
        }
    }
    return out;
}

DecodedView hex_literal_decode(const DecodedView& in) {
    DecodedView out;
    const auto& t = in.text;
    auto word_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    for (std::size_t i = 0; i < t.size();) {
        const bool starts = t[i] == '0' && i + 1 < t.size() && (t[i + 1] == 'x' || t[i + 1] == 'X') &&
                            (i == 0 || !word_char(t[i - 1]));
        if (starts) {
            std::size_t j = i + 2;
            while (j < t.size() && hex_value(t[j]) >= 0) ++j;
            const std::size_t digits = j - (i + 2);
            const bool ends = j == t.size() || !word_char(t[j]);
            if (digits >= 2 && digits % 2 == 0 && ends) {
                for (std::size_t k = i + 2; k < j; k += 2) {
                    out.text += static_cast<char>(hex_value(t[k]) * 16 + hex_value(t[k + 1]));
                    // The first decoded byte points at the literal's "0x".
                    out.source_offset.push_back(in.source_offset[k == i + 2 ? i : k]);
                }
                i = j;
                continue;
            }
        }
        out.text += t[i];
        out.source_offset.push_back(in.source_offset[i]);
        ++i;
    }
    return out;
}

std::vector<KeywordHit> keyword_scan(std::string_view source, const KeywordSet& keywords) {
    std::vector<KeywordHit> hits;
    const auto raw = DecodedView::identity(source);
    scan_view(raw, keywords, false, hits);

    std::vector<DecodedView> views;
    if (keywords.has_layer(DecodeLayer::url_percent)) views.push_back(url_percent_decode(raw));
    if (keywords.has_layer(DecodeLayer::hex_literal)) {
        views.push_back(hex_literal_decode(raw));
        if (keywords.has_layer(DecodeLayer::url_percent)) views.push_back(hex_literal_decode(views.front()));
    }
    for (const auto& v : views) scan_view(v, keywords, true, hits);

    // A hit seen in the raw text wins over the same (keyword, offset) found
    // again in a decoded view.
    std::sort(hits.begin(), hits.end(), [](const KeywordHit& a, const KeywordHit& b) {
        return std::tie(a.offset, a.keyword, a.encoded) < std::tie(b.offset, b.keyword, b.encoded);
    });
    hits.erase(std::unique(hits.begin(), hits.end(),
                           [](const KeywordHit& a, const KeywordHit& b) {
                               return a.offset == b.offset && a.keyword == b.keyword;
                           }),
               hits.end());
    return hits;
}

KeywordSet parse_keyword_file(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> entries;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        std::string_view body = std::string_view(line).substr(first);
        body = body.substr(0, body.find_last_not_of(" \t") + 1);
        if (body.front() == '#') continue;
        if (body.size() >= 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
            entries.push_back(hex_decode_line(body, line_no));
        } else {
            entries.emplace_back(body);
        }
        if (canonical_keyword(entries.back()).empty()) {
            throw KeywordError("line " + std::to_string(line_no) + ": keyword is blank after decoding");
        }
    }
    KeywordSet set(entries);
    if (set.empty()) throw KeywordError("keyword file contains no keywords");
    return set;
}

std::string format_keyword_file(const KeywordSet& keywords) {
    std::string out = "# suspicious keywords, one per line; 0x-prefixed lines are hex-decoded\n";
    static constexpr char digits[] = "0123456789abcdef";
    for (const auto& kw : keywords.entries()) {
        // Entries that would read back as a comment or a hex line.
        const bool needs_hex = kw.front() == '#' || (kw.size() >= 2 && kw[0] == '0' && kw[1] == 'x');
        if (needs_hex) {
            out += "0x";
            for (unsigned char c : kw) {
                out += digits[c >> 4];
                out += digits[c & 0xf];
            }
        } else {
            out += kw;
        }
        out += '\n';
    }
    return out;
}

} // namespace ssf
