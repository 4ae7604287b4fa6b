#include "ssf/trainer.hpp"

#include "ssf/repository_xml.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>

namespace ssf {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

bool looks_like_timestamp(std::string_view field) {
    static const std::regex iso(
        R"(\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?)");
    return std::regex_match(field.begin(), field.end(), iso);
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string escape_field(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

std::string unescape_field(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            const char n = s[++i];
            out += n == 't' ? '\t' : n == 'n' ? '\n' : n == 'r' ? '\r' : n;
        } else {
            out += s[i];
        }
    }
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BundleError(path.filename().string() + ": cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw BundleError(path.filename().string() + ": cannot write " + path.string());
    out << content;
    if (!out.flush()) throw BundleError(path.filename().string() + ": write failed");
}

std::optional<SkippedRecord> skip_reason(const LogRecord& rec, const ParsedQuery& parsed) {
    SkippedRecord skip{rec.line_number, {}, {}, rec.sql};
    if (parsed.command_type != CommandType::select) {
        skip.reason = "non_select";
        skip.detail = "not a SELECT statement";
    } else if (parsed.statement_count > 1) {
        skip.reason = "multiple_statements";
        skip.detail = std::to_string(parsed.statement_count) + " statements";
    } else if (!parsed.residual_tokens.empty()) {
        skip.reason = "residual_tokens";
        skip.detail = std::to_string(parsed.residual_tokens.size()) + " unparsed token(s), first '" +
                      parsed.residual_tokens.front().lexeme + "' at offset " +
                      std::to_string(parsed.residual_tokens.front().offset);
    } else {
        auto literal_lhs = [](const ParsedQuery& q) {
            for (const auto& t : q.predicates) {
                if (!t.lhs.is_attribute()) return true;
            }
            return false;
        };
        bool found = literal_lhs(parsed);
        for (const auto& set : parsed.set_operations) found = found || literal_lhs(set.query);
        if (!found) return std::nullopt;
        skip.reason = "literal_lhs";
        skip.detail = "a predicate compares a literal on its left-hand side";
    }
    return skip;
}

TrainingManifest parse_manifest(const std::string& text) {
    TrainingManifest m;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool in_table = false;
    auto fail = [&](const std::string& what) {
        throw BundleError(std::string(kManifestFile) + ": line " + std::to_string(line_no) + ": " + what);
    };
    auto to_count = [&](const std::string& v) -> std::size_t {
        try {
            std::size_t used = 0;
            auto n = std::stoull(v, &used);
            if (used != v.size()) fail("bad number '" + v + "'");
            return static_cast<std::size_t>(n);
        } catch (const std::logic_error&) {
            fail("bad number '" + v + "'");
        }
        return 0;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (in_table) {
            if (line.rfind("line\t", 0) == 0) continue; // column header
            std::vector<std::string> cols;
            std::size_t start = 0;
            for (;;) {
                auto tab = line.find('\t', start);
                cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
                if (tab == std::string::npos) break;
                start = tab + 1;
            }
            if (cols.size() != 4) fail("skipped-line rows need 4 tab-separated columns");
            m.skipped.push_back({to_count(cols[0]), cols[1], unescape_field(cols[2]), unescape_field(cols[3])});
            continue;
        }
        if (line == "skipped_lines:") {
            in_table = true;
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string::npos) fail("expected 'key: value'");
        const std::string key = line.substr(0, colon);
        const std::string value = trim(std::string_view(line).substr(colon + 1));
        if (key == "created") m.created = value;
        else if (key == "records") m.records = to_count(value);
        else if (key == "usable") m.usable = to_count(value);
        else if (key == "source") m.sources.push_back(unescape_field(value));
        // entries/rules/transactions/skipped/thresholds are derived and
        // cross-checked by load_bundle.
    }
    return m;
}

std::size_t manifest_value(const std::string& text, const std::string& key, bool& present) {
    std::istringstream in(text);
    std::string line;
    present = false;
    while (std::getline(in, line)) {
        if (line.rfind(key + ":", 0) == 0) {
            present = true;
            try {
                return static_cast<std::size_t>(std::stoull(trim(std::string_view(line).substr(key.size() + 1))));
            } catch (const std::logic_error&) {
                throw BundleError(std::string(kManifestFile) + ": bad value for " + key);
            }
        }
        if (line == "skipped_lines:") break;
    }
    return 0;
}

} // namespace

std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) {
    std::size_t i = 0;
    while (i < bytes.size()) {
        const auto c = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + len > bytes.size()) return i;
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(bytes[i + k]);
            if ((cc & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // Overlong forms, surrogates, out of range.
        const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
        if (overlong || (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) return i;
        i += len;
    }
    return std::nullopt;
}

std::vector<LogRecord> read_log(std::string_view bytes, std::optional<std::string> source_tag) {
    if (auto bad = find_invalid_utf8(bytes)) {
        throw LogError((source_tag ? *source_tag + ": " : std::string()) +
                       "invalid UTF-8 at byte offset " + std::to_string(*bad));
    }
    std::vector<LogRecord> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        auto nl = bytes.find('\n', pos);
        std::string_view line = bytes.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? bytes.size() : nl + 1;
        ++line_no;

        const std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;

        std::string sql = trimmed;
        const auto tab1 = line.find('\t');
        if (tab1 != std::string_view::npos) {
            const auto tab2 = line.find('\t', tab1 + 1);
            if (tab2 != std::string_view::npos && looks_like_timestamp(trim(line.substr(0, tab1)))) {
                sql = trim(line.substr(tab2 + 1));
            }
        }
        if (sql.empty()) continue;
        out.push_back({line_no, std::move(sql), source_tag});
    }
    return out;
}

std::vector<LogRecord> read_log_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LogError(path.string() + ": cannot open");
    std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return read_log(bytes, path.string());
}

ProfileBundle train(const std::vector<LogRecord>& records, const MiningParams& params,
                    const KeywordSet& keywords) {
    params.validate();
    ProfileBundle bundle;
    bundle.keywords = keywords;
    bundle.manifest.created = utc_now();
    bundle.manifest.records = records.size();

    for (const auto& rec : records) {
        if (rec.source_tag &&
            std::find(bundle.manifest.sources.begin(), bundle.manifest.sources.end(), *rec.source_tag) ==
                bundle.manifest.sources.end()) {
            bundle.manifest.sources.push_back(*rec.source_tag);
        }
        const ParsedQuery parsed = parse_select(tokenize(rec.sql));
        if (auto skip = skip_reason(rec, parsed)) {
            bundle.manifest.skipped.push_back(std::move(*skip));
            continue;
        }
        bundle.repository.add(abstract_literals(parsed));
    }
    bundle.manifest.usable = bundle.repository.size();
    if (bundle.repository.empty()) {
        throw TrainingError("no usable training records (" + std::to_string(records.size()) + " read, " +
                            std::to_string(bundle.manifest.skipped.size()) + " skipped)");
    }
    bundle.rules = mine_rules(bundle.repository, params);
    return bundle;
}

std::string format_manifest(const ProfileBundle& bundle) {
    const auto& m = bundle.manifest;
    char thresholds[96];
    std::snprintf(thresholds, sizeof thresholds, "min_support: %.6f\nmin_confidence: %.6f\n",
                  bundle.rules.params().min_support, bundle.rules.params().min_confidence);
    std::string out = "# ssf training manifest\n";
    out += "created: " + m.created + "\n";
    out += "records: " + std::to_string(m.records) + "\n";
    out += "usable: " + std::to_string(m.usable) + "\n";
    out += "skipped: " + std::to_string(m.skipped.size()) + "\n";
    out += "entries: " + std::to_string(bundle.repository.size()) + "\n";
    out += "rules: " + std::to_string(bundle.rules.rules().size()) + "\n";
    out += "transactions: " + std::to_string(bundle.rules.transaction_count()) + "\n";
    out += thresholds;
    for (const auto& s : m.sources) out += "source: " + escape_field(s) + "\n";
    out += "skipped_lines:\n";
    out += "line\treason\tdetail\tsql\n";
    for (const auto& s : m.skipped) {
        out += std::to_string(s.line_number) + "\t" + s.reason + "\t" + escape_field(s.detail) + "\t" +
               escape_field(s.sql) + "\n";
    }
    return out;
}

void save_bundle(const ProfileBundle& bundle, const fs::path& directory) {
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) throw BundleError(directory.string() + ": " + ec.message());
    write_file(directory / kRepositoryFile, repository_to_xml(bundle.repository));
    write_file(directory / kRulesFile, save_profile(bundle.rules));
    write_file(directory / kKeywordsFile, format_keyword_file(bundle.keywords));
    write_file(directory / kManifestFile, format_manifest(bundle));
}

ProfileBundle load_bundle(const fs::path& directory) {
    if (!fs::is_directory(directory)) throw BundleError(directory.string() + ": not a profile directory");
    for (const char* name : {kRepositoryFile, kRulesFile, kKeywordsFile}) {
        if (!fs::exists(directory / name)) throw BundleError(std::string(name) + ": missing from " + directory.string());
    }

    ProfileBundle bundle;
    try {
        bundle.repository = repository_from_xml(read_file(directory / kRepositoryFile));
    } catch (const RepositoryLoadError& e) {
        throw BundleError(std::string(kRepositoryFile) + ": " + e.what());
    }
    try {
        bundle.rules = load_profile(read_file(directory / kRulesFile));
    } catch (const std::exception& e) {
        if (dynamic_cast<const BundleError*>(&e)) throw;
        throw BundleError(std::string(kRulesFile) + ": " + e.what());
    }
    try {
        bundle.keywords = parse_keyword_file(read_file(directory / kKeywordsFile));
    } catch (const KeywordError& e) {
        throw BundleError(std::string(kKeywordsFile) + ": " + e.what());
    }

    if (bundle.rules.transaction_count() != bundle.repository.size()) {
        throw IntegrityError(std::string(kRulesFile) + " records " +
                             std::to_string(bundle.rules.transaction_count()) + " transactions but " +
                             kRepositoryFile + " holds " + std::to_string(bundle.repository.size()) +
                             " queries");
    }

    const auto manifest_path = directory / kManifestFile;
    if (fs::exists(manifest_path)) {
        const std::string text = read_file(manifest_path);
        bundle.manifest = parse_manifest(text);
        bool present = false;
        const auto entries = manifest_value(text, "entries", present);
        if (present && entries != bundle.repository.size()) {
            throw IntegrityError(std::string(kManifestFile) + " lists " + std::to_string(entries) +
                                 " entries but " + kRepositoryFile + " holds " +
                                 std::to_string(bundle.repository.size()));
        }
    }
    return bundle;
}

bool same_bundle(const ProfileBundle& a, const ProfileBundle& b) {
    const auto& ma = a.manifest;
    const auto& mb = b.manifest;
    return a.repository == b.repository && equivalent(a.rules, b.rules) && a.keywords == b.keywords &&
           ma.records == mb.records && ma.usable == mb.usable && ma.sources == mb.sources &&
           ma.skipped == mb.skipped;
}

} // namespace ssf
