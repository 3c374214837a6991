#include "pdfscope/tokenizer.hpp"

#include <algorithm>
#include <set>

namespace pdfscope::tokenizer {
namespace {

int hex_value(std::uint8_t c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Length of the escape starting at data[i] ('#'), 0 if malformed.
std::size_t escape_length(ByteView data, std::size_t i) {
  if (i + 2 < data.size() && hex_value(data[i + 1]) >= 0 &&
      hex_value(data[i + 2]) >= 0) {
    return 3;
  }
  return 0;
}

std::set<std::size_t> find_all(std::string_view hay, std::string_view needle) {
  std::set<std::size_t> positions;
  for (auto pos = hay.find(needle); pos != std::string_view::npos;
       pos = hay.find(needle, pos + 1)) {
    positions.insert(pos);
  }
  return positions;
}

}  // namespace

bool is_pdf_whitespace(std::uint8_t c) {
  return c == 0x00 || c == 0x09 || c == 0x0A || c == 0x0C || c == 0x0D || c == 0x20;
}

bool is_pdf_delimiter(std::uint8_t c) {
  switch (c) {
    case '(': case ')': case '<': case '>': case '[': case ']':
    case '{': case '}': case '/': case '%':
      return true;
    default:
      return false;
  }
}

const TagVocabulary& TagVocabulary::standard() {
  static const TagVocabulary vocab({
      "/AA",        "/AcroForm", "/Colors",     "/EmbeddedFile", "/Encrypt",
      "/GoTo",      "/GoToR",    "/JBIG2Decode", "/JS",          "/JavaScript",
      "/Launch",    "/ObjStm",   "/OpenAction", "/Page",         "/RichMedia",
      "/SubmitForm", "/URI",     "/XFA",        "endobj",        "endstream",
      "obj",        "startxref", "stream",      "trailer",       "xref",
  });
  return vocab;
}

TagVocabulary::TagVocabulary(std::vector<std::string> tags) : tags_(std::move(tags)) {
  std::set<std::string_view> seen;
  for (const auto& t : tags_) {
    if (t.empty() || t == "/") throw UsageError("vocabulary tag must be non-empty");
    if (!seen.insert(t).second) throw UsageError("duplicate vocabulary tag: " + t);
  }
}

std::optional<std::size_t> TagVocabulary::index_of(std::string_view tag) const {
  auto it = std::find(tags_.begin(), tags_.end(), tag);
  if (it == tags_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - tags_.begin());
}

std::uint64_t KeywordCounts::at(std::string_view tag) const {
  auto it = counts.find(tag);
  if (it == counts.end()) throw UsageError("keyword counts missing tag " + std::string(tag));
  return it->second;
}

std::vector<NameToken> scan_names(ByteView data, bool decode_escapes) {
  std::vector<NameToken> names;
  std::size_t i = 0;
  while (i < data.size()) {
    if (data[i] != '/') {
      ++i;
      continue;
    }
    NameToken tok;
    tok.offset = i++;
    while (i < data.size() && is_regular(data[i])) {
      if (decode_escapes && data[i] == '#' && escape_length(data, i) == 3) {
        tok.name.push_back(static_cast<char>(hex_value(data[i + 1]) * 16 + hex_value(data[i + 2])));
        i += 3;
      } else {
        tok.name.push_back(static_cast<char>(data[i++]));
      }
    }
    tok.length = i - tok.offset;
    names.push_back(std::move(tok));
  }
  return names;
}

Bytes normalize_names(ByteView data) {
  Bytes out;
  out.reserve(data.size());
  bool in_name = false;
  std::size_t i = 0;
  while (i < data.size()) {
    const std::uint8_t c = data[i];
    if (c == '/') {
      in_name = true;
      out.push_back(c);
      ++i;
      continue;
    }
    if (!is_regular(c)) in_name = false;
    if (in_name && c == '#' && escape_length(data, i) == 3) {
      out.push_back(static_cast<std::uint8_t>(hex_value(data[i + 1]) * 16 + hex_value(data[i + 2])));
      i += 3;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

KeywordCounts count_keywords(ByteView data, const TagVocabulary& vocab) {
  KeywordCounts result;
  result.total_bytes = data.size();
  for (const auto& tag : vocab.tags()) result.counts[tag] = 0;

  for (const auto& tok : scan_names(data, false)) {
    auto it = result.counts.find("/" + tok.name);
    if (it != result.counts.end()) ++it->second;
  }

  const std::string_view text(reinterpret_cast<const char*>(data.data()), data.size());
  std::vector<std::string_view> bare;
  for (const auto& tag : vocab.tags()) {
    if (tag.front() != '/') bare.emplace_back(tag);
  }
  // Start positions of each bare keyword, so shorter keywords can skip
  // occurrences that sit inside a longer one.
  std::map<std::string_view, std::set<std::size_t>> starts;
  for (auto kw : bare) starts[kw] = find_all(text, kw);
  for (auto kw : bare) {
    std::uint64_t n = 0;
    for (std::size_t p : starts[kw]) {
      bool shadowed = false;
      for (auto longer : bare) {
        if (longer.size() <= kw.size()) continue;
        for (auto off = longer.find(kw); off != std::string_view::npos && !shadowed;
             off = longer.find(kw, off + 1)) {
          shadowed = p >= off && starts[longer].count(p - off) > 0;
        }
        if (shadowed) break;
      }
      if (!shadowed) ++n;
    }
    result.counts[std::string(kw)] = n;
  }
  return result;
}

FeatureVector keyword_feature(const KeywordCounts& counts, const TagVocabulary& vocab) {
  FeatureVector v{FeatureKind::kStructural, {}};
  v.values.reserve(vocab.size());
  for (const auto& tag : vocab.tags()) v.values.push_back(static_cast<double>(counts.at(tag)));
  return v;
}

FeatureVector structural_feature(ByteView data) {
  const Bytes normalized = normalize_names(data);
  return keyword_feature(count_keywords(normalized));
}

}  // namespace pdfscope::tokenizer
