#include "pdfscope/disarm.hpp"

#include <algorithm>

#include "pdfscope/tokenizer.hpp"

namespace pdfscope::disarm {
namespace {

bool is_alpha(std::uint8_t c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }

int hex_value(std::uint8_t c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Case-inverts the raw bytes of a name token (slash included, untouched).
std::string invert_token(ByteView raw) {
  std::string out(raw.begin(), raw.end());
  std::size_t i = 1;
  while (i < out.size()) {
    const auto c = static_cast<std::uint8_t>(out[i]);
    if (c == '#' && i + 2 < out.size() && hex_value(static_cast<std::uint8_t>(out[i + 1])) >= 0 &&
        hex_value(static_cast<std::uint8_t>(out[i + 2])) >= 0) {
      const int hi = hex_value(static_cast<std::uint8_t>(out[i + 1]));
      const int lo = hex_value(static_cast<std::uint8_t>(out[i + 2]));
      const auto decoded = static_cast<std::uint8_t>(hi * 16 + lo);
      if (is_alpha(decoded)) out[i + 1] = static_cast<char>('0' + (hi ^ 0x2));
      i += 3;
      continue;
    }
    if (is_alpha(c)) out[i] = static_cast<char>(c ^ 0x20);
    ++i;
  }
  return out;
}

std::string invert_name(std::string name) {
  for (char& c : name) {
    if (is_alpha(static_cast<std::uint8_t>(c))) c = static_cast<char>(c ^ 0x20);
  }
  return name;
}

}  // namespace

const std::vector<std::string>& target_tags() {
  static const std::vector<std::string> tags{
      "/AA", "/OpenAction", "/JS", "/JavaScript", "/RichMedia", "/Launch", "/JBIG2Decode",
  };
  return tags;
}

std::string DisarmReport::to_text(const std::string& path) const {
  std::string out = "# method=" + std::to_string(static_cast<int>(method)) + " path=" + path +
                    " input=" + input_hash + " output=" + output_hash +
                    " replacements=" + std::to_string(replacements.size()) + "\n";
  for (const auto& r : replacements) {
    out += r.tag + "\t" + std::to_string(r.offset) + "\t" + r.original + "\t" + r.replacement + "\n";
  }
  return out;
}

DisarmResult disarm(ByteView data, Method method) {
  if (method != Method::kInvertCase && method != Method::kInvertCaseSuffix) {
    throw UsageError("disarm method must be 1 or 2");
  }
  const auto& targets = target_tags();
  // Method 1 also swaps inverted spellings back, which makes it its own
  // inverse.
  std::vector<std::pair<std::string, std::string>> match;  // spelling -> canonical tag
  for (const auto& t : targets) {
    match.emplace_back(t, t);
    if (method == Method::kInvertCase) match.emplace_back(invert_name(t), t);
  }
  DisarmResult result;
  result.report.method = method;
  result.report.input_hash = sha256_hex(data);
  result.data.reserve(data.size());

  std::size_t copied = 0;
  for (const auto& tok : tokenizer::scan_names(data, true)) {
    const std::string name = "/" + tok.name;
    const auto hit = std::find_if(match.begin(), match.end(), [&](const auto& m) { return m.first == name; });
    if (hit == match.end()) continue;
    const std::string& tag = hit->second;
    const auto raw = data.subspan(tok.offset, tok.length);
    std::string rewritten = invert_token(raw);
    if (method == Method::kInvertCaseSuffix) rewritten += kSuffix;

    result.data.insert(result.data.end(), data.begin() + static_cast<std::ptrdiff_t>(copied),
                       data.begin() + static_cast<std::ptrdiff_t>(tok.offset));
    result.data.insert(result.data.end(), rewritten.begin(), rewritten.end());
    copied = tok.offset + tok.length;
    result.report.replacements.push_back({tag, tok.offset, std::string(raw.begin(), raw.end()), rewritten});
  }
  result.data.insert(result.data.end(), data.begin() + static_cast<std::ptrdiff_t>(copied), data.end());
  result.report.output_hash = sha256_hex(result.data);
  return result;
}

}  // namespace pdfscope::disarm
