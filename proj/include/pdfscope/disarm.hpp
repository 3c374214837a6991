#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pdfscope/bytes.hpp"

/// Obfuscation removal by case inversion of auto-executing PDF tags.
namespace pdfscope::disarm {

enum class Method {
  kInvertCase = 1,        // "/AA" -> "/aa"
  kInvertCaseSuffix = 2,  // "/AA" -> "/aa_disarmed"
};

/// The rewritten tags: /AA /OpenAction /JS /JavaScript /RichMedia /Launch
/// /JBIG2Decode.
const std::vector<std::string>& target_tags();

inline constexpr std::string_view kSuffix = "_disarmed";

struct Replacement {
  std::string tag;          // canonical tag, e.g. "/JavaScript"
  std::size_t offset = 0;   // of the '/' in the input
  std::string original;     // raw input bytes of the name token
  std::string replacement;  // bytes written in their place
};

struct DisarmReport {
  Method method = Method::kInvertCase;
  std::vector<Replacement> replacements;
  std::string input_hash;
  std::string output_hash;

  /// "# method=.. path=.. input=.. output=.. replacements=N" followed by one
  /// "tag<TAB>offset<TAB>original<TAB>replacement" line per rewrite.
  std::string to_text(const std::string& path) const;
};

struct DisarmResult {
  Bytes data;
  DisarmReport report;
};

/// Rewrites every delimiter-terminated occurrence of a target tag (matched
/// after #xx decoding, like the keyword counter). Letters flip case in
/// place; an escaped letter keeps its escape form and only the high hex
/// digit changes. Method 1 also rewrites fully inverted spellings ("/aa")
/// back to the tag, so it preserves length and is its own inverse; a file
/// that already contains such spellings therefore gains live tags.
DisarmResult disarm(ByteView data, Method method);

inline DisarmResult disarm_method1(ByteView data) { return disarm(data, Method::kInvertCase); }
inline DisarmResult disarm_method2(ByteView data) { return disarm(data, Method::kInvertCaseSuffix); }

}  // namespace pdfscope::disarm
