#include "pdfscope/pipeline/synth.hpp"

#include <array>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "pdfscope/ml/dataset.hpp"

namespace pdfscope::pipeline {
namespace {

using ml::uniform_index;

constexpr std::array<std::string_view, 24> kWords = {
    "report", "annual", "summary", "quarter", "revenue", "meeting", "agenda", "project",
    "budget", "review", "notes",   "draft",   "policy",  "update",  "result", "figure",
    "table",  "section", "page",   "total",   "market",  "design",  "team",   "plan"};

constexpr std::array<std::string_view, 7> kRisky = {"/JavaScript", "/JS",     "/OpenAction", "/AA",
                                                    "/Launch",     "/RichMedia", "/JBIG2Decode"};

struct Call {
  const char* api;
  int status;
};

constexpr std::array<Call, 10> kBenignCalls = {{{"NtOpenFile", 1},
                                                {"NtReadFile", 1},
                                                {"NtClose", 1},
                                                {"LdrLoadDll", 1},
                                                {"NtQueryAttributesFile", 0},
                                                {"RegOpenKeyExW", 1},
                                                {"RegQueryValueExW", 0},
                                                {"NtAllocateVirtualMemory", 1},
                                                {"GetSystemMetrics", 1},
                                                {"NtCreateFile", 1}}};

constexpr std::array<Call, 9> kMalwareCalls = {{{"NtWriteFile", 1},
                                                {"CreateProcessInternalW", 1},
                                                {"URLDownloadToFileW", 1},
                                                {"InternetOpenUrlA", 0},
                                                {"WriteProcessMemory", 1},
                                                {"NtProtectVirtualMemory", 1},
                                                {"RegSetValueExA", 1},
                                                {"ShellExecuteExW", 0},
                                                {"NtCreateMutant", 1}}};

class PdfWriter {
 public:
  int reserve() {
    objects_.emplace_back();
    return static_cast<int>(objects_.size());
  }
  void set(int obj, std::string body) { objects_[static_cast<std::size_t>(obj - 1)] = std::move(body); }
  int add(std::string body) {
    const int obj = reserve();
    set(obj, std::move(body));
    return obj;
  }
  int add_stream(const std::string& dict, std::string_view data) {
    std::string body = "<< " + dict + (dict.empty() ? "" : " ") + "/Length " + std::to_string(data.size()) +
                       " >>\nstream\n";
    body.append(data);
    body += "\nendstream";
    return add(std::move(body));
  }

  Bytes finish(int root) const {
    std::string out = "%PDF-1.7\n%\xE2\xE3\xCF\xD3\n";
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      offsets.push_back(out.size());
      out += std::to_string(i + 1) + " 0 obj\n" + objects_[i] + "\nendobj\n";
    }
    const auto xref = out.size();
    out += "xref\n0 " + std::to_string(objects_.size() + 1) + "\n0000000000 65535 f \n";
    char line[24];
    for (auto off : offsets) {
      std::snprintf(line, sizeof line, "%010zu 00000 n \n", off);
      out += line;
    }
    out += "trailer\n<< /Size " + std::to_string(objects_.size() + 1) + " /Root " + std::to_string(root) +
           " 0 R >>\nstartxref\n" + std::to_string(xref) + "\n%%EOF\n";
    return to_bytes(out);
  }

 private:
  std::vector<std::string> objects_;
};

std::string ref(int obj) { return std::to_string(obj) + " 0 R"; }

std::string sentence(std::mt19937_64& rng) {
  std::string s;
  const auto n = 4 + uniform_index(rng, 10);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += kWords[uniform_index(rng, kWords.size())];
  }
  return s;
}

std::string text_content(std::mt19937_64& rng, std::size_t lines) {
  std::string s = "BT\n/F1 11 Tf\n72 720 Td\n14 TL\n";
  for (std::size_t i = 0; i < lines; ++i) s += "(" + sentence(rng) + ") '\n";
  return s + "ET";
}

std::string random_bytes(std::mt19937_64& rng, std::size_t n) {
  std::string s(n, '\0');
  for (auto& c : s) c = static_cast<char>(rng() & 0xFF);
  return s;
}

// Hex-escapes one letter after the slash, e.g. /JavaScript -> /J#61vaScript.
std::string maybe_escape(std::mt19937_64& rng, std::string_view tag) {
  std::string t(tag);
  if (t.size() < 3 || uniform_index(rng, 3) != 0) return t;
  const auto pos = 1 + uniform_index(rng, t.size() - 1);
  char esc[4];
  std::snprintf(esc, sizeof esc, "#%02X", static_cast<unsigned char>(t[pos]));
  return t.substr(0, pos) + esc + t.substr(pos + 1);
}

std::string make_report(std::mt19937_64& rng, const std::string& id, bool malware) {
  nlohmann::json calls = nlohmann::json::array();
  auto emit = [&](const Call& c, std::size_t times) {
    for (std::size_t i = 0; i < times; ++i) calls.push_back({{"api", c.api}, {"status", c.status}});
  };
  for (const auto& c : kBenignCalls) emit(c, uniform_index(rng, 4));
  if (malware) {
    for (const auto& c : kMalwareCalls) emit(c, uniform_index(rng, 3) + (uniform_index(rng, 2) ? 1 : 0));
  } else if (uniform_index(rng, 8) == 0) {
    emit(kMalwareCalls[uniform_index(rng, kMalwareCalls.size())], 1);
  }
  nlohmann::json doc;
  doc["target"] = {{"sha256", id}};
  doc["behavior"] = {{"processes", nlohmann::json::array({{{"process_name", "AcroRd32.exe"}, {"calls", calls}}})}};
  return doc.dump(1) + "\n";
}

// Catalog, pages tree and text pages; returns the catalog object.
int text_document(PdfWriter& w, std::mt19937_64& rng, std::size_t pages, std::string catalog_extra,
                  std::string page_extra) {
  const int catalog = w.reserve();
  const int tree = w.reserve();
  const int font = w.add("<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>");
  std::string kids;
  for (std::size_t p = 0; p < pages; ++p) {
    const int content = w.add_stream("", text_content(rng, 6 + uniform_index(rng, 40)));
    const int page = w.add("<< /Type /Page /Parent " + ref(tree) + " /MediaBox [0 0 612 792] /Contents " +
                           ref(content) + " /Resources << /Font << /F1 " + ref(font) + " >> >>" + page_extra + " >>");
    kids += (kids.empty() ? "" : " ") + ref(page);
  }
  w.set(tree, "<< /Type /Pages /Kids [" + kids + "] /Count " + std::to_string(pages) + " >>");
  w.set(catalog, "<< /Type /Catalog /Pages " + ref(tree) + catalog_extra + " >>");
  w.add("<< /Title (" + sentence(rng) + ") /Producer (pdfscope synth) >>");
  return catalog;
}

Bytes benign_pdf(std::mt19937_64& rng) {
  PdfWriter w;
  std::string page_extra;
  if (uniform_index(rng, 4) == 0) {
    // an ordinary hyperlink
    page_extra = " /Annots [<< /Type /Annot /Subtype /Link /Rect [72 700 200 714] /A << /S /URI /URI (https://" +
                 std::string(kWords[uniform_index(rng, kWords.size())]) + ".example.org) >> >>]";
  }
  const int root = text_document(w, rng, 1 + uniform_index(rng, 4), "", page_extra);
  return w.finish(root);
}

std::string javascript(std::mt19937_64& rng) {
  std::string js = "var p = '";
  const auto n = 200 + uniform_index(rng, 1500);
  for (std::size_t i = 0; i < n; ++i) {
    js += "%u" + std::to_string(1000 + uniform_index(rng, 9000));
  }
  return js + "'; var s = unescape(p); app.alert(s.length);";
}

Bytes malware_pdf(std::mt19937_64& rng) {
  PdfWriter w;
  std::string catalog_extra;
  std::string page_extra;

  // at least two risky tags per file
  std::vector<std::string_view> tags(kRisky.begin(), kRisky.end());
  for (std::size_t i = tags.size(); i > 1; --i) std::swap(tags[i - 1], tags[uniform_index(rng, i)]);
  tags.resize(2 + uniform_index(rng, tags.size() - 1));

  const int js = w.add_stream("", javascript(rng));
  for (auto tag : tags) {
    const auto name = maybe_escape(rng, tag);
    if (tag == "/JavaScript" || tag == "/JS") {
      const int action = w.add("<< /Type /Action /S " + maybe_escape(rng, "/JavaScript") + " " +
                               maybe_escape(rng, "/JS") + " " + ref(js) + " >>");
      catalog_extra += " /Names << " + name + " << /Names [(a) " + ref(action) + "] >> >>";
    } else if (tag == "/OpenAction") {
      catalog_extra += " " + name + " << /S /JavaScript /JS " + ref(js) + " >>";
    } else if (tag == "/AA") {
      page_extra += " " + name + " << /O << /S /JavaScript /JS " + ref(js) + " >> >>";
    } else if (tag == "/Launch") {
      w.add("<< /Type /Action /S " + name + " /F (cmd.exe) /Win << /F (cmd.exe) /P (/c start payload.exe) >> >>");
    } else if (tag == "/RichMedia") {
      w.add_stream("/Type " + name + " /Subtype /Flash", random_bytes(rng, 256 + uniform_index(rng, 2048)));
    } else {
      w.add_stream("/Type /XObject /Subtype /Image /Width 64 /Height 64 /BitsPerComponent 1 /Filter " + name,
                   random_bytes(rng, 512 + uniform_index(rng, 2048)));
    }
  }
  if (uniform_index(rng, 2) == 0) {
    const int file = w.add_stream("/Type /EmbeddedFile", random_bytes(rng, 1024 + uniform_index(rng, 8192)));
    catalog_extra += " /EmbeddedFiles << /Names [(x.exe) << /Type /Filespec /F (x.exe) /EF << /F " + ref(file) +
                     " >> >>] >>";
  }
  if (uniform_index(rng, 2) == 0) {
    w.add_stream("/Type /ObjStm /N 3 /First 12 /Filter /FlateDecode", random_bytes(rng, 512 + uniform_index(rng, 4096)));
  }
  // packed payload, always present
  w.add_stream("/Filter /FlateDecode", random_bytes(rng, 2048 + uniform_index(rng, 12288)));
  const int root = text_document(w, rng, 1 + uniform_index(rng, 2), catalog_extra, page_extra);
  return w.finish(root);
}

}  // namespace

SynthSample synth_sample(std::uint64_t seed, std::size_t index, bool malware) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(malware)};
  std::mt19937_64 rng(seq);
  SynthSample s;
  s.label = malware ? ml::kMalware : ml::kBenign;
  s.pdf = malware ? malware_pdf(rng) : benign_pdf(rng);
  s.report = make_report(rng, sha256_hex(s.pdf), malware);
  return s;
}

std::filesystem::path synth_corpus(const std::filesystem::path& out, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw UsageError("synthetic corpus needs at least 2 samples");
  const std::size_t n_benign = n / 2;
  std::ostringstream manifest;
  manifest << "path,label,report_path\n";
  for (std::size_t i = 0; i < n; ++i) {
    const bool malware = i >= n_benign;
    const auto index = malware ? i - n_benign : i;
    const auto sample = synth_sample(seed, index, malware);
    char stem[32];
    std::snprintf(stem, sizeof stem, "%s_%05zu", malware ? "malware" : "benign", index);
    const auto pdf = std::filesystem::path("pdf") / (std::string(stem) + ".pdf");
    const auto report = std::filesystem::path("reports") / (std::string(stem) + ".json");
    write_file(out / pdf, sample.pdf);
    write_file(out / report, to_bytes(sample.report));
    manifest << pdf.generic_string() << ',' << (malware ? "malware" : "benign") << ',' << report.generic_string()
             << '\n';
  }
  const auto path = out / "manifest.csv";
  write_file(path, to_bytes(manifest.str()));
  return path;
}

}  // namespace pdfscope::pipeline
