#include "pdfscope/dynamic.hpp"

#include <algorithm>
#include <charconv>

#include "json.hpp"

namespace pdfscope::dynamic {

using nlohmann::json;

ApiReport parse_report(const ByteStream& file) {
  ApiReport report;
  report.sample_id = sha256_hex(file.view());
  json doc;
  try {
    doc = json::parse(file.data.begin(), file.data.end());
  } catch (const json::parse_error& e) {
    throw DataError(file.path + ": unparseable report at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw DataError(file.path + ": report root must be an object");
  auto behavior = doc.find("behavior");
  if (behavior == doc.end() || behavior->is_null()) return report;
  if (!behavior->is_object()) throw DataError(file.path + ": /behavior must be an object");
  auto processes = behavior->find("processes");
  if (processes == behavior->end() || processes->is_null()) return report;
  if (!processes->is_array()) throw DataError(file.path + ": /behavior/processes must be an array");

  for (std::size_t p = 0; p < processes->size(); ++p) {
    const auto& proc = (*processes)[p];
    const std::string where = "/behavior/processes/" + std::to_string(p);
    if (!proc.is_object()) throw DataError(file.path + ": " + where + " must be an object");
    auto calls = proc.find("calls");
    if (calls == proc.end() || calls->is_null()) continue;
    if (!calls->is_array()) throw DataError(file.path + ": " + where + "/calls must be an array");
    for (std::size_t c = 0; c < calls->size(); ++c) {
      const auto& call = (*calls)[c];
      const std::string at = file.path + ": " + where + "/calls/" + std::to_string(c);
      if (!call.is_object()) throw DataError(at + " must be an object");
      auto api = call.find("api");
      auto status = call.find("status");
      if (api == call.end() || !api->is_string() || api->get_ref<const std::string&>().empty()) {
        throw DataError(at + ": missing or empty string field \"api\"");
      }
      if (status == call.end() || !status->is_number_integer()) {
        throw DataError(at + ": missing integer field \"status\"");
      }
      const auto value = status->get<std::int64_t>();
      if (value != 0 && value != 1) throw DataError(at + ": status must be 0 or 1");
      report.calls.push_back({api->get<std::string>(), static_cast<int>(value)});
    }
  }
  return report;
}

CallCounts count_calls(const ApiReport& report) {
  CallCounts counts;
  for (const auto& call : report.calls) ++counts[call];
  return counts;
}

ApiVocabulary::ApiVocabulary(std::vector<VocabEntry> entries) : entries_(std::move(entries)) {
  std::string listing;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& call = entries_[i].call;
    if (call.api.empty() || (call.status != 0 && call.status != 1)) {
      throw UsageError("vocabulary entry must have a name and a 0/1 status");
    }
    if (!index_.emplace(call, i).second) {
      throw UsageError("duplicate vocabulary entry " + call.api + "/" + std::to_string(call.status));
    }
    listing += call.api + "\t" + std::to_string(call.status) + "\n";
  }
  version_ = sha256_hex(listing);
}

std::optional<std::size_t> ApiVocabulary::index_of(const ApiCall& call) const {
  auto it = index_.find(call);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string ApiVocabulary::to_text() const {
  std::string out;
  for (const auto& e : entries_) {
    out += e.call.api + "\t" + std::to_string(e.call.status) + "\t" + std::to_string(e.count) + "\n";
  }
  return out;
}

ApiVocabulary ApiVocabulary::from_text(std::string_view text) {
  std::vector<VocabEntry> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) throw DataError("vocabulary line " + std::to_string(line_no) + ": expected 3 fields");
    VocabEntry e;
    e.call.api = std::string(line.substr(0, t1));
    auto status = line.substr(t1 + 1, t2 - t1 - 1);
    auto count = line.substr(t2 + 1);
    auto r1 = std::from_chars(status.data(), status.data() + status.size(), e.call.status);
    auto r2 = std::from_chars(count.data(), count.data() + count.size(), e.count);
    if (r1.ec != std::errc{} || r1.ptr != status.data() + status.size() || r2.ec != std::errc{} ||
        r2.ptr != count.data() + count.size()) {
      throw DataError("vocabulary line " + std::to_string(line_no) + ": bad number");
    }
    entries.push_back(std::move(e));
  }
  try {
    return ApiVocabulary(std::move(entries));
  } catch (const UsageError& e) {
    throw DataError(std::string("vocabulary: ") + e.what());
  }
}

ApiVocabulary build_api_vocabulary(std::span<const CallCounts> corpus, std::optional<std::size_t> max_entries) {
  if (corpus.empty()) throw DataError("cannot fit an API vocabulary on an empty corpus");
  CallCounts total;
  for (const auto& counts : corpus) {
    for (const auto& [call, n] : counts) total[call] += n;
  }
  std::vector<VocabEntry> entries;
  entries.reserve(total.size());
  for (const auto& [call, n] : total) entries.push_back({call, n});
  // total is already ordered by (api, status); stable sort keeps that as the tie-break.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const VocabEntry& a, const VocabEntry& b) { return a.count > b.count; });
  if (max_entries && entries.size() > *max_entries) entries.resize(*max_entries);
  return ApiVocabulary(std::move(entries));
}

ApiVocabulary build_api_vocabulary(std::span<const ApiReport> reports, std::optional<std::size_t> max_entries) {
  std::vector<CallCounts> corpus;
  corpus.reserve(reports.size());
  for (const auto& r : reports) corpus.push_back(count_calls(r));
  return build_api_vocabulary(corpus, max_entries);
}

FeatureVector api_call_feature(const CallCounts& counts, const ApiVocabulary& vocab) {
  FeatureVector v{FeatureKind::kApiCalls, std::vector<double>(vocab.size(), 0.0)};
  for (const auto& [call, n] : counts) {
    if (auto i = vocab.index_of(call)) v.values[*i] += static_cast<double>(n);
  }
  return v;
}

FeatureVector api_call_feature(const ApiReport& report, const ApiVocabulary& vocab) {
  return api_call_feature(count_calls(report), vocab);
}

}  // namespace pdfscope::dynamic
