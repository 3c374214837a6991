#include "pdfscope/pipeline/cache.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "pdfscope/binary/audio.hpp"
#include "pdfscope/binary/fuzzy_hash.hpp"
#include "pdfscope/binary/gist.hpp"
#include "pdfscope/binary/image.hpp"
#include "pdfscope/tokenizer.hpp"

namespace pdfscope::pipeline {
namespace {

constexpr std::string_view kHeaderTag = "# pdfscope-cache";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

double parse_double(std::string_view s, const std::filesystem::path& file) {
  const std::string text(s);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) throw DataError(file.string() + ": bad value '" + text + "'");
  return v;
}

std::uint64_t parse_count(std::string_view s, const std::filesystem::path& file) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError(file.string() + ": bad count '" + std::string(s) + "'");
  }
  return v;
}

// Reads "key=value" pairs from a header line.
std::map<std::string, std::string> header_fields(std::string_view line) {
  std::map<std::string, std::string> out;
  std::istringstream ss{std::string(line.substr(kHeaderTag.size()))};
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

std::string header_line(FeatureKind kind, std::optional<std::size_t> dims) {
  std::string h = std::string(kHeaderTag) + " kind=" + std::string(kind_name(kind)) +
                  " version=" + featurizer_version(kind);
  if (dims) h += " dims=" + std::to_string(*dims);
  return h + "\n";
}

}  // namespace

FeatureVector compute_static_feature(FeatureKind kind, ByteView data) {
  using namespace binary;
  switch (kind) {
    case FeatureKind::kByteplotGist: return gist(byteplot_image(data), kind);
    case FeatureKind::kBigramDctGist: return gist(bigram_dct_image(data), kind);
    case FeatureKind::kMfcc: return mfcc(byte_signal(data));
    case FeatureKind::kChroma: return chroma(byte_signal(data));
    case FeatureKind::kMelSpectrogram: return melspectrogram(byte_signal(data));
    case FeatureKind::kSsdeep: return hash_feature(ssdeep_digest(data));
    case FeatureKind::kStructural: return tokenizer::structural_feature(data);
    case FeatureKind::kApiCalls:
    case FeatureKind::kFused: break;
  }
  throw UsageError(std::string(kind_name(kind)) + " is not a static byte feature");
}

std::string featurizer_version(FeatureKind kind) { return std::string(kind_name(kind)) + "/1"; }

std::vector<FeatureKind> parse_kinds(std::string_view list) {
  std::vector<FeatureKind> kinds;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto name = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!name.empty()) {
      const auto kind = parse_kind(name);
      if (!kind || *kind == FeatureKind::kFused) throw UsageError("unknown feature kind: " + std::string(name));
      kinds.push_back(*kind);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return kinds;
}

FeatureCache::FeatureCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

FeatureCache FeatureCache::open(const std::filesystem::path& dir) {
  FeatureCache cache(dir);
  if (!std::filesystem::exists(dir)) return cache;
  std::vector<FeatureKind> all = static_kinds();
  all.push_back(FeatureKind::kApiCalls);
  for (FeatureKind kind : all) {
    const auto name = std::string(kind_name(kind));
    for (const bool errors : {false, true}) {
      const auto file = dir / (name + (errors ? ".errors.tsv" : ".tsv"));
      std::ifstream in(file);
      if (!in) continue;
      std::string line;
      if (!std::getline(in, line) || line.rfind(kHeaderTag, 0) != 0) {
        throw DataError(file.string() + ": missing cache header");
      }
      auto fields = header_fields(line);
      if (fields["kind"] != name) throw DataError(file.string() + ": header names kind " + fields["kind"]);
      if (fields["version"] != featurizer_version(kind)) continue;  // stale: recompute everything
      const auto dims = kind_dims(kind);
      auto& store = cache.stores_[kind];
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split_tabs(line);
        const std::string hash(cols[0]);
        if (errors) {
          store.errors[hash] = cols.size() > 1 ? std::string(cols[1]) : std::string{};
        } else if (kind == FeatureKind::kApiCalls) {
          dynamic::CallCounts counts;
          for (std::size_t i = 1; i < cols.size(); ++i) {
            const auto p1 = cols[i].rfind('|');
            const auto p0 = p1 == std::string_view::npos ? p1 : cols[i].rfind('|', p1 - 1);
            if (p0 == std::string_view::npos) throw DataError(file.string() + ": bad call entry");
            dynamic::ApiCall call{std::string(cols[i].substr(0, p0)),
                                  static_cast<int>(parse_count(cols[i].substr(p0 + 1, p1 - p0 - 1), file))};
            counts[call] = parse_count(cols[i].substr(p1 + 1), file);
          }
          store.calls[hash] = std::move(counts);
        } else {
          if (dims && cols.size() != *dims + 1) throw DataError(file.string() + ": row with wrong dimension");
          std::vector<double> values;
          values.reserve(cols.size() - 1);
          for (std::size_t i = 1; i < cols.size(); ++i) values.push_back(parse_double(cols[i], file));
          store.dense[hash] = std::move(values);
        }
      }
    }
  }
  return cache;
}

void FeatureCache::save() const {
  if (dir_.empty()) throw UsageError("feature cache has no directory");
  std::filesystem::create_directories(dir_);
  for (const auto& [kind, store] : stores_) {
    const auto name = std::string(kind_name(kind));
    std::string body = header_line(kind, kind_dims(kind));
    if (kind == FeatureKind::kApiCalls) {
      for (const auto& [hash, counts] : store.calls) {
        body += hash;
        for (const auto& [call, n] : counts) {
          body += "\t" + call.api + "|" + std::to_string(call.status) + "|" + std::to_string(n);
        }
        body += "\n";
      }
    } else {
      for (const auto& [hash, values] : store.dense) {
        body += hash;
        for (double v : values) body += "\t" + format_double(v);
        body += "\n";
      }
    }
    write_file(dir_ / (name + ".tsv"), body);

    const auto errors_file = dir_ / (name + ".errors.tsv");
    if (store.errors.empty()) {
      std::filesystem::remove(errors_file);
      continue;
    }
    std::string errors = header_line(kind, std::nullopt);
    for (const auto& [hash, message] : store.errors) {
      std::string clean = message;
      for (char& c : clean) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
      }
      errors += hash + "\t" + clean + "\n";
    }
    write_file(errors_file, errors);
  }
}

bool FeatureCache::has(const std::string& hash, FeatureKind kind) const {
  auto it = stores_.find(kind);
  if (it == stores_.end()) return false;
  const auto& s = it->second;
  return s.dense.count(hash) || s.calls.count(hash);
}

bool FeatureCache::known(const std::string& hash, FeatureKind kind) const {
  auto it = stores_.find(kind);
  return it != stores_.end() && (has(hash, kind) || it->second.errors.count(hash));
}

const std::vector<double>* FeatureCache::dense(const std::string& hash, FeatureKind kind) const {
  auto it = stores_.find(kind);
  if (it == stores_.end()) return nullptr;
  auto v = it->second.dense.find(hash);
  return v == it->second.dense.end() ? nullptr : &v->second;
}

const dynamic::CallCounts* FeatureCache::calls(const std::string& hash) const {
  auto it = stores_.find(FeatureKind::kApiCalls);
  if (it == stores_.end()) return nullptr;
  auto v = it->second.calls.find(hash);
  return v == it->second.calls.end() ? nullptr : &v->second;
}

const std::string* FeatureCache::error(const std::string& hash, FeatureKind kind) const {
  auto it = stores_.find(kind);
  if (it == stores_.end()) return nullptr;
  auto v = it->second.errors.find(hash);
  return v == it->second.errors.end() ? nullptr : &v->second;
}

void FeatureCache::put(const std::string& hash, FeatureKind kind, std::vector<double> values) {
  if (kind == FeatureKind::kApiCalls || kind == FeatureKind::kFused) {
    throw UsageError("dense cache entries are for static kinds only");
  }
  check_feature(FeatureVector{kind, values});
  auto& s = stores_[kind];
  s.errors.erase(hash);
  s.dense[hash] = std::move(values);
}

void FeatureCache::put_calls(const std::string& hash, dynamic::CallCounts counts) {
  for (const auto& [call, n] : counts) {
    if (call.api.empty() || call.api.find_first_of("\t\n|") != std::string::npos) {
      throw UsageError("API name not representable in the cache: " + call.api);
    }
  }
  auto& s = stores_[FeatureKind::kApiCalls];
  s.errors.erase(hash);
  s.calls[hash] = std::move(counts);
}

void FeatureCache::put_error(const std::string& hash, FeatureKind kind, std::string message) {
  auto& s = stores_[kind];
  s.dense.erase(hash);
  s.calls.erase(hash);
  s.errors[hash] = std::move(message);
}

std::vector<FeatureKind> FeatureCache::kinds() const {
  std::vector<FeatureKind> out;
  for (const auto& [kind, _] : stores_) out.push_back(kind);
  return out;
}

std::size_t FeatureCache::size(FeatureKind kind) const {
  auto it = stores_.find(kind);
  if (it == stores_.end()) return 0;
  return it->second.dense.size() + it->second.calls.size();
}

FeaturizeStats featurize_all(const DatasetManifest& manifest, std::span<const FeatureKind> kinds,
                             FeatureCache& cache, unsigned threads) {
  struct Outcome {
    FeatureKind kind;
    std::optional<std::vector<double>> dense;
    std::optional<dynamic::CallCounts> calls;
    std::string error;
  };
  FeaturizeStats stats;
  std::vector<std::vector<FeatureKind>> todo(manifest.rows.size());
  for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
    for (FeatureKind kind : kinds) {
      if (kind == FeatureKind::kFused) throw UsageError("fused is assembled at experiment time, not cached");
      if (cache.known(manifest.rows[i].hash, kind)) {
        ++stats.reused;
      } else if (std::find(todo[i].begin(), todo[i].end(), kind) == todo[i].end()) {
        todo[i].push_back(kind);
      }
    }
  }

  std::vector<std::vector<Outcome>> results(manifest.rows.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < manifest.rows.size(); i = next++) {
      if (todo[i].empty()) continue;
      try {
        const auto& row = manifest.rows[i];
        std::optional<Bytes> bytes;
        std::string read_error;
        try {
          bytes = read_file(row.path);
        } catch (const DataError& e) {
          read_error = e.what();
        }
        for (FeatureKind kind : todo[i]) {
          Outcome out{kind, {}, {}, {}};
          try {
            if (kind == FeatureKind::kApiCalls) {
              if (!row.report_path) throw DataError("no report_path for this sample");
              out.calls = dynamic::count_calls(dynamic::parse_report(load_stream(*row.report_path)));
            } else {
              if (!bytes) throw DataError(read_error);
              out.dense = compute_static_feature(kind, *bytes).values;
            }
          } catch (const DataError& e) {
            out.error = e.what();
          }
          results[i].push_back(std::move(out));
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& hash = manifest.rows[i].hash;
    for (auto& out : results[i]) {
      if (out.dense) {
        cache.put(hash, out.kind, std::move(*out.dense));
        ++stats.computed;
      } else if (out.calls) {
        cache.put_calls(hash, std::move(*out.calls));
        ++stats.computed;
      } else {
        cache.put_error(hash, out.kind, out.error);
        ++stats.failed;
        stats.messages.push_back(manifest.rows[i].path.string() + " [" + std::string(kind_name(out.kind)) +
                                 "]: " + out.error);
      }
    }
  }
  return stats;
}

}  // namespace pdfscope::pipeline
