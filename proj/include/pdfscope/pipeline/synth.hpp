#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "pdfscope/bytes.hpp"

namespace pdfscope::pipeline {

/// Seeded synthetic corpus. Benign-like files hold text objects only;
/// malware-like files carry risky tags (some hex-escaped), embedded files,
/// object streams and high-entropy stream data. Each sample gets a matching
/// sandbox report.
struct SynthSample {
  Bytes pdf;
  std::string report;  // JSON
  int label = 0;
};

/// index-th benign or malware sample for `seed`. Depends only on its
/// arguments, so corpora of different sizes share their leading files.
SynthSample synth_sample(std::uint64_t seed, std::size_t index, bool malware);

/// Writes pdf/, reports/ and manifest.csv (path,label,report_path) under
/// `out`: floor(n/2) benign and the rest malware. Returns the manifest path.
std::filesystem::path synth_corpus(const std::filesystem::path& out, std::size_t n, std::uint64_t seed);

}  // namespace pdfscope::pipeline
