#include "pdfscope/binary/fuzzy_hash.hpp"

#include <array>
#include <optional>
#include <vector>

namespace pdfscope::binary {
namespace {

constexpr std::uint32_t kHashPrime = 0x01000193;
constexpr std::uint32_t kHashInit = 0x28021967;
constexpr std::size_t kWindow = 7;
constexpr char kBase64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
constexpr std::size_t kFeatureDims = 40;

class RollingHash {
 public:
  std::uint32_t update(std::uint8_t c) {
    h2_ -= h1_;
    h2_ += static_cast<std::uint32_t>(kWindow) * c;
    h1_ += c;
    h1_ -= window_[n_ % kWindow];
    window_[n_ % kWindow] = c;
    ++n_;
    h3_ = (h3_ << 5) ^ c;
    return h1_ + h2_ + h3_;
  }

 private:
  std::array<std::uint8_t, kWindow> window_{};
  std::uint32_t h1_ = 0, h2_ = 0, h3_ = 0;
  std::uint32_t n_ = 0;
};

// Digest under construction for one trigger modulus. Once `capacity - 1`
// characters are committed the last slot keeps absorbing input, so the
// tail of the data folds into the final character.
class PieceDigest {
 public:
  PieceDigest(std::uint32_t modulus, std::size_t capacity) : modulus_(modulus), capacity_(capacity) {}

  void update(std::uint8_t c, std::uint32_t roll) {
    sum_ = (sum_ * kHashPrime) ^ c;
    if (roll % modulus_ != modulus_ - 1) return;
    tail_ = kBase64[sum_ % 64];
    if (committed_.size() < capacity_ - 1) {
      committed_.push_back(*tail_);
      tail_.reset();
      sum_ = kHashInit;
    }
  }

  std::size_t committed() const { return committed_.size(); }

  std::string finish(bool pending_piece) const {
    std::string out = committed_;
    if (pending_piece) {
      out.push_back(kBase64[sum_ % 64]);
    } else if (tail_) {
      out.push_back(*tail_);
    }
    return out;
  }

 private:
  std::uint32_t modulus_;
  std::size_t capacity_;
  std::uint32_t sum_ = kHashInit;
  std::string committed_;
  std::optional<char> tail_;
};

}  // namespace

std::string FuzzyHash::to_string() const {
  return std::to_string(block_size) + ":" + digest1 + ":" + digest2;
}

FuzzyHash ssdeep_digest(ByteView data) {
  std::size_t top = 0;
  while ((static_cast<std::uint64_t>(kMinBlockSize) << top) * kSpamsumLength < data.size()) ++top;

  struct Level {
    std::uint32_t block_size;
    PieceDigest full;
    PieceDigest half;
  };
  std::vector<Level> levels;
  for (std::size_t i = 0; i <= top; ++i) {
    const std::uint32_t bs = kMinBlockSize << i;
    levels.push_back({bs, PieceDigest(bs, kSpamsumLength), PieceDigest(bs * 2, kSpamsumLength / 2)});
  }

  RollingHash roller;
  std::uint32_t roll = 0;
  for (std::uint8_t c : data) {
    roll = roller.update(c);
    for (auto& level : levels) {
      level.full.update(c, roll);
      level.half.update(c, roll);
    }
  }

  std::size_t chosen = top;
  while (chosen > 0 && levels[chosen].full.committed() < kSpamsumLength / 2) --chosen;
  const auto& level = levels[chosen];
  const bool pending = roll != 0;
  return FuzzyHash{level.block_size, level.full.finish(pending), level.half.finish(pending)};
}

FeatureVector hash_feature(const FuzzyHash& hash) {
  const std::string text = hash.to_string();
  FeatureVector v{FeatureKind::kSsdeep, std::vector<double>(kFeatureDims, 0.0)};
  for (std::size_t i = 0; i < text.size() && i < kFeatureDims; ++i) {
    v.values[i] = static_cast<double>(static_cast<unsigned char>(text[i]));
  }
  return v;
}

}  // namespace pdfscope::binary
