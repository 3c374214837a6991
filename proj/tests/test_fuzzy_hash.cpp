#include <random>

#include "doctest.h"
#include "oracles/spamsum.hpp"
#include "pdfscope/binary/fuzzy_hash.hpp"
#include "support.hpp"

using namespace pdfscope;
using namespace pdfscope::binary;

namespace {

std::string digest(const Bytes& b) { return ssdeep_digest(b).to_string(); }

// Low-entropy inputs push the digest to its length caps and exercise the
// block-size retry path.
Bytes patterned(std::mt19937_64& rng, std::size_t n) {
  Bytes b(n);
  const auto period = 1 + rng() % 300;
  for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>((i % period) * 7 + (rng() % 50 == 0 ? rng() : 0));
  return b;
}

}  // namespace

TEST_SUITE("fuzzy_hash") {
  TEST_CASE("empty input") {
    CHECK(digest({}) == "3::");
    CHECK(oracle::spamsum({}) == "3::");
  }

  TEST_CASE("fixed small inputs match the reference") {
    for (const std::string& s : std::vector<std::string>{"a", "abc", "hello world", "The quick brown fox jumps over the lazy dog",
                          std::string(1000, 'x'), std::string(5000, '\0')}) {
      const auto b = testing::bytes(s);
      CHECK_MESSAGE(digest(b) == oracle::spamsum(b), s.size());
    }
  }

  TEST_CASE("random inputs match the reference") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 60; ++i) {
      const std::size_t n = rng() % 70000;
      const auto b = (i % 2) ? testing::random_bytes(rng, n) : patterned(rng, n);
      CHECK_MESSAGE(digest(b) == oracle::spamsum(b), "length " << n);
    }
  }

  TEST_CASE("block size boundaries") {
    std::mt19937_64 rng(42);
    for (std::size_t n : {191u, 192u, 193u, 384u, 385u, 768u, 769u, 1536u, 1537u, 12288u, 12289u, 49152u}) {
      const auto b = testing::random_bytes(rng, n);
      CHECK_MESSAGE(digest(b) == oracle::spamsum(b), "length " << n);
    }
  }

  TEST_CASE("property: shape of every digest") {
    std::mt19937_64 rng(43);
    const std::string alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    for (int i = 0; i < 40; ++i) {
      const auto h = ssdeep_digest(testing::random_bytes(rng, rng() % 40000));
      CHECK(h.digest1.size() <= 64);
      CHECK(h.digest2.size() <= 32);
      CHECK(h.block_size % 3 == 0);
      const auto q = h.block_size / 3;
      CHECK((q & (q - 1)) == 0);
      for (char c : h.digest1 + h.digest2) CHECK(alphabet.find(c) != std::string::npos);
    }
  }

  TEST_CASE("appending one byte keeps a long common prefix") {
    std::mt19937_64 rng(44);
    auto a = testing::random_bytes(rng, 10240);
    auto b = a;
    b.push_back(0x42);
    const auto ha = ssdeep_digest(a);
    const auto hb = ssdeep_digest(b);
    CHECK(digest(a) == oracle::spamsum(a));
    CHECK(digest(b) == oracle::spamsum(b));
    REQUIRE(ha.block_size == hb.block_size);
    std::size_t common = 0;
    while (common < std::min(ha.digest1.size(), hb.digest1.size()) && ha.digest1[common] == hb.digest1[common])
      ++common;
    CHECK(common + 1 >= ha.digest1.size());
    CHECK(common >= 20);
  }

  TEST_CASE("hash feature") {
    const auto f = hash_feature(FuzzyHash{3, "", ""});
    CHECK(f.kind == FeatureKind::kSsdeep);
    REQUIRE(f.size() == 40);
    CHECK(f.values[0] == 51);
    CHECK(f.values[1] == 58);
    CHECK(f.values[2] == 58);
    for (std::size_t i = 3; i < 40; ++i) CHECK(f.values[i] == 0);

    const FuzzyHash longer{96, std::string(40, 'A'), std::string(16, 'b')};
    const auto s = longer.to_string();
    REQUIRE(s.size() == 60);
    const auto g = hash_feature(longer);
    CHECK(g.size() == 40);
    for (std::size_t i = 0; i < 40; ++i) CHECK(g.values[i] == static_cast<unsigned char>(s[i]));
  }
}
