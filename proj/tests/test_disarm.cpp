#include <random>

#include "doctest.h"
#include "pdfscope/disarm.hpp"
#include "pdfscope/tokenizer.hpp"
#include "support.hpp"

using namespace pdfscope;
using namespace pdfscope::disarm;
using testing::bytes;

namespace {

std::string m1(std::string_view s) { return to_string(disarm_method1(bytes(s)).data); }
std::string m2(std::string_view s) { return to_string(disarm_method2(bytes(s)).data); }

// with_inverted adds spellings such as "/aa" that method 1 swaps back
std::string random_pdfish(std::mt19937_64& rng, bool with_inverted = true) {
  static const std::vector<std::string> pieces = {
      "/AA",  "/OpenAction", "/JS",   "/JavaScript", "/RichMedia", "/Launch", "/JBIG2Decode", "/J#61vaScript",
      "/#4aS", "/JSX",       "/Page", " ",           "\n",         "<<",      ">>",           "(/JS)",
      "obj",  "endobj",      "/aa",   "/O#70enAction", "[",        "]",       "stream\n\xff\x01\nendstream"};
  std::string s;
  for (std::size_t i = 0, n = rng() % 30; i < n; ++i) {
    const auto& p = pieces[rng() % pieces.size()];
    if (!with_inverted && p == "/aa") continue;
    s += p;
  }
  return s;
}

}  // namespace

TEST_SUITE("disarm") {
  TEST_CASE("method 1 examples") {
    CHECK(m1("/AA") == "/aa");
    CHECK(m1("/JavaScript") == "/jAVAsCRIPT");
    CHECK(m1("<</OpenAction 5 0 R>>") == "<</oPENaCTION 5 0 R>>");
    CHECK(m1("/JBIG2Decode") == "/jbig2dECODE");
  }

  TEST_CASE("method 2 examples") {
    CHECK(m2("/AA") == "/aa_disarmed");
    CHECK(m2("/JavaScript") == "/jAVAsCRIPT_disarmed");
    CHECK(m2("<</JS(x)>>") == "<</js_disarmed(x)>>");
  }

  TEST_CASE("files without risky tags are untouched") {
    const std::string s = "%PDF-1.4\n1 0 obj << /Type /Catalog /JSX 1 /Pages 2 0 R >> endobj\n";
    for (auto method : {Method::kInvertCase, Method::kInvertCaseSuffix}) {
      const auto r = disarm::disarm(bytes(s), method);
      CHECK(to_string(r.data) == s);
      CHECK(r.report.replacements.empty());
      CHECK(r.report.input_hash == r.report.output_hash);
    }
  }

  TEST_CASE("escaped letters keep their escape") {
    CHECK(m1("/J#61vaScript") == "/j#41VAsCRIPT");
    CHECK(m1("/#4aS") == "/#6as");
    CHECK(m1("/J#61vaScript") .size() == std::string("/J#61vaScript").size());
  }

  TEST_CASE("inverted spellings") {
    CHECK(m1("/aa /jAVAsCRIPT /Js") == "/AA /JavaScript /Js");
    CHECK(m2("/aa /jAVAsCRIPT") == "/aa /jAVAsCRIPT");
    const auto r = disarm_method1(bytes("/jAVAsCRIPT"));
    REQUIRE(r.report.replacements.size() == 1);
    CHECK(r.report.replacements[0].tag == "/JavaScript");
  }

  TEST_CASE("report records each rewrite") {
    const auto r = disarm_method2(bytes("x /AA y /JS z"));
    REQUIRE(r.report.replacements.size() == 2);
    CHECK(r.report.method == Method::kInvertCaseSuffix);
    CHECK(r.report.replacements[0].tag == "/AA");
    CHECK(r.report.replacements[0].offset == 2);
    CHECK(r.report.replacements[0].original == "/AA");
    CHECK(r.report.replacements[0].replacement == "/aa_disarmed");
    CHECK(r.report.replacements[1].offset == 8);
    const auto text = r.report.to_text("in.pdf");
    CHECK(text.rfind("# method=2 path=in.pdf input=", 0) == 0);
    CHECK(text.find("replacements=2\n") != std::string::npos);
    CHECK(text.find("/JS\t8\t/JS\t/js_disarmed\n") != std::string::npos);
  }

  TEST_CASE("property: method 1 is an involution and keeps length") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 500; ++trial) {
      const auto s = random_pdfish(rng);
      const auto once = disarm_method1(bytes(s));
      CHECK(once.data.size() == s.size());
      CHECK(to_string(disarm_method1(once.data).data) == s);
    }
  }

  TEST_CASE("property: method 2 grows by nine per replacement") {
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 500; ++trial) {
      const auto s = random_pdfish(rng);
      const auto r = disarm_method2(bytes(s));
      CHECK(r.data.size() == s.size() + 9 * r.report.replacements.size());
    }
  }

  TEST_CASE("property: targeted counts drop to zero") {
    std::mt19937_64 rng(63);
    for (int trial = 0; trial < 500; ++trial) {
      const auto s = random_pdfish(rng, false);
      for (auto method : {Method::kInvertCase, Method::kInvertCaseSuffix}) {
        const auto r = disarm::disarm(bytes(s), method);
        const auto counts = tokenizer::count_keywords(tokenizer::normalize_names(r.data));
        for (const auto& tag : target_tags()) CHECK_MESSAGE(counts.at(tag) == 0, s);
        // other tags are left alone
        const auto before = tokenizer::count_keywords(tokenizer::normalize_names(bytes(s)));
        CHECK(counts.at("/Page") == before.at("/Page"));
        CHECK(counts.at("endobj") == before.at("endobj"));
      }
    }
  }

  TEST_CASE("property: report invariants") {
    std::mt19937_64 rng(64);
    for (int trial = 0; trial < 300; ++trial) {
      const auto s = random_pdfish(rng);
      const auto r = disarm_method1(bytes(s));
      const auto& reps = r.report.replacements;
      for (std::size_t i = 1; i < reps.size(); ++i) CHECK(reps[i].offset > reps[i - 1].offset);
      CHECK((r.report.input_hash != r.report.output_hash) == !reps.empty());
      CHECK(r.report.input_hash == sha256_hex(bytes(s)));
      CHECK(r.report.output_hash == sha256_hex(r.data));
    }
  }
}
