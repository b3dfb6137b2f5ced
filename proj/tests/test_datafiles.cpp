#include <doctest.h>

#include <filesystem>

#include "adgen/pipeline.hpp"
#include "adgen/style.hpp"

// The shipped data files must stay in sync with the compiled-in defaults.
TEST_SUITE("datafiles") {

TEST_CASE("data/lexicon.txt matches the default lexicon") {
  const auto path = std::filesystem::path(ADGEN_SOURCE_DIR) / "data/lexicon.txt";
  const auto lex = adgen::style::load_lexicon(path);
  const auto& def = adgen::style::default_lexicon();
  CHECK(lex.exaggeration_markers == def.exaggeration_markers);
  CHECK(lex.metaphor_markers == def.metaphor_markers);
  CHECK(lex.indirectness_markers == def.indirectness_markers);
}

TEST_CASE("data/templates.txt matches the default template set") {
  const auto path =
      std::filesystem::path(ADGEN_SOURCE_DIR) / "data/templates.txt";
  const auto templates = adgen::pipeline::TemplateSet::load(path);
  const auto& def = adgen::pipeline::TemplateSet::defaults();
  for (const auto& s : adgen::style::all_styles())
    CHECK(templates.for_style(s) == def.for_style(s));
}

TEST_CASE("data/stopwords.txt matches the default stop tokens") {
  const auto path =
      std::filesystem::path(ADGEN_SOURCE_DIR) / "data/stopwords.txt";
  CHECK(adgen::pipeline::load_stop_tokens(path) ==
        adgen::pipeline::default_stop_tokens());
}

}  // TEST_SUITE
