#include "test_support.hpp"

namespace testsupport {

using namespace morpho::phon;

const std::string& lexicon_path() {
  static const std::string path =
      std::string(MORPHOFORGE_TEST_DATA_DIR) + "/lexicon/morpho_lexicon.dict";
  return path;
}

const PronLexicon& lexicon() {
  static const PronLexicon lex = PronLexicon::load(lexicon_path());
  return lex;
}

const Phonologizer& phonologizer() {
  static const Phonologizer phonologizer = [] {
    TransducerConfig config;
    config.seed = 7;
    return Phonologizer(lexicon(),
                        Transducer::train(lexicon(), Direction::G2P, config),
                        Transducer::train(lexicon(), Direction::P2G, config));
  }();
  return phonologizer;
}

}  // namespace testsupport
