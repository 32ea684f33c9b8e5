#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "morphoforge/clippings.hpp"
#include "morphoforge/corpus.hpp"
#include "morphoforge/editops.hpp"
#include "morphoforge/errors.hpp"
#include "morphoforge/phonology.hpp"
#include "morphoforge/rankers.hpp"
#include "morphoforge/redup.hpp"
#include "morphoforge/transducer.hpp"
#include "morphoforge/util.hpp"

namespace py = pybind11;
using namespace morpho;

namespace {

nlohmann::ordered_json read_model_json(const std::string& path) {
  return nlohmann::ordered_json::parse(read_file(path));
}

phon::Phonologizer make_phonologizer(const std::string& lexicon_path,
                                     std::uint64_t seed) {
  auto lexicon = phon::PronLexicon::load(lexicon_path);
  phon::TransducerConfig config;
  config.seed = seed;
  auto g2p = phon::Transducer::train(lexicon, phon::Direction::G2P, config);
  auto p2g = phon::Transducer::train(lexicon, phon::Direction::P2G, config);
  return phon::Phonologizer(std::move(lexicon), std::move(g2p),
                            std::move(p2g));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generative models of blends, clippings, and reduplicatives";

  py::register_exception<Error>(m, "MorphoforgeError");

  m.def("encode_labels",
        [](const std::string& joined, const std::string& blend) {
          return editops::labels_to_string(
              editops::encode_labels(joined, blend));
        },
        py::arg("joined"), py::arg("blend"),
        "Copy/delete labels that derive blend from joined, as a C/D string");
  m.def("apply_labels",
        [](const std::string& joined, const std::string& labels) {
          return editops::apply_labels(joined,
                                       editops::labels_from_string(labels));
        },
        py::arg("joined"), py::arg("labels"));
  m.def("levenshtein",
        [](const std::string& a, const std::string& b) {
          return editops::levenshtein(a, b);
        },
        py::arg("a"), py::arg("b"));

  py::class_<phon::Phonologizer>(m, "Phonologizer")
      .def(py::init(&make_phonologizer), py::arg("lexicon_path"),
           py::arg("seed") = 7)
      .def("pronounce",
           [](const phon::Phonologizer& p, const std::string& word) {
             return phon::phoneme_seq_to_string(p.pronounce(word));
           },
           py::arg("word"))
      .def("spell",
           [](const phon::Phonologizer& p, const std::string& phonemes) {
             return p.spell(phon::parse_phoneme_seq(phonemes));
           },
           py::arg("phonemes"))
      .def("mir", &phon::Phonologizer::mir, py::arg("a"), py::arg("b"))
      .def("syllables",
           [](const phon::Phonologizer& p, const std::string& word) {
             return phon::syllable_count(p.pronounce(word));
           },
           py::arg("word"));

  py::class_<rankers::BlendBundle>(m, "BlendBundle")
      .def_static("load",
                  [](const std::string& path) {
                    return rankers::BlendBundle::from_json(
                        read_model_json(path));
                  },
                  py::arg("path"))
      .def("predict",
           [](const rankers::BlendBundle& b, const std::string& joined,
              const std::string& mode, int k) {
             return rankers::predict_blend(b.members, &b.lm, &b.length,
                                           joined, rankers::mode_from_name(mode),
                                           k);
           },
           py::arg("joined"), py::arg("mode") = "lstm+lm+len",
           py::arg("k") = 5)
      .def("candidates",
           [](const rankers::BlendBundle& b, const std::string& joined,
              const std::string& mode, int k) {
             std::vector<std::pair<std::string, double>> out;
             for (const auto& c : rankers::score_candidates(
                      b.members, &b.lm, &b.length, joined,
                      rankers::mode_from_name(mode), k))
               out.emplace_back(c.blend, c.combined);
             return out;
           },
           py::arg("joined"), py::arg("mode") = "lstm+lm+len",
           py::arg("k") = 5);

  py::class_<clippings::ClipModel>(m, "ClipModel")
      .def_static("load",
                  [](const std::string& path) {
                    return clippings::ClipModel::from_json(
                        read_model_json(path));
                  },
                  py::arg("path"))
      .def_static("fit",
                  [](const std::string& data_tsv,
                     const phon::Phonologizer& phonologizer) {
                    return clippings::fit_clip_model(
                        corpus::load_clippings(data_tsv), phonologizer);
                  },
                  py::arg("data_tsv"), py::arg("phonologizer"))
      .def("predict",
           [](const clippings::ClipModel& model,
              const phon::Phonologizer& phonologizer, const std::string& word,
              const std::string& mode, std::optional<std::string> gold,
              std::uint64_t seed) {
             return clippings::predict_clipping(
                 model, phonologizer, word,
                 clippings::clip_mode_from_name(mode), gold, seed);
           },
           py::arg("phonologizer"), py::arg("word"),
           py::arg("mode") = "Phone", py::arg("gold") = std::nullopt,
           py::arg("seed") = 0);

  py::class_<redup::RedupModel>(m, "RedupModel")
      .def_static("load",
                  [](const std::string& path) {
                    return redup::RedupModel::from_json(read_model_json(path));
                  },
                  py::arg("path"))
      .def_static("fit",
                  [](const std::string& data_tsv) {
                    return redup::fit_redup_model(
                        corpus::load_redups(data_tsv));
                  },
                  py::arg("data_tsv"))
      .def("generate",
           [](const redup::RedupModel& model, const std::string& base,
              bool allow_dup, const std::string& mode, std::uint64_t seed) {
             auto out = redup::generate_redup(
                 model, base, allow_dup, redup::redup_mode_from_name(mode),
                 seed);
             return std::make_pair(out.word, redup::redup_type_name(out.type));
           },
           py::arg("base"), py::arg("allow_dup") = true,
           py::arg("mode") = "Model", py::arg("seed") = 0);
}
