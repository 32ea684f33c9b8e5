// Copy/delete label sequences over C1#C2 and plain edit distance.

#ifndef MORPHOFORGE_EDITOPS_HPP
#define MORPHOFORGE_EDITOPS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace morpho::editops {

enum class Label : std::uint8_t { Copy, Delete };

using LabelSeq = std::vector<Label>;

// "CCCDDDCCCCCCC" style rendering used in logs and the CLI.
std::string labels_to_string(const LabelSeq& labels);
LabelSeq labels_from_string(std::string_view s);  // throws ArgumentError

// Unit-cost insert/delete/substitute distance.
int levenshtein(std::string_view a, std::string_view b);

// Canonical encoding of a blend against its joined components: leftmost
// match, preferring Copy at ties while scanning left to right. Returns
// nullopt when the blend is not a copy-subsequence of joined.
std::optional<LabelSeq> try_encode_labels(std::string_view joined,
                                          std::string_view blend);

// Throwing variant; NotDerivableError when no copy/delete encoding exists.
LabelSeq encode_labels(std::string_view joined, std::string_view blend);

// Concatenation of the characters labeled Copy, in order.
std::string apply_labels(std::string_view joined, const LabelSeq& labels);

}  // namespace morpho::editops

#endif
