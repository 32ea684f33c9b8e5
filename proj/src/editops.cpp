#include "morphoforge/editops.hpp"

#include <algorithm>

#include "morphoforge/errors.hpp"

namespace morpho::editops {

std::string labels_to_string(const LabelSeq& labels) {
  std::string out;
  out.reserve(labels.size());
  for (Label l : labels) out.push_back(l == Label::Copy ? 'C' : 'D');
  return out;
}

LabelSeq labels_from_string(std::string_view s) {
  LabelSeq out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == 'C')
      out.push_back(Label::Copy);
    else if (c == 'D')
      out.push_back(Label::Delete);
    else
      throw ArgumentError(std::string("invalid label character: '") + c + "'");
  }
  return out;
}

int levenshtein(std::string_view a, std::string_view b) {
  const size_t n = a.size(), m = b.size();
  if (n == 0) return static_cast<int>(m);
  if (m == 0) return static_cast<int>(n);
  std::vector<int> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::optional<LabelSeq> try_encode_labels(std::string_view joined,
                                          std::string_view blend) {
  // Greedy leftmost matching. For subsequence embedding the greedy scan
  // succeeds iff any embedding exists, and it is exactly the
  // prefer-Copy-at-ties backtrace the canonical encoding asks for.
  LabelSeq labels(joined.size(), Label::Delete);
  size_t j = 0;
  for (size_t i = 0; i < joined.size(); ++i) {
    if (j < blend.size() && joined[i] == blend[j]) {
      labels[i] = Label::Copy;
      ++j;
    }
  }
  if (j != blend.size()) return std::nullopt;
  return labels;
}

LabelSeq encode_labels(std::string_view joined, std::string_view blend) {
  if (blend.empty()) throw ArgumentError("encode_labels: empty blend");
  if (blend.find('#') != std::string_view::npos)
    throw ArgumentError("encode_labels: blend contains separator '#'");
  auto labels = try_encode_labels(joined, blend);
  if (!labels)
    throw NotDerivableError("blend '" + std::string(blend) +
                            "' is not derivable from '" + std::string(joined) +
                            "' by copy/delete");
  return *labels;
}

std::string apply_labels(std::string_view joined, const LabelSeq& labels) {
  if (labels.size() != joined.size())
    throw ArgumentError("apply_labels: label count " +
                        std::to_string(labels.size()) +
                        " does not match input length " +
                        std::to_string(joined.size()));
  std::string out;
  out.reserve(joined.size());
  for (size_t i = 0; i < joined.size(); ++i)
    if (labels[i] == Label::Copy) out.push_back(joined[i]);
  return out;
}

}  // namespace morpho::editops
