#include "morphoforge/ngram.hpp"

#include <cmath>

#include "morphoforge/errors.hpp"

namespace morpho {

NgramModel::NgramModel(int vocab_size, int order)
    : vocab_(vocab_size), order_(order) {
  if (vocab_size < 1) throw ArgumentError("ngram: vocab_size must be >= 1");
  if (order < 1) throw ArgumentError("ngram: order must be >= 1");
  tables_.resize(order_);
}

void NgramModel::add_sequence(const std::vector<int>& symbols) {
  std::vector<int> hist(order_ - 1, bos_symbol());
  for (int s : symbols) {
    if (s < 0 || s >= vocab_)
      throw ArgumentError("ngram: symbol " + std::to_string(s) +
                          " out of vocabulary");
    for (int k = 0; k < order_; ++k) {
      std::vector<int> ctx(hist.end() - k, hist.end());
      auto& stats = tables_[k][ctx];
      ++stats.counts[s];
      ++stats.total;
    }
    ++total_events_;
    if (order_ > 1) {
      hist.erase(hist.begin());
      hist.push_back(s);
    }
  }
}

std::vector<int> NgramModel::padded_context(
    const std::vector<int>& context) const {
  const size_t need = static_cast<size_t>(order_ - 1);
  std::vector<int> ctx;
  ctx.reserve(need);
  if (context.size() >= need) {
    ctx.assign(context.end() - need, context.end());
  } else {
    ctx.assign(need - context.size(), bos_symbol());
    ctx.insert(ctx.end(), context.begin(), context.end());
  }
  return ctx;
}

double NgramModel::prob(const std::vector<int>& context, int symbol) const {
  if (symbol < 0 || symbol >= vocab_)
    throw ArgumentError("ngram: symbol out of vocabulary");
  const std::vector<int> full = padded_context(context);
  double p = 1.0 / vocab_;
  for (int k = 0; k < order_; ++k) {
    std::vector<int> ctx(full.end() - k, full.end());
    auto it = tables_[k].find(ctx);
    if (it == tables_[k].end()) continue;
    const auto& stats = it->second;
    const double types = static_cast<double>(stats.counts.size());
    const auto cit = stats.counts.find(symbol);
    const double c = cit == stats.counts.end()
                         ? 0.0
                         : static_cast<double>(cit->second);
    p = (c + types * p) / (static_cast<double>(stats.total) + types);
  }
  return p;
}

double NgramModel::log_prob(const std::vector<int>& context,
                            int symbol) const {
  return std::log(prob(context, symbol));
}

double NgramModel::sequence_log_prob_mean(
    const std::vector<int>& symbols) const {
  if (symbols.empty())
    throw ArgumentError("ngram: cannot score an empty sequence");
  double total = 0.0;
  std::vector<int> hist;
  for (int s : symbols) {
    total += log_prob(hist, s);
    hist.push_back(s);
  }
  return total / static_cast<double>(symbols.size());
}

nlohmann::ordered_json NgramModel::to_json() const {
  nlohmann::ordered_json j;
  j["vocab_size"] = vocab_;
  j["order"] = order_;
  j["total_events"] = total_events_;
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const auto& table : tables_) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& [ctx, stats] : table) {
      nlohmann::ordered_json counts = nlohmann::ordered_json::array();
      for (const auto& [sym, c] : stats.counts)
        counts.push_back({sym, c});
      entries.push_back({{"context", ctx}, {"counts", counts}});
    }
    levels.push_back(entries);
  }
  j["levels"] = std::move(levels);
  return j;
}

NgramModel NgramModel::from_json(const nlohmann::ordered_json& j) {
  NgramModel m(j.at("vocab_size").get<int>(), j.at("order").get<int>());
  m.total_events_ = j.at("total_events").get<long long>();
  const auto& levels = j.at("levels");
  if (static_cast<int>(levels.size()) != m.order_)
    throw ParseError("ngram: level count does not match order");
  for (int k = 0; k < m.order_; ++k) {
    for (const auto& entry : levels[k]) {
      std::vector<int> ctx = entry.at("context").get<std::vector<int>>();
      auto& stats = m.tables_[k][ctx];
      for (const auto& pair : entry.at("counts")) {
        const int sym = pair.at(0).get<int>();
        const long long c = pair.at(1).get<long long>();
        stats.counts[sym] = c;
        stats.total += c;
      }
    }
  }
  return m;
}

}  // namespace morpho
