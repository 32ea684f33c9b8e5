#include "morphoforge/redup.hpp"

#include <algorithm>
#include <string>

#include "morphoforge/errors.hpp"
#include "morphoforge/util.hpp"

namespace morpho::redup {

namespace {

constexpr const char* kVowels = "aeiou";
constexpr const char* kConsonants = "bcdfghjklmnpqrstvwxyz";

std::size_t first_of_class(const std::string& s, bool vowel) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (is_redup_vowel(s[i]) == vowel) return i;
  return std::string::npos;
}

char sample_replacement(const std::map<char, double>& dist,
                        std::mt19937_64& rng) {
  double u = uniform_real01(rng);
  double acc = 0.0;
  for (const auto& [c, p] : dist) {
    acc += p;
    if (u < acc) return c;
  }
  return dist.rbegin()->first;
}

// Uniform letter of the same class, excluding `orig`.
char uniform_class_replacement(char orig, std::mt19937_64& rng) {
  std::string pool = is_redup_vowel(orig) ? kVowels : kConsonants;
  pool.erase(std::remove(pool.begin(), pool.end(), orig), pool.end());
  return pool[uniform_below(rng, pool.size())];
}

std::string validated_base(const std::string& base) {
  std::string b = lowercase(base);
  if (b.empty()) throw ArgumentError("empty reduplication base");
  for (char c : b)
    if (c < 'a' || c > 'z')
      throw ArgumentError("reduplication base must be letters only: " + base);
  return b;
}

}  // namespace

std::string redup_type_name(RedupType t) {
  switch (t) {
    case RedupType::Duplicate: return "Duplicate";
    case RedupType::VowelEx: return "VowelEx";
    case RedupType::ConEx: return "ConEx";
    case RedupType::Unmodeled: return "Unmodeled";
  }
  throw ArgumentError("unknown reduplication type");
}

RedupType redup_type_from_name(const std::string& name) {
  for (auto t : {RedupType::Duplicate, RedupType::VowelEx, RedupType::ConEx,
                 RedupType::Unmodeled}) {
    if (name == redup_type_name(t)) return t;
  }
  throw ArgumentError("unknown reduplication type: " + name);
}

std::string redup_mode_name(RedupMode m) {
  switch (m) {
    case RedupMode::Model: return "Model";
    case RedupMode::Let: return "Let";
    case RedupMode::LetCond: return "LetCond";
  }
  throw ArgumentError("unknown reduplication mode");
}

RedupMode redup_mode_from_name(const std::string& name) {
  for (auto m : {RedupMode::Model, RedupMode::Let, RedupMode::LetCond}) {
    if (name == redup_mode_name(m)) return m;
  }
  throw ArgumentError("unknown reduplication mode: " + name);
}

bool is_redup_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

RedupType classify_pair(const std::string& base, const std::string& redup) {
  if (base == redup) return RedupType::Duplicate;
  if (base.size() != redup.size() || base.empty()) return RedupType::Unmodeled;

  std::size_t diff = std::string::npos;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i] != redup[i]) {
      if (diff != std::string::npos) return RedupType::Unmodeled;
      diff = i;
    }
  }
  if (diff == first_of_class(base, true)) return RedupType::VowelEx;
  if (diff == first_of_class(base, false)) return RedupType::ConEx;
  return RedupType::Unmodeled;
}

RedupModel fit_redup_model(
    const std::vector<corpus::ReduplicativePair>& pairs) {
  RedupModel model;
  std::map<RedupType, std::size_t> type_counts;
  std::map<char, std::map<char, std::size_t>> phi_counts;
  std::map<char, std::map<char, std::size_t>> psi_counts;

  for (const auto& pair : pairs) {
    std::string base = lowercase(pair.base);
    std::string redup = lowercase(pair.reduplicant);
    auto type = classify_pair(base, redup);
    if (type == RedupType::Unmodeled) {
      ++model.unmodeled_count;
      continue;
    }
    ++type_counts[type];
    if (type == RedupType::VowelEx || type == RedupType::ConEx) {
      auto site = first_of_class(base, type == RedupType::VowelEx);
      auto& counts =
          type == RedupType::VowelEx ? phi_counts : psi_counts;
      ++counts[base[site]][redup[site]];
    }
  }

  std::size_t total = 0;
  for (const auto& [t, c] : type_counts) total += c;
  if (total == 0)
    throw FitError("reduplication model needs at least one modeled pair");

  for (const auto& [t, c] : type_counts)
    model.theta[t] = static_cast<double>(c) / static_cast<double>(total);

  auto normalize = [](const std::map<char, std::map<char, std::size_t>>& in) {
    std::map<char, std::map<char, double>> out;
    for (const auto& [orig, repls] : in) {
      std::size_t n = 0;
      for (const auto& [r, c] : repls) n += c;
      for (const auto& [r, c] : repls)
        out[orig][r] = static_cast<double>(c) / static_cast<double>(n);
    }
    return out;
  };
  model.phi = normalize(phi_counts);
  model.psi = normalize(psi_counts);
  return model;
}

namespace {

// Substitutes at the first vowel (VowelEx) or first consonant (ConEx) when
// the model has a replacement distribution for that letter.
bool try_exchange(const RedupModel& model, const std::string& base,
                  RedupType type, std::mt19937_64& rng, RedupSample& out) {
  bool vowel = type == RedupType::VowelEx;
  auto site = first_of_class(base, vowel);
  if (site == std::string::npos) return false;
  const auto& dists = vowel ? model.phi : model.psi;
  auto it = dists.find(base[site]);
  if (it == dists.end() || it->second.empty()) return false;
  out.word = base;
  out.word[site] = sample_replacement(it->second, rng);
  out.type = type;
  return true;
}

// Uniform same-class replacement at the first vowel, or first consonant
// when the base has no vowel. Always classifiable.
RedupSample class_replacement_fallback(const std::string& base,
                                       std::mt19937_64& rng) {
  auto site = first_of_class(base, true);
  RedupType type = RedupType::VowelEx;
  if (site == std::string::npos) {
    site = first_of_class(base, false);
    type = RedupType::ConEx;
  }
  RedupSample out;
  out.word = base;
  out.word[site] = uniform_class_replacement(base[site], rng);
  out.type = type;
  return out;
}

RedupSample generate_model(const RedupModel& model, const std::string& base,
                           bool allow_dup, std::mt19937_64& rng) {
  std::map<RedupType, double> theta = model.theta;
  if (!allow_dup) {
    theta.erase(RedupType::Duplicate);
    double mass = 0.0;
    for (const auto& [t, p] : theta) mass += p;
    if (mass <= 0.0) return class_replacement_fallback(base, rng);
    for (auto& [t, p] : theta) p /= mass;
  }

  double u = uniform_real01(rng);
  double acc = 0.0;
  RedupType type = theta.rbegin()->first;
  for (const auto& [t, p] : theta) {
    acc += p;
    if (u < acc) {
      type = t;
      break;
    }
  }

  if (type == RedupType::Duplicate)
    return RedupSample{base, RedupType::Duplicate};

  RedupSample out;
  if (try_exchange(model, base, type, rng, out)) return out;

  if (allow_dup) return RedupSample{base, RedupType::Duplicate};

  auto other = type == RedupType::VowelEx ? RedupType::ConEx
                                          : RedupType::VowelEx;
  if (try_exchange(model, base, other, rng, out)) return out;
  return class_replacement_fallback(base, rng);
}

}  // namespace

RedupSample generate_redup(const RedupModel& model, const std::string& base,
                           bool allow_dup, RedupMode mode,
                           std::uint64_t seed) {
  std::string b = validated_base(base);
  auto rng = make_rng(seed);

  switch (mode) {
    case RedupMode::Model:
      if (model.theta.empty())
        throw FitError("reduplication model has an empty type distribution");
      return generate_model(model, b, allow_dup, rng);
    case RedupMode::Let: {
      auto pos = uniform_below(rng, b.size());
      auto idx = uniform_below(rng, 25);
      char c = static_cast<char>('a' + idx);
      if (c >= b[pos]) ++c;
      RedupSample out;
      out.word = b;
      out.word[pos] = c;
      out.type = classify_pair(b, out.word);
      return out;
    }
    case RedupMode::LetCond: {
      auto pos = uniform_below(rng, b.size());
      RedupSample out;
      out.word = b;
      out.word[pos] = uniform_class_replacement(b[pos], rng);
      out.type = classify_pair(b, out.word);
      return out;
    }
  }
  throw ArgumentError("unknown reduplication mode");
}

nlohmann::ordered_json RedupModel::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = "redup_model";
  j["format_version"] = 1;
  auto th = nlohmann::ordered_json::object();
  for (const auto& [t, p] : theta) th[redup_type_name(t)] = p;
  j["theta"] = th;
  auto dump = [](const std::map<char, std::map<char, double>>& dists) {
    auto out = nlohmann::ordered_json::object();
    for (const auto& [orig, repls] : dists) {
      auto inner = nlohmann::ordered_json::object();
      for (const auto& [r, p] : repls) inner[std::string(1, r)] = p;
      out[std::string(1, orig)] = inner;
    }
    return out;
  };
  j["phi"] = dump(phi);
  j["psi"] = dump(psi);
  j["unmodeled_count"] = unmodeled_count;
  return j;
}

RedupModel RedupModel::from_json(const nlohmann::ordered_json& j) {
  if (j.at("kind").get<std::string>() != "redup_model")
    throw ValidationError("not a redup_model payload");
  RedupModel m;
  for (const auto& [name, p] : j.at("theta").items())
    m.theta[redup_type_from_name(name)] = p.get<double>();
  auto parse = [](const nlohmann::ordered_json& in) {
    std::map<char, std::map<char, double>> out;
    for (const auto& [orig, repls] : in.items()) {
      if (orig.size() != 1)
        throw ValidationError("replacement keys must be single letters");
      for (const auto& [r, p] : repls.items()) {
        if (r.size() != 1)
          throw ValidationError("replacement keys must be single letters");
        out[orig[0]][r[0]] = p.get<double>();
      }
    }
    return out;
  };
  m.phi = parse(j.at("phi"));
  m.psi = parse(j.at("psi"));
  m.unmodeled_count = j.at("unmodeled_count").get<std::size_t>();
  return m;
}

}  // namespace morpho::redup
