#include "casino/semantic/pos_tagger.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "casino/errors.hpp"
#include "casino/semantic/tokenize.hpp"

namespace casino::semantic {

namespace {

constexpr std::array<std::string_view, kPosTagCount> kTagNames = {
    "adjective", "adposition", "adverb", "conjunction", "determiner", "noun",
    "numeral",   "particle",   "pronoun", "verb",       "punctuation"};

// Suffix, minimum token length.
const std::vector<std::pair<std::string, PosTag>>& default_suffix_rules() {
  static const std::vector<std::pair<std::string, PosTag>> rules = {
      {"ly", PosTag::kAdverb},      {"ing", PosTag::kVerb},       {"ed", PosTag::kVerb},
      {"ize", PosTag::kVerb},       {"ise", PosTag::kVerb},       {"ify", PosTag::kVerb},
      {"ous", PosTag::kAdjective},  {"ful", PosTag::kAdjective},  {"ive", PosTag::kAdjective},
      {"able", PosTag::kAdjective}, {"ible", PosTag::kAdjective}, {"ical", PosTag::kAdjective},
      {"less", PosTag::kAdjective}, {"ish", PosTag::kAdjective},  {"est", PosTag::kAdjective},
      {"tion", PosTag::kNoun},      {"ment", PosTag::kNoun},      {"ness", PosTag::kNoun},
      {"ity", PosTag::kNoun},       {"ship", PosTag::kNoun},      {"er", PosTag::kNoun},
  };
  return rules;
}

bool is_numeral(std::string_view t) {
  bool digit = false;
  for (char c : t) {
    if (std::isdigit(static_cast<unsigned char>(c))) digit = true;
    else if (c != '.' && c != ',' && c != ':' && c != '-' && c != '/') return false;
  }
  return digit;
}

}  // namespace

std::string_view to_string(PosTag tag) { return kTagNames[static_cast<std::size_t>(tag)]; }

std::optional<PosTag> parse_pos_tag(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (std::size_t i = 0; i < kTagNames.size(); ++i)
    if (s == kTagNames[i]) return static_cast<PosTag>(i);
  static const std::unordered_map<std::string, PosTag> abbrev = {
      {"adj", PosTag::kAdjective}, {"adp", PosTag::kAdposition}, {"adv", PosTag::kAdverb},
      {"conj", PosTag::kConjunction}, {"cconj", PosTag::kConjunction}, {"sconj", PosTag::kConjunction},
      {"det", PosTag::kDeterminer}, {"noun", PosTag::kNoun}, {"propn", PosTag::kNoun},
      {"num", PosTag::kNumeral}, {"prt", PosTag::kParticle}, {"part", PosTag::kParticle},
      {"pron", PosTag::kPronoun}, {"verb", PosTag::kVerb}, {"aux", PosTag::kVerb},
      {"punct", PosTag::kPunctuation}, {".", PosTag::kPunctuation}};
  auto it = abbrev.find(s);
  if (it == abbrev.end()) return std::nullopt;
  return it->second;
}

PosTagger::PosTagger() : suffix_rules_(default_suffix_rules()) {}

PosTagger PosTagger::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open POS dictionary: " + path.string());
  PosTagger tagger;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    auto tag = tab == std::string::npos ? std::nullopt : parse_pos_tag(line.substr(tab + 1));
    if (!tag) throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected token<TAB>tag");
    std::string token = line.substr(0, tab);
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    tagger.add_word(std::move(token), *tag);
  }
  return tagger;
}

void PosTagger::add_word(std::string token, PosTag tag) { dictionary_[std::move(token)] = tag; }

void PosTagger::set_suffix_rules(std::vector<std::pair<std::string, PosTag>> rules) {
  suffix_rules_ = std::move(rules);
}

PosTag PosTagger::tag(std::string_view token) const {
  if (is_punctuation(token)) return PosTag::kPunctuation;
  if (auto it = dictionary_.find(std::string(token)); it != dictionary_.end()) return it->second;
  if (is_numeral(token)) return PosTag::kNumeral;
  for (const auto& [suffix, tag] : suffix_rules_) {
    // Require a stem of at least two characters so short words are not mangled.
    if (token.size() >= suffix.size() + 2 && token.ends_with(suffix)) return tag;
  }
  return PosTag::kNoun;
}

PosFlags pos_presence(std::string_view title, const PosTagger& tagger) {
  PosFlags flags{};
  for (const std::string& t : tokenize(title)) flags[static_cast<std::size_t>(tagger.tag(t))] = 1.0;
  return flags;
}

}  // namespace casino::semantic
