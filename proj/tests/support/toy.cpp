// SPDX-License-Identifier: Apache-2.0
#include "toy.hpp"

#include <algorithm>
#include <array>

#include "semstyle/rng.hpp"
#include "semstyle/text.hpp"

namespace semstyle::toy {

namespace {

struct Verb {
  const char* z;  // third person singular
  const char* g;  // gerund
  const char* d;  // past
};

const std::vector<std::string> kNouns = {"dog", "cat", "man", "woman", "boy", "girl", "horse", "bird", "child", "cow"};
const std::vector<Verb> kVerbs = {{"sits", "sitting", "sat"},     {"stands", "standing", "stood"},
                                  {"walks", "walking", "walked"}, {"waits", "waiting", "waited"},
                                  {"plays", "playing", "played"}, {"smiles", "smiling", "smiled"},
                                  {"kneels", "kneeling", "knelt"}, {"wanders", "wandering", "wandered"}};
const std::vector<std::string> kPlaces = {"park", "beach", "street", "field", "room",
                                          "kitchen", "road", "lake", "river", "hill"};
const std::vector<std::string> kAdjs = {"big", "small", "white", "black", "young", "old"};

std::string fill(std::string tmpl, const Scene& s) {
  auto sub = [&](const std::string& key, const std::string& value) {
    for (auto pos = tmpl.find(key); pos != std::string::npos; pos = tmpl.find(key)) tmpl.replace(pos, key.size(), value);
  };
  sub("{n}", kNouns[s.noun]);
  sub("{p}", kPlaces[s.place]);
  sub("{a}", kAdjs[s.adjective % kAdjs.size()]);
  sub("{z}", kVerbs[s.verb].z);
  sub("{g}", kVerbs[s.verb].g);
  sub("{d}", kVerbs[s.verb].d);
  return tmpl;
}

}  // namespace

std::size_t noun_count() { return kNouns.size(); }
std::size_t verb_count() { return kVerbs.size(); }
std::size_t place_count() { return kPlaces.size(); }

Sentence descriptive(const Scene& s, std::size_t variant) {
  static const std::array<const char*, 4> t = {"a {n} is {g} in the {p} .", "a {n} {z} in the {p} .",
                                               "a {a} {n} is {g} near the {p} .", "the {n} {z} by the {p} ."};
  return text::normalize(fill(t[variant % t.size()], s));
}

Sentence styled(const Scene& s, std::size_t variant) {
  static const std::array<const char*, 4> t = {"the {n} {d} in the {p} .", "my {n} {d} near the {p} .",
                                               "then the {a} {n} {d} in the {p} .", "the {n} {d} by the {p} again ."};
  return text::normalize(fill(t[variant % t.size()], s));
}

TwoStyleCorpus make_two_style(std::size_t per_style, std::size_t held_out, std::uint64_t seed) {
  std::vector<Scene> all;
  for (std::size_t n = 0; n < kNouns.size(); ++n)
    for (std::size_t v = 0; v < kVerbs.size(); ++v)
      for (std::size_t p = 0; p < kPlaces.size(); ++p) all.push_back({n, v, p, 0});
  auto rng = Rng::derive(seed, {0x70e});
  rng.shuffle(std::span<Scene>(all));
  TwoStyleCorpus c;
  held_out = std::min(held_out, all.size() - 1);
  std::size_t next = 0;
  auto take = [&] {
    // Training scenes cycle through the part of the shuffle after the held-out block.
    const std::size_t i = next < held_out ? next : held_out + (next - held_out) % (all.size() - held_out);
    ++next;
    Scene s = all[i];
    s.adjective = static_cast<std::size_t>(rng.below(kAdjs.size()));
    return s;
  };
  for (std::size_t i = 0; i < held_out; ++i) c.held_out.push_back(take());
  for (std::size_t i = 0; i < per_style; ++i) {
    c.descriptive.push_back(descriptive(take(), rng.below(4)));
    c.styled.push_back(styled(take(), rng.below(4)));
  }
  return c;
}

}  // namespace semstyle::toy

namespace semstyle::toy {

std::vector<possel::PosSentence> noun_key_corpus() {
  static const char* nouns[] = {"dog", "cat", "man", "woman", "boy", "girl", "horse", "bird"};
  static const char* adjs[] = {"big", "small"};
  static const char* verbs[] = {"runs", "sits"};
  static const char* advs[] = {"quickly", "slowly"};
  std::vector<possel::PosSentence> out;
  for (std::size_t n = 0; n < 8; ++n) {
    out.push_back({{"the", adjs[n / 4], nouns[n], verbs[(n / 2) % 2], advs[n % 2], "."},
                   {Pos::kDet, Pos::kAdj, Pos::kNoun, Pos::kVerb, Pos::kAdv, Pos::kPunct}});
  }
  return out;
}

std::vector<possel::PosSentence> symmetric_corpus() {
  static const char* nouns[] = {"dog", "cat", "man", "woman", "boy", "girl"};
  std::vector<possel::PosSentence> out;
  for (const char* n : nouns) {
    out.push_back({{"the", "big", n, "quickly", "."}, {Pos::kDet, Pos::kAdj, Pos::kNoun, Pos::kAdv, Pos::kPunct}});
  }
  return out;
}

}  // namespace semstyle::toy
