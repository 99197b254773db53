// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Multi-chapter trading narratives with retrieval, filtering and multi-hop
// questions whose answers follow from the generated world state.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sparse_frontier/core/random.hpp"
#include "sparse_frontier/taskgen/length.hpp"
#include "sparse_frontier/taskgen/ruler.hpp"

namespace sparse_frontier::taskgen {

inline constexpr std::size_t kRetrievalQuestions = 16;

struct StoryChapter {
  std::string location;
  std::string character;
  std::string event;
  std::optional<std::string> acquired_item;
  std::optional<std::string> relinquished_item;

  friend bool operator==(const StoryChapter&, const StoryChapter&) = default;
};

struct StoryWorld {
  std::string protagonist;
  std::vector<StoryChapter> chapters;  // chapter k is chapters[k - 1]

  std::size_t no_purchase_count() const {
    return static_cast<std::size_t>(std::count_if(
        chapters.begin(), chapters.end(), [](const StoryChapter& c) { return !c.acquired_item; }));
  }
};

struct StoryOptions {
  std::size_t filter_k = 3;            // chapters without a purchase in filtering worlds
  double relinquish_probability = 0.25;
};

inline std::span<const std::string_view> story_protagonists() {
  static constexpr std::array<std::string_view, 12> v = {
      "Arion", "Lysandra", "Corvin", "Ismene", "Tiberon", "Selene",
      "Kastor", "Melitta", "Orestes", "Thalia", "Evander", "Nerissa"};
  return v;
}

inline std::span<const std::string_view> story_characters() {
  static constexpr std::array<std::string_view, 40> v = {
      "Thanos",   "Cleo",     "Niko",     "Roxana",  "Phaedra",  "Damon",    "Marcus",
      "Xanthe",   "Vitalis",  "Helios",   "Iris",    "Leander",  "Daphne",   "Cassius",
      "Octavia",  "Philon",   "Zenobia",  "Brutus",  "Calliope", "Demetrio", "Galene",
      "Hector",   "Ione",     "Jasonas",  "Kyra",    "Linus",    "Myrto",    "Nestor",
      "Olympia",  "Pyrrhus",  "Rhea",     "Silvanus", "Tyche",   "Ursina",   "Valeria",
      "Xenon",    "Yolanda",  "Zephyrus", "Aurelia", "Boreas"};
  return v;
}

inline std::span<const std::string_view> story_locations() {
  static constexpr std::array<std::string_view, 40> v = {
      "Athens",        "Hippo Regius", "Emerita Augusta", "Berenice",    "Syracuse",
      "Babylon",       "Delphi",       "Pergamon",        "Alexandria",  "Carthage",
      "Antioch",       "Ephesus",      "Corinth",         "Sparta",      "Thebes",
      "Rhodes",        "Miletus",      "Byblos",          "Tyre",        "Sidon",
      "Palmyra",       "Petra",        "Knossos",         "Massalia",    "Neapolis",
      "Ravenna",       "Gades",        "Leptis Magna",    "Cyrene",      "Sardis",
      "Halicarnassus", "Smyrna",       "Nicaea",          "Tarsus",      "Olbia",
      "Panticapaeum",  "Tomis",        "Apollonia",       "Dura-Europos", "Ctesiphon"};
  return v;
}

inline std::span<const std::string_view> story_item_adjectives() {
  static constexpr std::array<std::string_view, 30> v = {
      "lavish",    "ceremonial", "delicate", "mystic",    "engraved", "timeworn",
      "pristine",  "gilded",     "ancient",  "polished",  "ornate",   "weathered",
      "luminous",  "battered",   "elegant",  "rustic",    "sacred",   "humble",
      "majestic",  "intricate",  "faded",    "radiant",   "sturdy",   "curious",
      "graceful",  "solemn",     "vivid",    "enchanted", "tarnished", "flawless"};
  return v;
}

inline std::span<const std::string_view> story_item_materials() {
  static constexpr std::array<std::string_view, 20> v = {
      "crystal", "gold",  "porcelain", "bronze", "emerald", "amber",  "silver",
      "jade",    "ivory", "obsidian",  "copper", "marble",  "ebony",  "sapphire",
      "onyx",    "pearl", "iron",      "cedar",  "ruby",    "alabaster"};
  return v;
}

inline std::span<const std::string_view> story_item_objects() {
  static constexpr std::array<std::string_view, 25> v = {
      "lamp",   "seal",    "sword",   "goblet",  "idol",    "vase",   "amulet",
      "mirror", "dagger",  "chalice", "compass", "brooch",  "scroll case", "figurine",
      "helmet", "bracelet", "flute",  "lantern", "casket",  "ring",   "shield",
      "statuette", "hourglass", "comb", "censer"};
  return v;
}

inline std::span<const std::string_view> story_events() {
  static constexpr std::array<std::string_view, 20> v = {
      "a violent storm",         "a tense negotiation",   "a sudden market crash",
      "an opulent banquet",      "a chariot race",        "a fire in the granary",
      "a solar eclipse",         "a riot at the docks",   "a funeral procession",
      "an unexpected festival",  "a heated council vote", "a flood along the river",
      "a royal proclamation",    "a plague scare",        "a wedding procession",
      "a shipwreck in the bay",  "a dispute among guilds", "a night of strange omens",
      "the arrival of envoys",   "a collapse in the mines"};
  return v;
}

namespace detail {

enum : std::uint64_t { kStoryStream = 0x73746f7279 };

using Pool = std::span<const std::string_view>;

// Placeholders: {P} protagonist, {L} location, {C} character, {E} event,
// {I} acquired item, {R} relinquished item.
inline Pool arrival_lines() {
  static constexpr std::array<std::string_view, 8> v = {
      "As the morning mist lifted, {P} arrived in {L}, drawn by its restless markets.",
      "{P} passed through the weathered gates of {L} shortly before noon.",
      "Dust still clung to the traveler's cloak when {P} first glimpsed the walls of {L}.",
      "By late afternoon {P} had reached {L}, where crowded quays met narrow lanes.",
      "Under a pale sky, {P} stepped into {L} and listened to its clamor.",
      "After days on the road, {P} entered {L} with tired feet and a sharp eye.",
      "The bells of {L} were ringing as {P} made the final climb to the city.",
      "{P} came to {L} at the hour when merchants unroll their awnings."};
  return v;
}

inline Pool motive_lines() {
  static constexpr std::array<std::string_view, 7> v = {
      "Rumors of rare goods had pulled {P} toward {L}.",
      "{P} hoped that {L} would answer a question the road had left open.",
      "Word of old bargains waiting in {L} had reached {P} weeks earlier.",
      "A half-remembered promise had brought {P} this far.",
      "{P} meant to stay only long enough to learn what {L} could offer.",
      "Something about {L} had always tugged at {P}'s curiosity.",
      "{P} arrived with a purse, a plan, and very little patience."};
  return v;
}

inline Pool event_lines() {
  static constexpr std::array<std::string_view, 6> v = {
      "Before long, {E} set the whole city talking.",
      "That same day, {E} unsettled the usual rhythm of {L}.",
      "Hardly an hour passed before {E} drew every gaze in {L}.",
      "News of {E} spread from the gates to the harbor.",
      "By evening, {E} had changed more than one plan in {L}.",
      "Nobody in {L} could ignore {E}, which dominated every conversation."};
  return v;
}

inline Pool meeting_lines() {
  static constexpr std::array<std::string_view, 6> v = {
      "{C} greeted {P} near the fountain, curious about the stranger.",
      "In a shaded courtyard, {P} was introduced to {C}.",
      "{C} sought out {P} almost at once, eager to talk.",
      "It was {C} who first offered {P} a seat and a cup of wine.",
      "{P} found {C} waiting beneath a colonnade, as if by appointment.",
      "A mutual acquaintance led {P} to the house of {C}."};
  return v;
}

inline Pool dialogue_lines() {
  static constexpr std::array<std::string_view, 16> v = {
      "They spoke at length about the caravans that crossed the eastern deserts.",
      "Their talk wandered to old quarrels between rival families.",
      "Each of them weighed the other's words with polite suspicion.",
      "They traded stories of shipwrecks, pirates, and lucky escapes.",
      "Much of the conversation circled around the price of grain.",
      "They compared the customs of the coast with those of the hills.",
      "A long silence fell while both considered the changing times.",
      "They argued gently about which roads were safest in winter.",
      "The talk turned to prophecies that few admitted believing.",
      "Both agreed that trust, once broken, rarely mends cleanly.",
      "They laughed over the follies of a magistrate neither admired.",
      "Questions about distant harbors filled the better part of an hour.",
      "They discussed the craftsmen whose workshops lined the lower streets.",
      "Old maps were spread out and debated line by line.",
      "Neither wished to reveal too much, so they spoke in careful hints.",
      "The conversation drifted toward festivals remembered from childhood."};
  return v;
}

inline Pool purchase_lines() {
  static constexpr std::array<std::string_view, 7> v = {
      "After patient haggling, {P} bought the {I} from {C}.",
      "{C} finally agreed to sell the {I}, and {P} paid the asking price.",
      "Coins changed hands, and {P} became the owner of the {I} that {C} had offered.",
      "Persuaded by the craftsmanship, {P} purchased the {I} from {C}.",
      "The deal was sealed when {P} acquired the {I} from {C}.",
      "{P} walked away with the {I}, bought from {C} at a fair price.",
      "With a nod of agreement, {P} took possession of the {I} sold by {C}."};
  return v;
}

inline Pool relinquish_lines() {
  static constexpr std::array<std::string_view, 4> v = {
      "As part of the bargain, {P} handed the {R} over to {C}.",
      "{P} parted with the {R}, leaving it in the care of {C}.",
      "To close the deal, {P} gave {C} the {R}.",
      "The {R} went to {C} as part of the exchange."};
  return v;
}

inline Pool browse_lines() {
  static constexpr std::array<std::string_view, 5> v = {
      "{P} examined everything {C} had to offer but bought nothing.",
      "Nothing on display tempted {P}, and no purchase was made.",
      "{P} listened to every offer from {C} yet kept the purse firmly closed.",
      "Despite the persuasion of {C}, {P} left without buying a thing.",
      "{P} decided that nothing here was worth buying."};
  return v;
}

inline Pool farewell_lines() {
  static constexpr std::array<std::string_view, 5> v = {
      "{P} thanked {C} and stepped back into the street.",
      "With a brief bow, {P} took leave of {C}.",
      "{C} watched {P} go with an unreadable expression.",
      "The two parted on friendly terms, though neither looked back.",
      "{P} promised {C} to return one day, without saying when."};
  return v;
}

inline Pool departure_lines() {
  static constexpr std::array<std::string_view, 5> v = {
      "When dusk settled, {P} left {L} behind.",
      "By the next dawn, {P} was already on the road out of {L}.",
      "{P} departed quietly, carrying new impressions of {L}.",
      "Soon the towers of {L} faded behind {P}.",
      "{P} set out again before the city fully woke."};
  return v;
}

inline Pool closing_lines() {
  static constexpr std::array<std::string_view, 6> v = {
      "Somewhere a bell rang, marking the end of another day.",
      "The wind carried the smell of salt and smoke.",
      "Far away, someone else was making plans of their own.",
      "The road ahead promised little rest.",
      "Night crept over the hills like a slow tide.",
      "Unseen, the wheel of fortune turned a little further."};
  return v;
}

// Length padding after the last chapter; names only the protagonist.
inline Pool coda_lines() {
  static constexpr std::array<std::string_view, 10> v = {
      "Later, {P} wrote a few careful lines in a worn travel journal.",
      "{P} counted the remaining coins twice before settling down to rest.",
      "The lamp burned low while {P} thought about the long road behind.",
      "For a while {P} simply watched the clouds drift over the rooftops.",
      "{P} mended a torn strap on the old satchel by candlelight.",
      "Sleep came slowly, and {P} listened to distant voices in the street.",
      "Before dawn, {P} was already awake and turning plans over in mind.",
      "{P} recalled the faces met along the way and smiled at a few of them.",
      "A cold breakfast of bread and olives was all {P} wanted that morning.",
      "{P} traced the next stage of the journey on a faded map."};
  return v;
}

inline std::string_view pick(Pool pool, Rng& rng) { return pool[uniform_index(rng, pool.size())]; }

inline void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

inline std::string fill(std::string_view tmpl, const StoryWorld& w, const StoryChapter& c) {
  std::string s(tmpl);
  replace_all(s, "{P}", w.protagonist);
  replace_all(s, "{L}", c.location);
  replace_all(s, "{C}", c.character);
  replace_all(s, "{E}", c.event);
  if (c.acquired_item) replace_all(s, "{I}", *c.acquired_item);
  if (c.relinquished_item) replace_all(s, "{R}", *c.relinquished_item);
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

inline std::string item_name(Rng& rng) {
  return std::string(pick(story_item_adjectives(), rng)) + " " +
         std::string(pick(story_item_materials(), rng)) + " " +
         std::string(pick(story_item_objects(), rng));
}

}  // namespace detail

/// Builds a world. Chapters in `no_purchase` (1-based) have no acquisition.
/// Chapter k's draws depend only on (seed, k) apart from item uniqueness and
/// relinquishing, which follow chapter order.
inline StoryWorld make_story_world(std::uint64_t seed, std::size_t num_chapters,
                                   const std::set<std::size_t>& no_purchase,
                                   const StoryOptions& opt = {}) {
  const std::size_t item_space = story_item_adjectives().size() * story_item_materials().size() *
                                 story_item_objects().size();
  sparse_frontier::detail::require<GenerationError>(num_chapters <= item_space / 2,
                                                    "too many chapters for the item pool");
  StoryWorld w;
  {
    Rng rng(derive_seed(seed, detail::kStoryStream));
    w.protagonist = std::string(detail::pick(story_protagonists(), rng));
  }
  std::set<std::string> used_items;
  std::vector<std::string> owned;
  for (std::size_t k = 1; k <= num_chapters; ++k) {
    Rng rng(derive_seed(seed, detail::kStoryStream, k));
    StoryChapter c;
    c.location = std::string(detail::pick(story_locations(), rng));
    c.character = std::string(detail::pick(story_characters(), rng));
    c.event = std::string(detail::pick(story_events(), rng));
    const bool relinquish = uniform01(rng) < opt.relinquish_probability;
    std::string item;
    do {
      item = detail::item_name(rng);
    } while (used_items.count(item));
    if (!no_purchase.count(k)) {
      used_items.insert(item);
      if (relinquish && !owned.empty()) {
        const std::size_t idx = uniform_index(rng, owned.size());
        c.relinquished_item = owned[idx];
        owned.erase(owned.begin() + static_cast<std::ptrdiff_t>(idx));
      }
      c.acquired_item = item;
      owned.push_back(item);
    }
    w.chapters.push_back(std::move(c));
  }
  return w;
}

/// Chapter text: arrival, motive, event, meeting, dialogue, transaction,
/// farewell, departure and a closing line.
/// `coda` extra sentences close the final chapter.
inline std::string render_story(const StoryWorld& w, std::uint64_t seed, std::size_t coda = 0) {
  std::string out;
  for (std::size_t k = 1; k <= w.chapters.size(); ++k) {
    const StoryChapter& c = w.chapters[k - 1];
    Rng rng(derive_seed(seed, detail::kStoryStream, k, 0x74657874ULL));
    std::vector<std::string> s;
    s.push_back(detail::fill(detail::pick(detail::arrival_lines(), rng), w, c));
    s.push_back(detail::fill(detail::pick(detail::motive_lines(), rng), w, c));
    s.push_back(detail::fill(detail::pick(detail::event_lines(), rng), w, c));
    s.push_back(detail::fill(detail::pick(detail::meeting_lines(), rng), w, c));
    const auto dialogue = sample_without_replacement(rng, detail::dialogue_lines().size(), 3);
    for (std::size_t d : dialogue) s.push_back(detail::fill(detail::dialogue_lines()[d], w, c));
    if (c.acquired_item) {
      s.push_back(detail::fill(detail::pick(detail::purchase_lines(), rng), w, c));
      if (c.relinquished_item) s.push_back(detail::fill(detail::pick(detail::relinquish_lines(), rng), w, c));
    } else {
      s.push_back(detail::fill(detail::pick(detail::browse_lines(), rng), w, c));
    }
    s.push_back(detail::fill(detail::pick(detail::farewell_lines(), rng), w, c));
    s.push_back(detail::fill(detail::pick(detail::departure_lines(), rng), w, c));
    s.push_back(detail::fill(detail::pick(detail::closing_lines(), rng), w, c));
    if (k == w.chapters.size() && coda > 0) {
      Rng crng(derive_seed(seed, detail::kStoryStream, 0x636f6461ULL));
      auto order = sample_without_replacement(crng, detail::coda_lines().size(), detail::coda_lines().size());
      for (std::size_t i = 0; i < coda; ++i)
        s.push_back(detail::fill(detail::coda_lines()[order[i % order.size()]], w, c));
    }
    if (k > 1) out += "\n\n";
    out += "Chapter " + std::to_string(k) + ":\n" + detail::join(s, " ");
  }
  return out;
}

namespace detail {

inline std::size_t min_chapters(TaskKind kind, const StoryOptions& opt) {
  switch (kind) {
    case TaskKind::story_retrieval:
      return kRetrievalQuestions;
    case TaskKind::story_filtering:
      return opt.filter_k + 1;
    case TaskKind::story_multihop:
      return 2;
    default:
      throw InvalidInput("not a story task kind");
  }
}

inline TaskSample build_story(std::uint64_t seed, TaskKind kind, std::size_t n,
                              const StoryOptions& opt, std::size_t coda = 0) {
  Rng rng(derive_seed(seed, kStoryStream, 0x717565ULL, n));
  std::set<std::size_t> no_purchase;
  if (kind == TaskKind::story_filtering) {
    for (std::size_t i : sample_without_replacement(rng, n, opt.filter_k)) no_purchase.insert(i + 1);
  }
  const StoryWorld w = make_story_world(seed, n, no_purchase, opt);
  TaskSample s;
  s.kind = kind;
  s.seed = seed;
  s.context = render_story(w, seed, coda);
  switch (kind) {
    case TaskKind::story_retrieval: {
      s.metric = MetricKind::exact_match;
      auto picked = sample_without_replacement(rng, n, kRetrievalQuestions);
      std::sort(picked.begin(), picked.end());
      for (std::size_t idx : picked) {
        const std::size_t k = idx + 1;
        const StoryChapter& c = w.chapters[idx];
        const std::string prefix = "In Chapter " + std::to_string(k) + ", ";
        switch (uniform_index(rng, 3)) {
          case 0:
            s.questions.push_back(prefix + "which character did the protagonist interact with?");
            s.gold.push_back(c.character);
            break;
          case 1:
            s.questions.push_back(prefix + "which specific item was acquired by the protagonist?");
            s.gold.push_back(*c.acquired_item);
            break;
          default:
            s.questions.push_back(prefix + "which specific location did the protagonist visit?");
            s.gold.push_back(c.location);
            break;
        }
      }
      break;
    }
    case TaskKind::story_filtering: {
      s.metric = MetricKind::iou;
      s.questions = {"Identify all chapters where the protagonist did not buy any item.\n"
                     "Note: There are exactly " +
                     std::to_string(opt.filter_k) + " chapters without any purchases."};
      for (std::size_t k : no_purchase) s.gold.push_back(std::to_string(k));
      break;
    }
    case TaskKind::story_multihop: {
      s.metric = MetricKind::exact_match;
      const std::size_t target = 2 + uniform_index(rng, n - 1);
      s.questions = {"What was the last item that the protagonist acquired before acquiring " +
                     *w.chapters[target - 1].acquired_item + "?"};
      s.gold = {*w.chapters[target - 2].acquired_item};
      break;
    }
    default:
      break;
  }
  return s;
}

}  // namespace detail

inline TaskSample gen_story(std::uint64_t seed, TaskKind kind, std::size_t num_chapters,
                            std::size_t target_tokens, const StoryOptions& opt = {},
                            const Tokenizer& tok = default_tokenizer()) {
  const std::size_t min_n = detail::min_chapters(kind, opt);
  sparse_frontier::detail::require<GenerationError>(
      target_tokens > 0 || num_chapters >= min_n,
      "story task needs at least " + std::to_string(min_n) + " chapters");
  TaskSample s;
  if (target_tokens == 0) {
    s = detail::build_story(seed, kind, num_chapters, opt);
  } else {
    // Whole chapters first, then coda sentences to close the remaining gap.
    std::size_t n = min_n;
    detail::fit_units(target_tokens, min_n, 7000,
                      [&](std::size_t units) { return detail::build_story(seed, kind, units, opt); }, tok, &n);
    s = fit_to_length(target_tokens, 0, 40,
                      [&](std::size_t coda) { return detail::build_story(seed, kind, n, opt, coda); }, tok);
  }
  s.id = detail::make_id(kind, seed, target_tokens);
  return s;
}

}  // namespace sparse_frontier::taskgen
