#pragma once

// Corpus model and synthesis. The corpus is a small fantasy-text-game world
// pack: characters with personas and home locations, locations with resident
// objects and neighbor links, quests (motivation text plus an executable
// action timeline), and play-through demonstrations that interleave dialogue
// and actions. synthesize_corpus plants deterministic lexical co-occurrence
// between personas and home-location descriptions so retrieval models have a
// learnable signal, and shapes quest verb frequencies with a Zipf skew so
// distribution tuning has something to flatten.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "questforge/rng.hpp"
#include "questforge/text.hpp"

namespace questforge::corpus {

using nlohmann::json;

// Data-shaped failures (bad files, broken references). The CLI maps these to
// exit code 2.
struct CorpusError : std::runtime_error {
    explicit CorpusError(const std::string& what) : std::runtime_error(what) {}
};

struct ObjectProps {
    bool gettable = false;
    bool container = false;
    bool surface = false;
    bool wieldable = false;
    bool wearable = false;
    bool food = false;
    bool drink = false;
};

struct Character {
    std::string id;
    std::string name;
    std::string persona;
    std::string home_location_id;
    std::string split = "train";
};

struct Location {
    std::string id;
    std::string name;
    std::string description;
    std::vector<std::string> gold_neighbors; // location ids
    std::vector<std::string> resident_objects; // object ids
    std::string split = "train";
};

struct Object {
    std::string id;
    std::string name;
    std::string description;
    ObjectProps props;
    std::string home_location_id;
    std::string split = "train";
};

struct QuestRecord {
    std::string id;
    std::string character_id;
    std::string location_id; // start location (the character's home)
    std::string short_motivation;
    std::string goal_action;             // always the last timeline entry
    std::vector<std::string> timeline;   // executable action texts, in order
    std::string split = "train";
};

struct DemoTurn {
    std::string actor; // "self" | "partner"
    std::string kind;  // "say" | "act"
    std::string text;
};

struct Demonstration {
    std::string id;
    std::string quest_id;
    std::vector<DemoTurn> turns;
    std::string split = "train";
};

struct VerbEntry {
    std::string motivation_verb; // surface verb used in motivation text
    std::string engine_verb;     // executable verb it maps to
};

struct SynthConfig {
    int num_characters = 60;
    int num_locations = 12;
    int num_objects = 54;
    int quests_per_character = 2;
    double demo_fraction = 0.4;
    double zipf_s = 1.0;
    double neighbor_prob = 0.4;   // chance the quest target sits one room away
    double fetch_prefix_prob = 0.7; // chance use-verbs need a "get" first
    double assist_plant_prob = 0.5; // chance get/steal demos show partner handing over
    double train_ratio = 0.8;
    double valid_ratio = 0.1;
    double test_ratio = 0.1;
    std::uint64_t seed = 1;
    std::vector<VerbEntry> verbs; // empty means default lexicon

    json to_json() const {
        json v = json::array();
        for (const auto& e : verbs)
            v.push_back({{"motivation_verb", e.motivation_verb},
                         {"engine_verb", e.engine_verb}});
        return {{"num_characters", num_characters},
                {"num_locations", num_locations},
                {"num_objects", num_objects},
                {"quests_per_character", quests_per_character},
                {"demo_fraction", demo_fraction},
                {"zipf_s", zipf_s},
                {"neighbor_prob", neighbor_prob},
                {"fetch_prefix_prob", fetch_prefix_prob},
                {"assist_plant_prob", assist_plant_prob},
                {"train_ratio", train_ratio},
                {"valid_ratio", valid_ratio},
                {"test_ratio", test_ratio},
                {"seed", seed},
                {"verbs", v}};
    }
};

inline std::vector<VerbEntry> default_verb_lexicon() {
    // Zipf rank order: earlier entries dominate the untuned quest pool.
    return {
        {"acquire", "get"},  {"fetch", "get"},    {"deliver", "give"},
        {"hug", "hug"},      {"steal", "steal"},  {"wear", "wear"},
        {"wield", "wield"},  {"eat", "eat"},      {"drink", "drink"},
        {"hit", "hit"},      {"follow", "follow"}, {"stash", "put"},
    };
}

struct Corpus {
    std::vector<Character> characters;
    std::vector<Location> locations;
    std::vector<Object> objects;
    std::vector<QuestRecord> quests;
    std::vector<Demonstration> demos;
    json meta = json::object();

    // id -> index maps, rebuilt by reindex().
    std::map<std::string, std::size_t> char_index;
    std::map<std::string, std::size_t> loc_index;
    std::map<std::string, std::size_t> obj_index;
    std::map<std::string, std::size_t> quest_index;

    void reindex() {
        char_index.clear();
        loc_index.clear();
        obj_index.clear();
        quest_index.clear();
        for (std::size_t i = 0; i < characters.size(); ++i)
            char_index[characters[i].id] = i;
        for (std::size_t i = 0; i < locations.size(); ++i)
            loc_index[locations[i].id] = i;
        for (std::size_t i = 0; i < objects.size(); ++i)
            obj_index[objects[i].id] = i;
        for (std::size_t i = 0; i < quests.size(); ++i)
            quest_index[quests[i].id] = i;
    }

    const Character& character(const std::string& id) const {
        auto it = char_index.find(id);
        if (it == char_index.end()) throw CorpusError("unknown character id: " + id);
        return characters[it->second];
    }
    const Location& location(const std::string& id) const {
        auto it = loc_index.find(id);
        if (it == loc_index.end()) throw CorpusError("unknown location id: " + id);
        return locations[it->second];
    }
    const Object& object(const std::string& id) const {
        auto it = obj_index.find(id);
        if (it == obj_index.end()) throw CorpusError("unknown object id: " + id);
        return objects[it->second];
    }
    const QuestRecord& quest(const std::string& id) const {
        auto it = quest_index.find(id);
        if (it == quest_index.end()) throw CorpusError("unknown quest id: " + id);
        return quests[it->second];
    }

    // Objects whose name matches exactly (names can repeat across ids only in
    // ingested corpora; synthesis keeps them unique).
    std::vector<const Object*> objects_named(const std::string& name) const {
        std::vector<const Object*> out;
        std::string norm = normalize_text(name);
        for (const auto& o : objects)
            if (normalize_text(o.name) == norm) out.push_back(&o);
        return out;
    }
};

// The surface verb that opens a motivation. Motivation templates read
// "your motivation is to <verb> ...", so the token after "to" wins; for
// free-form text fall back to the first non-stopword token. Lemmatized.
inline std::string motivation_verb(const std::string& motivation) {
    auto toks = tokenize(motivation);
    for (std::size_t i = 0; i + 1 < toks.size(); ++i)
        if (toks[i] == "to") return lemma(toks[i + 1]);
    for (const auto& t : toks)
        if (!stopwords().count(t)) return lemma(t);
    return "unknown";
}

// Majority mapping motivation-verb -> engine verb, harvested from quest
// records (motivation verb paired with the goal action's first token). Works
// on ingested corpora where no lexicon config exists.
inline std::map<std::string, std::string> harvest_verb_map(const Corpus& c) {
    std::map<std::string, std::map<std::string, int>> votes;
    for (const auto& q : c.quests) {
        auto goal_toks = tokenize(q.goal_action);
        if (goal_toks.empty()) continue;
        votes[motivation_verb(q.short_motivation)][goal_toks[0]]++;
    }
    std::map<std::string, std::string> out;
    for (const auto& [mv, counts] : votes) {
        std::string best;
        int best_n = -1;
        for (const auto& [ev, n] : counts)
            if (n > best_n || (n == best_n && ev < best)) {
                best = ev;
                best_n = n;
            }
        out[mv] = best;
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSONL persistence

namespace detail {

inline json props_to_json(const ObjectProps& p) {
    return {{"gettable", p.gettable}, {"container", p.container},
            {"surface", p.surface},   {"wieldable", p.wieldable},
            {"wearable", p.wearable}, {"food", p.food},
            {"drink", p.drink}};
}

inline ObjectProps props_from_json(const json& j) {
    ObjectProps p;
    p.gettable = j.value("gettable", false);
    p.container = j.value("container", false);
    p.surface = j.value("surface", false);
    p.wieldable = j.value("wieldable", false);
    p.wearable = j.value("wearable", false);
    p.food = j.value("food", false);
    p.drink = j.value("drink", false);
    return p;
}

template <class Fn>
void for_each_jsonl_line(const std::string& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw CorpusError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        try {
            fn(j);
        } catch (const json::exception& e) {
            throw CorpusError(path + ":" + std::to_string(lineno) +
                              ": bad record: " + e.what());
        }
    }
}

} // namespace detail

inline std::string corpus_to_jsonl(const Corpus& c, const std::string& kind) {
    std::ostringstream out;
    if (kind == "characters") {
        for (const auto& x : c.characters)
            out << json{{"id", x.id},
                        {"name", x.name},
                        {"persona", x.persona},
                        {"home_location_id", x.home_location_id},
                        {"split", x.split}}
                       .dump()
                << "\n";
    } else if (kind == "locations") {
        for (const auto& x : c.locations)
            out << json{{"id", x.id},
                        {"name", x.name},
                        {"description", x.description},
                        {"gold_neighbors", x.gold_neighbors},
                        {"resident_objects", x.resident_objects},
                        {"split", x.split}}
                       .dump()
                << "\n";
    } else if (kind == "objects") {
        for (const auto& x : c.objects)
            out << json{{"id", x.id},
                        {"name", x.name},
                        {"description", x.description},
                        {"properties", detail::props_to_json(x.props)},
                        {"home_location_id", x.home_location_id},
                        {"split", x.split}}
                       .dump()
                << "\n";
    } else if (kind == "quests") {
        for (const auto& x : c.quests)
            out << json{{"id", x.id},
                        {"character_id", x.character_id},
                        {"location_id", x.location_id},
                        {"short_motivation", x.short_motivation},
                        {"goal_action", x.goal_action},
                        {"timeline", x.timeline},
                        {"split", x.split}}
                       .dump()
                << "\n";
    } else if (kind == "demos") {
        for (const auto& x : c.demos) {
            json turns = json::array();
            for (const auto& t : x.turns)
                turns.push_back({{"actor", t.actor}, {"kind", t.kind}, {"text", t.text}});
            out << json{{"id", x.id},
                        {"quest_id", x.quest_id},
                        {"turns", turns},
                        {"split", x.split}}
                       .dump()
                << "\n";
        }
    } else {
        throw CorpusError("unknown corpus table: " + kind);
    }
    return out.str();
}

inline void save_corpus(const Corpus& c, const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(dir + "/" + name, std::ios::binary | std::ios::trunc);
        if (!out) throw CorpusError("cannot write " + dir + "/" + name);
        out << content;
    };
    write("characters.jsonl", corpus_to_jsonl(c, "characters"));
    write("locations.jsonl", corpus_to_jsonl(c, "locations"));
    write("objects.jsonl", corpus_to_jsonl(c, "objects"));
    write("quests.jsonl", corpus_to_jsonl(c, "quests"));
    write("demos.jsonl", corpus_to_jsonl(c, "demos"));
    write("meta.json", c.meta.dump(2) + "\n");
}

inline Corpus load_corpus(const std::string& dir) {
    Corpus c;
    detail::for_each_jsonl_line(dir + "/characters.jsonl", [&](const json& j) {
        Character x;
        x.id = j.at("id").get<std::string>();
        x.name = j.at("name").get<std::string>();
        x.persona = j.at("persona").get<std::string>();
        x.home_location_id = j.at("home_location_id").get<std::string>();
        x.split = j.value("split", "train");
        c.characters.push_back(std::move(x));
    });
    detail::for_each_jsonl_line(dir + "/locations.jsonl", [&](const json& j) {
        Location x;
        x.id = j.at("id").get<std::string>();
        x.name = j.at("name").get<std::string>();
        x.description = j.at("description").get<std::string>();
        x.gold_neighbors = j.at("gold_neighbors").get<std::vector<std::string>>();
        x.resident_objects =
            j.value("resident_objects", std::vector<std::string>{});
        x.split = j.value("split", "train");
        c.locations.push_back(std::move(x));
    });
    detail::for_each_jsonl_line(dir + "/objects.jsonl", [&](const json& j) {
        Object x;
        x.id = j.at("id").get<std::string>();
        x.name = j.at("name").get<std::string>();
        x.description = j.at("description").get<std::string>();
        x.props = detail::props_from_json(j.at("properties"));
        x.home_location_id = j.value("home_location_id", std::string{});
        x.split = j.value("split", "train");
        c.objects.push_back(std::move(x));
    });
    detail::for_each_jsonl_line(dir + "/quests.jsonl", [&](const json& j) {
        QuestRecord x;
        x.id = j.at("id").get<std::string>();
        x.character_id = j.at("character_id").get<std::string>();
        x.location_id = j.at("location_id").get<std::string>();
        x.short_motivation = j.at("short_motivation").get<std::string>();
        x.goal_action = j.at("goal_action").get<std::string>();
        x.timeline = j.at("timeline").get<std::vector<std::string>>();
        x.split = j.value("split", "train");
        c.quests.push_back(std::move(x));
    });
    detail::for_each_jsonl_line(dir + "/demos.jsonl", [&](const json& j) {
        Demonstration x;
        x.id = j.at("id").get<std::string>();
        x.quest_id = j.at("quest_id").get<std::string>();
        for (const auto& tj : j.at("turns")) {
            DemoTurn t;
            t.actor = tj.at("actor").get<std::string>();
            t.kind = tj.at("kind").get<std::string>();
            t.text = tj.at("text").get<std::string>();
            x.turns.push_back(std::move(t));
        }
        x.split = j.value("split", "train");
        c.demos.push_back(std::move(x));
    });
    std::ifstream meta_in(dir + "/meta.json");
    if (meta_in) {
        try {
            c.meta = json::parse(meta_in);
        } catch (const json::exception& e) {
            throw CorpusError(dir + "/meta.json: " + e.what());
        }
    }
    c.reindex();
    return c;
}

// Structural validation: referential integrity and timeline shape. Grammar
// validation of demo act turns lives with the engine, which owns the grammar.
inline void validate_corpus(const Corpus& c) {
    std::set<std::string> seen;
    auto check_unique = [&](const std::string& id, const char* kind) {
        if (!seen.insert(std::string(kind) + ":" + id).second)
            throw CorpusError(std::string("duplicate ") + kind + " id: " + id);
    };
    for (const auto& x : c.characters) check_unique(x.id, "character");
    for (const auto& x : c.locations) check_unique(x.id, "location");
    for (const auto& x : c.objects) check_unique(x.id, "object");
    for (const auto& x : c.quests) check_unique(x.id, "quest");
    for (const auto& x : c.demos) check_unique(x.id, "demo");

    for (const auto& x : c.characters)
        if (!c.loc_index.count(x.home_location_id))
            throw CorpusError("character " + x.id + " home location missing: " +
                              x.home_location_id);
    for (const auto& x : c.locations)
        for (const auto& n : x.gold_neighbors)
            if (!c.loc_index.count(n))
                throw CorpusError("location " + x.id + " neighbor missing: " + n);
    for (const auto& q : c.quests) {
        if (!c.char_index.count(q.character_id))
            throw CorpusError("quest " + q.id + " character missing: " + q.character_id);
        if (!c.loc_index.count(q.location_id))
            throw CorpusError("quest " + q.id + " location missing: " + q.location_id);
        if (q.timeline.empty())
            throw CorpusError("quest " + q.id + " has an empty timeline");
        if (normalize_text(q.timeline.back()) != normalize_text(q.goal_action))
            throw CorpusError("quest " + q.id +
                              " goal_action is not the final timeline entry");
    }
    for (const auto& d : c.demos) {
        if (!c.quest_index.count(d.quest_id))
            throw CorpusError("demo " + d.id + " quest missing: " + d.quest_id);
        for (const auto& t : d.turns) {
            if (t.actor != "self" && t.actor != "partner")
                throw CorpusError("demo " + d.id + " bad actor: " + t.actor);
            if (t.kind != "say" && t.kind != "act")
                throw CorpusError("demo " + d.id + " bad turn kind: " + t.kind);
        }
        const auto& q = c.quests[c.quest_index.at(d.quest_id)];
        if (d.split != q.split)
            throw CorpusError("demo " + d.id + " split differs from its quest");
    }
}

// ---------------------------------------------------------------------------
// Splitting

// Exact largest-remainder apportionment of n records over three ratios.
inline std::array<int, 3> apportion(int n, double r0, double r1, double r2) {
    double rs[3] = {r0, r1, r2};
    double total = r0 + r1 + r2;
    if (!(total > 0)) throw CorpusError("split ratios must sum to a positive value");
    std::array<int, 3> counts{};
    double fracs[3];
    int assigned = 0;
    for (int i = 0; i < 3; ++i) {
        double exact = double(n) * rs[i] / total;
        counts[i] = int(std::floor(exact));
        fracs[i] = exact - counts[i];
        assigned += counts[i];
    }
    // Hand out the leftovers by descending fractional part, ties to the
    // earlier split so train grows first.
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fracs[a] > fracs[b]; });
    for (int i = 0; assigned < n; ++i, ++assigned) counts[order[i % 3]]++;
    return counts;
}

// Relabels quest splits (demos follow their quest) and character splits
// (independent draw, same ratios). Locations and objects are global
// candidate pools shared by every split and stay labeled train.
inline void split_corpus(Corpus& c, double train, double valid, double test,
                         std::uint64_t seed) {
    Rng rng(seed);
    auto assign = [&](auto& records, const char* stream) {
        std::vector<std::size_t> idx(records.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        Rng r = rng.fork(stream);
        r.shuffle(idx);
        auto counts = apportion(int(records.size()), train, valid, test);
        const char* labels[3] = {"train", "valid", "test"};
        std::size_t at = 0;
        for (int s = 0; s < 3; ++s)
            for (int k = 0; k < counts[s]; ++k) records[idx[at++]].split = labels[s];
    };
    assign(c.quests, "split.quests");
    assign(c.characters, "split.characters");
    std::map<std::string, std::string> quest_split;
    for (const auto& q : c.quests) quest_split[q.id] = q.split;
    for (auto& d : c.demos) {
        auto it = quest_split.find(d.quest_id);
        if (it == quest_split.end())
            throw CorpusError("demo " + d.id + " quest missing: " + d.quest_id);
        d.split = it->second;
    }
    c.meta["split"] = {{"train", train}, {"valid", valid}, {"test", test}, {"seed", seed}};
}

// ---------------------------------------------------------------------------
// Stats

struct StatsReport {
    std::map<std::string, int> entity_counts;          // kind -> count
    std::map<std::string, std::array<int, 3>> splits;  // kind -> train/valid/test
    std::map<std::string, int> quest_verb_histogram;   // motivation verb -> count
    double mean_timeline_len = 0.0;
    double mean_demo_turns = 0.0;
    double mean_demo_say_turns = 0.0;      // both actors
    double mean_demo_self_say_turns = 0.0; // protagonist only
    double demo_coverage = 0.0;            // demos / quests

    json to_json() const {
        json splits_j = json::object();
        for (const auto& [k, v] : splits)
            splits_j[k] = {{"train", v[0]}, {"valid", v[1]}, {"test", v[2]}};
        return {{"entity_counts", entity_counts},
                {"splits", splits_j},
                {"quest_verb_histogram", quest_verb_histogram},
                {"mean_timeline_len", mean_timeline_len},
                {"mean_demo_turns", mean_demo_turns},
                {"mean_demo_say_turns", mean_demo_say_turns},
                {"mean_demo_self_say_turns", mean_demo_self_say_turns},
                {"demo_coverage", demo_coverage}};
    }
};

inline StatsReport corpus_stats(const Corpus& c) {
    StatsReport r;
    r.entity_counts["characters"] = int(c.characters.size());
    r.entity_counts["locations"] = int(c.locations.size());
    r.entity_counts["objects"] = int(c.objects.size());
    r.entity_counts["quests"] = int(c.quests.size());
    r.entity_counts["demos"] = int(c.demos.size());

    auto tally = [&](const auto& records, const char* kind) {
        std::array<int, 3> s{};
        for (const auto& x : records) {
            if (x.split == "train") s[0]++;
            else if (x.split == "valid") s[1]++;
            else if (x.split == "test") s[2]++;
        }
        r.splits[kind] = s;
    };
    tally(c.characters, "characters");
    tally(c.locations, "locations");
    tally(c.objects, "objects");
    tally(c.quests, "quests");
    tally(c.demos, "demos");

    double tl = 0;
    for (const auto& q : c.quests) {
        r.quest_verb_histogram[motivation_verb(q.short_motivation)]++;
        tl += double(q.timeline.size());
    }
    if (!c.quests.empty()) r.mean_timeline_len = tl / double(c.quests.size());

    double turns = 0, says = 0, self_says = 0;
    for (const auto& d : c.demos) {
        turns += double(d.turns.size());
        for (const auto& t : d.turns) {
            if (t.kind == "say") {
                says += 1;
                if (t.actor == "self") self_says += 1;
            }
        }
    }
    if (!c.demos.empty()) {
        r.mean_demo_turns = turns / double(c.demos.size());
        r.mean_demo_say_turns = says / double(c.demos.size());
        r.mean_demo_self_say_turns = self_says / double(c.demos.size());
    }
    if (!c.quests.empty())
        r.demo_coverage = double(c.demos.size()) / double(c.quests.size());
    return r;
}

// ---------------------------------------------------------------------------
// Synthesis

namespace detail {

inline const std::vector<std::string>& location_bases() {
    static const std::vector<std::string> v = {
        "armory", "tavern", "swamp",   "crypt",  "tower",  "garden",
        "forge",  "library", "chapel", "cave",   "market", "dungeon",
        "stable", "harbor",  "mill",   "shrine"};
    return v;
}

inline const std::vector<std::string>& location_adjectives() {
    static const std::vector<std::string> v = {"gloomy", "royal",  "ruined",
                                               "misty",  "sunken", "frozen",
                                               "hidden", "lofty"};
    return v;
}

inline const std::vector<std::string>& region_tokens() {
    static const std::vector<std::string> v = {"emberward", "mistward",
                                               "stoneward", "galeward"};
    return v;
}

inline const std::vector<std::string>& character_bases() {
    static const std::vector<std::string> v = {
        "knight", "dragon", "merchant", "witch",  "bard",   "smith",
        "priest", "thief",  "queen",    "guard",  "farmer", "sailor",
        "wizard", "hermit", "baker",    "hunter"};
    return v;
}

inline const std::vector<std::string>& character_adjectives() {
    static const std::vector<std::string> v = {"old",   "young", "brave", "sly",
                                               "gentle", "grim", "merry", "quiet",
                                               "proud", "weary", "noble", "wild"};
    return v;
}

struct ObjectBase {
    const char* word;
    const char* kind; // plain | wield | wear | food | drink | container | surface
};

inline const std::vector<ObjectBase>& object_bases() {
    static const std::vector<ObjectBase> v = {
        {"rope", "plain"},    {"coin", "plain"},    {"lantern", "plain"},
        {"scroll", "plain"},  {"key", "plain"},     {"gem", "plain"},
        {"mirror", "plain"},  {"candle", "plain"},  {"pouch", "plain"},
        {"bell", "plain"},    {"sword", "wield"},   {"dagger", "wield"},
        {"axe", "wield"},     {"hammer", "wield"},  {"spear", "wield"},
        {"club", "wield"},    {"cloak", "wear"},    {"helmet", "wear"},
        {"crown", "wear"},    {"amulet", "wear"},   {"boots", "wear"},
        {"belt", "wear"},     {"apple", "food"},    {"bread", "food"},
        {"pie", "food"},      {"cheese", "food"},   {"ale", "drink"},
        {"cider", "drink"},   {"tonic", "drink"},   {"chest", "container"},
        {"barrel", "container"}, {"basket", "container"}, {"table", "surface"},
        {"altar", "surface"},
    };
    return v;
}

inline const std::vector<std::string>& object_adjectives() {
    static const std::vector<std::string> v = {
        "rusty",  "silver", "golden", "wooden", "iron",   "velvet",
        "crooked", "shiny", "plain",  "carved", "cracked", "ancient"};
    return v;
}

inline ObjectProps props_for_kind(const std::string& kind) {
    ObjectProps p;
    if (kind == "container") {
        p.container = true;
    } else if (kind == "surface") {
        p.surface = true;
    } else {
        p.gettable = true;
        if (kind == "wield") p.wieldable = true;
        if (kind == "wear") p.wearable = true;
        if (kind == "food") p.food = true;
        if (kind == "drink") p.drink = true;
    }
    return p;
}

inline std::string zero_pad(int n, int width) {
    std::string s = std::to_string(n);
    while (int(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

} // namespace detail

inline Corpus synthesize_corpus(SynthConfig cfg) {
    using namespace detail;
    if (cfg.verbs.empty()) cfg.verbs = default_verb_lexicon();
    if (cfg.num_locations < 5)
        throw CorpusError("num_locations must be at least 5");
    if (cfg.num_locations > int(location_bases().size() *
                                (1 + location_adjectives().size())))
        throw CorpusError("num_locations exceeds the name inventory");
    if (cfg.num_characters < 2)
        throw CorpusError("num_characters must be at least 2");
    if (cfg.num_objects < 3 * cfg.num_locations ||
        cfg.num_objects > 6 * cfg.num_locations)
        throw CorpusError("num_objects must lie in [3, 6] per location");

    Rng root(cfg.seed);
    Corpus c;

    // Locations first: ring topology, each linked to the two locations on
    // either side, grouped into quarters that share a region token.
    {
        Rng rng = root.fork("locations");
        std::vector<std::string> names;
        for (const auto& b : location_bases()) names.push_back(b);
        rng.shuffle(names);
        while (int(names.size()) < cfg.num_locations) {
            std::string cand = location_adjectives()[names.size() %
                                                     location_adjectives().size()] +
                               " " + location_bases()[rng.below(location_bases().size())];
            if (std::find(names.begin(), names.end(), cand) == names.end())
                names.push_back(cand);
        }
        names.resize(std::size_t(cfg.num_locations));
        int per_region =
            std::max(1, cfg.num_locations / int(region_tokens().size()));
        for (int i = 0; i < cfg.num_locations; ++i) {
            Location loc;
            loc.id = "l" + zero_pad(i, 3);
            loc.name = names[std::size_t(i)];
            int L = cfg.num_locations;
            for (int d : {-2, -1, 1, 2}) {
                int j = ((i + d) % L + L) % L;
                if (j != i) loc.gold_neighbors.push_back("l" + zero_pad(j, 3));
            }
            std::sort(loc.gold_neighbors.begin(), loc.gold_neighbors.end());
            loc.gold_neighbors.erase(std::unique(loc.gold_neighbors.begin(),
                                                 loc.gold_neighbors.end()),
                                     loc.gold_neighbors.end());
            loc.description = "region " +
                              region_tokens()[std::size_t(i / per_region) %
                                              region_tokens().size()];
            c.locations.push_back(std::move(loc));
        }
    }

    // Objects: every location gets one container or surface plus gettables.
    {
        Rng rng = root.fork("objects");
        std::vector<int> per_loc(std::size_t(cfg.num_locations), 3);
        int extra = cfg.num_objects - 3 * cfg.num_locations;
        while (extra > 0) {
            std::size_t i = std::size_t(rng.below(std::uint64_t(cfg.num_locations)));
            if (per_loc[i] < 6) {
                per_loc[i]++;
                --extra;
            }
        }
        std::set<std::string> used_names;
        std::map<std::string, int> base_uses;
        int oid = 0;
        std::vector<ObjectBase> fixture_bases, loose_bases;
        for (const auto& b : object_bases()) {
            std::string kind = b.kind;
            if (kind == "container" || kind == "surface")
                fixture_bases.push_back(b);
            else
                loose_bases.push_back(b);
        }
        for (int li = 0; li < cfg.num_locations; ++li) {
            Location& loc = c.locations[std::size_t(li)];
            for (int k = 0; k < per_loc[std::size_t(li)]; ++k) {
                const auto& pool = (k == 0) ? fixture_bases : loose_bases;
                const ObjectBase* base = &pool[rng.below(pool.size())];
                std::string name = base->word;
                if (base_uses[base->word]++ > 0) {
                    // Reused base word: prefix an adjective to keep names unique.
                    for (int tries = 0; tries < 64; ++tries) {
                        std::string cand =
                            object_adjectives()[rng.below(object_adjectives().size())] +
                            " " + base->word;
                        if (!used_names.count(cand)) {
                            name = cand;
                            break;
                        }
                    }
                }
                if (used_names.count(name)) {
                    // Name inventory exhausted for this base; try another base.
                    --k;
                    continue;
                }
                used_names.insert(name);
                Object o;
                o.id = "o" + zero_pad(oid++, 3);
                o.name = name;
                o.props = props_for_kind(base->kind);
                o.home_location_id = loc.id;
                o.description = "a " + name + ". it belongs in the " + loc.name + ".";
                loc.resident_objects.push_back(o.id);
                c.objects.push_back(std::move(o));
            }
        }
    }

    // Location descriptions now that residents are known. The description
    // carries the planted signal: location name, resident object names, and
    // the region token.
    c.reindex();
    for (auto& loc : c.locations) {
        std::string objs;
        for (std::size_t i = 0; i < loc.resident_objects.size(); ++i) {
            const auto& o = c.objects[c.obj_index.at(loc.resident_objects[i])];
            if (i) objs += (i + 1 == loc.resident_objects.size()) ? " and " : ", ";
            objs += "the " + o.name;
        }
        std::string region = loc.description; // placed there above
        loc.description = "the " + loc.name + ". you see " + objs + " here. " +
                          "this is the " + region.substr(7) + " quarter.";
    }

    // Characters: unique adjective+base names, homes dealt round robin so
    // every location hosts someone. Persona embeds the home location name and
    // its first two resident objects, which is the retrieval signal.
    {
        Rng rng = root.fork("characters");
        std::set<std::string> used;
        std::vector<std::size_t> home_order(std::size_t(cfg.num_characters));
        for (std::size_t i = 0; i < home_order.size(); ++i)
            home_order[i] = i % std::size_t(cfg.num_locations);
        rng.shuffle(home_order);
        for (int i = 0; i < cfg.num_characters; ++i) {
            std::string name;
            for (int tries = 0; tries < 256; ++tries) {
                std::string cand =
                    character_adjectives()[rng.below(character_adjectives().size())] +
                    " " + character_bases()[rng.below(character_bases().size())];
                if (!used.count(cand)) {
                    name = cand;
                    break;
                }
            }
            if (name.empty())
                throw CorpusError("character name inventory exhausted");
            used.insert(name);
            const Location& home = c.locations[home_order[std::size_t(i)]];
            std::string sig;
            for (std::size_t k = 0; k < home.resident_objects.size() && k < 2; ++k) {
                const auto& o = c.objects[c.obj_index.at(home.resident_objects[k])];
                sig += (k ? " and the " : "the ") + o.name;
            }
            Character ch;
            ch.id = "c" + zero_pad(i, 3);
            ch.name = name;
            ch.home_location_id = home.id;
            ch.persona = "i am the " + name + " of the " + home.name +
                         ". i keep " + sig + " close at hand.";
            c.characters.push_back(std::move(ch));
        }
    }
    c.reindex();

    // Quests: verb sampled with a Zipf skew over the lexicon, target entity
    // chosen so the timeline is locally executable once a world is aligned.
    {
        Rng rng = root.fork("quests");
        std::vector<double> zipf(cfg.verbs.size());
        for (std::size_t k = 0; k < zipf.size(); ++k)
            zipf[k] = 1.0 / std::pow(double(k + 1), cfg.zipf_s);
        int qid = 0;

        auto object_choices = [&](const Location& loc,
                                  auto&& pred) -> std::vector<const Object*> {
            std::vector<const Object*> out;
            for (const auto& oid : loc.resident_objects) {
                const Object& o = c.objects[c.obj_index.at(oid)];
                if (pred(o)) out.push_back(&o);
            }
            return out;
        };

        for (const auto& ch : c.characters) {
            const Location& home = c.locations[c.loc_index.at(ch.home_location_id)];
            for (int k = 0; k < cfg.quests_per_character; ++k) {
                const VerbEntry& verb = cfg.verbs[rng.pick_weighted(zipf)];
                const std::string& ev = verb.engine_verb;

                // Where does the target live: home or one of the gold
                // neighbors (forces a movement prefix in the timeline).
                bool far = rng.chance(cfg.neighbor_prob);
                const Location* scene = &home;
                if (far && !home.gold_neighbors.empty()) {
                    scene = &c.locations[c.loc_index.at(
                        home.gold_neighbors[rng.below(home.gold_neighbors.size())])];
                }

                auto needs = [&](const Object& o) {
                    if (ev == "wear" || ev == "remove") return o.props.wearable;
                    if (ev == "wield") return o.props.wieldable;
                    if (ev == "eat") return o.props.food;
                    if (ev == "drink") return o.props.drink;
                    return o.props.gettable;
                };

                std::string motivation, goal;
                std::vector<std::string> timeline;
                static const char* dirs[4] = {"north", "south", "east", "west"};
                std::string dir = dirs[rng.below(4)];
                auto add_move = [&] {
                    if (scene != &home) timeline.push_back("go " + dir);
                };

                if (ev == "hit" || ev == "hug" || ev == "follow") {
                    // Pick a co-character, preferring one whose home is nearby.
                    std::vector<const Character*> near, any;
                    for (const auto& other : c.characters) {
                        if (other.id == ch.id) continue;
                        any.push_back(&other);
                        if (other.home_location_id == scene->id) near.push_back(&other);
                    }
                    if (any.empty()) continue;
                    const Character* target =
                        near.empty() ? any[rng.below(any.size())]
                                     : near[rng.below(near.size())];
                    motivation = "your motivation is to " + verb.motivation_verb +
                                 " the " + target->name;
                    add_move();
                    goal = ev + " " + target->name;
                    timeline.push_back(goal);
                } else if (ev == "give") {
                    auto objs = object_choices(*scene, needs);
                    std::vector<const Character*> others;
                    for (const auto& other : c.characters)
                        if (other.id != ch.id) others.push_back(&other);
                    if (objs.empty() || others.empty()) continue;
                    const Object* o = objs[rng.below(objs.size())];
                    const Character* to = others[rng.below(others.size())];
                    motivation = "your motivation is to " + verb.motivation_verb +
                                 " the " + o->name + " to the " + to->name;
                    add_move();
                    if (rng.chance(cfg.fetch_prefix_prob))
                        timeline.push_back("get " + o->name);
                    goal = "give " + o->name + " to " + to->name;
                    timeline.push_back(goal);
                } else if (ev == "steal") {
                    auto objs = object_choices(*scene, needs);
                    std::vector<const Character*> others;
                    for (const auto& other : c.characters)
                        if (other.id != ch.id) others.push_back(&other);
                    if (objs.empty() || others.empty()) continue;
                    const Object* o = objs[rng.below(objs.size())];
                    const Character* from = others[rng.below(others.size())];
                    motivation = "your motivation is to " + verb.motivation_verb +
                                 " the " + o->name + " from the " + from->name;
                    add_move();
                    goal = "steal " + o->name + " from " + from->name;
                    timeline.push_back(goal);
                } else if (ev == "put") {
                    auto loose = object_choices(*scene, [&](const Object& o) {
                        return o.props.gettable;
                    });
                    auto fixtures = object_choices(*scene, [&](const Object& o) {
                        return o.props.container || o.props.surface;
                    });
                    if (loose.empty() || fixtures.empty()) continue;
                    const Object* o = loose[rng.below(loose.size())];
                    const Object* f = fixtures[rng.below(fixtures.size())];
                    std::string prep = f->props.container ? "in" : "on";
                    motivation = "your motivation is to " + verb.motivation_verb +
                                 " the " + o->name + " " + prep + " the " + f->name;
                    add_move();
                    if (rng.chance(cfg.fetch_prefix_prob))
                        timeline.push_back("get " + o->name);
                    goal = "put " + o->name + " " + prep + " " + f->name;
                    timeline.push_back(goal);
                } else {
                    auto objs = object_choices(*scene, needs);
                    if (objs.empty()) {
                        // This location lacks a compatible object; fall back
                        // to any compatible object in the corpus.
                        for (const auto& o : c.objects)
                            if (needs(o)) objs.push_back(&o);
                    }
                    if (objs.empty()) continue;
                    const Object* o = objs[rng.below(objs.size())];
                    motivation = "your motivation is to " + verb.motivation_verb +
                                 " the " + o->name;
                    add_move();
                    if ((ev == "wear" || ev == "wield" || ev == "eat" ||
                         ev == "drink") &&
                        rng.chance(cfg.fetch_prefix_prob))
                        timeline.push_back("get " + o->name);
                    goal = ev + " " + o->name;
                    timeline.push_back(goal);
                }

                QuestRecord q;
                q.id = "q" + zero_pad(qid++, 4);
                q.character_id = ch.id;
                q.location_id = home.id; // quests start at the protagonist's home
                q.short_motivation = motivation;
                q.goal_action = goal;
                q.timeline = std::move(timeline);
                c.quests.push_back(std::move(q));
            }
        }
    }
    c.reindex();

    // Demonstrations for a subset of quests: scripted dialogue around the
    // timeline. For get and steal quests we sometimes show the partner
    // handing the goal object over after a spoken request; that pattern is
    // what the partner model learns to imitate.
    {
        Rng rng = root.fork("demos");
        static const char* openers[3] = {"greetings friend", "well met stranger",
                                         "hail traveler"};
        static const char* partner_greets[2] = {"what do you seek",
                                                "speak your purpose"};
        static const char* thanks[2] = {"thank you kindly", "many thanks friend"};
        static const char* closers[2] = {"farewell now", "until we meet again"};
        static const char* partner_closers[2] = {"farewell then", "good luck to you"};
        int did = 0;
        for (const auto& q : c.quests) {
            if (!rng.chance(cfg.demo_fraction)) continue;
            const Character& ch = c.characters[c.char_index.at(q.character_id)];
            Demonstration d;
            d.id = "d" + zero_pad(did++, 4);
            d.quest_id = q.id;
            auto say = [&](const char* actor, std::string text) {
                d.turns.push_back({actor, "say", std::move(text)});
            };
            auto act = [&](const char* actor, std::string text) {
                d.turns.push_back({actor, "act", std::move(text)});
            };
            say("self", openers[rng.below(3)]);
            say("partner", partner_greets[rng.below(2)]);
            std::string restate = q.short_motivation;
            // "your motivation is to X" restated in first person.
            if (restate.rfind("your motivation is to ", 0) == 0)
                restate = "i must " + restate.substr(22);
            say("self", restate);

            std::string goal_verb = tokenize(q.goal_action).empty()
                                        ? ""
                                        : tokenize(q.goal_action)[0];
            bool planted = false;
            if ((goal_verb == "get" || goal_verb == "steal") &&
                rng.chance(cfg.assist_plant_prob)) {
                auto toks = tokenize(q.goal_action);
                // Object name is everything after the verb, before "from".
                std::vector<std::string> obj_toks;
                for (std::size_t i = 1; i < toks.size(); ++i) {
                    if (toks[i] == "from") break;
                    obj_toks.push_back(toks[i]);
                }
                std::string obj = join_tokens(obj_toks);
                say("self", "please give me the " + obj);
                act("partner", "give " + obj + " to " + ch.name);
                planted = true;
            }
            if (!planted)
                for (const auto& step : q.timeline) act("self", step);
            say("self", thanks[rng.below(2)]);
            say("self", closers[rng.below(2)]);
            say("partner", partner_closers[rng.below(2)]);
            d.split = q.split;
            c.demos.push_back(std::move(d));
        }
    }

    split_corpus(c, cfg.train_ratio, cfg.valid_ratio, cfg.test_ratio,
                 hash_mix(cfg.seed, fnv1a64("split")));

    c.meta = {{"schema", "questforge.corpus.v1"},
              {"generator", "synthesize_corpus"},
              {"seed", cfg.seed},
              {"config", cfg.to_json()}};
    c.reindex();
    validate_corpus(c);
    return c;
}

} // namespace questforge::corpus
