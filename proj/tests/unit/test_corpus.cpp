#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "questforge/corpus.hpp"
#include "questforge/engine.hpp"

using namespace questforge;
using corpus::Corpus;
using corpus::SynthConfig;

namespace {

SynthConfig small_config(std::uint64_t seed = 1) {
    SynthConfig cfg;
    cfg.num_characters = 24;
    cfg.num_locations = 8;
    cfg.num_objects = 36;
    cfg.quests_per_character = 2;
    cfg.seed = seed;
    return cfg;
}

// Independent oracle for the planted retrieval signal: distinct shared
// content tokens between a persona and a location description.
int content_overlap(const std::string& a, const std::string& b) {
    auto ta = content_tokens(a);
    auto tb = content_tokens(b);
    std::set<std::string> sa(ta.begin(), ta.end());
    std::set<std::string> sb(tb.begin(), tb.end());
    int n = 0;
    for (const auto& t : sa)
        if (sb.count(t)) ++n;
    return n;
}

} // namespace

TEST_CASE("synthesis is deterministic per seed") {
    Corpus a = corpus::synthesize_corpus(small_config(7));
    Corpus b = corpus::synthesize_corpus(small_config(7));
    Corpus c = corpus::synthesize_corpus(small_config(8));
    REQUIRE(corpus::corpus_to_jsonl(a, "quests") ==
            corpus::corpus_to_jsonl(b, "quests"));
    REQUIRE(corpus::corpus_to_jsonl(a, "characters") ==
            corpus::corpus_to_jsonl(b, "characters"));
    REQUIRE(corpus::corpus_to_jsonl(a, "quests") !=
            corpus::corpus_to_jsonl(c, "quests"));
}

TEST_CASE("synthesized corpus passes structural validation") {
    Corpus c = corpus::synthesize_corpus(small_config());
    REQUIRE_NOTHROW(corpus::validate_corpus(c));
    REQUIRE(int(c.characters.size()) == 24);
    REQUIRE(int(c.locations.size()) == 8);
    REQUIRE(int(c.objects.size()) == 36);
    REQUIRE(!c.quests.empty());
    REQUIRE(!c.demos.empty());

    // Entity names are unique within each kind.
    std::set<std::string> names;
    for (const auto& o : c.objects) REQUIRE(names.insert(o.name).second);
    names.clear();
    for (const auto& ch : c.characters) REQUIRE(names.insert(ch.name).second);
    names.clear();
    for (const auto& l : c.locations) REQUIRE(names.insert(l.name).second);
}

TEST_CASE("every location hosts three to six objects and a fixture") {
    Corpus c = corpus::synthesize_corpus(small_config());
    for (const auto& loc : c.locations) {
        REQUIRE(loc.resident_objects.size() >= 3);
        REQUIRE(loc.resident_objects.size() <= 6);
        bool has_fixture = false;
        for (const auto& oid : loc.resident_objects) {
            const auto& o = c.objects[c.obj_index.at(oid)];
            if (o.props.container || o.props.surface) has_fixture = true;
        }
        REQUIRE(has_fixture);
        REQUIRE(loc.gold_neighbors.size() == 4);
    }
}

TEST_CASE("planted co-occurrence puts the home location first") {
    Corpus c = corpus::synthesize_corpus(small_config());
    for (const auto& ch : c.characters) {
        int home_overlap = 0, best_other = 0;
        for (const auto& loc : c.locations) {
            int ov = content_overlap(ch.persona, loc.description);
            if (loc.id == ch.home_location_id)
                home_overlap = ov;
            else
                best_other = std::max(best_other, ov);
        }
        INFO("character " << ch.id << " persona: " << ch.persona);
        REQUIRE(home_overlap > best_other);
    }
}

TEST_CASE("quest timelines end with the goal and average near two actions") {
    Corpus c = corpus::synthesize_corpus(small_config());
    double total = 0;
    for (const auto& q : c.quests) {
        REQUIRE(!q.timeline.empty());
        REQUIRE(normalize_text(q.timeline.back()) ==
                normalize_text(q.goal_action));
        total += double(q.timeline.size());
    }
    double mean = total / double(c.quests.size());
    REQUIRE(mean >= 1.5);
    REQUIRE(mean <= 3.0);
}

TEST_CASE("quest verb histogram is skewed by the zipf draw") {
    Corpus c = corpus::synthesize_corpus(small_config());
    auto stats = corpus::corpus_stats(c);
    int max_count = 0, min_count = 1 << 30;
    for (const auto& [verb, n] : stats.quest_verb_histogram) {
        max_count = std::max(max_count, n);
        min_count = std::min(min_count, n);
    }
    REQUIRE(stats.quest_verb_histogram.size() >= 4);
    REQUIRE(max_count >= 3 * std::max(1, min_count));
}

TEST_CASE("demo act turns parse under the engine grammar") {
    Corpus c = corpus::synthesize_corpus(small_config());
    REQUIRE_NOTHROW(engine::validate_demo_grammar(c));
    // Demo say turns carry a few utterances for both actors.
    auto stats = corpus::corpus_stats(c);
    REQUIRE(stats.mean_demo_self_say_turns >= 3.0);
    REQUIRE(stats.mean_demo_say_turns >= stats.mean_demo_self_say_turns);
}

TEST_CASE("splits are exact, exhaustive and seed-dependent") {
    Corpus c = corpus::synthesize_corpus(small_config());
    corpus::split_corpus(c, 0.8, 0.1, 0.1, 99);
    auto stats = corpus::corpus_stats(c);
    auto qs = stats.splits.at("quests");
    int total = int(c.quests.size());
    REQUIRE(qs[0] + qs[1] + qs[2] == total);
    // Largest-remainder apportionment: exact to within one record.
    REQUIRE(std::abs(qs[0] - int(std::round(total * 0.8))) <= 1);
    REQUIRE(std::abs(qs[1] - int(std::round(total * 0.1))) <= 1);

    // Demos follow their quest's split.
    for (const auto& d : c.demos)
        REQUIRE(d.split == c.quest(d.quest_id).split);

    // Different seed, same sizes, different membership.
    Corpus c2 = corpus::synthesize_corpus(small_config());
    corpus::split_corpus(c2, 0.8, 0.1, 0.1, 100);
    bool any_diff = false;
    for (std::size_t i = 0; i < c.quests.size(); ++i)
        if (c.quests[i].split != c2.quests[i].split) any_diff = true;
    REQUIRE(any_diff);
}

TEST_CASE("apportionment on 100 records with 80/10/10 ratios is exact") {
    auto counts = corpus::apportion(100, 0.8, 0.1, 0.1);
    REQUIRE(counts[0] == 80);
    REQUIRE(counts[1] == 10);
    REQUIRE(counts[2] == 10);
}

TEST_CASE("corpus round-trips through jsonl files") {
    Corpus c = corpus::synthesize_corpus(small_config());
    auto dir = std::filesystem::temp_directory_path() / "qf_corpus_roundtrip";
    std::filesystem::remove_all(dir);
    corpus::save_corpus(c, dir.string());
    Corpus back = corpus::load_corpus(dir.string());
    REQUIRE_NOTHROW(corpus::validate_corpus(back));
    for (const auto& kind : {"characters", "locations", "objects", "quests", "demos"})
        REQUIRE(corpus::corpus_to_jsonl(c, kind) ==
                corpus::corpus_to_jsonl(back, kind));
    std::filesystem::remove_all(dir);
}

TEST_CASE("loader reports the offending file and line") {
    auto dir = std::filesystem::temp_directory_path() / "qf_corpus_badline";
    std::filesystem::remove_all(dir);
    Corpus c = corpus::synthesize_corpus(small_config());
    corpus::save_corpus(c, dir.string());
    {
        std::ofstream bad(dir / "quests.jsonl", std::ios::app);
        bad << "{not json}\n";
    }
    try {
        corpus::load_corpus(dir.string());
        FAIL("expected CorpusError");
    } catch (const corpus::CorpusError& e) {
        std::string what = e.what();
        REQUIRE(what.find("quests.jsonl") != std::string::npos);
        // The bad line is the last one.
        REQUIRE(what.find(std::to_string(int(c.quests.size()) + 1)) !=
                std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("validation catches broken references and timeline shape") {
    Corpus c = corpus::synthesize_corpus(small_config());
    SECTION("dangling character id") {
        c.quests[0].character_id = "c999";
        REQUIRE_THROWS_AS(corpus::validate_corpus(c), corpus::CorpusError);
    }
    SECTION("goal not final timeline entry") {
        c.quests[0].goal_action = "hug the moon";
        REQUIRE_THROWS_AS(corpus::validate_corpus(c), corpus::CorpusError);
    }
    SECTION("empty timeline") {
        c.quests[0].timeline.clear();
        REQUIRE_THROWS_AS(corpus::validate_corpus(c), corpus::CorpusError);
    }
}

TEST_CASE("verb map harvest recovers the synthesis lexicon") {
    Corpus c = corpus::synthesize_corpus(small_config());
    auto vm = corpus::harvest_verb_map(c);
    // Spot-check the high-frequency mappings from the default lexicon.
    REQUIRE(vm.at("acquire") == "get");
    REQUIRE(vm.count("fetch"));
    REQUIRE(vm.at("fetch") == "get");
}

TEST_CASE("split sizes reported for an ingested light-shaped export") {
    // Build a minimal export with the published split sizes and check the
    // stats report echoes them.
    Corpus c = corpus::synthesize_corpus(small_config());
    auto dir = std::filesystem::temp_directory_path() / "qf_corpus_ingest";
    std::filesystem::remove_all(dir);
    corpus::save_corpus(c, dir.string());
    {
        std::ofstream qs(dir / "quests.jsonl", std::ios::trunc);
        int id = 0;
        auto emit = [&](int n, const char* split) {
            for (int i = 0; i < n; ++i) {
                nlohmann::json j = {
                    {"id", "q" + std::to_string(id++)},
                    {"character_id", c.characters[0].id},
                    {"location_id", c.locations[0].id},
                    {"short_motivation", "your motivation is to acquire the rope"},
                    {"goal_action", "get rope"},
                    {"timeline", {"get rope"}},
                    {"split", split}};
                qs << j.dump() << "\n";
            }
        };
        emit(5982, "train");
        emit(756, "valid");
        emit(748, "test");
        std::ofstream(dir / "demos.jsonl", std::ios::trunc) << "";
    }
    Corpus big = corpus::load_corpus(dir.string());
    auto stats = corpus::corpus_stats(big);
    REQUIRE(stats.splits.at("quests")[0] == 5982);
    REQUIRE(stats.splits.at("quests")[1] == 756);
    REQUIRE(stats.splits.at("quests")[2] == 748);
    std::filesystem::remove_all(dir);
}
