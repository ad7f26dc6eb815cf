#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "questforge/manifest.hpp"
#include "questforge/metrics.hpp"
#include "questforge/rng.hpp"
#include "questforge/text.hpp"

using namespace questforge;

TEST_CASE("rng streams are deterministic and independent") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

    Rng parent(7);
    Rng c1 = parent.fork("one");
    Rng c2 = parent.fork("two");
    REQUIRE(c1.next_u64() != c2.next_u64());
    // Forking does not advance the parent.
    Rng p2(7);
    (void)p2.fork("one");
    Rng q(7);
    REQUIRE(p2.next_u64() == q.next_u64());
}

TEST_CASE("rng below stays in range and covers it") {
    Rng r(3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        auto v = r.below(7);
        REQUIRE(v < 7);
        seen.insert(v);
    }
    REQUIRE(seen.size() == 7);
}

TEST_CASE("uniform01 lands in [0,1) with a sane mean") {
    Rng r(11);
    double sum = 0;
    for (int i = 0; i < 10000; ++i) {
        double u = r.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    REQUIRE(sum / 10000 == Catch::Approx(0.5).margin(0.02));
}

TEST_CASE("shuffle is a permutation") {
    Rng r(5);
    std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
    auto sorted = v;
    r.shuffle(v);
    auto copy = v;
    std::sort(copy.begin(), copy.end());
    REQUIRE(copy == sorted);
}

TEST_CASE("tokenizer lowercases and splits on punctuation") {
    auto t = tokenize("The Knight's sword, and 3 coins!");
    REQUIRE(t == std::vector<std::string>{"the", "knight", "s", "sword", "and",
                                          "3", "coins"});
    REQUIRE(normalize_text("  Get   the SWORD. ") == "get the sword");
}

TEST_CASE("lemma table maps irregular forms only") {
    REQUIRE(lemma("stole") == "steal");
    REQUIRE(lemma("gave") == "give");
    REQUIRE(lemma("running") == "running");
}

TEST_CASE("ngrams slide over tokens") {
    auto t = tokenize("go east then go west");
    auto bi = ngrams(t, 2);
    REQUIRE(bi.size() == 4);
    REQUIRE(bi[0] == "go east");
    REQUIRE(ngrams(t, 6).empty());
}

TEST_CASE("f1 metric works on the worked example") {
    // candidate "get sword" vs reference "get the sword": precision 1,
    // recall 2/3, harmonic mean 0.8.
    auto s = metrics::f1_bleu_rouge("get sword", "get the sword");
    REQUIRE(s.bleu1 == Catch::Approx(1.0));
    REQUIRE(s.rouge1 == Catch::Approx(2.0 / 3.0));
    REQUIRE(s.f1 == Catch::Approx(0.8));

    auto zero = metrics::f1_bleu_rouge("apple pie", "iron sword");
    REQUIRE(zero.f1 == 0.0);

    // Clipping: repeating a matched token cannot inflate precision mass.
    auto clipped = metrics::f1_bleu_rouge("sword sword sword", "the sword");
    REQUIRE(clipped.bleu1 == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("sha1 and git blob hash match known vectors") {
    REQUIRE(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    REQUIRE(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
    // git hash-object on an empty file.
    REQUIRE(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    // echo 'hello' | git hash-object --stdin
    REQUIRE(git_blob_hash("hello\n") ==
            "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("artifact manifests round-trip and verify") {
    auto dir = std::filesystem::temp_directory_path() / "qf_manifest_test";
    std::filesystem::create_directories(dir);
    auto path = (dir / "data.jsonl").string();
    Manifest m = write_artifact(path, "{\"x\":1}\n", "test cmd", "k=v", 9);
    REQUIRE(m.content_bytes == 8);
    REQUIRE(verify_artifact(path));
    // Tampering breaks verification.
    write_file_or_throw(path, "{\"x\":2}\n");
    REQUIRE_FALSE(verify_artifact(path));
    std::filesystem::remove_all(dir);
}

TEST_CASE("motivation verb extraction handles templates and free text") {
    // Shared convention: token after "to" in templated motivations.
    REQUIRE(extract_first_verb("your motivation is to steal the gem",
                               {"steal", "get"}) == "steal");
    REQUIRE(extract_first_verb("the knight stole a gem", {"steal"}) == "steal");
    REQUIRE(extract_first_verb("nothing here", {"steal"}).empty());
}
