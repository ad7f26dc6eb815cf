#pragma once

// Bag-of-words embedding rankers trained with a margin hinge loss and plain
// SGD. Two wirings: a single shared embedding table scoring context against
// candidate in the same space, and a two-table variant where context and
// candidate get separate encoders. Texts embed as the mean of their token
// vectors; out-of-vocabulary tokens share a reserved bucket.
//
// hinge_loss_and_grad is exposed on its own so tests can finite-difference
// the gradients.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "questforge/mat.hpp"
#include "questforge/metrics.hpp"
#include "questforge/rng.hpp"
#include "questforge/text.hpp"

namespace questforge::rankers {

using nlohmann::json;

struct Candidate {
    std::string id;
    std::string text;
};

struct RankExample {
    std::string context;
    std::string gold_id; // id within the candidate pool
};

struct RankerConfig {
    int dim = 64;
    bool shared_table = true; // one table for both sides vs separate encoders
    int negatives = 15;
    double margin = 1.0;
    double lr = 0.05;
    int epochs = 20;
    double init_scale = 0.1;
    std::uint64_t seed = 1;

    json to_json() const {
        return {{"dim", dim},           {"shared_table", shared_table},
                {"negatives", negatives}, {"margin", margin},
                {"lr", lr},             {"epochs", epochs},
                {"init_scale", init_scale}, {"seed", seed}};
    }
    static RankerConfig from_json(const json& j) {
        RankerConfig c;
        c.dim = j.at("dim").get<int>();
        c.shared_table = j.at("shared_table").get<bool>();
        c.negatives = j.at("negatives").get<int>();
        c.margin = j.at("margin").get<double>();
        c.lr = j.at("lr").get<double>();
        c.epochs = j.at("epochs").get<int>();
        c.init_scale = j.at("init_scale").get<double>();
        c.seed = j.at("seed").get<std::uint64_t>();
        return c;
    }
};

class RankerModel {
public:
    RankerConfig config;
    std::vector<std::string> vocab; // index 0 is the <oov> bucket
    std::map<std::string, int> vocab_index;
    Mat ctx_table;
    Mat cand_table; // unused (empty) when config.shared_table

    const Mat& candidate_table() const {
        return config.shared_table ? ctx_table : cand_table;
    }
    Mat& candidate_table() { return config.shared_table ? ctx_table : cand_table; }

    int token_id(const std::string& tok) const {
        auto it = vocab_index.find(tok);
        return it == vocab_index.end() ? 0 : it->second;
    }

    std::vector<int> token_ids(const std::string& text) const {
        std::vector<int> out;
        for (const auto& t : tokenize(text)) out.push_back(token_id(t));
        return out;
    }

    // Mean-pooled embedding; empty text embeds to the zero vector.
    std::vector<double> embed(const std::vector<int>& ids, const Mat& table) const {
        std::vector<double> v(std::size_t(config.dim), 0.0);
        if (ids.empty()) return v;
        for (int id : ids) {
            const double* row = table.row(id);
            for (int c = 0; c < config.dim; ++c) v[std::size_t(c)] += row[c];
        }
        for (auto& x : v) x /= double(ids.size());
        return v;
    }

    double score(const std::string& context, const std::string& candidate) const {
        auto cv = embed(token_ids(context), ctx_table);
        auto gv = embed(token_ids(candidate), candidate_table());
        return dot(cv, gv);
    }

    json to_json() const {
        return {{"schema", "questforge.ranker.v1"},
                {"config", config.to_json()},
                {"vocab", vocab},
                {"ctx_table", ctx_table.a},
                {"cand_table", cand_table.a}};
    }

    static RankerModel from_json(const json& j) {
        if (j.at("schema").get<std::string>() != "questforge.ranker.v1")
            throw std::runtime_error("unsupported ranker checkpoint schema");
        RankerModel m;
        m.config = RankerConfig::from_json(j.at("config"));
        m.vocab = j.at("vocab").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < m.vocab.size(); ++i)
            m.vocab_index[m.vocab[i]] = int(i);
        m.ctx_table = Mat(int(m.vocab.size()), m.config.dim);
        m.ctx_table.a = j.at("ctx_table").get<std::vector<double>>();
        auto cand = j.at("cand_table").get<std::vector<double>>();
        if (!cand.empty()) {
            m.cand_table = Mat(int(m.vocab.size()), m.config.dim);
            m.cand_table.a = std::move(cand);
        }
        return m;
    }
};

inline std::vector<std::string> build_vocab(const std::vector<std::string>& texts) {
    std::set<std::string> seen;
    for (const auto& t : texts)
        for (const auto& tok : tokenize(t)) seen.insert(tok);
    std::vector<std::string> vocab = {"<oov>"};
    vocab.insert(vocab.end(), seen.begin(), seen.end());
    return vocab;
}

// Margin hinge loss over one example: sum over negatives of
// max(0, margin - s(ctx, gold) + s(ctx, neg)), with exact gradients for both
// tables. Gradients land in dense mats shaped like the tables.
struct HingeGrad {
    double loss = 0.0;
    Mat d_ctx;
    Mat d_cand; // meaningful only for two-table models
};

inline HingeGrad hinge_loss_and_grad(const RankerModel& m,
                                     const std::string& context,
                                     const std::string& gold,
                                     const std::vector<std::string>& negatives) {
    HingeGrad out;
    out.d_ctx = Mat(m.ctx_table.rows, m.ctx_table.cols);
    if (!m.config.shared_table) out.d_cand = Mat(m.ctx_table.rows, m.ctx_table.cols);
    Mat& d_cand = m.config.shared_table ? out.d_ctx : out.d_cand;
    const Mat& cand_table = m.candidate_table();

    auto ctx_ids = m.token_ids(context);
    auto gold_ids = m.token_ids(gold);
    auto ctx_vec = m.embed(ctx_ids, m.ctx_table);
    auto gold_vec = m.embed(gold_ids, cand_table);
    double s_gold = dot(ctx_vec, gold_vec);

    // Accumulated coefficient on d(s_gold) and the candidate-side pulls.
    double active = 0.0;
    std::vector<double> ctx_pull(std::size_t(m.config.dim), 0.0);
    for (const auto& neg : negatives) {
        auto neg_ids = m.token_ids(neg);
        auto neg_vec = m.embed(neg_ids, cand_table);
        double s_neg = dot(ctx_vec, neg_vec);
        double h = m.config.margin - s_gold + s_neg;
        if (h <= 0) continue;
        out.loss += h;
        active += 1.0;
        // d loss / d ctx_vec += neg_vec (from +s_neg term)
        for (int c = 0; c < m.config.dim; ++c)
            ctx_pull[std::size_t(c)] += neg_vec[std::size_t(c)];
        // d loss / d neg rows += ctx_vec / |neg|
        if (!neg_ids.empty()) {
            double inv = 1.0 / double(neg_ids.size());
            for (int id : neg_ids)
                for (int c = 0; c < m.config.dim; ++c)
                    d_cand.at(id, c) += ctx_vec[std::size_t(c)] * inv;
        }
    }
    if (active == 0.0) return out;

    // d loss / d ctx_vec -= active * gold_vec (from -s_gold term).
    for (int c = 0; c < m.config.dim; ++c)
        ctx_pull[std::size_t(c)] -= active * gold_vec[std::size_t(c)];
    if (!ctx_ids.empty()) {
        double inv = 1.0 / double(ctx_ids.size());
        for (int id : ctx_ids)
            for (int c = 0; c < m.config.dim; ++c)
                out.d_ctx.at(id, c) += ctx_pull[std::size_t(c)] * inv;
    }
    // d loss / d gold rows -= active * ctx_vec / |gold|.
    if (!gold_ids.empty()) {
        double inv = active / double(gold_ids.size());
        for (int id : gold_ids)
            for (int c = 0; c < m.config.dim; ++c)
                d_cand.at(id, c) -= ctx_vec[std::size_t(c)] * inv;
    }
    return out;
}

struct TrainStats {
    std::vector<double> epoch_loss; // mean per-example hinge loss
};

// SGD training. Negatives are resampled uniformly from the candidate pool
// every epoch; iteration order reshuffles per epoch. Fully deterministic in
// (examples, pool, config.seed).
inline RankerModel train_ranker(const std::vector<RankExample>& examples,
                                const std::vector<Candidate>& pool,
                                const RankerConfig& config,
                                TrainStats* stats = nullptr) {
    if (pool.empty()) throw std::runtime_error("empty candidate pool");
    std::map<std::string, const Candidate*> by_id;
    for (const auto& c : pool) by_id[c.id] = &c;

    RankerModel m;
    m.config = config;
    std::vector<std::string> texts;
    for (const auto& e : examples) texts.push_back(e.context);
    for (const auto& c : pool) texts.push_back(c.text);
    m.vocab = build_vocab(texts);
    for (std::size_t i = 0; i < m.vocab.size(); ++i)
        m.vocab_index[m.vocab[i]] = int(i);

    Rng root(config.seed);
    Rng init = root.fork("init");
    m.ctx_table = Mat(int(m.vocab.size()), config.dim);
    m.ctx_table.fill_uniform(init, config.init_scale);
    if (!config.shared_table) {
        m.cand_table = Mat(int(m.vocab.size()), config.dim);
        m.cand_table.fill_uniform(init, config.init_scale);
    }

    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        Rng erng = root.fork(std::uint64_t(epoch) + 1);
        erng.shuffle(order);
        double total = 0;
        for (std::size_t oi = 0; oi < order.size(); ++oi) {
            const RankExample& ex = examples[order[oi]];
            auto it = by_id.find(ex.gold_id);
            if (it == by_id.end())
                throw std::runtime_error("gold id not in candidate pool: " +
                                         ex.gold_id);
            const std::string& gold_text = it->second->text;
            std::vector<std::string> negs;
            for (int n = 0; n < config.negatives && int(pool.size()) > 1; ++n) {
                for (int tries = 0; tries < 64; ++tries) {
                    const Candidate& cand = pool[erng.below(pool.size())];
                    if (cand.id != ex.gold_id) {
                        negs.push_back(cand.text);
                        break;
                    }
                }
            }
            HingeGrad g = hinge_loss_and_grad(m, ex.context, gold_text, negs);
            total += g.loss;
            if (g.loss > 0) {
                for (std::size_t i = 0; i < m.ctx_table.a.size(); ++i)
                    m.ctx_table.a[i] -= config.lr * g.d_ctx.a[i];
                if (!config.shared_table)
                    for (std::size_t i = 0; i < m.cand_table.a.size(); ++i)
                        m.cand_table.a[i] -= config.lr * g.d_cand.a[i];
            }
        }
        if (stats)
            stats->epoch_loss.push_back(
                examples.empty() ? 0.0 : total / double(examples.size()));
    }
    return m;
}

// Candidate indices sorted by score descending; equal scores break by
// candidate id ascending so rankings are stable across platforms.
inline std::vector<std::size_t> rank(const RankerModel& m, const std::string& context,
                                     const std::vector<Candidate>& candidates) {
    auto ctx_vec = m.embed(m.token_ids(context), m.ctx_table);
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto cv = m.embed(m.token_ids(candidates[i].text), m.candidate_table());
        scored.emplace_back(dot(ctx_vec, cv), i);
    }
    std::sort(scored.begin(), scored.end(),
              [&](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first > b.first;
                  return candidates[a.second].id < candidates[b.second].id;
              });
    std::vector<std::size_t> out;
    out.reserve(scored.size());
    for (const auto& [s, i] : scored) out.push_back(i);
    return out;
}

struct RankerEval {
    double hits_at_k = 0.0;
    double mean_f1 = 0.0; // top-1 text against gold text
    int n = 0;
};

inline RankerEval eval_ranker(const RankerModel& m,
                              const std::vector<RankExample>& testset,
                              const std::vector<Candidate>& candidates, int k) {
    RankerEval ev;
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < candidates.size(); ++i) pos[candidates[i].id] = i;
    for (const auto& ex : testset) {
        auto it = pos.find(ex.gold_id);
        if (it == pos.end()) continue;
        auto order = rank(m, ex.context, candidates);
        std::size_t gold_pos = it->second;
        for (int i = 0; i < k && i < int(order.size()); ++i)
            if (order[std::size_t(i)] == gold_pos) {
                ev.hits_at_k += 1;
                break;
            }
        ev.mean_f1 += metrics::f1_bleu_rouge(candidates[order[0]].text,
                                             candidates[gold_pos].text)
                          .f1;
        ev.n += 1;
    }
    if (ev.n > 0) {
        ev.hits_at_k /= double(ev.n);
        ev.mean_f1 /= double(ev.n);
    }
    return ev;
}

} // namespace questforge::rankers
