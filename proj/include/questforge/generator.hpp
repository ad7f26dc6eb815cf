#pragma once

// Conditional text generators for motivations and goal action sequences.
//
// The language model is an order-3 back-off n-gram with Witten-Bell
// interpolation weights. The base distribution blends an add-alpha unigram
// with context-to-target co-occurrence counts, which is what makes the model
// conditional: tokens that co-occur with the prompt get extra mass. Decoding
// never free-runs; it follows template skeletons harvested from the training
// targets (entity mentions abstracted to typed slots) and fills slots from
// the n-gram distribution restricted to compatible entities, so every output
// parses under the game grammar by construction.
//
// Action sequences are trained and decoded as single token streams with the
// literal token "then" separating actions.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "questforge/corpus.hpp"
#include "questforge/engine.hpp"
#include "questforge/metrics.hpp"
#include "questforge/rng.hpp"
#include "questforge/text.hpp"

namespace questforge::gen {

using metrics::F1Score;
using metrics::f1_bleu_rouge;
using nlohmann::json;

struct GenExample {
    std::string context;
    std::string target;
};

struct GenConfig {
    int order = 3;
    double alpha = 0.1;     // add-alpha unigram smoothing
    double ctx_blend = 0.7; // weight of co-occurrence mass in the base dist
    int max_tokens = 32;
    double temperature = 1.0; // 0 picks the argmax everywhere
    int retries = 8;
    int max_actions = 5;
    std::uint64_t seed = 1;

    json to_json() const {
        return {{"order", order},       {"alpha", alpha},
                {"ctx_blend", ctx_blend}, {"max_tokens", max_tokens},
                {"temperature", temperature}, {"retries", retries},
                {"max_actions", max_actions}, {"seed", seed}};
    }
    static GenConfig from_json(const json& j) {
        GenConfig c;
        c.order = j.at("order").get<int>();
        c.alpha = j.at("alpha").get<double>();
        c.ctx_blend = j.at("ctx_blend").get<double>();
        c.max_tokens = j.at("max_tokens").get<int>();
        c.temperature = j.at("temperature").get<double>();
        c.retries = j.at("retries").get<int>();
        c.max_actions = j.at("max_actions").get<int>();
        c.seed = j.at("seed").get<std::uint64_t>();
        return c;
    }
};

// Entities the decoder may place into slots, with the properties the goal
// templates filter on.
struct EntityInfo {
    std::string name; // normalized
    std::string kind; // "object" | "character"
    corpus::ObjectProps props;
};

struct Shape {
    std::vector<std::string> tokens; // literal tokens and slot markers
    double count = 0;
};

// Slot markers never collide with real tokens: the tokenizer cannot produce
// '<' or ':'.
inline const std::string kSlotObject = "<ent:object>";
inline const std::string kSlotChar = "<ent:character>";
inline const std::string kSlotDir = "<dir>";

namespace detail {

struct CountCell {
    double total = 0;
    std::map<int, double> next;
};

} // namespace detail

struct GenerationResult {
    bool ok = false;
    std::string text;                  // assembled surface form
    std::vector<std::string> actions;  // goal decode: one entry per action
    std::string error;                 // failure reason when !ok
};

class GenModel {
public:
    GenConfig config;
    std::vector<std::string> vocab; // [0]=<oov> [1]=<s> [2]=</s>
    std::map<std::string, int> vocab_index;
    std::vector<double> uni;                            // unigram counts
    double uni_total = 0;
    std::map<int, detail::CountCell> bi;                // prev -> next
    std::map<std::pair<int, int>, detail::CountCell> tri;
    std::map<int, detail::CountCell> cc;                // ctx token -> target token
    std::map<std::string, std::vector<Shape>> shapes;   // key verb -> skeletons
    std::map<std::string, std::string> verb_map;        // motivation verb -> engine verb
    std::vector<EntityInfo> entities;

    static constexpr int kOov = 0;
    static constexpr int kBos = 1;
    static constexpr int kEos = 2;

    int token_id(const std::string& t) const {
        auto it = vocab_index.find(t);
        return it == vocab_index.end() ? kOov : it->second;
    }

    // Prediction support: every vocab entry except <s>, which is never a
    // continuation. An untrained model is exactly uniform over this set.
    int support_size() const { return int(vocab.size()) - 1; }

    // Context signature: distinct content tokens of the prompt, restricted
    // to ids with co-occurrence counts.
    std::vector<int> context_signature(const std::string& context) const {
        std::set<int> ids;
        for (const auto& t : content_tokens(context)) {
            int id = token_id(t);
            if (id != kOov && cc.count(id)) ids.insert(id);
        }
        return {ids.begin(), ids.end()};
    }

    // p(w | h2 h1, X). Exactly normalized over the support for any history
    // and any context signature.
    double prob(int w, int h2, int h1, const std::vector<int>& sig) const {
        if (w == kBos) return 0.0;
        double p_base = base_prob(w, sig);
        double p2 = p_base;
        auto b = bi.find(h1);
        if (b != bi.end() && b->second.total > 0) {
            const auto& cell = b->second;
            double lam = cell.total / (cell.total + double(cell.next.size()));
            auto it = cell.next.find(w);
            double ml = (it == cell.next.end() ? 0.0 : it->second) / cell.total;
            p2 = lam * ml + (1.0 - lam) * p_base;
        }
        double p3 = p2;
        auto t = tri.find({h2, h1});
        if (t != tri.end() && t->second.total > 0) {
            const auto& cell = t->second;
            double lam = cell.total / (cell.total + double(cell.next.size()));
            auto it = cell.next.find(w);
            double ml = (it == cell.next.end() ? 0.0 : it->second) / cell.total;
            p3 = lam * ml + (1.0 - lam) * p2;
        }
        return p3;
    }

    double base_prob(int w, const std::vector<int>& sig) const {
        if (w == kBos) return 0.0;
        double S = double(support_size());
        double p_uni = (uni[std::size_t(w)] + config.alpha) /
                       (uni_total + config.alpha * S);
        if (sig.empty() || config.ctx_blend <= 0.0) return p_uni;
        double p_ctx = 0;
        for (int x : sig) {
            const auto& cell = cc.at(x);
            auto it = cell.next.find(w);
            p_ctx += (it == cell.next.end() ? 0.0 : it->second) / cell.total;
        }
        p_ctx /= double(sig.size());
        return (1.0 - config.ctx_blend) * p_uni + config.ctx_blend * p_ctx;
    }

    json to_json() const {
        auto cell_map_to_json = [](const auto& m, bool pair_key) {
            json arr = json::array();
            for (const auto& [key, cell] : m) {
                json entry;
                if constexpr (std::is_same_v<std::decay_t<decltype(key)>,
                                             std::pair<int, int>>) {
                    entry["h"] = {key.first, key.second};
                } else {
                    entry["h"] = {key};
                }
                json next = json::array();
                for (const auto& [w, c] : cell.next) next.push_back({w, c});
                entry["next"] = next;
                arr.push_back(entry);
            }
            (void)pair_key;
            return arr;
        };
        json shapes_j = json::object();
        for (const auto& [verb, list] : shapes) {
            json arr = json::array();
            for (const auto& s : list)
                arr.push_back({{"tokens", s.tokens}, {"count", s.count}});
            shapes_j[verb] = arr;
        }
        json ents = json::array();
        for (const auto& e : entities)
            ents.push_back({{"name", e.name},
                            {"kind", e.kind},
                            {"props", corpus::detail::props_to_json(e.props)}});
        return {{"schema", "questforge.generator.v1"},
                {"config", config.to_json()},
                {"vocab", vocab},
                {"uni", uni},
                {"bi", cell_map_to_json(bi, false)},
                {"tri", cell_map_to_json(tri, true)},
                {"cc", cell_map_to_json(cc, false)},
                {"shapes", shapes_j},
                {"verb_map", verb_map},
                {"entities", ents}};
    }

    static GenModel from_json(const json& j) {
        if (j.at("schema").get<std::string>() != "questforge.generator.v1")
            throw std::runtime_error("unsupported generator checkpoint schema");
        GenModel m;
        m.config = GenConfig::from_json(j.at("config"));
        m.vocab = j.at("vocab").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < m.vocab.size(); ++i)
            m.vocab_index[m.vocab[i]] = int(i);
        m.uni = j.at("uni").get<std::vector<double>>();
        m.uni_total = 0;
        for (double c : m.uni) m.uni_total += c;
        for (const auto& e : j.at("bi")) {
            auto& cell = m.bi[e.at("h")[0].get<int>()];
            for (const auto& nx : e.at("next")) {
                cell.next[nx[0].get<int>()] = nx[1].get<double>();
                cell.total += nx[1].get<double>();
            }
        }
        for (const auto& e : j.at("tri")) {
            auto& cell =
                m.tri[{e.at("h")[0].get<int>(), e.at("h")[1].get<int>()}];
            for (const auto& nx : e.at("next")) {
                cell.next[nx[0].get<int>()] = nx[1].get<double>();
                cell.total += nx[1].get<double>();
            }
        }
        for (const auto& e : j.at("cc")) {
            auto& cell = m.cc[e.at("h")[0].get<int>()];
            for (const auto& nx : e.at("next")) {
                cell.next[nx[0].get<int>()] = nx[1].get<double>();
                cell.total += nx[1].get<double>();
            }
        }
        for (const auto& [verb, arr] : j.at("shapes").items())
            for (const auto& sj : arr)
                m.shapes[verb].push_back(
                    {sj.at("tokens").get<std::vector<std::string>>(),
                     sj.at("count").get<double>()});
        m.verb_map =
            j.at("verb_map").get<std::map<std::string, std::string>>();
        for (const auto& ej : j.at("entities")) {
            EntityInfo e;
            e.name = ej.at("name").get<std::string>();
            e.kind = ej.at("kind").get<std::string>();
            e.props = corpus::detail::props_from_json(ej.at("props"));
            m.entities.push_back(std::move(e));
        }
        return m;
    }

    // Zero-count model over an explicit token inventory; the language model
    // is exactly uniform over support_size() outcomes.
    static GenModel untrained(const std::vector<std::string>& tokens,
                              GenConfig config = {}) {
        GenModel m;
        m.config = config;
        m.vocab = {"<oov>", "<s>", "</s>"};
        for (const auto& t : tokens) m.vocab.push_back(t);
        for (std::size_t i = 0; i < m.vocab.size(); ++i)
            m.vocab_index[m.vocab[i]] = int(i);
        m.uni.assign(m.vocab.size(), 0.0);
        return m;
    }
};

namespace detail {

// Replace entity name spans (longest match first) and direction tokens with
// typed slot markers.
inline std::vector<std::string> abstract_tokens(
    const std::vector<std::string>& toks, const std::vector<EntityInfo>& entities) {
    // Entity token sequences sorted by length descending for longest match.
    std::vector<std::pair<std::vector<std::string>, const EntityInfo*>> names;
    for (const auto& e : entities) names.push_back({tokenize(e.name), &e});
    std::sort(names.begin(), names.end(), [](const auto& a, const auto& b) {
        return a.first.size() > b.first.size();
    });
    const auto& dirs = engine::direction_tokens();

    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < toks.size()) {
        bool matched = false;
        for (const auto& [ntoks, info] : names) {
            if (ntoks.empty() || i + ntoks.size() > toks.size()) continue;
            bool eq = true;
            for (std::size_t k = 0; k < ntoks.size(); ++k)
                if (toks[i + k] != ntoks[k]) {
                    eq = false;
                    break;
                }
            if (eq) {
                out.push_back(info->kind == "character" ? kSlotChar : kSlotObject);
                i += ntoks.size();
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::find(dirs.begin(), dirs.end(), toks[i]) != dirs.end()) {
            out.push_back(kSlotDir);
            ++i;
            continue;
        }
        out.push_back(toks[i]);
        ++i;
    }
    return out;
}

inline bool is_slot(const std::string& t) {
    return t == kSlotObject || t == kSlotChar || t == kSlotDir;
}

} // namespace detail

// Trains counts, harvests template shapes keyed by verb, and records the
// motivation-verb to engine-verb map when motivations are available in the
// examples' metadata. `goal_mode` switches shape keying: motivation shapes
// key on the motivation verb, goal shapes on the final action's verb.
inline GenModel train_generator(const std::vector<GenExample>& examples,
                                const std::vector<EntityInfo>& entities,
                                const GenConfig& config, bool goal_mode) {
    GenModel m;
    m.config = config;
    m.entities = entities;

    std::set<std::string> toks;
    for (const auto& e : examples) {
        for (const auto& t : tokenize(e.target)) toks.insert(t);
        for (const auto& t : tokenize(e.context)) toks.insert(t);
    }
    m.vocab = {"<oov>", "<s>", "</s>"};
    for (const auto& t : toks) m.vocab.push_back(t);
    for (std::size_t i = 0; i < m.vocab.size(); ++i)
        m.vocab_index[m.vocab[i]] = int(i);
    m.uni.assign(m.vocab.size(), 0.0);

    for (const auto& e : examples) {
        auto target = tokenize(e.target);
        std::vector<int> ids = {GenModel::kBos, GenModel::kBos};
        for (const auto& t : target) ids.push_back(m.token_id(t));
        ids.push_back(GenModel::kEos);

        for (std::size_t i = 2; i < ids.size(); ++i) {
            int w = ids[i], h1 = ids[i - 1], h2 = ids[i - 2];
            m.uni[std::size_t(w)] += 1;
            m.uni_total += 1;
            auto& b = m.bi[h1];
            b.next[w] += 1;
            b.total += 1;
            auto& t3 = m.tri[{h2, h1}];
            t3.next[w] += 1;
            t3.total += 1;
        }
        // Context co-occurrence: each distinct content token of the prompt
        // votes for each target token.
        std::set<int> sig;
        for (const auto& t : content_tokens(e.context)) {
            int id = m.token_id(t);
            if (id != GenModel::kOov) sig.insert(id);
        }
        for (int x : sig) {
            auto& cell = m.cc[x];
            for (std::size_t i = 2; i < ids.size(); ++i) {
                cell.next[ids[i]] += 1;
                cell.total += 1;
            }
        }

        // Shape harvest.
        auto shape_toks = detail::abstract_tokens(target, entities);
        std::string key;
        if (goal_mode) {
            // Final action's verb: token after the last "then", or the first
            // token of a single-action sequence.
            std::size_t last = 0;
            for (std::size_t i = 0; i < target.size(); ++i)
                if (target[i] == "then") last = i + 1;
            key = last < target.size() ? target[last] : "";
        } else {
            key = corpus::motivation_verb(e.target);
        }
        if (key.empty()) continue;
        auto& list = m.shapes[key];
        bool found = false;
        for (auto& s : list)
            if (s.tokens == shape_toks) {
                s.count += 1;
                found = true;
                break;
            }
        if (!found) list.push_back({shape_toks, 1});
    }

    // Stable shape order: by descending count, then lexicographic tokens.
    for (auto& [verb, list] : m.shapes)
        std::sort(list.begin(), list.end(), [](const Shape& a, const Shape& b) {
            if (a.count != b.count) return a.count > b.count;
            return a.tokens < b.tokens;
        });
    return m;
}

// Mean per-token perplexity (end token included) of targets under the model,
// conditioned on each example's context.
inline double perplexity(const GenModel& m, const std::vector<GenExample>& examples) {
    double nll = 0;
    double count = 0;
    for (const auto& e : examples) {
        auto sig = m.context_signature(e.context);
        std::vector<int> ids = {GenModel::kBos, GenModel::kBos};
        for (const auto& t : tokenize(e.target)) ids.push_back(m.token_id(t));
        ids.push_back(GenModel::kEos);
        for (std::size_t i = 2; i < ids.size(); ++i) {
            double p = m.prob(ids[i], ids[i - 2], ids[i - 1], sig);
            nll += -std::log(std::max(p, 1e-300));
            count += 1;
        }
    }
    if (count == 0) return 0;
    return std::exp(nll / count);
}

namespace detail {

// Weighted choice with temperature over log-weights; temperature zero takes
// the argmax with ties to the lowest index.
inline std::size_t choose(const std::vector<double>& logw, double temperature,
                          Rng& rng) {
    if (temperature <= 0.0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < logw.size(); ++i)
            if (logw[i] > logw[best]) best = i;
        return best;
    }
    double mx = -1e300;
    for (double v : logw) mx = std::max(mx, v);
    std::vector<double> w(logw.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = std::exp((logw[i] - mx) / temperature);
    return rng.pick_weighted(w);
}

struct DecodeState {
    int h2 = GenModel::kBos;
    int h1 = GenModel::kBos;
    std::vector<std::string> out;

    void push(const GenModel& m, const std::string& tok) {
        out.push_back(tok);
        h2 = h1;
        h1 = m.token_id(tok);
    }
};

// Fill one slot: score each allowed entity by the log-probability of its
// token sequence under the n-gram model, then sample.
inline bool fill_entity_slot(const GenModel& m, DecodeState& st,
                             const std::vector<const EntityInfo*>& allowed,
                             const std::vector<int>& sig, double temperature,
                             Rng& rng) {
    if (allowed.empty()) return false;
    std::vector<double> logw(allowed.size(), 0.0);
    for (std::size_t i = 0; i < allowed.size(); ++i) {
        int h2 = st.h2, h1 = st.h1;
        for (const auto& t : tokenize(allowed[i]->name)) {
            int id = m.token_id(t);
            logw[i] += std::log(
                std::max(m.prob(id, h2, h1, sig), 1e-300));
            h2 = h1;
            h1 = id;
        }
    }
    const EntityInfo* pick = allowed[choose(logw, temperature, rng)];
    for (const auto& t : tokenize(pick->name)) st.push(m, t);
    return true;
}

inline bool fill_dir_slot(const GenModel& m, DecodeState& st,
                          const std::vector<int>& sig, double temperature,
                          Rng& rng) {
    const auto& dirs = engine::direction_tokens();
    std::vector<double> logw;
    for (const auto& d : dirs)
        logw.push_back(std::log(
            std::max(m.prob(m.token_id(d), st.h2, st.h1, sig), 1e-300)));
    st.push(m, dirs[choose(logw, temperature, rng)]);
    return true;
}

} // namespace detail

// Decode a motivation following a harvested shape for `require_verb` (or a
// verb sampled from the shape distribution when unset).
inline GenerationResult generate_motivation(
    const GenModel& m, const std::string& context, std::uint64_t seed,
    const std::optional<std::string>& require_verb = std::nullopt) {
    GenerationResult res;
    Rng rng(seed);
    auto sig = m.context_signature(context);

    std::string verb;
    if (require_verb) {
        verb = *require_verb;
        if (!m.shapes.count(verb)) {
            res.error = "no template for verb: " + verb;
            return res;
        }
    } else {
        std::vector<std::string> verbs;
        std::vector<double> weights;
        for (const auto& [v, list] : m.shapes) {
            double c = 0;
            for (const auto& s : list) c += s.count;
            verbs.push_back(v);
            weights.push_back(c);
        }
        if (verbs.empty()) {
            res.error = "model has no templates";
            return res;
        }
        verb = verbs[rng.pick_weighted(weights)];
    }

    const auto& list = m.shapes.at(verb);
    std::vector<double> weights;
    for (const auto& s : list) weights.push_back(s.count);
    const Shape& shape = list[rng.pick_weighted(weights)];

    detail::DecodeState st;
    for (const auto& tok : shape.tokens) {
        if (int(st.out.size()) >= m.config.max_tokens) {
            res.error = "truncated at max_tokens";
            return res;
        }
        if (tok == kSlotObject || tok == kSlotChar) {
            std::vector<const EntityInfo*> allowed;
            for (const auto& e : m.entities)
                if ((tok == kSlotChar) == (e.kind == "character"))
                    allowed.push_back(&e);
            if (!detail::fill_entity_slot(m, st, allowed, sig,
                                          m.config.temperature, rng)) {
                res.error = "no entity fits slot";
                return res;
            }
        } else if (tok == kSlotDir) {
            detail::fill_dir_slot(m, st, sig, m.config.temperature, rng);
        } else {
            st.push(m, tok);
        }
    }
    if (int(st.out.size()) > m.config.max_tokens) {
        res.error = "truncated at max_tokens";
        return res;
    }
    res.ok = true;
    res.text = join_tokens(st.out);
    return res;
}

// Decode a goal action sequence whose final action verb realizes the
// motivation's verb. Every segment must parse; slot filling is filtered by
// the governing verb's property requirements. Bounded retries, then failure.
inline GenerationResult generate_goal_actions(const GenModel& m,
                                              const std::string& context,
                                              const std::string& motivation,
                                              std::uint64_t seed) {
    GenerationResult res;
    std::string mverb = corpus::motivation_verb(motivation);
    auto vm = m.verb_map.find(mverb);
    if (vm == m.verb_map.end()) {
        res.error = "unknown motivation verb: " + mverb;
        return res;
    }
    const std::string& goal_verb = vm->second;
    auto shape_it = m.shapes.find(goal_verb);
    if (shape_it == m.shapes.end()) {
        res.error = "no action template ends with verb: " + goal_verb;
        return res;
    }

    auto sig = m.context_signature(context + " " + motivation);
    Rng rng(seed);

    for (int attempt = 0; attempt < m.config.retries; ++attempt) {
        Rng arng = rng.fork(std::uint64_t(attempt));
        std::vector<double> weights;
        for (const auto& s : shape_it->second) weights.push_back(s.count);
        const Shape& shape = shape_it->second[arng.pick_weighted(weights)];

        detail::DecodeState st;
        bool failed = false;
        // The verb governing the slot currently being filled. Updated as
        // literal tokens stream out.
        std::string seg_verb;
        std::string seg_prep;
        int slot_index_in_segment = 0;
        for (const auto& tok : shape.tokens) {
            if (int(st.out.size()) >= m.config.max_tokens) {
                failed = true;
                break;
            }
            if (!detail::is_slot(tok)) {
                if (tok == "then") {
                    seg_verb.clear();
                    seg_prep.clear();
                    slot_index_in_segment = 0;
                } else if (seg_verb.empty()) {
                    seg_verb = tok;
                } else if (tok == "in" || tok == "on" || tok == "to" ||
                           tok == "from") {
                    seg_prep = tok;
                }
                st.push(m, tok);
                continue;
            }
            if (tok == kSlotDir) {
                detail::fill_dir_slot(m, st, sig, m.config.temperature, arng);
                continue;
            }
            std::vector<const EntityInfo*> allowed;
            for (const auto& e : m.entities) {
                bool want_char = tok == kSlotChar;
                if (want_char != (e.kind == "character")) continue;
                if (!want_char) {
                    const auto& p = e.props;
                    bool fits = true;
                    if (seg_verb == "wear" || (seg_verb == "remove"))
                        fits = p.wearable || p.wieldable;
                    else if (seg_verb == "wield")
                        fits = p.wieldable;
                    else if (seg_verb == "eat")
                        fits = p.food;
                    else if (seg_verb == "drink")
                        fits = p.drink;
                    else if (seg_verb == "put")
                        fits = slot_index_in_segment == 0
                                   ? p.gettable
                                   : (seg_prep == "in" ? p.container
                                                       : p.surface);
                    else
                        fits = p.gettable;
                    if (!fits) continue;
                }
                allowed.push_back(&e);
            }
            if (!detail::fill_entity_slot(m, st, allowed, sig,
                                          m.config.temperature, arng)) {
                failed = true;
                break;
            }
            slot_index_in_segment++;
        }
        if (failed || st.out.empty()) continue;

        // Split on "then" and validate each segment against the grammar.
        std::vector<std::string> actions;
        std::vector<std::string> cur;
        auto flush = [&] {
            if (!cur.empty()) actions.push_back(join_tokens(cur));
            cur.clear();
        };
        for (const auto& t : st.out) {
            if (t == "then")
                flush();
            else
                cur.push_back(t);
        }
        flush();
        if (actions.empty() || int(actions.size()) > m.config.max_actions)
            continue;
        bool all_parse = true;
        for (const auto& a : actions)
            if (!engine::parse_syntax(a).ok()) {
                all_parse = false;
                break;
            }
        if (!all_parse) continue;
        auto final_toks = tokenize(actions.back());
        if (final_toks.empty() || final_toks[0] != goal_verb) continue;

        res.ok = true;
        res.actions = actions;
        res.text = join_tokens(st.out);
        return res;
    }
    res.error = "no valid action sequence within retry budget";
    return res;
}

// Training-data builders shared by the pipeline and the CLI.
inline std::vector<GenExample> motivation_examples(const corpus::Corpus& c,
                                                   const std::string& split) {
    std::vector<GenExample> out;
    for (const auto& q : c.quests) {
        if (!split.empty() && q.split != split) continue;
        const auto& ch = c.characters[c.char_index.at(q.character_id)];
        const auto& loc = c.locations[c.loc_index.at(q.location_id)];
        out.push_back({ch.persona + " " + loc.description, q.short_motivation});
    }
    return out;
}

inline std::vector<GenExample> goal_examples(const corpus::Corpus& c,
                                             const std::string& split) {
    std::vector<GenExample> out;
    for (const auto& q : c.quests) {
        if (!split.empty() && q.split != split) continue;
        const auto& ch = c.characters[c.char_index.at(q.character_id)];
        const auto& loc = c.locations[c.loc_index.at(q.location_id)];
        std::string target;
        for (std::size_t i = 0; i < q.timeline.size(); ++i) {
            if (i) target += " then ";
            target += normalize_text(q.timeline[i]);
        }
        out.push_back({ch.persona + " " + loc.description + " " +
                           q.short_motivation,
                       target});
    }
    return out;
}

inline std::vector<EntityInfo> entity_catalog(const corpus::Corpus& c) {
    std::vector<EntityInfo> out;
    for (const auto& o : c.objects) {
        EntityInfo e;
        e.name = normalize_text(o.name);
        e.kind = "object";
        e.props = o.props;
        out.push_back(std::move(e));
    }
    for (const auto& ch : c.characters) {
        EntityInfo e;
        e.name = normalize_text(ch.name);
        e.kind = "character";
        out.push_back(std::move(e));
    }
    return out;
}

// Convenience: train both generators on a corpus split with the verb map
// harvested from the same quests.
inline GenModel train_motivation_model(const corpus::Corpus& c,
                                       const GenConfig& config,
                                       const std::string& split = "train") {
    GenModel m = train_generator(motivation_examples(c, split),
                                 entity_catalog(c), config, false);
    m.verb_map = corpus::harvest_verb_map(c);
    return m;
}

inline GenModel train_goal_model(const corpus::Corpus& c, const GenConfig& config,
                                 const std::string& split = "train") {
    GenModel m = train_generator(goal_examples(c, split), entity_catalog(c),
                                 config, true);
    m.verb_map = corpus::harvest_verb_map(c);
    return m;
}

} // namespace questforge::gen
