#pragma once

// Deterministic text-game engine. Fourteen verbs, template grammar, explicit
// preconditions checked before any mutation (a failed step never changes
// state), and object conservation by construction: an object's placement is
// the single source of truth, so things move but never appear or vanish.
// Consuming food flags the object rather than destroying it.
//
// The engine knows nothing about models or rewards. Episodes call back into
// an optional TurnScorer so the reward layer can price turns as they happen.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "questforge/corpus.hpp"
#include "questforge/rng.hpp"
#include "questforge/text.hpp"

namespace questforge::engine {

using corpus::ObjectProps;

// ---------------------------------------------------------------------------
// Verbs and grammar

enum class Verb {
    Go, Get, Drop, Put, Give, Steal, Hit, Hug, Wear, Remove, Wield, Eat,
    Drink, Follow,
};

inline const std::vector<std::pair<Verb, const char*>>& verb_table() {
    static const std::vector<std::pair<Verb, const char*>> v = {
        {Verb::Go, "go"},       {Verb::Get, "get"},     {Verb::Drop, "drop"},
        {Verb::Put, "put"},     {Verb::Give, "give"},   {Verb::Steal, "steal"},
        {Verb::Hit, "hit"},     {Verb::Hug, "hug"},     {Verb::Wear, "wear"},
        {Verb::Remove, "remove"}, {Verb::Wield, "wield"}, {Verb::Eat, "eat"},
        {Verb::Drink, "drink"}, {Verb::Follow, "follow"},
    };
    return v;
}

inline const char* verb_name(Verb v) {
    for (const auto& [verb, name] : verb_table())
        if (verb == v) return name;
    return "?";
}

inline std::optional<Verb> verb_from_token(const std::string& tok) {
    for (const auto& [verb, name] : verb_table())
        if (tok == name) return verb;
    return std::nullopt;
}

inline const std::vector<std::string>& direction_tokens() {
    static const std::vector<std::string> v = {"north", "south", "east",
                                               "west", "up", "down"};
    return v;
}

inline std::string opposite_direction(const std::string& dir) {
    if (dir == "north") return "south";
    if (dir == "south") return "north";
    if (dir == "east") return "west";
    if (dir == "west") return "east";
    if (dir == "up") return "down";
    if (dir == "down") return "up";
    return {};
}

enum class ParseError {
    None, UnknownVerb, BadShape, UnknownDirection, UnresolvedEntity,
};

inline const char* parse_error_name(ParseError e) {
    switch (e) {
        case ParseError::None: return "none";
        case ParseError::UnknownVerb: return "unknown_verb";
        case ParseError::BadShape: return "bad_shape";
        case ParseError::UnknownDirection: return "unknown_direction";
        case ParseError::UnresolvedEntity: return "unresolved_entity";
    }
    return "?";
}

// State-free template parse: verb identification, argument splitting and
// arity checks, no entity resolution. This is the grammar demos and goal
// texts are validated against.
struct SyntaxParse {
    Verb verb = Verb::Go;
    std::vector<std::string> args; // raw argument texts (normalized tokens)
    std::string prep;              // for put: "in" or "on"
    ParseError error = ParseError::None;
    std::string message;
    bool ok() const { return error == ParseError::None; }
};

inline SyntaxParse parse_syntax(const std::string& text) {
    SyntaxParse out;
    auto toks = tokenize(text);
    if (toks.empty()) {
        out.error = ParseError::BadShape;
        out.message = "empty command";
        return out;
    }
    auto verb = verb_from_token(toks[0]);
    if (!verb) {
        out.error = ParseError::UnknownVerb;
        out.message = "unknown verb: " + toks[0];
        return out;
    }
    out.verb = *verb;

    // Drop leading articles inside argument spans; entity names never
    // contain them, but players and demo text naturally type them.
    auto strip = [](std::vector<std::string> span) {
        while (!span.empty() && (span.front() == "the" || span.front() == "a" ||
                                 span.front() == "an"))
            span.erase(span.begin());
        return span;
    };
    auto span_text = [&](std::size_t from, std::size_t to) {
        std::vector<std::string> span(toks.begin() + std::ptrdiff_t(from),
                                      toks.begin() + std::ptrdiff_t(to));
        return join_tokens(strip(std::move(span)));
    };
    auto find_tok = [&](const std::string& t, std::size_t from) {
        for (std::size_t i = from; i < toks.size(); ++i)
            if (toks[i] == t) return i;
        return toks.size();
    };

    switch (out.verb) {
        case Verb::Go: {
            if (toks.size() != 2) {
                out.error = ParseError::BadShape;
                out.message = "go takes exactly one direction";
                return out;
            }
            const auto& dirs = direction_tokens();
            if (std::find(dirs.begin(), dirs.end(), toks[1]) == dirs.end()) {
                out.error = ParseError::UnknownDirection;
                out.message = "unknown direction: " + toks[1];
                return out;
            }
            out.args.push_back(toks[1]);
            return out;
        }
        case Verb::Give: {
            std::size_t sep = find_tok("to", 2);
            if (sep == toks.size() || sep + 1 == toks.size() || sep == 1) {
                out.error = ParseError::BadShape;
                out.message = "expected: give <object> to <character>";
                return out;
            }
            out.args.push_back(span_text(1, sep));
            out.args.push_back(span_text(sep + 1, toks.size()));
            break;
        }
        case Verb::Steal: {
            std::size_t sep = find_tok("from", 2);
            if (sep == toks.size() || sep + 1 == toks.size() || sep == 1) {
                out.error = ParseError::BadShape;
                out.message = "expected: steal <object> from <character>";
                return out;
            }
            out.args.push_back(span_text(1, sep));
            out.args.push_back(span_text(sep + 1, toks.size()));
            break;
        }
        case Verb::Put: {
            std::size_t sep_in = find_tok("in", 2);
            std::size_t sep_on = find_tok("on", 2);
            std::size_t sep = std::min(sep_in, sep_on);
            if (sep == toks.size() || sep + 1 == toks.size() || sep == 1) {
                out.error = ParseError::BadShape;
                out.message = "expected: put <object> in|on <fixture>";
                return out;
            }
            out.prep = toks[sep];
            out.args.push_back(span_text(1, sep));
            out.args.push_back(span_text(sep + 1, toks.size()));
            break;
        }
        default: {
            if (toks.size() < 2) {
                out.error = ParseError::BadShape;
                out.message = std::string(verb_name(out.verb)) +
                              " needs a target";
                return out;
            }
            out.args.push_back(span_text(1, toks.size()));
            break;
        }
    }
    for (const auto& a : out.args)
        if (a.empty()) {
            out.error = ParseError::BadShape;
            out.message = "empty argument";
        }
    return out;
}

// ---------------------------------------------------------------------------
// World state

enum class Place { Floor, InContainer, OnSurface, Carried };

struct WorldObject {
    std::string id;
    std::string name;
    ObjectProps props;
    Place place = Place::Floor;
    std::string place_id;     // room id, fixture object id, or character id
    std::string consumed_by;  // character id once eaten or drunk
};

struct WorldChar {
    std::string id;
    std::string name;
    std::string persona;
    std::string location_id;
    std::set<std::string> worn;    // object ids, subsets of carried objects
    std::set<std::string> wielded;
};

struct RoomExit {
    std::string dir;
    std::string to;
};

struct Room {
    std::string id;
    std::string name;
    std::string description;
    std::vector<RoomExit> exits; // sorted by direction token
};

struct Utterance {
    std::string speaker_id;
    std::string text;
    int turn = 0;
    std::vector<std::string> heard_by; // characters co-located at speak time
};

struct WorldState {
    std::map<std::string, Room> rooms;
    std::map<std::string, WorldObject> objects;
    std::map<std::string, WorldChar> chars;
    std::set<std::pair<std::string, std::string>> hostile;  // (actor, target)
    std::set<std::pair<std::string, std::string>> friendly;
    std::set<std::pair<std::string, std::string>> struck;
    std::map<std::string, std::string> following; // follower -> leader
    std::vector<Utterance> dialogue;
    std::map<std::string, std::string> last_event; // per character
    int turn = 0;

    const Room& room(const std::string& id) const { return rooms.at(id); }
    const WorldChar& chr(const std::string& id) const { return chars.at(id); }
    const WorldObject& obj(const std::string& id) const { return objects.at(id); }

    bool carried_by(const std::string& obj_id, const std::string& char_id) const {
        const auto& o = objects.at(obj_id);
        return o.place == Place::Carried && o.place_id == char_id;
    }

    std::vector<std::string> inventory(const std::string& char_id) const {
        std::vector<std::string> out;
        for (const auto& [id, o] : objects)
            if (o.place == Place::Carried && o.place_id == char_id)
                out.push_back(id);
        return out; // map order: already sorted by id
    }

    // Objects lying on the floor of a room, fixtures included.
    std::vector<std::string> floor_objects(const std::string& room_id) const {
        std::vector<std::string> out;
        for (const auto& [id, o] : objects)
            if (o.place == Place::Floor && o.place_id == room_id)
                out.push_back(id);
        return out;
    }

    // Contents of a fixture (container or surface).
    std::vector<std::string> contents(const std::string& fixture_id) const {
        std::vector<std::string> out;
        for (const auto& [id, o] : objects)
            if ((o.place == Place::InContainer || o.place == Place::OnSurface) &&
                o.place_id == fixture_id)
                out.push_back(id);
        return out;
    }

    // Everything an actor could see or interact with in their room: floor
    // objects, fixture contents, and their own carried items.
    std::vector<std::string> visible_objects(const std::string& char_id) const {
        const auto& c = chars.at(char_id);
        std::vector<std::string> out = floor_objects(c.location_id);
        for (const auto& fid : floor_objects(c.location_id))
            for (const auto& cid : contents(fid)) out.push_back(cid);
        for (const auto& oid : inventory(char_id)) out.push_back(oid);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::vector<std::string> chars_at(const std::string& room_id) const {
        std::vector<std::string> out;
        for (const auto& [id, c] : chars)
            if (c.location_id == room_id) out.push_back(id);
        return out;
    }

    // Canonical serialization of the mutable state. Dialogue and the turn
    // counter are excluded so search dedup keys on the physical state only.
    std::string canonical(bool include_dialogue = false) const {
        std::ostringstream s;
        for (const auto& [id, c] : chars) {
            s << "C|" << id << '|' << c.location_id << '|';
            for (const auto& w : c.worn) s << w << ',';
            s << '|';
            for (const auto& w : c.wielded) s << w << ',';
            s << ';';
        }
        for (const auto& [id, o] : objects)
            s << "O|" << id << '|' << int(o.place) << '|' << o.place_id << '|'
              << o.consumed_by << ';';
        for (const auto& [a, b] : hostile) s << "H|" << a << '|' << b << ';';
        for (const auto& [a, b] : friendly) s << "F|" << a << '|' << b << ';';
        for (const auto& [a, b] : struck) s << "K|" << a << '|' << b << ';';
        for (const auto& [a, b] : following) s << "L|" << a << '|' << b << ';';
        if (include_dialogue) {
            s << "T|" << turn << ';';
            for (const auto& u : dialogue)
                s << "U|" << u.speaker_id << '|' << u.text << ';';
        }
        return s.str();
    }

    std::uint64_t state_hash(bool include_dialogue = false) const {
        return fnv1a64(canonical(include_dialogue));
    }
};

// Convenience builder used by the alignment stage and by tests.
class WorldBuilder {
public:
    WorldBuilder& room(const std::string& id, const std::string& name,
                       const std::string& description = {}) {
        Room r;
        r.id = id;
        r.name = name;
        r.description = description;
        world_.rooms[id] = std::move(r);
        return *this;
    }
    // Symmetric link: `from` gains a `dir` exit, `to` gains the opposite.
    WorldBuilder& link(const std::string& from, const std::string& to,
                       const std::string& dir) {
        world_.rooms.at(from).exits.push_back({dir, to});
        world_.rooms.at(to).exits.push_back({opposite_direction(dir), from});
        return *this;
    }
    WorldBuilder& object(const std::string& id, const std::string& name,
                         ObjectProps props, Place place,
                         const std::string& place_id) {
        WorldObject o;
        o.id = id;
        o.name = normalize_text(name);
        o.props = props;
        o.place = place;
        o.place_id = place_id;
        world_.objects[id] = std::move(o);
        return *this;
    }
    WorldBuilder& character(const std::string& id, const std::string& name,
                            const std::string& location_id,
                            const std::string& persona = {}) {
        WorldChar c;
        c.id = id;
        c.name = normalize_text(name);
        c.persona = persona;
        c.location_id = location_id;
        world_.chars[id] = std::move(c);
        return *this;
    }
    WorldBuilder& worn(const std::string& char_id, const std::string& obj_id) {
        world_.chars.at(char_id).worn.insert(obj_id);
        return *this;
    }
    WorldBuilder& wielded(const std::string& char_id, const std::string& obj_id) {
        world_.chars.at(char_id).wielded.insert(obj_id);
        return *this;
    }
    WorldState build() {
        for (auto& [id, r] : world_.rooms)
            std::sort(r.exits.begin(), r.exits.end(),
                      [](const RoomExit& a, const RoomExit& b) {
                          return a.dir < b.dir;
                      });
        return world_;
    }

private:
    WorldState world_;
};

// ---------------------------------------------------------------------------
// Resolved actions and parsing

struct Action {
    Verb verb = Verb::Go;
    std::string arg1;   // direction token, or entity id
    std::string arg2;   // second entity id where the template has one
    std::string detail; // put preposition
};

inline std::string render_action(const WorldState& w, const Action& a) {
    auto name = [&](const std::string& id) -> std::string {
        auto oi = w.objects.find(id);
        if (oi != w.objects.end()) return oi->second.name;
        auto ci = w.chars.find(id);
        if (ci != w.chars.end()) return ci->second.name;
        return id;
    };
    switch (a.verb) {
        case Verb::Go: return "go " + a.arg1;
        case Verb::Give: return "give " + name(a.arg1) + " to " + name(a.arg2);
        case Verb::Steal: return "steal " + name(a.arg1) + " from " + name(a.arg2);
        case Verb::Put:
            return "put " + name(a.arg1) + " " + a.detail + " " + name(a.arg2);
        default:
            return std::string(verb_name(a.verb)) + " " + name(a.arg1);
    }
}

struct ParseResult {
    bool ok = false;
    Action action;
    ParseError error = ParseError::None;
    std::string message;
};

namespace detail {

// Resolve an entity name to an id, searching scope buckets in priority
// order; within a bucket the lowest id wins. Buckets are lists of ids.
inline std::string resolve_name(
    const WorldState& w, const std::string& name,
    const std::vector<std::vector<std::string>>& buckets, bool is_char) {
    std::string norm = normalize_text(name);
    for (const auto& bucket : buckets) {
        std::string best;
        for (const auto& id : bucket) {
            const std::string& ename =
                is_char ? w.chars.at(id).name : w.objects.at(id).name;
            if (ename == norm && (best.empty() || id < best)) best = id;
        }
        if (!best.empty()) return best;
    }
    return {};
}

} // namespace detail

// Full parse: template parse then entity resolution against what the actor
// can currently see. Returns a resolved Action on success.
inline ParseResult parse_command(const WorldState& w, const std::string& actor_id,
                                 const std::string& text) {
    ParseResult out;
    SyntaxParse syn = parse_syntax(text);
    if (!syn.ok()) {
        out.error = syn.error;
        out.message = syn.message;
        return out;
    }
    out.action.verb = syn.verb;
    out.action.detail = syn.prep;

    const auto& actor = w.chars.at(actor_id);
    if (syn.verb == Verb::Go) {
        out.action.arg1 = syn.args[0];
        out.ok = true;
        return out;
    }

    // Scope buckets for object arguments: own inventory first, then the
    // room floor, then fixture contents, then other characters' inventories
    // (the steal case).
    std::vector<std::string> floor = w.floor_objects(actor.location_id);
    std::vector<std::string> fixture_contents;
    for (const auto& fid : floor)
        for (const auto& cid : w.contents(fid)) fixture_contents.push_back(cid);
    std::vector<std::string> others_carried;
    for (const auto& cid : w.chars_at(actor.location_id)) {
        if (cid == actor_id) continue;
        for (const auto& oid : w.inventory(cid)) others_carried.push_back(oid);
    }
    std::vector<std::vector<std::string>> obj_scope = {
        w.inventory(actor_id), floor, fixture_contents, others_carried};
    std::vector<std::vector<std::string>> char_scope = {
        w.chars_at(actor.location_id)};

    auto resolve_obj = [&](const std::string& name) {
        return detail::resolve_name(w, name, obj_scope, false);
    };
    auto resolve_chr = [&](const std::string& name) {
        return detail::resolve_name(w, name, char_scope, true);
    };

    bool second_is_char =
        syn.verb == Verb::Give || syn.verb == Verb::Steal;
    bool first_is_char = syn.verb == Verb::Hit || syn.verb == Verb::Hug ||
                         syn.verb == Verb::Follow;

    out.action.arg1 = first_is_char ? resolve_chr(syn.args[0]) : resolve_obj(syn.args[0]);
    if (out.action.arg1.empty()) {
        out.error = ParseError::UnresolvedEntity;
        out.message = "nothing called '" + syn.args[0] + "' here";
        return out;
    }
    if (syn.args.size() > 1) {
        out.action.arg2 =
            second_is_char ? resolve_chr(syn.args[1]) : resolve_obj(syn.args[1]);
        if (out.action.arg2.empty()) {
            out.error = ParseError::UnresolvedEntity;
            out.message = "nothing called '" + syn.args[1] + "' here";
            return out;
        }
    }
    out.ok = true;
    return out;
}

// ---------------------------------------------------------------------------
// Stepping

struct StepResult {
    bool ok = false;
    std::string error;         // precondition failure reason when !ok
    std::string event_actor;   // what the actor reads
    std::string event_others;  // what co-located characters read
};

namespace detail {

// All preconditions for an action; empty string means executable. Called
// before any mutation so failed steps leave the world untouched.
inline std::string check_preconditions(const WorldState& w,
                                       const std::string& actor_id,
                                       const Action& a) {
    const auto& actor = w.chars.at(actor_id);
    auto obj_ok = [&](const std::string& id) { return w.objects.count(id) > 0; };
    auto chr_ok = [&](const std::string& id) { return w.chars.count(id) > 0; };
    auto visible_obj = [&](const std::string& id) {
        auto vis = w.visible_objects(actor_id);
        if (std::find(vis.begin(), vis.end(), id) != vis.end()) return true;
        // Objects carried by co-located characters are in reach for steal.
        const auto& o = w.obj(id);
        if (o.place == Place::Carried && w.chars.count(o.place_id) &&
            w.chars.at(o.place_id).location_id == actor.location_id)
            return true;
        return false;
    };
    auto plain_carried = [&](const std::string& id) {
        return w.carried_by(id, actor_id) && !actor.worn.count(id) &&
               !actor.wielded.count(id);
    };

    switch (a.verb) {
        case Verb::Go: {
            for (const auto& e : w.room(actor.location_id).exits)
                if (e.dir == a.arg1) return {};
            return "no exit " + a.arg1;
        }
        case Verb::Get: {
            if (!obj_ok(a.arg1)) return "no such object";
            const auto& o = w.obj(a.arg1);
            if (!o.props.gettable) return o.name + " cannot be picked up";
            if (o.place == Place::Carried)
                return o.place_id == actor_id ? "already carrying " + o.name
                                              : o.name + " is held by someone";
            if (!visible_obj(a.arg1)) return o.name + " is not here";
            return {};
        }
        case Verb::Drop: {
            if (!obj_ok(a.arg1)) return "no such object";
            if (!w.carried_by(a.arg1, actor_id)) return "not carrying that";
            if (actor.worn.count(a.arg1)) return "remove it first";
            if (actor.wielded.count(a.arg1)) return "remove it first";
            return {};
        }
        case Verb::Put: {
            if (!obj_ok(a.arg1) || !obj_ok(a.arg2)) return "no such object";
            if (a.arg1 == a.arg2) return "cannot put a thing into itself";
            if (!plain_carried(a.arg1)) return "not carrying that";
            const auto& f = w.obj(a.arg2);
            if (f.place != Place::Floor || f.place_id != actor.location_id)
                return f.name + " is not here";
            if (a.detail == "in" && !f.props.container)
                return f.name + " is not a container";
            if (a.detail == "on" && !f.props.surface)
                return f.name + " is not a surface";
            return {};
        }
        case Verb::Give: {
            if (!obj_ok(a.arg1)) return "no such object";
            if (!chr_ok(a.arg2)) return "no such character";
            if (a.arg2 == actor_id) return "cannot give to yourself";
            if (!plain_carried(a.arg1)) return "not carrying that";
            if (w.chr(a.arg2).location_id != actor.location_id)
                return w.chr(a.arg2).name + " is not here";
            return {};
        }
        case Verb::Steal: {
            if (!obj_ok(a.arg1)) return "no such object";
            if (!chr_ok(a.arg2)) return "no such character";
            if (a.arg2 == actor_id) return "cannot steal from yourself";
            const auto& victim = w.chr(a.arg2);
            if (victim.location_id != actor.location_id)
                return victim.name + " is not here";
            if (!w.carried_by(a.arg1, a.arg2))
                return victim.name + " does not carry that";
            if (victim.worn.count(a.arg1) || victim.wielded.count(a.arg1))
                return "it is worn or wielded";
            return {};
        }
        case Verb::Hit:
        case Verb::Hug:
        case Verb::Follow: {
            if (!chr_ok(a.arg1)) return "no such character";
            if (a.arg1 == actor_id) return "cannot target yourself";
            if (w.chr(a.arg1).location_id != actor.location_id)
                return w.chr(a.arg1).name + " is not here";
            if (a.verb == Verb::Follow) {
                auto it = w.following.find(actor_id);
                if (it != w.following.end() && it->second == a.arg1)
                    return "already following " + w.chr(a.arg1).name;
            }
            return {};
        }
        case Verb::Wear: {
            if (!obj_ok(a.arg1)) return "no such object";
            if (!w.carried_by(a.arg1, actor_id)) return "not carrying that";
            if (!w.obj(a.arg1).props.wearable) return "cannot wear that";
            if (actor.worn.count(a.arg1)) return "already wearing it";
            if (actor.wielded.count(a.arg1)) return "unwield it first";
            return {};
        }
        case Verb::Wield: {
            if (!obj_ok(a.arg1)) return "no such object";
            if (!w.carried_by(a.arg1, actor_id)) return "not carrying that";
            if (!w.obj(a.arg1).props.wieldable) return "cannot wield that";
            if (actor.wielded.count(a.arg1)) return "already wielding it";
            if (actor.worn.count(a.arg1)) return "take it off first";
            return {};
        }
        case Verb::Remove: {
            if (!obj_ok(a.arg1)) return "no such object";
            if (!actor.worn.count(a.arg1) && !actor.wielded.count(a.arg1))
                return "not wearing or wielding that";
            return {};
        }
        case Verb::Eat:
        case Verb::Drink: {
            if (!obj_ok(a.arg1)) return "no such object";
            const auto& o = w.obj(a.arg1);
            if (!w.carried_by(a.arg1, actor_id)) return "not carrying that";
            if (actor.worn.count(a.arg1) || actor.wielded.count(a.arg1))
                return "remove it first";
            if (a.verb == Verb::Eat && !o.props.food) return "that is not food";
            if (a.verb == Verb::Drink && !o.props.drink)
                return "that is not drinkable";
            if (!o.consumed_by.empty()) return "nothing left of it";
            return {};
        }
    }
    return "unhandled verb";
}

} // namespace detail

inline StepResult step(WorldState& w, const std::string& actor_id, const Action& a) {
    StepResult res;
    std::string fail = detail::check_preconditions(w, actor_id, a);
    auto& actor = w.chars.at(actor_id);
    std::string rendered = render_action(w, a);
    if (!fail.empty()) {
        res.ok = false;
        res.error = fail;
        res.event_actor = "you cannot " + rendered + ": " + fail;
        res.event_others = "";
        w.last_event[actor_id] = res.event_actor;
        w.turn++;
        return res;
    }

    switch (a.verb) {
        case Verb::Go:
            for (const auto& e : w.rooms.at(actor.location_id).exits)
                if (e.dir == a.arg1) {
                    actor.location_id = e.to;
                    break;
                }
            break;
        case Verb::Get: {
            auto& o = w.objects.at(a.arg1);
            o.place = Place::Carried;
            o.place_id = actor_id;
            break;
        }
        case Verb::Drop: {
            auto& o = w.objects.at(a.arg1);
            o.place = Place::Floor;
            o.place_id = actor.location_id;
            break;
        }
        case Verb::Put: {
            auto& o = w.objects.at(a.arg1);
            o.place = a.detail == "in" ? Place::InContainer : Place::OnSurface;
            o.place_id = a.arg2;
            break;
        }
        case Verb::Give: {
            auto& o = w.objects.at(a.arg1);
            o.place = Place::Carried;
            o.place_id = a.arg2;
            break;
        }
        case Verb::Steal: {
            auto& o = w.objects.at(a.arg1);
            o.place = Place::Carried;
            o.place_id = actor_id;
            break;
        }
        case Verb::Hit:
            w.hostile.insert({actor_id, a.arg1});
            w.struck.insert({actor_id, a.arg1});
            break;
        case Verb::Hug:
            w.friendly.insert({actor_id, a.arg1});
            break;
        case Verb::Wear:
            actor.worn.insert(a.arg1);
            break;
        case Verb::Wield:
            actor.wielded.insert(a.arg1);
            break;
        case Verb::Remove:
            actor.worn.erase(a.arg1);
            actor.wielded.erase(a.arg1);
            break;
        case Verb::Eat:
        case Verb::Drink:
            w.objects.at(a.arg1).consumed_by = actor_id;
            break;
        case Verb::Follow:
            w.following[actor_id] = a.arg1;
            break;
    }

    res.ok = true;
    res.event_actor = "you " + rendered;
    res.event_others = actor.name + ": " + rendered;
    w.last_event[actor_id] = res.event_actor;
    for (const auto& cid : w.chars_at(actor.location_id))
        if (cid != actor_id) w.last_event[cid] = res.event_others;
    w.turn++;
    return res;
}

inline StepResult say(WorldState& w, const std::string& actor_id,
                      const std::string& text) {
    Utterance u;
    u.speaker_id = actor_id;
    u.text = text;
    u.turn = w.turn;
    u.heard_by = w.chars_at(w.chars.at(actor_id).location_id);
    w.dialogue.push_back(u);
    StepResult res;
    res.ok = true;
    res.event_actor = "you say: " + text;
    res.event_others = w.chars.at(actor_id).name + " says: " + text;
    w.last_event[actor_id] = res.event_actor;
    for (const auto& cid : u.heard_by)
        if (cid != actor_id) w.last_event[cid] = res.event_others;
    w.turn++;
    return res;
}

// ---------------------------------------------------------------------------
// Valid action enumeration

// Every action the actor could execute right now, in a deterministic order:
// verbs in declaration order, entity arguments by ascending id. Each entry
// is guaranteed to pass step() preconditions in the current state.
inline std::vector<Action> valid_actions(const WorldState& w,
                                         const std::string& actor_id) {
    std::vector<Action> out;
    const auto& actor = w.chars.at(actor_id);
    auto keep = [&](Action a) {
        if (detail::check_preconditions(w, actor_id, a).empty())
            out.push_back(std::move(a));
    };

    for (const auto& e : w.room(actor.location_id).exits)
        keep({Verb::Go, e.dir, "", ""});

    std::vector<std::string> vis = w.visible_objects(actor_id);
    std::vector<std::string> inv = w.inventory(actor_id);
    std::vector<std::string> others;
    for (const auto& cid : w.chars_at(actor.location_id))
        if (cid != actor_id) others.push_back(cid);
    std::vector<std::string> fixtures;
    for (const auto& oid : w.floor_objects(actor.location_id)) {
        const auto& o = w.obj(oid);
        if (o.props.container || o.props.surface) fixtures.push_back(oid);
    }

    for (const auto& oid : vis) keep({Verb::Get, oid, "", ""});
    for (const auto& oid : inv) keep({Verb::Drop, oid, "", ""});
    for (const auto& oid : inv)
        for (const auto& fid : fixtures) {
            const auto& f = w.obj(fid);
            keep({Verb::Put, oid, fid, f.props.container ? "in" : "on"});
        }
    for (const auto& oid : inv)
        for (const auto& cid : others) keep({Verb::Give, oid, cid, ""});
    for (const auto& cid : others)
        for (const auto& oid : w.inventory(cid)) keep({Verb::Steal, oid, cid, ""});
    for (const auto& cid : others) keep({Verb::Hit, cid, "", ""});
    for (const auto& cid : others) keep({Verb::Hug, cid, "", ""});
    for (const auto& oid : inv) keep({Verb::Wear, oid, "", ""});
    for (const auto& oid : actor.worn) keep({Verb::Remove, oid, "", ""});
    for (const auto& oid : actor.wielded) keep({Verb::Remove, oid, "", ""});
    for (const auto& oid : inv) keep({Verb::Wield, oid, "", ""});
    for (const auto& oid : inv) keep({Verb::Eat, oid, "", ""});
    for (const auto& oid : inv) keep({Verb::Drink, oid, "", ""});
    for (const auto& cid : others) keep({Verb::Follow, cid, "", ""});
    return out;
}

// ---------------------------------------------------------------------------
// Observations

struct Observation {
    std::string setting;
    std::string persona;
    std::string motivation;
    std::vector<std::string> objects_here; // names
    std::vector<std::string> carrying;     // names, worn and wielded marked
    std::vector<std::string> chars_here;   // names of others
    std::vector<std::string> dialogue;     // "name says: text", oldest first
    std::string last_event;

    std::string render() const {
        std::ostringstream s;
        s << "setting: " << setting << "\n";
        if (!persona.empty()) s << "persona: " << persona << "\n";
        if (!motivation.empty()) s << "motivation: " << motivation << "\n";
        s << "here: ";
        for (std::size_t i = 0; i < objects_here.size(); ++i)
            s << (i ? ", " : "") << objects_here[i];
        s << "\ncharacters: ";
        for (std::size_t i = 0; i < chars_here.size(); ++i)
            s << (i ? ", " : "") << chars_here[i];
        s << "\ncarrying: ";
        for (std::size_t i = 0; i < carrying.size(); ++i)
            s << (i ? ", " : "") << carrying[i];
        s << "\n";
        for (const auto& d : dialogue) s << d << "\n";
        if (!last_event.empty()) s << "last: " << last_event << "\n";
        return s.str();
    }

    std::vector<std::string> tokens() const { return tokenize(render()); }
};

inline Observation observe(const WorldState& w, const std::string& actor_id,
                           const std::string& motivation = {},
                           int history_limit = 6) {
    Observation obs;
    const auto& actor = w.chars.at(actor_id);
    const auto& room = w.room(actor.location_id);
    obs.setting = room.name + ". " + room.description;
    obs.persona = actor.persona;
    obs.motivation = motivation;

    for (const auto& oid : w.floor_objects(actor.location_id)) {
        const auto& o = w.obj(oid);
        obs.objects_here.push_back(o.name);
        for (const auto& cid : w.contents(oid))
            obs.objects_here.push_back(w.obj(cid).name + " (" +
                                       (o.props.container ? "in " : "on ") +
                                       o.name + ")");
    }
    for (const auto& oid : w.inventory(actor_id)) {
        std::string entry = w.obj(oid).name;
        if (actor.worn.count(oid)) entry += " (worn)";
        if (actor.wielded.count(oid)) entry += " (wielded)";
        if (!w.obj(oid).consumed_by.empty()) entry += " (consumed)";
        obs.carrying.push_back(entry);
    }
    for (const auto& cid : w.chars_at(actor.location_id))
        if (cid != actor_id) obs.chars_here.push_back(w.chr(cid).name);

    int n = int(w.dialogue.size());
    int from = std::max(0, n - history_limit * 4); // scan window, cheap bound
    std::vector<std::string> heard;
    for (int i = from; i < n; ++i) {
        const auto& u = w.dialogue[std::size_t(i)];
        if (std::find(u.heard_by.begin(), u.heard_by.end(), actor_id) !=
            u.heard_by.end())
            heard.push_back(u.speaker_id == actor_id
                                ? "you say: " + u.text
                                : w.chr(u.speaker_id).name + " says: " + u.text);
    }
    if (int(heard.size()) > history_limit)
        heard.erase(heard.begin(),
                    heard.end() - std::ptrdiff_t(history_limit));
    obs.dialogue = std::move(heard);
    auto ev = w.last_event.find(actor_id);
    if (ev != w.last_event.end()) obs.last_event = ev->second;
    return obs;
}

// ---------------------------------------------------------------------------
// Act goals

// Goal predicates are evaluated by entity name against the whole world, with
// the protagonist instantiated as the beneficiary. "go" cannot be a goal
// verb (motivation lexicons never map to it); its predicate is always false.
inline bool check_act_goal(const WorldState& w, const std::string& goal_action,
                           const std::string& protagonist_id) {
    SyntaxParse syn = parse_syntax(goal_action);
    if (!syn.ok()) return false;
    const auto& p = w.chars.at(protagonist_id);

    auto objects_named = [&](const std::string& name) {
        std::vector<const WorldObject*> out;
        for (const auto& [id, o] : w.objects)
            if (o.name == name) out.push_back(&o);
        return out;
    };
    auto char_named = [&](const std::string& name) -> const WorldChar* {
        for (const auto& [id, c] : w.chars)
            if (c.name == name) return &c;
        return nullptr;
    };

    switch (syn.verb) {
        case Verb::Go:
            return false;
        case Verb::Get:
        case Verb::Steal:
            // The named object ends up in the protagonist's hands, however it
            // got there; a partner handing it over counts.
            for (const auto* o : objects_named(syn.args[0]))
                if (o->place == Place::Carried && o->place_id == protagonist_id)
                    return true;
            return false;
        case Verb::Give: {
            const auto* to = char_named(syn.args[1]);
            if (!to) return false;
            for (const auto* o : objects_named(syn.args[0]))
                if (o->place == Place::Carried && o->place_id == to->id)
                    return true;
            return false;
        }
        case Verb::Drop:
            for (const auto* o : objects_named(syn.args[0]))
                if (o->place == Place::Floor && o->place_id == p.location_id)
                    return true;
            return false;
        case Verb::Put: {
            for (const auto* o : objects_named(syn.args[0])) {
                if (o->place != Place::InContainer && o->place != Place::OnSurface)
                    continue;
                auto fi = w.objects.find(o->place_id);
                if (fi != w.objects.end() && fi->second.name == syn.args[1])
                    return true;
            }
            return false;
        }
        case Verb::Wear:
            for (const auto* o : objects_named(syn.args[0]))
                if (p.worn.count(o->id)) return true;
            return false;
        case Verb::Wield:
            for (const auto* o : objects_named(syn.args[0]))
                if (p.wielded.count(o->id)) return true;
            return false;
        case Verb::Remove:
            for (const auto* o : objects_named(syn.args[0]))
                if (o->place == Place::Carried && o->place_id == protagonist_id &&
                    !p.worn.count(o->id) && !p.wielded.count(o->id))
                    return true;
            return false;
        case Verb::Eat:
        case Verb::Drink:
            for (const auto* o : objects_named(syn.args[0]))
                if (o->consumed_by == protagonist_id) return true;
            return false;
        case Verb::Hit: {
            const auto* c = char_named(syn.args[0]);
            return c && w.hostile.count({protagonist_id, c->id}) > 0;
        }
        case Verb::Hug: {
            const auto* c = char_named(syn.args[0]);
            return c && w.friendly.count({protagonist_id, c->id}) > 0;
        }
        case Verb::Follow: {
            const auto* c = char_named(syn.args[0]);
            if (!c) return false;
            auto it = w.following.find(protagonist_id);
            return it != w.following.end() && it->second == c->id;
        }
        default:
            return false;
    }
}

// ---------------------------------------------------------------------------
// Episodes

enum class GoalStatus { Pending, SelfCompleted, PartnerCompleted };

inline const char* goal_status_name(GoalStatus s) {
    switch (s) {
        case GoalStatus::Pending: return "pending";
        case GoalStatus::SelfCompleted: return "self_completed";
        case GoalStatus::PartnerCompleted: return "partner_completed";
    }
    return "?";
}

struct TurnChoice {
    enum class Kind { Act, Say, Noop };
    Kind kind = Kind::Noop;
    std::string text; // action text or utterance
    static TurnChoice act(std::string t) { return {Kind::Act, std::move(t)}; }
    static TurnChoice saying(std::string t) { return {Kind::Say, std::move(t)}; }
    static TurnChoice noop() { return {}; }
};

struct TurnTrace {
    int index = 0;             // global turn index within the episode
    int pair_step = 0;         // self+partner pair counter
    std::string role;          // "self" | "partner"
    std::string actor_id;
    std::string kind;          // "act" | "say" | "noop"
    std::string text;
    bool ok = true;
    std::string error;
    std::string event;
    double reward_act = 0.0;
    double reward_speech = 0.0;
    std::string goal_status = "pending";

    nlohmann::json to_json() const {
        return {{"index", index},   {"pair_step", pair_step}, {"role", role},
                {"actor_id", actor_id}, {"kind", kind},       {"text", text},
                {"ok", ok},         {"error", error},         {"event", event},
                {"reward_act", reward_act},
                {"reward_speech", reward_speech},
                {"goal_status", goal_status}};
    }
};

struct GameSetup {
    WorldState world;
    corpus::QuestRecord quest;
    std::string protagonist_id;
    std::string partner_id; // empty when the world has no second character
    std::optional<corpus::Demonstration> demo;
};

struct EpisodeOptions {
    int max_step_pairs = 100;
    int history_limit = 6;
};

// Stepwise episode driver. The training loop drives this directly; the
// convenience run_episode below wraps it for scripted policies.
class Episode {
public:
    Episode(GameSetup setup, EpisodeOptions opts = {})
        : setup_(std::move(setup)), opts_(opts), world_(setup_.world) {
        if (setup_.demo)
            for (const auto& t : setup_.demo->turns)
                if (t.actor == "self" && t.kind == "say")
                    demo_says_.insert(normalize_text(t.text));
    }

    const WorldState& world() const { return world_; }
    WorldState& mutable_world() { return world_; }
    const GameSetup& setup() const { return setup_; }
    GoalStatus goal() const { return goal_; }
    int goal_turn() const { return goal_turn_; }
    bool speech_matched() const { return speech_matched_; }
    int pair_step() const { return pair_step_; }
    const std::vector<TurnTrace>& trace() const { return trace_; }
    const std::set<std::string>& demo_says() const { return demo_says_; }

    bool has_speech_goal() const { return !demo_says_.empty(); }

    bool done() const {
        if (pair_step_ >= opts_.max_step_pairs) return true;
        bool act_done = goal_ != GoalStatus::Pending;
        bool speech_done = !has_speech_goal() || speech_matched_;
        return act_done && speech_done;
    }

    Observation observe(const std::string& role) const {
        const std::string& id = actor_for(role);
        return engine::observe(world_, id,
                               role == "self" ? setup_.quest.short_motivation
                                              : std::string{},
                               opts_.history_limit);
    }

    std::vector<Action> valid_acts(const std::string& role) const {
        return valid_actions(world_, actor_for(role));
    }

    // Applies one turn for `role` ("self" or "partner"), updates goal
    // bookkeeping and returns the trace entry (also appended to trace()).
    TurnTrace apply(const std::string& role, const TurnChoice& choice) {
        TurnTrace t;
        t.index = int(trace_.size());
        t.pair_step = pair_step_;
        t.role = role;
        t.actor_id = actor_for(role);

        if (choice.kind == TurnChoice::Kind::Act) {
            t.kind = "act";
            t.text = choice.text;
            ParseResult pr = parse_command(world_, t.actor_id, choice.text);
            if (!pr.ok) {
                t.ok = false;
                t.error = std::string(parse_error_name(pr.error)) + ": " +
                          pr.message;
                t.event = "nothing happens (" + pr.message + ")";
                world_.turn++;
            } else {
                StepResult sr = step(world_, t.actor_id, pr.action);
                t.ok = sr.ok;
                t.error = sr.error;
                t.event = sr.event_actor;
            }
        } else if (choice.kind == TurnChoice::Kind::Say) {
            t.kind = "say";
            t.text = choice.text;
            StepResult sr = say(world_, t.actor_id, choice.text);
            t.ok = true;
            t.event = sr.event_actor;
            if (role == "self" && demo_says_.count(normalize_text(choice.text))) {
                if (!speech_matched_) speech_match_turn_ = t.index;
                speech_matched_ = true;
            }
        } else {
            t.kind = "noop";
            t.event = "nothing happens";
            world_.turn++;
        }

        if (goal_ == GoalStatus::Pending && t.ok &&
            check_act_goal(world_, setup_.quest.goal_action,
                           setup_.protagonist_id)) {
            goal_ = role == "self" ? GoalStatus::SelfCompleted
                                   : GoalStatus::PartnerCompleted;
            goal_turn_ = t.index;
        }
        t.goal_status = goal_status_name(goal_);

        if (role == "partner" || setup_.partner_id.empty()) pair_step_++;
        trace_.push_back(t);
        return trace_.back();
    }

    // Rewards are attributed by the caller after apply(); this lets the
    // trace carry them without the engine knowing how they are computed.
    void credit_last(double act_reward, double speech_reward) {
        if (trace_.empty()) return;
        trace_.back().reward_act += act_reward;
        trace_.back().reward_speech += speech_reward;
    }

    int speech_match_turn() const { return speech_match_turn_; }

    std::uint64_t trace_hash() const {
        std::string s;
        for (const auto& t : trace_) s += t.to_json().dump() + "\n";
        return fnv1a64(s);
    }

    std::string trace_jsonl() const {
        std::string s;
        for (const auto& t : trace_) s += t.to_json().dump() + "\n";
        return s;
    }

private:
    const std::string& actor_for(const std::string& role) const {
        return role == "self" ? setup_.protagonist_id : setup_.partner_id;
    }

    GameSetup setup_;
    EpisodeOptions opts_;
    WorldState world_;
    GoalStatus goal_ = GoalStatus::Pending;
    int goal_turn_ = -1;
    bool speech_matched_ = false;
    int speech_match_turn_ = -1;
    int pair_step_ = 0;
    std::vector<TurnTrace> trace_;
    std::set<std::string> demo_says_;
};

// Policy interface for scripted play, random baselines and the partner.
struct PolicyContext {
    const Episode& episode;
    const Observation& obs;
    const std::vector<Action>& valid;         // executable actions
    const std::vector<std::string>& say_pool; // candidate utterances
    const std::string& role;
    Rng& rng;
};

struct Policy {
    virtual ~Policy() = default;
    virtual TurnChoice choose(const PolicyContext& ctx) = 0;
};

// Scores one applied turn; the reward layer implements this.
struct TurnScorer {
    virtual ~TurnScorer() = default;
    virtual void begin_episode(const Episode& ep) = 0;
    // Returns {act reward, speech reward} for the turn just applied.
    virtual std::pair<double, double> score(const Episode& ep,
                                            const TurnTrace& turn) = 0;
};

struct RunOptions {
    EpisodeOptions episode;
    std::uint64_t seed = 1;
    // Provides say candidates per role before each turn; empty by default.
    std::function<std::vector<std::string>(const Episode&, const std::string&)>
        say_pool;
};

struct EpisodeSummary {
    GoalStatus goal = GoalStatus::Pending;
    int goal_turn = -1;
    bool speech_matched = false;
    double total_act_reward = 0.0;
    double total_speech_reward = 0.0;
    int pair_steps = 0;
    std::uint64_t trace_hash = 0;
};

// Runs self and partner alternately until the episode terminates: the act
// goal is done and the speech goal is done or absent, or the step budget is
// exhausted. Returns the completed Episode for trace inspection.
inline Episode run_episode(const GameSetup& setup, Policy& self_policy,
                           Policy* partner_policy, const RunOptions& opts,
                           TurnScorer* scorer = nullptr,
                           EpisodeSummary* summary = nullptr) {
    Episode ep(setup, opts.episode);
    Rng rng(opts.seed);
    Rng self_rng = rng.fork("self");
    Rng partner_rng = rng.fork("partner");
    if (scorer) scorer->begin_episode(ep);

    auto take_turn = [&](const std::string& role, Policy& policy, Rng& r) {
        Observation obs = ep.observe(role);
        std::vector<Action> valid = ep.valid_acts(role);
        std::vector<std::string> says =
            opts.say_pool ? opts.say_pool(ep, role) : std::vector<std::string>{};
        PolicyContext ctx{ep, obs, valid, says, role, r};
        TurnChoice choice = policy.choose(ctx);
        TurnTrace t = ep.apply(role, choice);
        if (scorer) {
            auto [ra, rs] = scorer->score(ep, t);
            ep.credit_last(ra, rs);
        }
    };

    while (!ep.done()) {
        take_turn("self", self_policy, self_rng);
        if (ep.done()) break;
        if (!setup.partner_id.empty()) {
            // A present but policy-less partner idles, so the pair counter
            // still advances and the loop terminates.
            if (partner_policy)
                take_turn("partner", *partner_policy, partner_rng);
            else
                ep.apply("partner", TurnChoice::noop());
        }
    }

    if (summary) {
        summary->goal = ep.goal();
        summary->goal_turn = ep.goal_turn();
        summary->speech_matched = ep.speech_matched();
        summary->pair_steps = ep.pair_step();
        summary->total_act_reward = 0;
        summary->total_speech_reward = 0;
        for (const auto& t : ep.trace()) {
            summary->total_act_reward += t.reward_act;
            summary->total_speech_reward += t.reward_speech;
        }
        summary->trace_hash = ep.trace_hash();
    }
    return ep;
}

// Policy that picks uniformly among valid actions and the say pool. Used as
// the random baseline and in engine fuzz tests.
struct RandomPolicy : Policy {
    double say_prob = 0.3;
    TurnChoice choose(const PolicyContext& ctx) override {
        bool can_act = !ctx.valid.empty();
        bool can_say = !ctx.say_pool.empty();
        if (!can_act && !can_say) return TurnChoice::noop();
        bool do_say = can_say && (!can_act || ctx.rng.chance(say_prob));
        if (do_say)
            return TurnChoice::saying(ctx.say_pool[ctx.rng.below(ctx.say_pool.size())]);
        const Action& a = ctx.valid[ctx.rng.below(ctx.valid.size())];
        return TurnChoice::act(render_action(ctx.episode.world(), a));
    }
};

// Grammar validation of demonstration act turns; raises CorpusError with the
// offending demo and turn. Called by ingest and by corpus tests.
inline void validate_demo_grammar(const corpus::Corpus& c) {
    for (const auto& d : c.demos)
        for (std::size_t i = 0; i < d.turns.size(); ++i) {
            const auto& t = d.turns[i];
            if (t.kind != "act") continue;
            SyntaxParse p = parse_syntax(t.text);
            if (!p.ok())
                throw corpus::CorpusError("demo " + d.id + " turn " +
                                          std::to_string(i) +
                                          " does not parse: " + t.text + " (" +
                                          p.message + ")");
        }
}

} // namespace questforge::engine
