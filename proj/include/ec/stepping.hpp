#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "ec/graph.hpp"
#include "ec/process.hpp"
#include "ec/skeleton.hpp"

namespace ec {

struct SpreadConfig {
    long long ell = 16;  // path-length horizon: paths this short answer directly
    long long a = 4;     // spread parameter (quotas ceil(a/2) points, ceil(a/4) strings)
    int levels = 0;      // 0: derive ceil(sqrt(ceil(log2 n))) from the vertex count
};

// Incrementally maintained process sets over the path skeleton. For every
// maximal-path endpoint y, colour pair and graph neighbour w of y, the level-i
// set holds i-step recolouring processes starting w + y + P1 with P1 on y's
// path. Keys whose maximal path has at most `ell` vertices answer with their
// single full-path process at every level and are never materialised; only
// long-path keys live in the store. Mutations go through colour/uncolour (or
// the edge_added/edge_removed hooks for blank edges), which mark the
// dependency cone of the change and then rebuild marked keys level by level.
class SteppingSets {
  public:
    SteppingSets(BicompSkeleton& sk, SpreadConfig cfg);

    const SpreadConfig& config() const { return cfg_; }
    int levels() const { return levels_; }
    Graph& graph() { return *g_; }
    const Graph& graph() const { return *g_; }
    BicompSkeleton& skeleton() { return *sk_; }

    // Mutations (mark and repair included).
    ChangeReport colour(EdgeId e, Colour k);
    ChangeReport uncolour(EdgeId e);
    void edge_added(Vertex u, Vertex v);    // call right after Graph::add_edge
    void edge_removed(Vertex u, Vertex v);  // call right after Graph::remove_edge

    // Split mutation phases, for tests that probe the mark state.
    ChangeReport colour_mark_only(EdgeId e, Colour k);
    ChangeReport uncolour_mark_only(EdgeId e);
    void mark_dirty(const ChangeReport& rep, Vertex u, Vertex v);
    void repair_all();

    // The level-i set for key (y, {ka,kb}, w); empty when y has no such key.
    std::vector<ProcessString> level_set(int level, Vertex y, Colour ka, Colour kb,
                                         Vertex w) const;
    // Top-level lookup, resolved against the live colouring.
    std::optional<SteppingProcess> lookup(Vertex w, Vertex y, Colour ka, Colour kb) const;
    // Resolves one string; nothing when it no longer matches the colouring.
    std::optional<SteppingProcess> decode(Vertex w, Vertex y, Colour ka, Colour kb,
                                          const ProcessString& s) const;

    struct StoredEntry {
        int level;
        Vertex y;
        Colour ka, kb;
        Vertex w;
        std::vector<ProcessString> strings;
    };
    std::vector<StoredEntry> dump() const;

    struct MarkEntry {
        Vertex y;
        Colour ka, kb;
        int level;
    };
    std::vector<MarkEntry> marks() const;
    std::size_t stored_count() const { return store_.size(); }
    std::size_t marked_count() const { return marks_.size(); }
    // Frontier sizes |M_1|, |M_2|, ... of the most recent mark phase.
    const std::vector<std::size_t>& last_frontiers() const { return frontiers_; }

    // Trie-shape check for a set: singletons pass; otherwise first characters
    // must spread at least ceil(a/2) ways and every multi-string first-char
    // group must hold no one-character string and spread at least ceil(a/4)
    // ways by second character.
    static bool goodness_ok(const std::vector<ProcessString>& set, long long a);

  private:
    using StoreKey = std::tuple<int, Vertex, Colour, Colour, Vertex>;
    using MarkKey = std::tuple<Vertex, Colour, Colour>;

    struct DecodedSteps {
        std::vector<std::vector<Vertex>> paths;
        std::vector<std::vector<EdgeId>> edges;
        std::vector<std::vector<Vertex>> qnorm;  // normalized full maximal path per step
        std::vector<Vertex> centres;
        bool augmenting = false;
    };

    void mark_key(Vertex y, Colour ka, Colour kb, int level);
    std::optional<DecodedSteps> decode_steps(Vertex w, const ProcessString& s) const;
    std::vector<char> ball2(const std::vector<Vertex>& srcs) const;
    std::vector<ProcessString> rebuild_key(int level, const std::vector<Vertex>& seq, Colour ka,
                                           Colour kb, Vertex w) const;

    BicompSkeleton* sk_;
    Graph* g_;
    SpreadConfig cfg_;
    int levels_;
    std::map<StoreKey, std::vector<ProcessString>> store_;
    std::map<MarkKey, int> marks_;
    std::vector<std::size_t> frontiers_;
};

}  // namespace ec
