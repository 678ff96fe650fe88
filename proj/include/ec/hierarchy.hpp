#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ec/params.hpp"
#include "ec/tsplitter.hpp"

namespace ec {

// Parameter schedule for a recursive degree-splitting tree: level i re-splits
// every graph of the previous level into t(i) colour classes, shrinking the
// per-level degree cap dhat by roughly t(i) until it falls below the stop
// threshold. All comparisons are exact (BigInt / rational); dhat[i] stores
// floor(dhat_exact[i]), which bounds the same integer degrees.
struct HierarchyParams {
    int h = 0;   // number of splitter levels; level h graphs are leaves
    int i1 = 0;  // levels using arity t1
    int i2 = 0;  // levels using arity t2
    BigInt t1 = 0;
    BigInt t2 = 0;
    BigInt stop_threshold = 0;
    BigInt level_threshold = 0;
    BigInt level_divisor = 0;
    Rational mu;                       // per-level slack factor (1 + mu)
    std::vector<long long> t;          // arity per level, size h
    std::vector<long long> dhat;       // integer degree caps, size h + 1
    std::vector<Rational> dhat_exact;  // exact caps, size h + 1
};

// Runs the splitting schedule for (n, dmax, eps), honouring overrides for the
// arities and the three threshold constants. Returns h = 0 when dmax already
// sits below the stop threshold.
HierarchyParams initialize_parameters(long long n, long long dmax, const Rational& eps,
                                      const Overrides& ov = {});

// A child splitter refused an update (degree cap breach mid-cascade). State is
// not rolled back; treat the structure as poisoned.
struct HierarchyViolation : std::runtime_error {
    explicit HierarchyViolation(const std::string& what) : std::runtime_error(what) {}
};

struct HierarchyConfig {
    int n = 0;
    long long dmax = 0;
    double eps = 0.5;
    Overrides overrides;  // eta/stride feed the inner splitters; t1/t2/thresholds feed the schedule
};

// One leaf-membership change. An edge's recoloured ancestors emit a leave of
// the old leaf followed by an enter of the new one.
struct LeafEvent {
    enum Kind { kLeave = 0, kEnter = 1 };
    Kind kind = kEnter;
    EdgeId edge = kNoEdge;
    std::vector<Colour> leaf;  // full index, length h
};

// Maintains the recursive splitter tree under inserts/erases. Every edge lives
// in exactly one graph per level: the splitter at its h-long colour-prefix
// chain, plus one leaf edge set at depth h. Splitter recolourings cascade:
// the edge's deeper instances are removed deepest-first and re-inserted along
// its new colour chain, top-down. Leaves carry no splitter, so only levels
// 0..h-1 enforce degree caps mechanically.
class SplitterHierarchy {
  public:
    explicit SplitterHierarchy(const HierarchyConfig& cfg);

    const HierarchyConfig& config() const { return cfg_; }
    const HierarchyParams& params() const { return params_; }
    int depth() const { return params_.h; }
    int vertex_count() const { return cfg_.n; }
    int edge_count() const { return alive_; }
    int edge_slots() const { return (int)edges_.size(); }

    struct InsertResult {
        EdgeId id = kNoEdge;
        std::vector<LeafEvent> events;
    };
    InsertResult insert(Vertex u, Vertex v);
    std::vector<LeafEvent> erase(EdgeId e);

    bool alive(EdgeId e) const;
    std::pair<Vertex, Vertex> endpoints(EdgeId e) const;
    const std::vector<Colour>& profile(EdgeId e) const;  // colour per level, length h
    int degree(Vertex v) const;

    struct Leaf {
        std::vector<Colour> index;
        std::vector<EdgeId> edges;  // ascending ids
    };
    std::vector<Leaf> leaf_partition() const;

    // Splitter nodes currently allocated, keyed by colour prefix (length < h).
    std::vector<std::pair<std::vector<Colour>, const TSplitter*>> nodes() const;
    const TSplitter* node_at(const std::vector<Colour>& prefix) const;
    // Local edge id inside the level's splitter, or kNoEdge.
    EdgeId local_id(EdgeId e, int level) const;

    struct Counters {
        long long inserts = 0;  // public
        long long erases = 0;   // public
        std::vector<long long> level_inserts;  // size h + 1; level h counts leaf enters
        std::vector<long long> level_erases;   // size h + 1; level h counts leaf leaves
    };
    const Counters& counters() const { return counters_; }

  private:
    struct Node {
        explicit Node(const SplitterConfig& c) : sp(c) {}
        TSplitter sp;
        std::unordered_map<EdgeId, EdgeId> pub;  // local id -> public id
    };
    struct ERec {
        Vertex u = -1, v = -1;
        bool live = false;
        std::vector<Colour> chi;    // size h
        std::vector<EdgeId> local;  // size h
    };

    Node& node(const std::vector<Colour>& prefix);
    void insert_at(EdgeId e, std::vector<Colour> prefix, std::vector<LeafEvent>& ev);
    void remove_from(EdgeId e, int level, std::vector<LeafEvent>& ev);
    void propagate(const std::vector<Colour>& prefix, Node& nd, const std::vector<Recolour>& log,
                   EdgeId settling_local, std::vector<LeafEvent>& ev);

    HierarchyConfig cfg_;
    HierarchyParams params_;
    std::map<std::vector<Colour>, Node> nodes_;
    std::map<std::vector<Colour>, std::set<EdgeId>> leaves_;
    std::vector<ERec> edges_;
    std::vector<int> deg_;
    int alive_ = 0;
    Counters counters_;
};

}  // namespace ec
