#pragma once

#include <deque>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ec/graph.hpp"

namespace ec {

struct SplitterConfig {
    int n = 0;            // vertex count (fixed for the lifetime of the splitter)
    int t = 2;            // number of colour classes
    long long dmax = 0;   // promised degree cap over the whole update sequence
    double eps = 0.5;     // slack factor: classes stay below (1+eps)*dmax/t
    // Absent: derive eta = floor(eps^2*dmax/(128*t*ceil(log2 n))) and
    // stride = ceil(500*dmax/eta) from the closed forms.
    std::optional<long long> eta_override;
    std::optional<long long> stride_override;
};

// One colour change applied while settling an update, in application order.
// `gain` is t times the drop in true surplus sum the change bought, read just
// before it was applied; phi_before/phi_after bracket the running potential.
struct Recolour {
    EdgeId e = kNoEdge;
    Colour from = kBlank;
    Colour to = kBlank;
    long long gain = 0;
    long long phi_before = 0;
    long long phi_after = 0;
};

struct SplitterCounters {
    long long inserts = 0;
    long long erases = 0;
    long long recolourings = 0;  // colour changes of settled edges (queue repairs)
    long long queue_pops = 0;
    long long refreshes = 0;     // per-edge estimate rewrites
};

// Spreads a dynamic edge set over t colour classes so that every class keeps
// per-vertex degree at most (1+eps)*dmax/t. Each edge carries lazily refreshed
// estimates of the per-colour surplus sums at its endpoints; a round-robin
// sweep renews stride-many incident estimates per touched vertex, and a
// violation queue recolours the edge with the largest estimated surplus
// difference whenever one exceeds eta/2. Surpluses are kept scaled by t
// (S_k(v) = max{t*d_k(v) - dmax, 0}) so every threshold compares exactly in
// integers. Parallel edges are tolerated; self-loops and degree-cap breaches
// are rejected before any mutation.
class TSplitter {
  public:
    explicit TSplitter(const SplitterConfig& cfg);

    const SplitterConfig& config() const { return cfg_; }
    long long eta() const { return eta_; }
    long long stride() const { return stride_; }
    int vertex_count() const { return cfg_.n; }
    int colours() const { return cfg_.t; }
    int edge_count() const { return alive_; }
    int edge_slots() const { return static_cast<int>(edges_.size()); }

    struct InsertResult {
        EdgeId id = kNoEdge;
        Colour colour = kBlank;           // the class the fresh edge landed in
        std::vector<Recolour> log;        // repairs only; the initial colouring is not logged
    };
    InsertResult insert(Vertex u, Vertex v);
    std::vector<Recolour> erase(EdgeId e);

    bool alive(EdgeId e) const;
    std::pair<Vertex, Vertex> endpoints(EdgeId e) const;
    Colour colour_of(EdgeId e) const;
    int degree(Vertex v) const;
    int colour_degree(Vertex v, Colour c) const;
    int max_colour_degree() const;

    // t * max{d_c(v) - dmax/t, 0}: the scaled surplus all thresholds use.
    long long surplus_scaled(Vertex v, Colour c) const;

    // Sum over colours and vertices of 1 + 2 + ... + s with the integer
    // surplus s = max{d_c(v) - ceil(dmax/t), 0}; recomputed from scratch.
    long long potential() const;

    struct Violation {
        EdgeId e = kNoEdge;
        Colour colour = kBlank;  // the class whose surplus sum is undercut by more than eta
    };
    // Full scan: every (edge, colour) pair where the edge's own class carries
    // more than eta plus that colour's surplus sum. Empty after every update.
    std::vector<Violation> check_invariant() const;

    // Full comparison of every stored estimate against the true surpluses,
    // plus structural bookkeeping (set memberships, ring sizes, degree
    // recounts, running potential). ok requires 16*worst_sum_err <= t*eta and
    // 8*worst_diff_err <= t*eta and all structural checks.
    struct EstimateAudit {
        bool ok = true;
        long long worst_sum_err = 0;   // scaled units, over all T^s entries
        long long worst_diff_err = 0;  // scaled units, over all difference rows
        bool mirror_ok = true;         // both endpoints hold each difference row
        bool structures_ok = true;     // memberships, sizes, recounted degrees
        bool phi_ok = true;            // running potential equals the scan
        EdgeId worst_edge = kNoEdge;
    };
    EstimateAudit audit_estimates() const;

    // Refresh ring for (v, c): cyclic order and current cursor index.
    std::pair<std::vector<EdgeId>, int> ring(Vertex v, Colour c) const;

    const SplitterCounters& counters() const { return counters_; }

  private:
    struct Ring {
        std::vector<EdgeId> order;
        int cursor = 0;
    };
    struct MsdOrder {
        bool operator()(const std::pair<long long, EdgeId>& a,
                        const std::pair<long long, EdgeId>& b) const {
            if (a.first != b.first) return a.first < b.first;
            return a.second > b.second;  // reversed: rbegin() = max value, smallest edge
        }
    };
    using Msd = std::set<std::pair<long long, EdgeId>, MsdOrder>;
    struct EdgeRec {
        Vertex u = -1;  // -1 = dead slot
        Vertex v = -1;
        Colour c = kBlank;
        Colour estc = kBlank;          // colour the difference rows were filed under
        std::vector<long long> est;    // scaled surplus-sum estimates, one per colour
        std::set<std::pair<long long, Colour>> sums;  // (estimate, colour); begin() = min
    };

    std::size_t at(Vertex v, Colour c) const {
        return static_cast<std::size_t>(v) * cfg_.t + (c - 1);
    }
    long long floor_surplus(Vertex v, Colour c) const {
        long long f = deg_[at(v, c)] - cap_;
        return f > 0 ? f : 0;
    }
    void check_vertex(Vertex v) const;
    void ring_insert(Vertex w, Colour c, EdgeId e);
    void ring_remove(Vertex w, Colour c, EdgeId e);
    void refresh_estimates(EdgeId e);
    void round_robin(Vertex u, Vertex v);
    void push_violations(Vertex u, Vertex v);
    void recolour(EdgeId e, std::vector<Recolour>& log);
    void drain(std::vector<Recolour>& log);

    SplitterConfig cfg_;
    long long eta_ = 0;
    long long stride_ = 0;
    long long cap_ = 0;  // ceil(dmax/t): class degree where integer surplus starts
    std::vector<EdgeRec> edges_;
    std::vector<int> deg_;        // n*t: per-vertex class degrees
    std::vector<int> total_deg_;  // n
    std::vector<Ring> rings_;     // n*t
    std::vector<Msd> msd_;        // n*t: difference rows of incident edges
    std::deque<std::pair<Vertex, Colour>> queue_;
    std::set<std::pair<Vertex, Colour>> queued_;
    long long phi_ = 0;
    int alive_ = 0;
    SplitterCounters counters_;
};

}  // namespace ec
