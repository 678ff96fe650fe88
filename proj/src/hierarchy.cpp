#include "ec/hierarchy.hpp"

#include <utility>

namespace ec {

namespace {

BigInt int_pow(const BigInt& base, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

HierarchyParams initialize_parameters(long long n, long long dmax, const Rational& eps,
                                      const Overrides& ov) {
    if (n < 1) throw std::invalid_argument("vertex count must be positive");
    if (dmax < 0) throw std::invalid_argument("degree bound must be non-negative");
    if (!(Rational(0) < eps && eps < Rational(1)))
        throw std::invalid_argument("eps must lie in (0,1)");

    HierarchyParams p;
    p.t1 = ov.t1 ? BigInt(*ov.t1) : t1_value(n);
    p.t2 = ov.t2 ? BigInt(*ov.t2) : t2_value(n, eps);
    p.stop_threshold = ov.stop_threshold ? BigInt(*ov.stop_threshold) : stop_threshold_value(n, eps);
    p.level_threshold = ov.level_threshold ? BigInt(*ov.level_threshold) : t1_value(n);
    p.level_divisor = ov.level_divisor ? BigInt(*ov.level_divisor) : level_divisor_value(n);
    p.mu = mu_value(n, eps);
    if (p.stop_threshold < 1) throw std::invalid_argument("stop threshold must be positive");
    if (p.level_divisor < 1) throw std::invalid_argument("level divisor must be positive");

    const Rational lift = Rational(1) + p.mu;
    const Rational stop(p.stop_threshold, BigInt(1));
    Rational cap(BigInt(dmax), BigInt(1));
    p.dhat.push_back(dmax);
    p.dhat_exact.push_back(cap);

    while (stop <= cap) {
        if (p.t.size() >= 200)
            throw std::runtime_error("splitting schedule does not converge");
        // Level-type rule: dmax / divisor^(i1 - 1) >= threshold, cross-multiplied
        // so the i1 = 0 case (negative exponent) stays integral.
        BigInt lhs = dmax;
        BigInt rhs = p.level_threshold;
        if (p.i1 == 0)
            lhs *= p.level_divisor;
        else if (p.i1 >= 2)
            rhs *= int_pow(p.level_divisor, p.i1 - 1);
        BigInt arity_big;
        if (lhs >= rhs) {
            arity_big = p.t1;
            ++p.i1;
        } else {
            arity_big = p.t2;
            ++p.i2;
        }
        if (arity_big < 2)
            throw std::invalid_argument("level arity below 2 cannot reduce degrees");
        if (arity_big > BigInt(1) << 31)
            throw std::invalid_argument("level arity too large for a concrete splitter");
        const long long arity = arity_big.convert_to<long long>();
        p.t.push_back(arity);
        cap = cap * lift / Rational(arity);
        p.dhat_exact.push_back(cap);
        p.dhat.push_back(cap.floor().convert_to<long long>());
    }
    p.h = (int)p.t.size();
    return p;
}

SplitterHierarchy::SplitterHierarchy(const HierarchyConfig& cfg) : cfg_(cfg) {
    if (cfg_.n < 1) throw std::invalid_argument("vertex count must be positive");
    if (cfg_.dmax < 1) throw std::invalid_argument("degree bound must be positive");
    if (!(cfg_.eps > 0.0 && cfg_.eps < 1.0))
        throw std::invalid_argument("eps must lie in (0,1)");
    params_ = initialize_parameters(cfg_.n, cfg_.dmax, rational_from_double(cfg_.eps),
                                    cfg_.overrides);
    deg_.assign(cfg_.n, 0);
    counters_.level_inserts.assign(params_.h + 1, 0);
    counters_.level_erases.assign(params_.h + 1, 0);
}

SplitterHierarchy::Node& SplitterHierarchy::node(const std::vector<Colour>& prefix) {
    auto it = nodes_.find(prefix);
    if (it != nodes_.end()) return it->second;

    const int level = (int)prefix.size();
    SplitterConfig sc;
    sc.n = cfg_.n;
    sc.t = (int)params_.t[level];
    sc.dmax = params_.dhat[level];
    sc.eps = cfg_.eps;
    if (cfg_.overrides.eta) {
        sc.eta_override = *cfg_.overrides.eta;
    } else {
        const BigInt eta = eta_value(params_.mu, sc.dmax, sc.t, cfg_.n);
        if (eta < 1)
            throw std::invalid_argument(
                "derived level eta is zero; this configuration needs an eta override");
        sc.eta_override = eta.convert_to<long long>();
    }
    return nodes_.try_emplace(prefix, sc).first->second;
}

SplitterHierarchy::InsertResult SplitterHierarchy::insert(Vertex u, Vertex v) {
    if (u < 0 || u >= cfg_.n || v < 0 || v >= cfg_.n)
        throw std::invalid_argument("vertex out of range");
    if (u == v) throw std::invalid_argument("self-loops are not supported");
    if (deg_[u] + 1 > cfg_.dmax || deg_[v] + 1 > cfg_.dmax)
        throw std::invalid_argument("insertion would breach the degree cap");

    const EdgeId id = (EdgeId)edges_.size();
    ERec rec;
    rec.u = u;
    rec.v = v;
    rec.live = true;
    rec.chi.assign(params_.h, kBlank);
    rec.local.assign(params_.h, kNoEdge);
    edges_.push_back(std::move(rec));
    ++deg_[u];
    ++deg_[v];
    ++alive_;
    ++counters_.inserts;

    InsertResult res;
    res.id = id;
    insert_at(id, {}, res.events);
    return res;
}

std::vector<LeafEvent> SplitterHierarchy::erase(EdgeId e) {
    if (e < 0 || e >= (EdgeId)edges_.size() || !edges_[e].live)
        throw std::invalid_argument("no such live edge");
    std::vector<LeafEvent> ev;
    remove_from(e, 0, ev);
    ERec& rec = edges_[e];
    rec.live = false;
    --deg_[rec.u];
    --deg_[rec.v];
    --alive_;
    ++counters_.erases;
    rec.u = rec.v = -1;
    return ev;
}

void SplitterHierarchy::insert_at(EdgeId e, std::vector<Colour> prefix,
                                  std::vector<LeafEvent>& ev) {
    const int level = (int)prefix.size();
    ++counters_.level_inserts[level];
    if (level == params_.h) {
        leaves_[prefix].insert(e);
        ev.push_back({LeafEvent::kEnter, e, std::move(prefix)});
        return;
    }
    Node& nd = node(prefix);
    TSplitter::InsertResult r;
    try {
        r = nd.sp.insert(edges_[e].u, edges_[e].v);
    } catch (const std::invalid_argument& ex) {
        throw HierarchyViolation("level " + std::to_string(level) +
                                 " splitter refused an insert: " + ex.what());
    }
    nd.pub[r.id] = e;
    edges_[e].local[level] = r.id;
    propagate(prefix, nd, r.log, r.id, ev);
    const Colour c = nd.sp.colour_of(r.id);
    edges_[e].chi[level] = c;
    prefix.push_back(c);
    insert_at(e, std::move(prefix), ev);
}

void SplitterHierarchy::remove_from(EdgeId e, int level, std::vector<LeafEvent>& ev) {
    // Deepest first: the leaf instance goes before any splitter instance.
    {
        std::vector<Colour> leaf = edges_[e].chi;
        auto it = leaves_.find(leaf);
        if (it == leaves_.end() || it->second.erase(e) == 0)
            throw HierarchyViolation("leaf bookkeeping lost an edge");
        if (it->second.empty()) leaves_.erase(it);
        ++counters_.level_erases[params_.h];
        ev.push_back({LeafEvent::kLeave, e, std::move(leaf)});
    }
    for (int i = params_.h - 1; i >= level; --i) {
        const std::vector<Colour> prefix(edges_[e].chi.begin(), edges_[e].chi.begin() + i);
        auto nit = nodes_.find(prefix);
        if (nit == nodes_.end())
            throw HierarchyViolation("splitter bookkeeping lost a level");
        Node& nd = nit->second;
        const EdgeId le = edges_[e].local[i];
        std::vector<Recolour> log;
        try {
            log = nd.sp.erase(le);
        } catch (const std::invalid_argument& ex) {
            throw HierarchyViolation("level " + std::to_string(i) +
                                     " splitter refused an erase: " + ex.what());
        }
        nd.pub.erase(le);
        edges_[e].local[i] = kNoEdge;
        edges_[e].chi[i] = kBlank;
        ++counters_.level_erases[i];
        propagate(prefix, nd, log, kNoEdge, ev);
        if (nd.sp.edge_count() == 0) nodes_.erase(nit);
    }
}

void SplitterHierarchy::propagate(const std::vector<Colour>& prefix, Node& nd,
                                  const std::vector<Recolour>& log, EdgeId settling_local,
                                  std::vector<LeafEvent>& ev) {
    if (log.empty()) return;
    const int level = (int)prefix.size();
    // A drain may flip one edge several times; collapse to net moves so an edge
    // is relocated at most once (and not at all if it ended where it started).
    std::vector<std::pair<EdgeId, Colour>> moves;
    std::set<EdgeId> seen;
    for (const Recolour& rc : log)
        if (rc.e != settling_local && seen.insert(rc.e).second)
            moves.push_back({rc.e, rc.from});
    for (const auto& [le, before] : moves) {
        const Colour now = nd.sp.colour_of(le);
        if (now == before) continue;
        const EdgeId pub = nd.pub.at(le);
        remove_from(pub, level + 1, ev);
        edges_[pub].chi[level] = now;
        std::vector<Colour> child = prefix;
        child.push_back(now);
        insert_at(pub, std::move(child), ev);
    }
}

bool SplitterHierarchy::alive(EdgeId e) const {
    return e >= 0 && e < (EdgeId)edges_.size() && edges_[e].live;
}

std::pair<Vertex, Vertex> SplitterHierarchy::endpoints(EdgeId e) const {
    if (!alive(e)) throw std::invalid_argument("no such live edge");
    return {edges_[e].u, edges_[e].v};
}

const std::vector<Colour>& SplitterHierarchy::profile(EdgeId e) const {
    if (!alive(e)) throw std::invalid_argument("no such live edge");
    return edges_[e].chi;
}

int SplitterHierarchy::degree(Vertex v) const {
    if (v < 0 || v >= cfg_.n) throw std::invalid_argument("vertex out of range");
    return deg_[v];
}

std::vector<SplitterHierarchy::Leaf> SplitterHierarchy::leaf_partition() const {
    std::vector<Leaf> out;
    out.reserve(leaves_.size());
    for (const auto& [index, set] : leaves_)
        out.push_back({index, std::vector<EdgeId>(set.begin(), set.end())});
    return out;
}

std::vector<std::pair<std::vector<Colour>, const TSplitter*>> SplitterHierarchy::nodes() const {
    std::vector<std::pair<std::vector<Colour>, const TSplitter*>> out;
    out.reserve(nodes_.size());
    for (const auto& [prefix, nd] : nodes_) out.push_back({prefix, &nd.sp});
    return out;
}

const TSplitter* SplitterHierarchy::node_at(const std::vector<Colour>& prefix) const {
    auto it = nodes_.find(prefix);
    return it == nodes_.end() ? nullptr : &it->second.sp;
}

EdgeId SplitterHierarchy::local_id(EdgeId e, int level) const {
    if (!alive(e)) throw std::invalid_argument("no such live edge");
    if (level < 0 || level >= params_.h) throw std::invalid_argument("level out of range");
    return edges_[e].local[level];
}

}  // namespace ec
