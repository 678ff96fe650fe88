#include "ec/skeleton.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ec {

namespace {

struct ScannedComp {
    Colour ka, kb;
    std::vector<Vertex> seq;
    bool cycle;
    EdgeId slot;
};

// Walks every two-colour subgraph of the current colouring and emits its
// components.  Paths start from a degree-1 vertex; whatever is left per pair
// is cycles, traversed from their smallest vertex toward its smaller
// neighbour so the output is deterministic.
std::vector<ScannedComp> scan_components(const Graph& g) {
    const Colour k = g.palette();
    std::vector<std::vector<EdgeId>> by_colour(static_cast<std::size_t>(k) + 1);
    g.for_each_edge([&](EdgeId e, Vertex, Vertex, Colour c) {
        if (c != kBlank) by_colour[static_cast<std::size_t>(c)].push_back(e);
    });

    std::vector<ScannedComp> out;
    for (Colour a = 1; a <= k; ++a) {
        for (Colour b = a + 1; b <= k; ++b) {
            if (by_colour[static_cast<std::size_t>(a)].empty() &&
                by_colour[static_cast<std::size_t>(b)].empty())
                continue;

            std::unordered_map<Vertex, std::vector<std::pair<Vertex, EdgeId>>> adj;
            auto feed = [&](const std::vector<EdgeId>& es) {
                for (EdgeId e : es) {
                    auto [x, y] = g.endpoints(e);
                    adj[x].push_back({y, e});
                    adj[y].push_back({x, e});
                }
            };
            feed(by_colour[static_cast<std::size_t>(a)]);
            feed(by_colour[static_cast<std::size_t>(b)]);

            std::vector<Vertex> involved;
            involved.reserve(adj.size());
            for (const auto& [v, nbrs] : adj) involved.push_back(v);
            std::sort(involved.begin(), involved.end());

            std::unordered_set<Vertex> seen;
            for (Vertex s : involved) {
                if (adj[s].size() != 1 || seen.count(s)) continue;
                std::vector<Vertex> seq{s};
                seen.insert(s);
                Vertex prev = -1, cur = s;
                while (true) {
                    Vertex nxt = -1;
                    for (const auto& [w, e] : adj[cur])
                        if (w != prev) {
                            nxt = w;
                            break;
                        }
                    if (nxt == -1) break;
                    seq.push_back(nxt);
                    seen.insert(nxt);
                    prev = cur;
                    cur = nxt;
                }
                out.push_back({a, b, std::move(seq), false, kNoEdge});
            }
            for (Vertex s : involved) {
                if (seen.count(s)) continue;
                assert(adj[s].size() == 2);
                std::vector<Vertex> seq{s};
                seen.insert(s);
                Vertex prev = s;
                Vertex cur = std::min(adj[s][0].first, adj[s][1].first);
                while (cur != s) {
                    seq.push_back(cur);
                    seen.insert(cur);
                    Vertex nxt = -1;
                    for (const auto& [w, e] : adj[cur])
                        if (w != prev) {
                            nxt = w;
                            break;
                        }
                    assert(nxt != -1);
                    prev = cur;
                    cur = nxt;
                }
                EdgeId slot = g.find_edge(seq.back(), seq.front());
                assert(slot != kNoEdge);
                out.push_back({a, b, std::move(seq), true, slot});
            }
        }
    }
    return out;
}

CanonComp canonize(Colour ka, Colour kb, const std::vector<Vertex>& seq,
                   bool cycle) {
    CanonComp cc;
    cc.ka = ka;
    cc.kb = kb;
    cc.cycle = cycle;
    if (!cycle) {
        cc.seq = seq;
        if (cc.seq.front() > cc.seq.back())
            std::reverse(cc.seq.begin(), cc.seq.end());
        return cc;
    }
    const long long m = static_cast<long long>(seq.size());
    const long long s =
        std::min_element(seq.begin(), seq.end()) - seq.begin();
    const Vertex right = seq[static_cast<std::size_t>((s + 1) % m)];
    const Vertex left = seq[static_cast<std::size_t>((s + m - 1) % m)];
    const long long dir = right < left ? 1 : -1;
    cc.seq.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i)
        cc.seq.push_back(seq[static_cast<std::size_t>(((s + dir * i) % m + m) % m)]);
    return cc;
}

}  // namespace

BicompSkeleton::PairKey BicompSkeleton::pair_key(Colour a, Colour b) {
    if (a > b) std::swap(a, b);
    assert(a >= 1 && a != b && b <= 0xffff);
    return static_cast<PairKey>(a) << 16 | static_cast<PairKey>(b);
}

std::uint64_t BicompSkeleton::where_key(Vertex v, PairKey p) {
    return static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 32 | p;
}

BicompSkeleton::BicompSkeleton(Graph& g, long long ell) : g_(&g), ell_(ell) {
    if (ell < 1) throw std::invalid_argument("skeleton radius must be positive");
    for (auto& sc : scan_components(g))
        register_comp(sc.ka, sc.kb, std::move(sc.seq), sc.cycle, sc.slot);
}

const BicompSkeleton::Comp* BicompSkeleton::find_comp(Vertex v, PairKey p) const {
    auto it = where_.find(where_key(v, p));
    if (it == where_.end()) return nullptr;
    return &comps_.at(it->second);
}

BicompSkeleton::Comp* BicompSkeleton::find_comp(Vertex v, PairKey p) {
    auto it = where_.find(where_key(v, p));
    if (it == where_.end()) return nullptr;
    return &comps_.at(it->second);
}

PathRef BicompSkeleton::ref_of(const Comp& c) const {
    PathRef r;
    r.id = c.id;
    r.ka = c.ka;
    r.kb = c.kb;
    r.cycle = c.cycle;
    r.length = static_cast<long long>(c.seq.size()) - 1 + (c.cycle ? 1 : 0);
    if (c.cycle)
        r.ends = {-1, -1};
    else
        r.ends = {c.seq.front(), c.seq.back()};
    return r;
}

PathRef BicompSkeleton::iso_ref(Vertex v, Colour a, Colour b) {
    PathRef r;
    r.id = -1;
    r.ka = std::min(a, b);
    r.kb = std::max(a, b);
    r.ends = {v, v};
    r.length = 0;
    r.cycle = false;
    return r;
}

std::int64_t BicompSkeleton::register_comp(Colour ka, Colour kb,
                                           std::vector<Vertex> seq, bool cycle,
                                           EdgeId slot) {
    assert(seq.size() >= 2);
    Comp c;
    c.id = next_id_++;
    c.ka = ka;
    c.kb = kb;
    c.seq = std::move(seq);
    c.cycle = cycle;
    c.slot = slot;
    const PairKey p = pair_key(ka, kb);
    for (Vertex x : c.seq) {
        auto [it, fresh] = where_.emplace(where_key(x, p), c.id);
        assert(fresh);
        (void)it;
        (void)fresh;
        vpairs_[x].insert(p);
    }
    const std::int64_t id = c.id;
    comps_.emplace(id, std::move(c));
    return id;
}

void BicompSkeleton::unregister_comp(std::int64_t id) {
    auto it = comps_.find(id);
    assert(it != comps_.end());
    const PairKey p = pair_key(it->second.ka, it->second.kb);
    for (Vertex x : it->second.seq) {
        where_.erase(where_key(x, p));
        auto vp = vpairs_.find(x);
        if (vp != vpairs_.end()) {
            vp->second.erase(p);
            if (vp->second.empty()) vpairs_.erase(vp);
        }
    }
    comps_.erase(it);
}

void BicompSkeleton::orient_back(std::vector<Vertex>& seq, Vertex v) {
    if (seq.front() == v) std::reverse(seq.begin(), seq.end());
    assert(seq.back() == v);
}

void BicompSkeleton::merge_pair(Colour ka, Colour kb, EdgeId e, Vertex u,
                                Vertex v, ChangeReport& rep) {
    const PairKey p = pair_key(ka, kb);
    Comp* cu = find_comp(u, p);
    Comp* cv = find_comp(v, p);

    if (cu && cv && cu->id == cv->id) {
        Comp& c = *cu;
        assert(!c.cycle && c.slot == kNoEdge);
        assert((c.seq.front() == u && c.seq.back() == v) ||
               (c.seq.front() == v && c.seq.back() == u));
        rep.removed.push_back(ref_of(c));
        c.cycle = true;
        c.slot = e;
        return;
    }

    std::vector<Vertex> seq;
    if (cu) {
        assert(!cu->cycle);
        rep.removed.push_back(ref_of(*cu));
        seq = cu->seq;
        orient_back(seq, u);
        unregister_comp(cu->id);
    } else {
        rep.removed.push_back(iso_ref(u, ka, kb));
        seq = {u};
    }
    if (cv) {
        assert(!cv->cycle);
        rep.removed.push_back(ref_of(*cv));
        std::vector<Vertex> tail = cv->seq;
        orient_back(tail, v);
        std::reverse(tail.begin(), tail.end());
        seq.insert(seq.end(), tail.begin(), tail.end());
        unregister_comp(cv->id);
    } else {
        rep.removed.push_back(iso_ref(v, ka, kb));
        seq.push_back(v);
    }
    const std::int64_t nid = register_comp(ka, kb, std::move(seq), false, kNoEdge);
    rep.added.push_back(ref_of(comps_.at(nid)));
}

void BicompSkeleton::split_pair(Colour ka, Colour kb, EdgeId e, Vertex u,
                                Vertex v, ChangeReport& rep) {
    const PairKey p = pair_key(ka, kb);
    Comp* c = find_comp(u, p);
    assert(c && find_comp(v, p) == c);

    if (c->cycle && c->slot == e) {
        c->cycle = false;
        c->slot = kNoEdge;
        rep.added.push_back(ref_of(*c));
        return;
    }

    const std::vector<Vertex> seq = c->seq;
    const long long m = static_cast<long long>(seq.size());
    long long j = -1;
    for (long long i = 0; i + 1 < m; ++i) {
        const Vertex x = seq[static_cast<std::size_t>(i)];
        const Vertex y = seq[static_cast<std::size_t>(i + 1)];
        if ((x == u && y == v) || (x == v && y == u)) {
            j = i;
            break;
        }
    }
    assert(j >= 0);

    if (c->cycle) {
        // Cutting a non-slot edge re-links the two arcs through the slot.
        std::vector<Vertex> rot(seq.begin() + j + 1, seq.end());
        rot.insert(rot.end(), seq.begin(), seq.begin() + j + 1);
        unregister_comp(c->id);
        const std::int64_t nid =
            register_comp(ka, kb, std::move(rot), false, kNoEdge);
        rep.added.push_back(ref_of(comps_.at(nid)));
        return;
    }

    rep.removed.push_back(ref_of(*c));
    std::vector<Vertex> left(seq.begin(), seq.begin() + j + 1);
    std::vector<Vertex> right(seq.begin() + j + 1, seq.end());
    unregister_comp(c->id);
    if (left.size() >= 2) {
        const std::int64_t nid =
            register_comp(ka, kb, std::move(left), false, kNoEdge);
        rep.added.push_back(ref_of(comps_.at(nid)));
    } else {
        rep.added.push_back(iso_ref(left.front(), ka, kb));
    }
    if (right.size() >= 2) {
        const std::int64_t nid =
            register_comp(ka, kb, std::move(right), false, kNoEdge);
        rep.added.push_back(ref_of(comps_.at(nid)));
    } else {
        rep.added.push_back(iso_ref(right.front(), ka, kb));
    }
}

ChangeReport BicompSkeleton::bcs_colour(EdgeId e, Colour k) {
    const SetColourResult res = g_->set_colour(e, k);
    if (!res.ok)
        throw std::logic_error("bcs_colour: colour not free at both endpoints");
    const auto [u, v] = g_->endpoints(e);
    ChangeReport rep;
    for (Colour o = 1; o <= g_->palette(); ++o) {
        if (o == k) continue;
        merge_pair(std::min(k, o), std::max(k, o), e, u, v, rep);
    }
    return rep;
}

ChangeReport BicompSkeleton::bcs_uncolour(EdgeId e) {
    const Colour k = g_->colour_of(e);
    g_->clear_colour(e);  // throws when blank; no state changes before this
    const auto [u, v] = g_->endpoints(e);
    ChangeReport rep;
    for (Colour o = 1; o <= g_->palette(); ++o) {
        if (o == k) continue;
        split_pair(std::min(k, o), std::max(k, o), e, u, v, rep);
    }
    return rep;
}

std::vector<Vertex> BicompSkeleton::maximal_path_walk(Vertex v, Colour k1,
                                                      Colour k2,
                                                      long long limit) const {
    assert(k1 != k2);
    std::vector<Vertex> out{v};
    const Comp* c = find_comp(v, pair_key(k1, k2));
    if (!c) return out;

    const auto& s = c->seq;
    const long long m = static_cast<long long>(s.size());
    const long long pos =
        std::find(s.begin(), s.end(), v) - s.begin();
    assert(pos < m);

    auto edge_col = [&](long long i, long long j) {
        const EdgeId e = g_->find_edge(s[static_cast<std::size_t>(i)],
                                       s[static_cast<std::size_t>(j)]);
        assert(e != kNoEdge);
        return g_->colour_of(e);
    };

    long long dir = 0;
    if (c->cycle) {
        if (edge_col(pos, (pos + 1) % m) == k1)
            dir = 1;
        else if (edge_col(pos, (pos + m - 1) % m) == k1)
            dir = -1;
    } else {
        if (pos + 1 < m && edge_col(pos, pos + 1) == k1)
            dir = 1;
        else if (pos > 0 && edge_col(pos, pos - 1) == k1)
            dir = -1;
    }
    if (dir == 0) return out;

    if (c->cycle) {
        for (long long i = 1; i < m; ++i) {
            if (limit > 0 && static_cast<long long>(out.size()) >= limit) break;
            out.push_back(s[static_cast<std::size_t>(((pos + dir * i) % m + m) % m)]);
        }
    } else {
        for (long long i = pos + dir; i >= 0 && i < m; i += dir) {
            if (limit > 0 && static_cast<long long>(out.size()) >= limit) break;
            out.push_back(s[static_cast<std::size_t>(i)]);
        }
    }
    return out;
}

PathRef BicompSkeleton::path_of(Vertex v, Colour a, Colour b) const {
    assert(a != b);
    const Comp* c = find_comp(v, pair_key(a, b));
    if (!c) return iso_ref(v, a, b);
    return ref_of(*c);
}

bool BicompSkeleton::is_endpoint(Vertex v, Colour a, Colour b) const {
    const Comp* c = find_comp(v, pair_key(a, b));
    if (!c) return true;  // implicit length-0 path
    if (c->cycle) return false;
    return c->seq.front() == v || c->seq.back() == v;
}

std::vector<PathRef> BicompSkeleton::y3_in(Vertex v) const {
    std::vector<PathRef> out;
    auto it = vpairs_.find(v);
    if (it == vpairs_.end()) return out;
    std::vector<PairKey> ps(it->second.begin(), it->second.end());
    std::sort(ps.begin(), ps.end());
    for (PairKey p : ps) {
        const Comp* c = find_comp(v, p);
        assert(c);
        if (c->cycle) continue;
        const auto& s = c->seq;
        const long long pos =
            std::find(s.begin(), s.end(), v) - s.begin();
        const long long d =
            std::min(pos, static_cast<long long>(s.size()) - 1 - pos);
        if (d <= ell_ - 1) out.push_back(ref_of(*c));
    }
    return out;
}

std::vector<Vertex> BicompSkeleton::y2_out(Vertex v) const {
    std::vector<Vertex> out;
    for (EdgeId e : g_->incident(v)) {
        if (g_->colour_of(e) != kBlank) out.push_back(g_->other_end(e, v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Vertex> BicompSkeleton::near_end(std::int64_t comp_id, Vertex end,
                                             long long count) const {
    const Comp& c = comps_.at(comp_id);
    if (c.cycle) throw std::logic_error("near_end: component is a cycle");
    std::vector<Vertex> seq = c.seq;
    orient_back(seq, end);
    std::reverse(seq.begin(), seq.end());
    if (count < static_cast<long long>(seq.size()))
        seq.resize(static_cast<std::size_t>(count));
    return seq;
}

PathRef BicompSkeleton::by_id(std::int64_t comp_id) const {
    return ref_of(comps_.at(comp_id));
}

std::vector<PathRef> BicompSkeleton::all_components() const {
    std::vector<PathRef> out;
    out.reserve(comps_.size());
    for (const auto& [id, c] : comps_) out.push_back(ref_of(c));
    std::sort(out.begin(), out.end(),
              [](const PathRef& x, const PathRef& y) { return x.id < y.id; });
    return out;
}

std::vector<CanonComp> BicompSkeleton::canonical_components() const {
    std::vector<CanonComp> out;
    out.reserve(comps_.size());
    for (const auto& [id, c] : comps_)
        out.push_back(canonize(c.ka, c.kb, c.seq, c.cycle));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CanonComp> BicompSkeleton::fresh_components(const Graph& g) {
    std::vector<CanonComp> out;
    for (const auto& sc : scan_components(g))
        out.push_back(canonize(sc.ka, sc.kb, sc.seq, sc.cycle));
    std::sort(out.begin(), out.end());
    return out;
}

std::string BicompSkeleton::validate() const {
    std::ostringstream bad;
    std::size_t where_expected = 0;

    auto pair_degree = [&](Vertex v, Colour a, Colour b) {
        return (g_->edge_with_colour(v, a) != kNoEdge ? 1 : 0) +
               (g_->edge_with_colour(v, b) != kNoEdge ? 1 : 0);
    };

    for (const auto& [id, c] : comps_) {
        const auto& s = c.seq;
        if (s.size() < 2) {
            bad << "component " << id << " has fewer than two vertices";
            return bad.str();
        }
        std::set<Vertex> uniq(s.begin(), s.end());
        if (uniq.size() != s.size()) {
            bad << "component " << id << " repeats a vertex";
            return bad.str();
        }
        Colour prev = kBlank;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const EdgeId e = g_->find_edge(s[i], s[i + 1]);
            if (e == kNoEdge) {
                bad << "component " << id << " lists non-adjacent vertices "
                    << s[i] << "," << s[i + 1];
                return bad.str();
            }
            const Colour col = g_->colour_of(e);
            if (col != c.ka && col != c.kb) {
                bad << "component " << id << " edge " << e
                    << " wears a foreign colour " << col;
                return bad.str();
            }
            if (col == prev) {
                bad << "component " << id << " colours fail to alternate at "
                    << s[i];
                return bad.str();
            }
            prev = col;
        }
        if (c.cycle) {
            if (c.slot == kNoEdge || !g_->alive(c.slot)) {
                bad << "cycle " << id << " has no live slot edge";
                return bad.str();
            }
            const auto [x, y] = g_->endpoints(c.slot);
            if (!((x == s.front() && y == s.back()) ||
                  (x == s.back() && y == s.front()))) {
                bad << "cycle " << id << " slot edge joins wrong vertices";
                return bad.str();
            }
            const Colour sc = g_->colour_of(c.slot);
            const Colour first = g_->colour_of(g_->find_edge(s[0], s[1]));
            const Colour last =
                g_->colour_of(g_->find_edge(s[s.size() - 2], s.back()));
            if (sc != c.ka && sc != c.kb) {
                bad << "cycle " << id << " slot wears a foreign colour";
                return bad.str();
            }
            if (sc == first || sc == last) {
                bad << "cycle " << id << " slot colour breaks alternation";
                return bad.str();
            }
            for (Vertex v : s) {
                if (pair_degree(v, c.ka, c.kb) != 2) {
                    bad << "cycle " << id << " vertex " << v
                        << " lacks both colours";
                    return bad.str();
                }
            }
        } else {
            if (c.slot != kNoEdge) {
                bad << "path " << id << " carries a slot edge";
                return bad.str();
            }
            for (std::size_t i = 0; i < s.size(); ++i) {
                const int want = (i == 0 || i + 1 == s.size()) ? 1 : 2;
                if (pair_degree(s[i], c.ka, c.kb) != want) {
                    bad << "path " << id << " vertex " << s[i]
                        << " has pair degree != " << want;
                    return bad.str();
                }
            }
        }
        const PairKey p = pair_key(c.ka, c.kb);
        for (Vertex v : s) {
            auto it = where_.find(where_key(v, p));
            if (it == where_.end() || it->second != id) {
                bad << "index misses vertex " << v << " of component " << id;
                return bad.str();
            }
            auto vp = vpairs_.find(v);
            if (vp == vpairs_.end() || !vp->second.count(p)) {
                bad << "pair list misses vertex " << v << " of component "
                    << id;
                return bad.str();
            }
        }
        where_expected += s.size();
    }

    if (where_.size() != where_expected) {
        bad << "index holds " << where_.size() << " entries, expected "
            << where_expected;
        return bad.str();
    }
    std::size_t vp_total = 0;
    for (const auto& [v, ps] : vpairs_) vp_total += ps.size();
    if (vp_total != where_expected) {
        bad << "pair lists hold " << vp_total << " entries, expected "
            << where_expected;
        return bad.str();
    }
    return {};
}

}  // namespace ec
