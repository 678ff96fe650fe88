#include "ec/stepping.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "ec/chains.hpp"
#include "ec/params.hpp"

namespace ec {

namespace {

Colour pair_other(Colour c, Colour x, Colour y) { return c == x ? y : x; }

std::vector<Vertex> norm_path(std::vector<Vertex> p) {
    if (!p.empty() && p.back() < p.front()) std::reverse(p.begin(), p.end());
    return p;
}

}  // namespace

SteppingSets::SteppingSets(BicompSkeleton& sk, SpreadConfig cfg)
    : sk_(&sk), g_(&sk.graph()), cfg_(cfg) {
    if (cfg_.ell != sk.ell())
        throw std::invalid_argument("stepping: ell differs from the skeleton horizon");
    if (cfg_.a < 2) throw std::invalid_argument("stepping: spread parameter below 2");
    levels_ = cfg_.levels > 0 ? cfg_.levels : std::max(1, sqrt_log(g_->vertex_count()));
    cfg_.levels = levels_;
}

// ----------------------------------------------------------------- queries

std::vector<ProcessString> SteppingSets::level_set(int level, Vertex y, Colour ka, Colour kb,
                                                   Vertex w) const {
    if (ka > kb) std::swap(ka, kb);
    if (level < 1 || level > levels_) return {};
    const EdgeId ea = g_->edge_with_colour(y, ka);
    const EdgeId eb = g_->edge_with_colour(y, kb);
    if (ea != kNoEdge && eb != kNoEdge) return {};  // interior or cycle vertex
    if (ea == kNoEdge && eb == kNoEdge) return {ProcessString{PathChar{0, 0, y, 1}}};
    const Colour ca = ea != kNoEdge ? ka : kb;
    const Colour cb = pair_other(ca, ka, kb);
    const auto seq = sk_->maximal_path_walk(y, ca, cb);
    const long long tp = static_cast<long long>(seq.size());
    if (tp <= cfg_.ell) return {ProcessString{PathChar{ca, cb, y, tp}}};
    if (level <= 1) return {};
    const auto it = store_.find({level, y, ka, kb, w});
    return it == store_.end() ? std::vector<ProcessString>{} : it->second;
}

std::optional<SteppingSets::DecodedSteps> SteppingSets::decode_steps(
    Vertex w, const ProcessString& s) const {
    if (s.empty()) return std::nullopt;
    DecodedSteps out;
    out.centres.push_back(w);
    ColourView view(*g_);
    for (std::size_t j = 0; j < s.size(); ++j) {
        const PathChar& c = s[j];
        const bool last = j + 1 == s.size();
        if (c.trivial()) {
            if (!last || c.len != 1 || c.cb != 0) return std::nullopt;
            out.paths.push_back({c.start});
            out.edges.push_back({});
            out.qnorm.push_back({c.start});
            out.augmenting = true;
            continue;
        }
        const Walk wk = walk_with_edges(view, c.start, c.ca, c.cb);
        const long long tp = static_cast<long long>(wk.verts.size());
        if (c.len < 2 || c.len > tp) return std::nullopt;
        if (last != (c.len == tp)) return std::nullopt;
        out.paths.emplace_back(wk.verts.begin(), wk.verts.begin() + c.len);
        out.edges.emplace_back(wk.edges.begin(), wk.edges.begin() + (c.len - 1));
        out.qnorm.push_back(norm_path(wk.verts));
        if (last) {
            out.augmenting = true;
            continue;
        }
        for (long long i = 0; i + 1 < c.len; ++i) {
            const EdgeId e = wk.edges[i];
            view.override_colour(e, pair_other(view.colour(e), c.ca, c.cb));
        }
        view.override_colour(wk.edges[c.len - 1], kBlank);
        const Vertex centre = wk.verts[c.len - 1];
        out.centres.push_back(centre);
        if (g_->find_edge(centre, s[j + 1].start) == kNoEdge) return std::nullopt;
    }
    return out;
}

std::optional<SteppingProcess> SteppingSets::decode(Vertex w, Vertex y, Colour ka, Colour kb,
                                                    const ProcessString& s) const {
    if (ka > kb) std::swap(ka, kb);
    if (s.empty() || s.front().start != y) return std::nullopt;
    if (g_->find_edge(w, y) == kNoEdge) return std::nullopt;
    auto dec = decode_steps(w, s);
    if (!dec) return std::nullopt;
    SteppingProcess p;
    p.w1 = w;
    p.ka = ka;
    p.kb = kb;
    p.chars = s;
    p.paths = std::move(dec->paths);
    p.centres = std::move(dec->centres);
    p.augmenting = dec->augmenting;
    return p;
}

std::optional<SteppingProcess> SteppingSets::lookup(Vertex w, Vertex y, Colour ka,
                                                    Colour kb) const {
    const auto set = level_set(levels_, y, ka, kb, w);
    if (set.empty()) return std::nullopt;
    return decode(w, y, ka, kb, set.front());
}

std::vector<SteppingSets::StoredEntry> SteppingSets::dump() const {
    std::vector<StoredEntry> out;
    out.reserve(store_.size());
    for (const auto& [k, v] : store_) {
        const auto& [lvl, y, ka, kb, w] = k;
        out.push_back({lvl, y, ka, kb, w, v});
    }
    return out;
}

std::vector<SteppingSets::MarkEntry> SteppingSets::marks() const {
    std::vector<MarkEntry> out;
    out.reserve(marks_.size());
    for (const auto& [k, lvl] : marks_) {
        const auto& [y, ka, kb] = k;
        out.push_back({y, ka, kb, lvl});
    }
    return out;
}

bool SteppingSets::goodness_ok(const std::vector<ProcessString>& set, long long a) {
    if (set.size() <= 1) return true;
    std::map<PathChar, std::vector<const ProcessString*>, decltype(&char_less)> groups(
        &char_less);
    for (const ProcessString& s : set) {
        if (s.empty()) return false;
        groups[s.front()].push_back(&s);
    }
    if (static_cast<long long>(groups.size()) < (a + 1) / 2) return false;
    for (const auto& [first, members] : groups) {
        if (members.size() <= 1) continue;
        std::set<std::tuple<long long, Vertex, Colour, Colour>> seconds;
        for (const ProcessString* s : members) {
            if (s->size() < 2) return false;
            seconds.insert(char_rank((*s)[1]));
        }
        if (static_cast<long long>(seconds.size()) < (a + 3) / 4) return false;
    }
    return true;
}

// --------------------------------------------------------------- mutation

ChangeReport SteppingSets::colour(EdgeId e, Colour k) {
    ChangeReport rep = colour_mark_only(e, k);
    repair_all();
    return rep;
}

ChangeReport SteppingSets::uncolour(EdgeId e) {
    ChangeReport rep = uncolour_mark_only(e);
    repair_all();
    return rep;
}

ChangeReport SteppingSets::colour_mark_only(EdgeId e, Colour k) {
    const auto [u, v] = g_->endpoints(e);
    ChangeReport rep = sk_->bcs_colour(e, k);
    mark_dirty(rep, u, v);
    return rep;
}

ChangeReport SteppingSets::uncolour_mark_only(EdgeId e) {
    const auto [u, v] = g_->endpoints(e);
    ChangeReport rep = sk_->bcs_uncolour(e);
    mark_dirty(rep, u, v);
    return rep;
}

void SteppingSets::edge_added(Vertex u, Vertex v) {
    mark_dirty({}, u, v);
    repair_all();
}

void SteppingSets::edge_removed(Vertex u, Vertex v) {
    mark_dirty({}, u, v);
    repair_all();
}

std::vector<char> SteppingSets::ball2(const std::vector<Vertex>& srcs) const {
    std::vector<int> dist(g_->vertex_count(), -1);
    std::vector<Vertex> queue;
    for (Vertex s : srcs)
        if (dist[s] < 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const Vertex v = queue[h];
        if (dist[v] == 2) continue;
        for (EdgeId e : g_->incident(v)) {
            const Vertex to = g_->other_end(e, v);
            if (dist[to] < 0) {
                dist[to] = dist[v] + 1;
                queue.push_back(to);
            }
        }
    }
    std::vector<char> b(g_->vertex_count(), 0);
    for (Vertex v = 0; v < g_->vertex_count(); ++v) b[v] = dist[v] >= 0;
    return b;
}

void SteppingSets::mark_key(Vertex y, Colour ka, Colour kb, int level) {
    const auto [it, inserted] = marks_.try_emplace({y, ka, kb}, level);
    if (!inserted && it->second > level) it->second = level;
}

void SteppingSets::mark_dirty(const ChangeReport& rep, Vertex u, Vertex v) {
    // Base dirty set: the 2-hop ball of the touched edge (patched with both
    // direct neighbourhoods so a just-removed edge is still covered) plus the
    // endpoints of every path the change created or destroyed.
    const std::vector<char> ball = ball2({u, v});
    std::set<Vertex> r;
    for (Vertex x = 0; x < g_->vertex_count(); ++x)
        if (ball[x]) r.insert(x);
    for (Vertex x : {u, v})
        for (EdgeId e : g_->incident(x)) r.insert(g_->other_end(e, x));
    for (const auto* side : {&rep.removed, &rep.added})
        for (const PathRef& pr : *side) {
            r.insert(pr.ends[0]);
            r.insert(pr.ends[1]);
        }

    const Colour k = g_->palette();
    for (Vertex y : r)
        for (Colour ka = 1; ka <= k; ++ka)
            for (Colour kb = ka + 1; kb <= k; ++kb) mark_key(y, ka, kb, 1);

    frontiers_.assign(1, r.size());
    std::set<Vertex> cur(r.begin(), r.end());
    for (int i = 1; i < levels_ && !cur.empty(); ++i) {
        std::set<Vertex> reach;  // coloured neighbours of the frontier
        for (Vertex x : cur)
            for (EdgeId e : g_->incident(x))
                if (g_->colour_of(e) != kBlank) reach.insert(g_->other_end(e, x));
        std::set<Vertex> next;
        for (Vertex x : reach) {
            for (const PathRef& pr : sk_->y3_in(x)) {
                mark_key(pr.ends[0], pr.ka, pr.kb, i + 1);
                mark_key(pr.ends[1], pr.ka, pr.kb, i + 1);
                next.insert(pr.ends[0]);
                next.insert(pr.ends[1]);
            }
            int dc = 0;
            for (EdgeId e : g_->incident(x))
                if (g_->colour_of(e) != kBlank) ++dc;
            if (k - dc >= 2) next.insert(x);  // x has single-vertex paths
        }
        frontiers_.push_back(next.size());
        cur = std::move(next);
    }
}

void SteppingSets::repair_all() {
    for (int lvl = 2; lvl <= levels_; ++lvl) {
        for (const auto& [mk, m] : marks_) {
            if (m > lvl) continue;
            const auto& [y, ka, kb] = mk;
            const StoreKey lo{lvl, y, ka, kb, std::numeric_limits<Vertex>::min()};
            const StoreKey hi{lvl, y, ka, kb, std::numeric_limits<Vertex>::max()};
            store_.erase(store_.lower_bound(lo), store_.upper_bound(hi));
            const EdgeId ea = g_->edge_with_colour(y, ka);
            const EdgeId eb = g_->edge_with_colour(y, kb);
            if ((ea != kNoEdge) == (eb != kNoEdge)) continue;  // no key or single-vertex path
            const Colour ca = ea != kNoEdge ? ka : kb;
            const auto seq = sk_->maximal_path_walk(y, ca, pair_other(ca, ka, kb));
            if (static_cast<long long>(seq.size()) <= cfg_.ell) continue;
            std::vector<Vertex> nb;
            for (EdgeId e : g_->incident(y)) nb.push_back(g_->other_end(e, y));
            std::sort(nb.begin(), nb.end());
            for (Vertex w : nb) {
                auto set = rebuild_key(lvl, seq, ka, kb, w);
                if (!set.empty()) store_[{lvl, y, ka, kb, w}] = std::move(set);
            }
        }
    }
    marks_.clear();
}

// ---------------------------------------------------------------- rebuild

namespace {

// Violation level of a decoded candidate against the new prefix (0 = clean):
// the first candidate path may not touch the 2-hop ball of w; the second
// centre and path may not touch the ball of w and P1; anything beyond that
// (shared edges or vertices with P1, riding P1's maximal path, later centres
// or paths near w and P1) lands at level three.
int classify_candidate(const std::vector<std::vector<Vertex>>& verts,
                       const std::vector<std::vector<EdgeId>>& edges,
                       const std::vector<std::vector<Vertex>>& qnorm,
                       const std::vector<char>& p1flag,
                       const std::unordered_set<EdgeId>& p1edges,
                       const std::vector<Vertex>& q1norm, const std::vector<char>& ballw,
                       const std::vector<char>& ball12) {
    for (Vertex v : verts[0])
        if (ballw[v]) return 1;
    if (verts.size() >= 2) {
        if (ball12[verts[0].back()]) return 2;
        for (Vertex v : verts[1])
            if (ball12[v]) return 2;
    }
    for (const auto& es : edges)
        for (EdgeId e : es)
            if (p1edges.count(e)) return 3;
    for (const auto& q : qnorm)
        if (q == q1norm) return 3;
    for (std::size_t j = 1; j < verts.size(); ++j)
        for (Vertex v : verts[j])
            if (p1flag[v]) return 3;
    for (std::size_t j = 2; j < verts.size(); ++j) {
        if (ball12[verts[j - 1].back()]) return 3;
        for (Vertex v : verts[j])
            if (ball12[v]) return 3;
    }
    return 0;
}

}  // namespace

std::vector<ProcessString> SteppingSets::rebuild_key(int level, const std::vector<Vertex>& seq,
                                                     Colour ka, Colour kb, Vertex w) const {
    const long long tp = static_cast<long long>(seq.size());
    std::vector<EdgeId> slots(tp - 1);
    for (long long i = 0; i + 1 < tp; ++i) slots[i] = g_->find_edge(seq[i], seq[i + 1]);
    const std::vector<char> ballw = ball2({w});
    const std::vector<Vertex> q1norm = norm_path(seq);
    const Colour ca1 = g_->colour_of(slots[0]);
    const long long need_pts = (cfg_.a + 1) / 2;
    const long long need_str = (cfg_.a + 3) / 4;
    const long long hi = std::min(cfg_.ell, tp - 3);

    std::vector<std::pair<long long, std::vector<ProcessString>>> pts;
    for (long long pos = 3; pos <= hi && static_cast<long long>(pts.size()) < need_pts; ++pos) {
        const Vertex x = seq[pos - 1];
        if (ballw[x]) continue;

        ColourView view(*g_);
        const EdgeId jump = slots[pos - 1];
        const Colour k2 = g_->colour_of(jump);
        const Colour k1 = pair_other(k2, ka, kb);
        for (long long i = 0; i + 1 < pos; ++i)
            view.override_colour(slots[i], pair_other(g_->colour_of(slots[i]), ka, kb));
        view.override_colour(jump, kBlank);

        const ExtensionProbe probe = probe_extension(view, x, seq[pos], k1, k2);
        if (!probe.ok) continue;
        const Vertex y2 = probe.start;
        const long long t2 =
            probe.immediate ? 1 : static_cast<long long>(probe.walk.verts.size());
        std::vector<ProcessString> source;
        if (probe.immediate)
            source = {ProcessString{PathChar{0, 0, y2, 1}}};
        else
            source = level_set(level - 1, y2, std::min(probe.pa, probe.pb),
                               std::max(probe.pa, probe.pb), x);
        if (source.empty()) continue;

        std::vector<char> p1flag(g_->vertex_count(), 0);
        std::vector<Vertex> srcs = {w};
        for (long long i = 0; i < pos; ++i) {
            p1flag[seq[i]] = 1;
            srcs.push_back(seq[i]);
        }
        const std::unordered_set<EdgeId> p1edges(slots.begin(), slots.begin() + (pos - 1));
        const std::vector<char> ball12 = ball2(srcs);

        std::vector<ProcessString> clean;
        long long n1 = 0, n2 = 0, n3 = 0;
        for (const ProcessString& s : source) {
            if (s.empty()) continue;
            if (s[0].trivial()) {
                if (!(probe.immediate || t2 == 1) || s.size() != 1) continue;
            } else {
                if (probe.immediate || s[0].start != y2 || s[0].ca != probe.pa ||
                    s[0].cb != probe.pb)
                    continue;
                if (s.size() == 1 ? s[0].len != t2 : s[0].len + 1 > t2 - 2) continue;
            }
            const auto dec = decode_steps(x, s);
            if (!dec) continue;
            switch (classify_candidate(dec->paths, dec->edges, dec->qnorm, p1flag, p1edges,
                                       q1norm, ballw, ball12)) {
                case 0: clean.push_back(s); break;
                case 1: ++n1; break;
                case 2: ++n2; break;
                default: ++n3; break;
            }
        }
        if (n1 >= 1 || 8 * n2 >= cfg_.a || 32 * n3 >= cfg_.a * cfg_.a) continue;
        std::vector<ProcessString> contrib;
        if (source.size() == 1) {
            if (clean.size() != 1) continue;
            contrib = std::move(clean);
        } else {
            std::sort(clean.begin(), clean.end(), string_less);
            for (const ProcessString& s : clean) {
                bool dup = false;
                for (const ProcessString& t : contrib) dup = dup || t[0] == s[0];
                if (!dup) contrib.push_back(s);
                if (static_cast<long long>(contrib.size()) == need_str) break;
            }
            if (static_cast<long long>(contrib.size()) < need_str) continue;
        }
        pts.emplace_back(pos, std::move(contrib));
    }
    if (static_cast<long long>(pts.size()) < need_pts) return {};

    std::vector<ProcessString> out;
    for (const auto& [pos, strs] : pts) {
        const PathChar p1{ca1, pair_other(ca1, ka, kb), seq[0], pos};
        for (const ProcessString& s : strs) {
            ProcessString full{p1};
            full.insert(full.end(), s.begin(), s.end());
            out.push_back(std::move(full));
        }
    }
    return out;
}

}  // namespace ec
