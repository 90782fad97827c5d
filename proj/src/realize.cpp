#include "dgcat/realize.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace dgcat {

namespace {

constexpr int kHardLenCap = 512;

/* objects on some x -> y walk (both endpoints included when connected) */
std::vector<bool> between_set(const DgPresentation& p, int x, int y)
{
    int n = p.num_objects();
    std::vector<std::vector<int>> out(static_cast<size_t>(n)), in(static_cast<size_t>(n));
    for (const Arrow& a : p.arrows()) {
        out[static_cast<size_t>(a.src)].push_back(a.dst);
        in[static_cast<size_t>(a.dst)].push_back(a.src);
    }
    auto reach = [&](int start, const std::vector<std::vector<int>>& adj) {
        std::vector<bool> seen(static_cast<size_t>(n), false);
        std::deque<int> q{start};
        seen[static_cast<size_t>(start)] = true;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int u : adj[static_cast<size_t>(v)])
                if (!seen[static_cast<size_t>(u)]) {
                    seen[static_cast<size_t>(u)] = true;
                    q.push_back(u);
                }
        }
        return seen;
    };
    std::vector<bool> from_x = reach(x, out), to_y = reach(y, in);
    std::vector<bool> v(static_cast<size_t>(n), false);
    for (int i = 0; i < n; ++i)
        v[static_cast<size_t>(i)] = from_x[static_cast<size_t>(i)] && to_y[static_cast<size_t>(i)];
    return v;
}

struct Edge {
    int arrow, src, dst;
    long w;
};

/* Bellman-Ford negative-cycle detection; returns arrow indices of a
 * negative cycle, or empty when none is reachable. */
std::vector<int> negative_cycle(int n, const std::vector<Edge>& edges)
{
    std::vector<long> dist(static_cast<size_t>(n), 0);
    std::vector<int> pred_edge(static_cast<size_t>(n), -1);
    int last_relaxed = -1;
    for (int it = 0; it < n; ++it) {
        last_relaxed = -1;
        for (size_t e = 0; e < edges.size(); ++e) {
            const Edge& ed = edges[e];
            if (dist[static_cast<size_t>(ed.src)] + ed.w < dist[static_cast<size_t>(ed.dst)]) {
                dist[static_cast<size_t>(ed.dst)] = dist[static_cast<size_t>(ed.src)] + ed.w;
                pred_edge[static_cast<size_t>(ed.dst)] = static_cast<int>(e);
                last_relaxed = ed.dst;
            }
        }
        if (last_relaxed < 0)
            return {};
    }
    /* walk predecessors n times to land inside the cycle */
    int v = last_relaxed;
    for (int i = 0; i < n; ++i)
        v = edges[static_cast<size_t>(pred_edge[static_cast<size_t>(v)])].src;
    std::vector<int> cyc;
    int u = v;
    do {
        int e = pred_edge[static_cast<size_t>(u)];
        cyc.push_back(edges[static_cast<size_t>(e)].arrow);
        u = edges[static_cast<size_t>(e)].src;
    } while (u != v);
    std::reverse(cyc.begin(), cyc.end());
    return cyc;
}

/* min (or max) total arrow degree over walks v -> y inside `inset`;
 * valid when no improving cycle exists. LONG_MAX/2 marks unreachable. */
constexpr long kFar = std::numeric_limits<long>::max() / 4;

std::vector<long> path_degree_bound(const DgPresentation& p, const std::vector<bool>& inset, int y,
                                    bool maximize)
{
    int n = p.num_objects();
    std::vector<long> dist(static_cast<size_t>(n), kFar);
    dist[static_cast<size_t>(y)] = 0;
    for (int it = 0; it < n + 1; ++it) {
        bool changed = false;
        for (const Arrow& a : p.arrows()) {
            if (!inset[static_cast<size_t>(a.src)] || !inset[static_cast<size_t>(a.dst)])
                continue;
            long w = maximize ? -static_cast<long>(a.deg) : static_cast<long>(a.deg);
            if (dist[static_cast<size_t>(a.dst)] < kFar &&
                dist[static_cast<size_t>(a.dst)] + w < dist[static_cast<size_t>(a.src)]) {
                dist[static_cast<size_t>(a.src)] = dist[static_cast<size_t>(a.dst)] + w;
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    if (maximize)
        for (auto& d : dist)
            if (d < kFar)
                d = -d;
    return dist;
}

std::vector<int> hop_distance_to(const DgPresentation& p, int y)
{
    int n = p.num_objects();
    std::vector<std::vector<int>> in(static_cast<size_t>(n));
    for (const Arrow& a : p.arrows())
        in[static_cast<size_t>(a.dst)].push_back(a.src);
    std::vector<int> dist(static_cast<size_t>(n), -1);
    std::deque<int> q{y};
    dist[static_cast<size_t>(y)] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int u : in[static_cast<size_t>(v)])
            if (dist[static_cast<size_t>(u)] < 0) {
                dist[static_cast<size_t>(u)] = dist[static_cast<size_t>(v)] + 1;
                q.push_back(u);
            }
    }
    return dist;
}

struct Partial {
    std::vector<int> applied;  // arrows in application order
    int at;
    int deg;
};

Word to_word(const Partial& q, int x)
{
    std::vector<int> arrows(q.applied.rbegin(), q.applied.rend());
    return Word(x, q.at, q.deg, std::move(arrows));
}

}  // namespace

std::vector<Word> enumerate_words(const DgPresentation& p, int x, int y, int deg_lo, int deg_hi,
                                  int maxlen, long budget, int* effective_maxlen)
{
    if (effective_maxlen)
        *effective_maxlen = maxlen;
    std::vector<Word> out;
    if (p.is_zero_object(x) || p.is_zero_object(y))
        return out;
    std::vector<std::vector<int>> by_src(static_cast<size_t>(p.num_objects()));
    for (int a = 0; a < p.num_arrows(); ++a)
        by_src[static_cast<size_t>(p.arrow(a).src)].push_back(a);
    std::vector<int> hops = hop_distance_to(p, y);
    int min_deg = 0, max_deg = 0;
    for (const Arrow& a : p.arrows()) {
        min_deg = std::min(min_deg, a.deg);
        max_deg = std::max(max_deg, a.deg);
    }
    std::vector<Partial> level{Partial{{}, x, 0}};
    long emitted = 0;
    for (int len = 0; len <= maxlen; ++len) {
        for (const Partial& q : level) {
            if (q.at == y && deg_lo <= q.deg && q.deg <= deg_hi) {
                out.push_back(to_word(q, x));
                ++emitted;
            }
        }
        if (len == maxlen)
            break;
        std::vector<Partial> next;
        for (const Partial& q : level) {
            for (int a : by_src[static_cast<size_t>(q.at)]) {
                const Arrow& ar = p.arrow(a);
                int nlen = len + 1, ndeg = q.deg + ar.deg;
                int rem = maxlen - nlen;
                if (hops[static_cast<size_t>(ar.dst)] < 0 || hops[static_cast<size_t>(ar.dst)] > rem)
                    continue;
                /* degree reachability: remaining letters shift degree by
                 * at most rem * [min_deg, max_deg] */
                if (ndeg + static_cast<long>(rem) * min_deg > deg_hi ||
                    ndeg + static_cast<long>(rem) * max_deg < deg_lo)
                    continue;
                Partial nq = q;
                nq.applied.push_back(a);
                nq.at = ar.dst;
                nq.deg = ndeg;
                next.push_back(std::move(nq));
            }
        }
        if (emitted + static_cast<long>(next.size()) > budget) {
            if (effective_maxlen)
                *effective_maxlen = len;
            break;
        }
        level = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

FinitenessReport finiteness_certificate(const DgPresentation& p, int x, int y, GradedWindow w)
{
    (void)w;  // the criterion is window-independent
    FinitenessReport rep;
    if (p.is_zero_object(x) || p.is_zero_object(y)) {
        rep.status = FiniteStatus::certified_finite;
        rep.reason = "zero-object hom";
        rep.complete_maxlen = 0;
        return rep;
    }
    std::vector<bool> inset = between_set(p, x, y);
    std::vector<Edge> pos_edges, neg_edges;
    int n = p.num_objects();
    long big = static_cast<long>(n) + 1;
    bool any_edge = false;
    for (int a = 0; a < p.num_arrows(); ++a) {
        const Arrow& ar = p.arrow(a);
        if (!inset[static_cast<size_t>(ar.src)] || !inset[static_cast<size_t>(ar.dst)])
            continue;
        any_edge = true;
        /* cycle with total degree <= 0 iff negative cycle for big*deg - 1 */
        pos_edges.push_back({a, ar.src, ar.dst, big * ar.deg - 1});
        neg_edges.push_back({a, ar.src, ar.dst, -big * ar.deg - 1});
    }
    if (!any_edge) {
        rep.status = FiniteStatus::certified_finite;
        rep.reason = "no arrows between the endpoints";
        rep.complete_maxlen = 0;
        return rep;
    }
    std::vector<int> bad_pos = negative_cycle(n, pos_edges);  // nonempty => some cycle deg <= 0
    std::vector<int> bad_neg = negative_cycle(n, neg_edges);  // nonempty => some cycle deg >= 0
    if (bad_pos.empty() || bad_neg.empty()) {
        rep.status = FiniteStatus::certified_finite;
        if (bad_pos.empty() && bad_neg.empty()) {
            rep.reason = "acyclic between the endpoints";
            rep.cycle_sign = 0;
        }
        else if (bad_pos.empty()) {
            rep.reason = "all cycle degrees positive";
            rep.cycle_sign = 1;
        }
        else {
            rep.reason = "all cycle degrees negative";
            rep.cycle_sign = -1;
        }
        return rep;
    }
    rep.status = FiniteStatus::truncated;
    const std::vector<int>& cyc = [&]() -> const std::vector<int>& {
        long d1 = 0, d2 = 0;
        for (int a : bad_pos)
            d1 += p.arrow(a).deg;
        for (int a : bad_neg)
            d2 += p.arrow(a).deg;
        if (d1 == 0)
            return bad_pos;
        if (d2 == 0)
            return bad_neg;
        return bad_pos;
    }();
    long cdeg = 0;
    std::string names;
    for (int a : cyc) {
        cdeg += p.arrow(a).deg;
        rep.witness_cycle.push_back(p.arrow(a).name);
        names += (names.empty() ? "" : ".") + p.arrow(a).name;
    }
    rep.reason = "cycle " + names + " of total degree " + std::to_string(cdeg) +
                 (cdeg == 0 ? "" : " against an opposite-sign cycle");
    return rep;
}

namespace {

/* enumerate the full windowed basis of a certified hom (no length cap),
 * pruning by exact path-degree bounds; nullopt when the budget trips */
std::optional<std::vector<Word>> certified_enumerate(const DgPresentation& p, int x, int y,
                                                     int deg_lo, int deg_hi, long budget,
                                                     const FinitenessReport& cert)
{
    std::vector<bool> inset = between_set(p, x, y);
    bool acyclic = cert.cycle_sign == 0;
    bool positive = cert.cycle_sign >= 0;
    std::vector<long> min_to_y = path_degree_bound(p, inset, y, false);
    std::vector<long> max_to_y = path_degree_bound(p, inset, y, true);
    std::vector<std::vector<int>> by_src(static_cast<size_t>(p.num_objects()));
    for (int a = 0; a < p.num_arrows(); ++a) {
        const Arrow& ar = p.arrow(a);
        if (inset[static_cast<size_t>(ar.src)] && inset[static_cast<size_t>(ar.dst)])
            by_src[static_cast<size_t>(ar.src)].push_back(a);
    }
    std::vector<Word> out;
    long seen = 0;
    if (!inset[static_cast<size_t>(x)] || !inset[static_cast<size_t>(y)]) {
        if (x == y && deg_lo <= 0 && 0 <= deg_hi)
            out.push_back(Word::identity(x));
        return out;
    }
    std::vector<Partial> level{Partial{{}, x, 0}};
    for (int len = 0; len <= kHardLenCap; ++len) {
        for (const Partial& q : level)
            if (q.at == y && deg_lo <= q.deg && q.deg <= deg_hi)
                out.push_back(to_word(q, x));
        std::vector<Partial> next;
        for (const Partial& q : level) {
            for (int a : by_src[static_cast<size_t>(q.at)]) {
                const Arrow& ar = p.arrow(a);
                long ndeg = q.deg + ar.deg;
                /* a completion exists with degree >= ndeg + min_to_y and,
                 * in the acyclic/negative cases, <= ndeg + max_to_y */
                if (positive || acyclic) {
                    if (min_to_y[static_cast<size_t>(ar.dst)] >= kFar ||
                        ndeg + min_to_y[static_cast<size_t>(ar.dst)] > deg_hi)
                        continue;
                }
                if (!positive || acyclic) {
                    if (max_to_y[static_cast<size_t>(ar.dst)] >= kFar ||
                        ndeg + max_to_y[static_cast<size_t>(ar.dst)] < deg_lo)
                        continue;
                }
                Partial nq = q;
                nq.applied.push_back(a);
                nq.at = ar.dst;
                nq.deg = static_cast<int>(ndeg);
                next.push_back(std::move(nq));
            }
        }
        seen += static_cast<long>(next.size());
        if (seen > budget)
            return std::nullopt;
        if (next.empty())
            break;
        if (len == kHardLenCap)
            return std::nullopt;
        level = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

bool BoundedHom::exact_realization() const
{
    return exact.certified() && excluded.empty() &&
           (!exact.complete_maxlen || *exact.complete_maxlen <= maxlen);
}

const std::vector<Word>& BoundedHom::degree_words(int deg) const
{
    static const std::vector<Word> empty;
    auto it = basis_.find(deg);
    return it == basis_.end() ? empty : it->second;
}

std::optional<int> BoundedHom::index_in_degree(const Word& w) const
{
    auto it = pos_.find(w);
    if (it == pos_.end())
        return std::nullopt;
    return it->second.second;
}

std::optional<Vec> BoundedHom::coords(const FormalSum& s, int deg) const
{
    Vec v = zero_vec(static_cast<int>(degree_words(deg).size()), pres->field());
    if (s.is_zero())
        return v;
    if (s.deg() != deg || s.src() != src || s.dst() != dst)
        throw DgError("sum does not live in this hom at degree " + std::to_string(deg));
    for (const auto& [w, c] : s.terms()) {
        auto it = pos_.find(w);
        if (it == pos_.end() || it->second.first != deg)
            return std::nullopt;
        v[static_cast<size_t>(it->second.second)] = c;
    }
    return v;
}

FormalSum BoundedHom::element(int deg, const Vec& v) const
{
    const auto& ws = degree_words(deg);
    if (v.size() != ws.size())
        throw DgError("coordinate length mismatch");
    FormalSum s;
    for (size_t i = 0; i < ws.size(); ++i)
        if (!v[i].is_zero())
            s += FormalSum(ws[i], v[i]);
    return s;
}

BoundedHom realize_hom(const PresPtr& p, int x, int y, const Bounds& b)
{
    BoundedHom h;
    h.pres = p;
    h.src = x;
    h.dst = y;
    h.window = b.window;
    h.maxlen = b.maxlen;
    h.complex = Complex(p->field());
    h.complex.restrict_known(b.window.lo - 1, b.window.hi + 1);
    h.exact = finiteness_certificate(*p, x, y, b.window);

    int flank_lo = b.window.lo - 1, flank_hi = b.window.hi + 1;
    if (p->is_zero_object(x) || p->is_zero_object(y))
        return h;

    std::vector<Word> words;
    if (h.exact.certified()) {
        auto full = certified_enumerate(*p, x, y, flank_lo, flank_hi, b.basis_budget, h.exact);
        if (full) {
            int longest = 0;
            for (const Word& w : *full)
                longest = std::max(longest, w.length());
            h.exact.complete_maxlen = longest;
            for (const Word& w : *full)
                if (w.length() <= b.maxlen)
                    words.push_back(w);
        }
        else {
            h.exact.status = FiniteStatus::truncated;
            h.exact.reason = "basis budget exceeded while certifying completeness";
        }
    }
    if (!h.exact.certified()) {
        int eff = b.maxlen;
        words = enumerate_words(*p, x, y, flank_lo, flank_hi, b.maxlen, b.basis_budget, &eff);
        if (eff < b.maxlen) {
            h.maxlen = eff;
            h.exact.reason += (h.exact.reason.empty() ? "" : "; ");
            h.exact.reason += "basis budget capped word length at " + std::to_string(eff);
        }
    }
    h.words = words;

    /* keep the largest subset whose differentials stay inside */
    std::map<Word, FormalSum> dcache;
    std::set<Word> alive(words.begin(), words.end());
    for (const Word& w : words)
        if (w.deg() <= b.window.hi)
            dcache.emplace(w, p->differential(w));
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Word& w : words) {
            if (!alive.count(w) || w.deg() > b.window.hi)
                continue;
            for (const auto& [t, c] : dcache.at(w).terms()) {
                if (!alive.count(t)) {
                    alive.erase(w);
                    changed = true;
                    break;
                }
            }
        }
    }
    for (const Word& w : words) {
        if (alive.count(w)) {
            auto& vec = h.basis_[w.deg()];
            h.pos_[w] = {w.deg(), static_cast<int>(vec.size())};
            vec.push_back(w);
        }
        else {
            h.excluded.push_back(w);
        }
    }

    for (const auto& [deg, ws] : h.basis_)
        h.complex.set_dim(deg, static_cast<int>(ws.size()));
    for (const auto& [deg, ws] : h.basis_) {
        if (deg > b.window.hi)
            continue;
        int rows = static_cast<int>(h.degree_words(deg + 1).size());
        SparseMat m(rows, static_cast<int>(ws.size()), p->field());
        for (int col = 0; col < static_cast<int>(ws.size()); ++col) {
            for (const auto& [t, c] : dcache.at(ws[static_cast<size_t>(col)]).terms()) {
                auto it = h.pos_.find(t);
                if (it == h.pos_.end())
                    throw DgError("internal: d-stable basis leaked");
                m.set(it->second.second, col, c);
            }
        }
        if (rows > 0)
            h.complex.set_diff(deg, std::move(m));
    }
    h.complex.validate();
    return h;
}

BoundedHom realize_hom(const PresPtr& p, const std::string& x, const std::string& y, const Bounds& b)
{
    int xi = p->object_index(x), yi = p->object_index(y);
    if (xi < 0 || yi < 0)
        throw DgError("unknown object in realize_hom");
    return realize_hom(p, xi, yi, b);
}

InducedHomMap induced_hom_map(const DgFunctor& f, const BoundedHom& s, const BoundedHom& t)
{
    InducedHomMap out;
    out.map.source = s.complex;
    out.map.target = t.complex;
    out.map.degree = 0;
    for (int deg = s.window.lo - 1; deg <= s.window.hi + 1; ++deg) {
        const auto& ws = s.degree_words(deg);
        if (ws.empty())
            continue;
        SparseMat m(static_cast<int>(t.degree_words(deg).size()), static_cast<int>(ws.size()),
                    s.pres->field());
        for (int col = 0; col < static_cast<int>(ws.size()); ++col) {
            FormalSum img = f.apply(ws[static_cast<size_t>(col)]);
            auto v = t.coords(img, deg);
            if (!v) {
                out.leaked = true;
                out.leaks.push_back(s.pres->word_str(ws[static_cast<size_t>(col)]));
                continue;
            }
            for (int r = 0; r < static_cast<int>(v->size()); ++r)
                if (!(*v)[static_cast<size_t>(r)].is_zero())
                    m.set(r, col, (*v)[static_cast<size_t>(r)]);
        }
        if (!m.is_zero())
            out.map.comp[deg] = std::move(m);
    }
    return out;
}

}  // namespace dgcat
