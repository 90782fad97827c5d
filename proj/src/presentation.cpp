#include "dgcat/presentation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dgcat {

Word concat(const Word& left, const Word& right)
{
    if (right.dst() != left.src())
        throw DgError("words are not composable");
    if (left.is_identity())
        return right;
    if (right.is_identity())
        return left;
    std::vector<int> arrows = left.arrows();
    arrows.insert(arrows.end(), right.arrows().begin(), right.arrows().end());
    return Word(right.src(), left.dst(), left.deg() + right.deg(), std::move(arrows));
}

FormalSum::FormalSum(const Word& w, Scalar c)
{
    if (!c.is_zero())
        terms_.emplace(w, std::move(c));
}

int FormalSum::src() const
{
    if (is_zero())
        throw DgError("zero sum has no source");
    return terms_.begin()->first.src();
}

int FormalSum::dst() const
{
    if (is_zero())
        throw DgError("zero sum has no target");
    return terms_.begin()->first.dst();
}

int FormalSum::deg() const
{
    if (is_zero())
        throw DgError("zero sum has no degree");
    return terms_.begin()->first.deg();
}

void FormalSum::add_term_(const Word& w, const Scalar& c)
{
    if (c.is_zero())
        return;
    if (!terms_.empty()) {
        const Word& w0 = terms_.begin()->first;
        if (w.src() != w0.src() || w.dst() != w0.dst() || w.deg() != w0.deg())
            throw DgError("endpoint or degree mismatch in formal sum");
    }
    auto [it, fresh] = terms_.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

FormalSum& FormalSum::operator+=(const FormalSum& o)
{
    for (const auto& [w, c] : o.terms_)
        add_term_(w, c);
    return *this;
}

FormalSum& FormalSum::operator-=(const FormalSum& o)
{
    for (const auto& [w, c] : o.terms_)
        add_term_(w, -c);
    return *this;
}

FormalSum FormalSum::operator-() const
{
    FormalSum s;
    for (const auto& [w, c] : terms_)
        s.terms_.emplace(w, -c);
    return s;
}

FormalSum FormalSum::scaled(const Scalar& c) const
{
    FormalSum s;
    if (c.is_zero())
        return s;
    for (const auto& [w, v] : terms_)
        s.terms_.emplace(w, v * c);
    return s;
}

FormalSum operator*(const FormalSum& left, const FormalSum& right)
{
    FormalSum s;
    for (const auto& [wl, cl] : left.terms_)
        for (const auto& [wr, cr] : right.terms_)
            s.add_term_(concat(wl, wr), cl * cr);
    return s;
}

std::string ValidationReport::str() const
{
    if (ok())
        return "ok";
    std::ostringstream os;
    for (const auto& d : defects)
        os << d.where << ": " << d.what << "\n";
    return os.str();
}

DgPresentation::DgPresentation(Field f, std::vector<std::string> objects,
                               std::vector<ArrowSpec> arrows,
                               std::map<std::string, FormalSum> diffs,
                               std::optional<std::string> zero_object)
    : field_(f)
{
    std::sort(objects.begin(), objects.end());
    if (std::adjacent_find(objects.begin(), objects.end()) != objects.end())
        throw DgError("duplicate object name");
    objects_ = std::move(objects);
    for (int i = 0; i < num_objects(); ++i)
        object_idx_[objects_[static_cast<size_t>(i)]] = i;

    if (zero_object) {
        auto it = object_idx_.find(*zero_object);
        if (it == object_idx_.end())
            throw DgError("zero object '" + *zero_object + "' not among objects");
        zero_object_ = it->second;
    }

    std::sort(arrows.begin(), arrows.end(),
              [](const ArrowSpec& a, const ArrowSpec& b) { return a.name < b.name; });
    for (size_t i = 0; i + 1 < arrows.size(); ++i)
        if (arrows[i].name == arrows[i + 1].name)
            throw DgError("duplicate arrow name '" + arrows[i].name + "'");
    for (const ArrowSpec& a : arrows) {
        auto si = object_idx_.find(a.src), ti = object_idx_.find(a.dst);
        if (si == object_idx_.end() || ti == object_idx_.end())
            throw DgError("arrow '" + a.name + "' references unknown object");
        if (zero_object_ && (si->second == *zero_object_ || ti->second == *zero_object_))
            throw DgError("arrow '" + a.name + "' is incident to the zero object");
        arrow_idx_[a.name] = static_cast<int>(arrows_.size());
        arrows_.push_back(Arrow{a.name, si->second, ti->second, a.deg});
    }
    d_.assign(arrows_.size(), FormalSum{});
    for (auto& [name, sum] : diffs) {
        auto it = arrow_idx_.find(name);
        if (it == arrow_idx_.end())
            throw DgError("differential given for unknown arrow '" + name + "'");
        d_[static_cast<size_t>(it->second)] = std::move(sum);
    }
}

int DgPresentation::object_index(const std::string& name) const
{
    auto it = object_idx_.find(name);
    return it == object_idx_.end() ? -1 : it->second;
}

int DgPresentation::arrow_index(const std::string& name) const
{
    auto it = arrow_idx_.find(name);
    return it == arrow_idx_.end() ? -1 : it->second;
}

FormalSum DgPresentation::differential(const Word& w) const
{
    FormalSum out;
    if (w.is_identity())
        return out;
    const auto& as = w.arrows();
    int n = static_cast<int>(as.size());
    int left_deg = 0;
    for (int i = 0; i < n; ++i) {
        const Arrow& ai = arrow(as[static_cast<size_t>(i)]);
        const FormalSum& da = d_.at(static_cast<size_t>(as[static_cast<size_t>(i)]));
        if (!da.is_zero()) {
            Word left = Word::identity(w.dst());
            if (i > 0) {
                std::vector<int> la(as.begin(), as.begin() + i);
                int ldeg = 0;
                for (int a : la)
                    ldeg += arrow(a).deg;
                left = Word(ai.dst, w.dst(), ldeg, std::move(la));
            }
            Word right = Word::identity(w.src());
            if (i + 1 < n) {
                std::vector<int> ra(as.begin() + i + 1, as.end());
                int rdeg = 0;
                for (int a : ra)
                    rdeg += arrow(a).deg;
                right = Word(w.src(), ai.src, rdeg, std::move(ra));
            }
            Scalar sgn = (left_deg % 2 == 0) ? Scalar::one(field_) : -Scalar::one(field_);
            out += (FormalSum(left, Scalar::one(field_)) * da * FormalSum(right, Scalar::one(field_))).scaled(sgn);
        }
        left_deg += ai.deg;
    }
    return out;
}

FormalSum DgPresentation::differential(const FormalSum& s) const
{
    FormalSum out;
    for (const auto& [w, c] : s.terms())
        out += differential(w).scaled(c);
    return out;
}

std::string DgPresentation::word_str(const Word& w) const
{
    if (w.is_identity())
        return "id_" + object_name(w.src());
    std::string s;
    for (size_t i = 0; i < w.arrows().size(); ++i) {
        if (i)
            s += ".";
        s += arrow(w.arrows()[i]).name;
    }
    return s;
}

std::string DgPresentation::sum_str(const FormalSum& s) const
{
    if (s.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : s.terms()) {
        if (first) {
            out += c.str() + " * " + word_str(w);
            first = false;
        }
        else if (c.is_negative()) {
            out += " - " + c.abs().str() + " * " + word_str(w);
        }
        else {
            out += " + " + c.str() + " * " + word_str(w);
        }
    }
    return out;
}

ValidationReport DgPresentation::validate() const
{
    ValidationReport rep;
    for (int a = 0; a < num_arrows(); ++a) {
        const Arrow& ar = arrow(a);
        const FormalSum& da = d(a);
        if (da.is_zero())
            continue;
        if (da.src() != ar.src || da.dst() != ar.dst) {
            rep.defects.push_back({"d " + ar.name,
                                   "endpoint mismatch: d maps " + object_name(ar.src) + " -> " + object_name(ar.dst) +
                                       " but value has " + object_name(da.src()) + " -> " + object_name(da.dst())});
            continue;
        }
        if (da.deg() != ar.deg + 1) {
            rep.defects.push_back({"d " + ar.name,
                                   "degree error: expected degree " + std::to_string(ar.deg + 1) + ", got " + std::to_string(da.deg())});
            continue;
        }
    }
    if (!rep.ok())
        return rep;
    for (int a = 0; a < num_arrows(); ++a) {
        FormalSum dd = differential(d(a));
        if (!dd.is_zero())
            rep.defects.push_back({"d^2 " + arrow(a).name, "nonzero: " + sum_str(dd)});
    }
    return rep;
}

bool operator==(const DgPresentation& a, const DgPresentation& b)
{
    return a.field_ == b.field_ && a.objects_ == b.objects_ && a.zero_object_ == b.zero_object_ &&
           a.arrows_ == b.arrows_ && a.d_ == b.d_;
}

PresPtr make_presentation(Field f, std::vector<std::string> objects,
                          std::vector<DgPresentation::ArrowSpec> arrows,
                          std::map<std::string, FormalSum> diffs,
                          std::optional<std::string> zero_object)
{
    return std::make_shared<const DgPresentation>(f, std::move(objects), std::move(arrows),
                                                  std::move(diffs), std::move(zero_object));
}

namespace {

Word remap_word(const Word& w, const DgPresentation& from, const DgPresentation& to)
{
    int src = to.object_index(from.object_name(w.src()));
    int dst = to.object_index(from.object_name(w.dst()));
    if (src < 0 || dst < 0)
        throw DgError("object missing while remapping word");
    std::vector<int> arrows;
    arrows.reserve(w.arrows().size());
    for (int a : w.arrows()) {
        int na = to.arrow_index(from.arrow(a).name);
        if (na < 0)
            throw DgError("arrow '" + from.arrow(a).name + "' missing while remapping word");
        arrows.push_back(na);
    }
    return Word(src, dst, w.deg(), std::move(arrows));
}

}  // namespace

FormalSum remap_sum(const FormalSum& s, const DgPresentation& from, const DgPresentation& to)
{
    FormalSum out;
    for (const auto& [w, c] : s.terms())
        out += FormalSum(remap_word(w, from, to), c);
    return out;
}

PresPtr add_point(const PresPtr& c, const std::string& preferred)
{
    if (c->zero_object())
        throw DgError("presentation already has a zero object");
    std::string name = preferred;
    for (int k = 1; c->object_index(name) >= 0; ++k)
        name = preferred + std::to_string(k);
    std::vector<std::string> objects = c->objects();
    objects.push_back(name);
    std::vector<DgPresentation::ArrowSpec> arrows;
    for (const Arrow& a : c->arrows())
        arrows.push_back({a.name, c->object_name(a.src), c->object_name(a.dst), a.deg});
    auto out = std::make_shared<DgPresentation>(c->field(), std::move(objects), std::move(arrows),
                                                std::map<std::string, FormalSum>{}, name);
    /* differentials carried over by name */
    std::map<std::string, FormalSum> diffs;
    for (int a = 0; a < c->num_arrows(); ++a)
        if (!c->d(a).is_zero())
            diffs[c->arrow(a).name] = remap_sum(c->d(a), *c, *out);
    if (diffs.empty())
        return out;
    std::vector<std::string> objs2 = out->objects();
    std::vector<DgPresentation::ArrowSpec> arrows2;
    for (const Arrow& a : out->arrows())
        arrows2.push_back({a.name, out->object_name(a.src), out->object_name(a.dst), a.deg});
    return make_presentation(c->field(), std::move(objs2), std::move(arrows2), std::move(diffs), name);
}

PresPtr forget_point(const PresPtr& c)
{
    if (!c->zero_object())
        throw DgError("presentation has no zero object");
    std::vector<std::string> objects;
    for (int i = 0; i < c->num_objects(); ++i)
        if (!c->is_zero_object(i))
            objects.push_back(c->object_name(i));
    std::vector<DgPresentation::ArrowSpec> arrows;
    for (const Arrow& a : c->arrows())
        arrows.push_back({a.name, c->object_name(a.src), c->object_name(a.dst), a.deg});
    auto tmp = std::make_shared<DgPresentation>(c->field(), objects, arrows,
                                                std::map<std::string, FormalSum>{}, std::nullopt);
    std::map<std::string, FormalSum> diffs;
    for (int a = 0; a < c->num_arrows(); ++a)
        if (!c->d(a).is_zero())
            diffs[c->arrow(a).name] = remap_sum(c->d(a), *c, *tmp);
    return make_presentation(c->field(), std::move(objects), std::move(arrows), std::move(diffs), std::nullopt);
}

DgFunctor::DgFunctor(PresPtr src, PresPtr dst, std::map<std::string, std::string> object_map,
                     std::map<std::string, FormalSum> arrow_map)
    : src_(std::move(src)), dst_(std::move(dst))
{
    omap_.assign(static_cast<size_t>(src_->num_objects()), -1);
    for (int i = 0; i < src_->num_objects(); ++i) {
        auto it = object_map.find(src_->object_name(i));
        if (it == object_map.end())
            throw DgError("functor object map misses '" + src_->object_name(i) + "'");
        int j = dst_->object_index(it->second);
        if (j < 0)
            throw DgError("functor maps to unknown object '" + it->second + "'");
        omap_[static_cast<size_t>(i)] = j;
    }
    amap_.assign(static_cast<size_t>(src_->num_arrows()), FormalSum{});
    for (int a = 0; a < src_->num_arrows(); ++a) {
        auto it = arrow_map.find(src_->arrow(a).name);
        if (it == arrow_map.end())
            throw DgError("functor arrow map misses '" + src_->arrow(a).name + "'");
        amap_[static_cast<size_t>(a)] = it->second;
    }
}

FormalSum DgFunctor::apply(const Word& w) const
{
    const Field& k = src_->field();
    if (w.is_identity()) {
        int img = object_image(w.src());
        if (dst_->is_zero_object(img))
            return FormalSum{};
        return FormalSum(Word::identity(img), Scalar::one(k));
    }
    FormalSum out = FormalSum(Word::identity(object_image(w.dst())), Scalar::one(k));
    if (dst_->is_zero_object(object_image(w.dst())))
        return FormalSum{};
    for (int a : w.arrows()) {
        out = out * amap_.at(static_cast<size_t>(a));
        if (out.is_zero())
            return out;
    }
    return out;
}

FormalSum DgFunctor::apply(const FormalSum& s) const
{
    FormalSum out;
    for (const auto& [w, c] : s.terms())
        out += apply(w).scaled(c);
    return out;
}

ValidationReport validate_functor(const DgFunctor& f)
{
    ValidationReport rep;
    const DgPresentation& s = *f.source();
    const DgPresentation& t = *f.target();
    if (s.zero_object()) {
        if (!t.zero_object())
            rep.defects.push_back({"objects", "pointed source, unpointed target"});
        else if (!t.is_zero_object(f.object_image(*s.zero_object())))
            rep.defects.push_back({"objects", "zero object not preserved"});
    }
    for (int a = 0; a < s.num_arrows(); ++a) {
        const Arrow& ar = s.arrow(a);
        const FormalSum& img = f.arrow_image(a);
        std::string where = "arrow " + ar.name;
        int isrc = f.object_image(ar.src), idst = f.object_image(ar.dst);
        bool zero_incident = t.is_zero_object(isrc) || t.is_zero_object(idst);
        if (!img.is_zero()) {
            if (zero_incident) {
                rep.defects.push_back({where, "image must be 0: endpoint maps to the zero object"});
                continue;
            }
            if (img.src() != isrc || img.dst() != idst) {
                rep.defects.push_back({where, "endpoint mismatch in image"});
                continue;
            }
            if (img.deg() != ar.deg) {
                rep.defects.push_back({where, "degree not preserved"});
                continue;
            }
        }
        FormalSum lhs = f.apply(s.d(a));
        FormalSum rhs = t.differential(img);
        if (!(lhs == rhs)) {
            rep.defects.push_back({where, "chain condition fails: F(d a) = " + t.sum_str(lhs) +
                                              " but d(F a) = " + t.sum_str(rhs)});
        }
    }
    return rep;
}

DgFunctor identity_functor(const PresPtr& p)
{
    std::map<std::string, std::string> omap;
    for (int i = 0; i < p->num_objects(); ++i)
        omap[p->object_name(i)] = p->object_name(i);
    std::map<std::string, FormalSum> amap;
    for (int a = 0; a < p->num_arrows(); ++a) {
        const Arrow& ar = p->arrow(a);
        amap[ar.name] = FormalSum(Word(ar.src, ar.dst, ar.deg, {a}), Scalar::one(p->field()));
    }
    return DgFunctor(p, p, std::move(omap), std::move(amap));
}

DgFunctor compose(const DgFunctor& g, const DgFunctor& f)
{
    if (!(*f.target() == *g.source()))
        throw DgError("functor composition: middle presentations differ");
    const DgPresentation& s = *f.source();
    std::map<std::string, std::string> omap;
    for (int i = 0; i < s.num_objects(); ++i)
        omap[s.object_name(i)] = g.target()->object_name(g.object_image(f.object_image(i)));
    std::map<std::string, FormalSum> amap;
    for (int a = 0; a < s.num_arrows(); ++a) {
        FormalSum mid = f.arrow_image(a);
        /* reindex into g's source if it is a distinct but equal presentation */
        if (f.target().get() != g.source().get())
            mid = remap_sum(mid, *f.target(), *g.source());
        amap[s.arrow(a).name] = g.apply(mid);
    }
    return DgFunctor(f.source(), g.target(), std::move(omap), std::move(amap));
}

bool functor_equal(const DgFunctor& a, const DgFunctor& b)
{
    if (!(*a.source() == *b.source()) || !(*a.target() == *b.target()))
        return false;
    for (int i = 0; i < a.source()->num_objects(); ++i)
        if (a.object_image(i) != b.object_image(i))
            return false;
    for (int x = 0; x < a.source()->num_arrows(); ++x)
        if (!(a.arrow_image(x) == b.arrow_image(x)))
            return false;
    return true;
}

namespace {

FormalSum word1(const PresPtr& p, const std::string& arrow)
{
    int a = p->arrow_index(arrow);
    const Arrow& ar = p->arrow(a);
    return FormalSum(Word(ar.src, ar.dst, ar.deg, {a}), Scalar::one(p->field()));
}

FormalSum ident(const PresPtr& p, const std::string& obj)
{
    return FormalSum(Word::identity(p->object_index(obj)), Scalar::one(p->field()));
}

}  // namespace

PresPtr cat_A(const Field& f)
{
    return make_presentation(f, {"3"}, {});
}

PresPtr cat_B(const Field& f)
{
    return make_presentation(f, {"4", "5"}, {});
}

PresPtr cat_C(int n, const Field& f)
{
    return make_presentation(f, {"8", "9"}, {{"c", "8", "9", n - 1}});
}

PresPtr cat_P(int n, const Field& f)
{
    auto tmp = make_presentation(f, {"6", "7"}, {{"l", "6", "7", n - 2}, {"j", "6", "7", n - 1}});
    std::map<std::string, FormalSum> diffs;
    diffs["l"] = word1(tmp, "j");
    return make_presentation(f, {"6", "7"}, {{"l", "6", "7", n - 2}, {"j", "6", "7", n - 1}}, std::move(diffs));
}

PresPtr cat_K(const Field& f)
{
    std::vector<DgPresentation::ArrowSpec> arrows = {
        {"f", "1", "2", 0}, {"g", "2", "1", 0}, {"r1", "1", "1", -1}, {"r2", "2", "2", -1}, {"r12", "1", "2", -2}};
    auto tmp = make_presentation(f, {"1", "2"}, arrows);
    std::map<std::string, FormalSum> diffs;
    diffs["r1"] = word1(tmp, "g") * word1(tmp, "f") - ident(tmp, "1");
    diffs["r2"] = word1(tmp, "f") * word1(tmp, "g") - ident(tmp, "2");
    diffs["r12"] = word1(tmp, "f") * word1(tmp, "r1") - word1(tmp, "r2") * word1(tmp, "f");
    return make_presentation(f, {"1", "2"}, std::move(arrows), std::move(diffs));
}

PresPtr cat_O(const Field& f)
{
    return make_presentation(f, {"p"}, {}, {}, "p");
}

DgFunctor fun_F(const Field& f)
{
    return DgFunctor(cat_A(f), cat_K(f), {{"3", "1"}}, {});
}

DgFunctor fun_R(int n, const Field& f)
{
    return DgFunctor(cat_B(f), cat_P(n, f), {{"4", "6"}, {"5", "7"}}, {});
}

DgFunctor fun_S(int n, const Field& f)
{
    auto p = cat_P(n, f);
    return DgFunctor(cat_C(n, f), p, {{"8", "6"}, {"9", "7"}}, {{"c", word1(p, "j")}});
}

DgFunctor fun_Q(const Field& f)
{
    return DgFunctor(cat_O(f), add_point(cat_A(f)), {{"p", "p"}}, {});
}

DgFunctor pointed(const DgFunctor& f)
{
    PresPtr s = add_point(f.source());
    PresPtr t = add_point(f.target());
    std::map<std::string, std::string> omap;
    for (int i = 0; i < f.source()->num_objects(); ++i)
        omap[f.source()->object_name(i)] = f.target()->object_name(f.object_image(i));
    omap[s->object_name(*s->zero_object())] = t->object_name(*t->zero_object());
    std::map<std::string, FormalSum> amap;
    for (int a = 0; a < f.source()->num_arrows(); ++a)
        amap[f.source()->arrow(a).name] = remap_sum(f.arrow_image(a), *f.target(), *t);
    return DgFunctor(std::move(s), std::move(t), std::move(omap), std::move(amap));
}

DgFunctor terminal_functor(const PresPtr& c)
{
    PresPtr o = cat_O(c->field());
    std::map<std::string, std::string> omap;
    for (int i = 0; i < c->num_objects(); ++i)
        omap[c->object_name(i)] = "p";
    std::map<std::string, FormalSum> amap;
    for (int a = 0; a < c->num_arrows(); ++a)
        amap[c->arrow(a).name] = FormalSum{};
    return DgFunctor(c, o, std::move(omap), std::move(amap));
}

}  // namespace dgcat
