#include "dgcat/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace dgcat {

namespace {

struct Token {
    std::string text;
    int col;
};

std::vector<Token> tokenize(const std::string& line)
{
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#')
            break;
        size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#')
            ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

std::vector<std::pair<int, std::vector<Token>>> tokenize_all(const std::string& text)
{
    std::vector<std::pair<int, std::vector<Token>>> lines;
    std::istringstream is(text);
    std::string line;
    int no = 0;
    while (std::getline(is, line)) {
        ++no;
        auto toks = tokenize(line);
        if (!toks.empty())
            lines.emplace_back(no, std::move(toks));
    }
    return lines;
}

int parse_int(const Token& t, int line)
{
    try {
        size_t pos = 0;
        int v = std::stoi(t.text, &pos);
        if (pos != t.text.size())
            throw std::invalid_argument("");
        return v;
    }
    catch (...) {
        throw ParseError(line, t.col, "expected an integer, got '" + t.text + "'");
    }
}

/* sum := '0' | term (('+'|'-') term)*, term := rat '*' word,
 * word := name ('.' name)* | 'id_<obj>' */
FormalSum parse_sum_tokens(const std::vector<Token>& toks, size_t from, const DgPresentation& p,
                           int line)
{
    const Field& k = p.field();
    if (from >= toks.size())
        throw ParseError(line, 1, "missing right-hand side");
    if (toks.size() == from + 1 && toks[from].text == "0")
        return FormalSum{};
    FormalSum out;
    size_t i = from;
    bool negate = false;
    while (i < toks.size()) {
        if (toks[i].text == "+" || toks[i].text == "-") {
            if (i == from || toks[i - 1].text == "+" || toks[i - 1].text == "-")
                throw ParseError(line, toks[i].col, "misplaced sign");
            negate = toks[i].text == "-";
            ++i;
            if (i >= toks.size())
                throw ParseError(line, toks.back().col, "dangling sign");
        }
        Scalar c = Scalar::parse(toks[i].text, k);
        if (negate)
            c = -c;
        ++i;
        if (i >= toks.size() || toks[i].text != "*")
            throw ParseError(line, i < toks.size() ? toks[i].col : toks.back().col,
                             "expected '*' after coefficient");
        ++i;
        if (i >= toks.size())
            throw ParseError(line, toks.back().col, "expected a word after '*'");
        const std::string& wtxt = toks[i].text;
        if (wtxt.rfind("id_", 0) == 0) {
            std::string obj = wtxt.substr(3);
            int o = p.object_index(obj);
            if (o < 0)
                throw ParseError(line, toks[i].col, "unknown object '" + obj + "'");
            if (p.is_zero_object(o))
                throw ParseError(line, toks[i].col, "id of the zero object is 0; write 0");
            out += FormalSum(Word::identity(o), c);
        }
        else {
            std::vector<int> arrows;
            std::stringstream ss(wtxt);
            std::string part;
            while (std::getline(ss, part, '.')) {
                int a = p.arrow_index(part);
                if (a < 0)
                    throw ParseError(line, toks[i].col, "unknown arrow '" + part + "'");
                arrows.push_back(a);
            }
            if (arrows.empty())
                throw ParseError(line, toks[i].col, "empty word");
            int deg = 0;
            for (int a : arrows)
                deg += p.arrow(a).deg;
            for (size_t q = 0; q + 1 < arrows.size(); ++q)
                if (p.arrow(arrows[q]).src != p.arrow(arrows[q + 1]).dst)
                    throw ParseError(line, toks[i].col,
                                     "word '" + wtxt + "' is not composable at position " + std::to_string(q + 1));
            Word w(p.arrow(arrows.back()).src, p.arrow(arrows.front()).dst, deg, std::move(arrows));
            try {
                out += FormalSum(w, c);
            }
            catch (const DgError& e) {
                throw ParseError(line, toks[i].col, e.what());
            }
        }
        ++i;
        negate = false;
    }
    return out;
}

Field parse_ring(const std::vector<Token>& toks, int line)
{
    if (toks.size() == 2 && toks[1].text == "Q")
        return field_q();
    if (toks.size() == 3 && toks[1].text == "F")
        return field_fp(static_cast<std::uint32_t>(parse_int(toks[2], line)));
    throw ParseError(line, toks[0].col, "expected 'ring Q' or 'ring F <prime>'");
}

}  // namespace

PresPtr parse_presentation(const std::string& text, std::optional<Field> force_ring)
{
    auto lines = tokenize_all(text);
    Field ring = force_ring.value_or(field_q());
    std::vector<std::string> objects;
    std::optional<std::string> zero;
    std::vector<DgPresentation::ArrowSpec> arrows;
    std::vector<std::pair<int, std::vector<Token>>> dlines;

    for (const auto& [no, toks] : lines) {
        const std::string& head = toks[0].text;
        if (head == "ring") {
            if (!force_ring)
                ring = parse_ring(toks, no);
        }
        else if (head == "object") {
            if (toks.size() < 2 || toks.size() > 3)
                throw ParseError(no, toks[0].col, "expected 'object <name> [zero]'");
            objects.push_back(toks[1].text);
            if (toks.size() == 3) {
                if (toks[2].text != "zero")
                    throw ParseError(no, toks[2].col, "expected 'zero'");
                if (zero)
                    throw ParseError(no, toks[2].col, "second zero object");
                zero = toks[1].text;
            }
        }
        else if (head == "arrow") {
            /* arrow f : 1 -> 2 deg 0 */
            if (toks.size() != 8 || toks[2].text != ":" || toks[4].text != "->" || toks[6].text != "deg")
                throw ParseError(no, toks[0].col, "expected 'arrow <name> : <src> -> <dst> deg <int>'");
            arrows.push_back({toks[1].text, toks[3].text, toks[5].text, parse_int(toks[7], no)});
        }
        else if (head == "d") {
            dlines.emplace_back(no, toks);
        }
        else {
            throw ParseError(no, toks[0].col, "unknown directive '" + head + "'");
        }
    }
    PresPtr skeleton;
    try {
        skeleton = make_presentation(ring, objects, arrows);
    }
    catch (const DgError& e) {
        throw ParseError(lines.empty() ? 1 : lines.front().first, 1, e.what());
    }
    std::map<std::string, FormalSum> diffs;
    for (const auto& [no, toks] : dlines) {
        if (toks.size() < 4 || toks[2].text != "=")
            throw ParseError(no, toks[0].col, "expected 'd <arrow> = <sum>'");
        if (skeleton->arrow_index(toks[1].text) < 0)
            throw ParseError(no, toks[1].col, "unknown arrow '" + toks[1].text + "'");
        if (diffs.count(toks[1].text))
            throw ParseError(no, toks[1].col, "duplicate differential for '" + toks[1].text + "'");
        diffs[toks[1].text] = parse_sum_tokens(toks, 3, *skeleton, no);
    }
    try {
        return make_presentation(ring, std::move(objects), std::move(arrows), std::move(diffs), zero);
    }
    catch (const DgError& e) {
        throw ParseError(lines.empty() ? 1 : lines.front().first, 1, e.what());
    }
}

std::string print_presentation(const DgPresentation& p)
{
    std::ostringstream os;
    os << "ring " << p.field().str() << "\n";
    for (int i = 0; i < p.num_objects(); ++i) {
        os << "object " << p.object_name(i);
        if (p.is_zero_object(i))
            os << " zero";
        os << "\n";
    }
    for (const Arrow& a : p.arrows())
        os << "arrow " << a.name << " : " << p.object_name(a.src) << " -> " << p.object_name(a.dst)
           << " deg " << a.deg << "\n";
    for (int a = 0; a < p.num_arrows(); ++a)
        if (!p.d(a).is_zero())
            os << "d " << p.arrow(a).name << " = " << p.sum_str(p.d(a)) << "\n";
    return os.str();
}

FormalSum parse_sum(const std::string& text, const DgPresentation& p, int line_no)
{
    auto toks = tokenize(text);
    return parse_sum_tokens(toks, 0, p, line_no);
}

std::string print_sum(const DgPresentation& p, const FormalSum& s)
{
    return p.sum_str(s);
}

DgFunctor parse_functor(const std::string& text,
                        const std::function<PresPtr(const std::string&)>& resolve)
{
    auto lines = tokenize_all(text);
    PresPtr src, dst;
    std::map<std::string, std::string> omap;
    std::vector<std::pair<int, std::vector<Token>>> arrow_lines;
    for (const auto& [no, toks] : lines) {
        const std::string& head = toks[0].text;
        if (head == "source" || head == "target") {
            if (toks.size() != 2)
                throw ParseError(no, toks[0].col, "expected '" + head + " <file|builtin:NAME>'");
            PresPtr p = resolve(toks[1].text);
            if (!p)
                throw ParseError(no, toks[1].col, "cannot resolve '" + toks[1].text + "'");
            (head == "source" ? src : dst) = p;
        }
        else if (head == "obj") {
            if (toks.size() != 4 || toks[2].text != "->")
                throw ParseError(no, toks[0].col, "expected 'obj <x> -> <y>'");
            omap[toks[1].text] = toks[3].text;
        }
        else if (head == "arrow") {
            if (toks.size() < 4 || toks[2].text != "->")
                throw ParseError(no, toks[0].col, "expected 'arrow <a> -> <sum|0>'");
            arrow_lines.emplace_back(no, toks);
        }
        else {
            throw ParseError(no, toks[0].col, "unknown directive '" + head + "'");
        }
    }
    if (!src || !dst)
        throw ParseError(lines.empty() ? 1 : lines.back().first, 1, "functor needs source and target lines");
    std::map<std::string, FormalSum> amap;
    for (const auto& [no, toks] : arrow_lines) {
        if (src->arrow_index(toks[1].text) < 0)
            throw ParseError(no, toks[1].col, "unknown source arrow '" + toks[1].text + "'");
        amap[toks[1].text] = parse_sum_tokens(toks, 3, *dst, no);
    }
    try {
        return DgFunctor(src, dst, std::move(omap), std::move(amap));
    }
    catch (const DgError& e) {
        throw ParseError(lines.empty() ? 1 : lines.front().first, 1, e.what());
    }
}

std::string print_functor(const DgFunctor& f, const std::string& source_ref,
                          const std::string& target_ref)
{
    std::ostringstream os;
    os << "source " << source_ref << "\n";
    os << "target " << target_ref << "\n";
    for (int i = 0; i < f.source()->num_objects(); ++i)
        os << "obj " << f.source()->object_name(i) << " -> "
           << f.target()->object_name(f.object_image(i)) << "\n";
    for (int a = 0; a < f.source()->num_arrows(); ++a)
        os << "arrow " << f.source()->arrow(a).name << " -> "
           << f.target()->sum_str(f.arrow_image(a)) << "\n";
    return os.str();
}

Complex parse_complex(const std::string& text, std::optional<Field> force_ring)
{
    auto lines = tokenize_all(text);
    Field ring = force_ring.value_or(field_q());
    for (const auto& [no, toks] : lines)
        if (toks[0].text == "ring" && !force_ring)
            ring = parse_ring(toks, no);
    Complex c(ring);
    for (const auto& [no, toks] : lines) {
        if (toks[0].text == "deg") {
            if (toks.size() != 4 || toks[2].text != "dim")
                throw ParseError(no, toks[0].col, "expected 'deg <d> dim <k>'");
            c.set_dim(parse_int(toks[1], no), parse_int(toks[3], no));
        }
    }
    for (const auto& [no, toks] : lines) {
        if (toks[0].text != "d")
            continue;
        if (toks.size() < 3 || toks[2].text != "=")
            throw ParseError(no, toks[0].col, "expected 'd <deg> = <entries>'");
        int d = parse_int(toks[1], no);
        int rows = c.dim(d + 1), cols = c.dim(d);
        if (static_cast<int>(toks.size()) - 3 != rows * cols)
            throw ParseError(no, toks[0].col,
                             "expected " + std::to_string(rows * cols) + " entries, got " +
                                 std::to_string(toks.size() - 3));
        SparseMat m(rows, cols, ring);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const Token& t = toks[static_cast<size_t>(3 + i * cols + j)];
                Scalar v = Scalar::parse(t.text, ring);
                if (!v.is_zero())
                    m.set(i, j, v);
            }
        c.set_diff(d, std::move(m));
    }
    c.validate();
    return c;
}

std::string print_complex(const Complex& c)
{
    std::ostringstream os;
    os << "ring " << c.field().str() << "\n";
    for (int d : c.support())
        os << "deg " << d << " dim " << c.dim(d) << "\n";
    for (int d : c.support()) {
        if (c.dim(d + 1) == 0)
            continue;
        SparseMat m = c.diff(d);
        if (m.is_zero())
            continue;
        os << "d " << d << " =";
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                os << " " << m.get(i, j).str();
        os << "\n";
    }
    return os.str();
}

namespace {

/* NAME or NAME(n) */
bool split_param(const std::string& s, std::string& base, int& n)
{
    auto l = s.find('(');
    if (l == std::string::npos) {
        base = s;
        n = 0;
        return false;
    }
    if (s.back() != ')')
        throw DgError("malformed builtin parameter in '" + s + "'");
    base = s.substr(0, l);
    n = std::stoi(s.substr(l + 1, s.size() - l - 2));
    return true;
}

}  // namespace

PresPtr builtin_presentation(const std::string& name, const Field& f)
{
    std::string base;
    int n = 0;
    split_param(name, base, n);
    bool point = base.size() > 1 && base[0] == 'I';
    if (point)
        base = base.substr(1);
    PresPtr p;
    if (base == "A")
        p = cat_A(f);
    else if (base == "B")
        p = cat_B(f);
    else if (base == "C")
        p = cat_C(n, f);
    else if (base == "P")
        p = cat_P(n, f);
    else if (base == "K")
        p = cat_K(f);
    else if (base == "O") {
        if (point)
            throw DgError("O is already pointed");
        return cat_O(f);
    }
    else
        throw DgError("unknown builtin presentation '" + name + "'");
    return point ? add_point(p) : p;
}

DgFunctor builtin_functor(const std::string& name, const Field& f)
{
    std::string base;
    int n = 0;
    split_param(name, base, n);
    bool point = base.size() > 1 && base[0] == 'I';
    if (point)
        base = base.substr(1);
    DgFunctor g = [&]() {
        if (base == "F")
            return fun_F(f);
        if (base == "R")
            return fun_R(n, f);
        if (base == "S")
            return fun_S(n, f);
        if (base == "Q") {
            if (point)
                throw DgError("Q is already pointed");
            return fun_Q(f);
        }
        throw DgError("unknown builtin functor '" + name + "'");
    }();
    return point ? pointed(g) : g;
}

bool is_builtin_ref(const std::string& ref)
{
    return ref.rfind("builtin:", 0) == 0;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DgError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DgError("cannot write '" + path + "'");
    out << content;
}

namespace {

std::string sibling(const std::string& base_path, const std::string& ref)
{
    std::filesystem::path p(ref);
    if (p.is_absolute() || base_path.empty())
        return ref;
    return (std::filesystem::path(base_path).parent_path() / p).string();
}

}  // namespace

PresPtr load_presentation(const std::string& ref, const Field& default_ring)
{
    if (is_builtin_ref(ref))
        return builtin_presentation(ref.substr(8), default_ring);
    return parse_presentation(read_file(ref));
}

DgFunctor load_functor(const std::string& path, const Field& default_ring)
{
    std::string text = read_file(path);
    return parse_functor(text, [&](const std::string& ref) {
        return load_presentation(is_builtin_ref(ref) ? ref : sibling(path, ref), default_ring);
    });
}

LiftProblem load_lift_problem(const std::string& path, const Field& default_ring)
{
    auto lines = tokenize_all(read_file(path));
    LiftProblem prob;
    bool have_gen = false, have_top = false, have_bottom = false, have_right = false;
    for (const auto& [no, toks] : lines) {
        const std::string& head = toks[0].text;
        if (head == "generator") {
            if (toks.size() < 2)
                throw ParseError(no, toks[0].col, "expected 'generator Q | IS <n> | IR <n> | IF'");
            const std::string& g = toks[1].text;
            if (g == "Q")
                prob.gen = GenKind::q;
            else if (g == "IS")
                prob.gen = GenKind::is_n;
            else if (g == "IR")
                prob.gen = GenKind::ir_n;
            else if (g == "IF")
                prob.gen = GenKind::if_k;
            else
                throw ParseError(no, toks[1].col, "unknown generator '" + g + "'");
            if (prob.gen == GenKind::is_n || prob.gen == GenKind::ir_n) {
                if (toks.size() != 3)
                    throw ParseError(no, toks[0].col, "generator needs its degree parameter");
                prob.n = parse_int(toks[2], no);
            }
            have_gen = true;
        }
        else if (head == "top" || head == "bottom" || head == "right") {
            if (toks.size() != 2)
                throw ParseError(no, toks[0].col, "expected '" + head + " <functor file>'");
            DgFunctor f = load_functor(sibling(path, toks[1].text), default_ring);
            if (head == "top") {
                prob.top = f;
                have_top = true;
            }
            else if (head == "bottom") {
                prob.bottom = f;
                have_bottom = true;
            }
            else {
                prob.right = f;
                have_right = true;
            }
        }
        else {
            throw ParseError(no, toks[0].col, "unknown directive '" + head + "'");
        }
    }
    if (!have_gen || !have_top || !have_bottom || !have_right)
        throw DgError("lift problem needs generator, top, bottom and right lines");
    return prob;
}

AttachScript load_attach_script(const std::string& path, const Field& default_ring)
{
    auto lines = tokenize_all(read_file(path));
    AttachScript script;
    for (const auto& [no, toks] : lines) {
        const std::string& head = toks[0].text;
        if (head == "base") {
            if (toks.size() != 2)
                throw ParseError(no, toks[0].col, "expected 'base <file|builtin:NAME>'");
            script.base = load_presentation(is_builtin_ref(toks[1].text) ? toks[1].text
                                                                          : sibling(path, toks[1].text),
                                            default_ring);
        }
        else if (head == "attach") {
            if (!script.base)
                throw ParseError(no, toks[0].col, "attach before base");
            if (toks.size() < 2)
                throw ParseError(no, toks[0].col, "expected 'attach <shape> <args>'");
            CellAttachment cell;
            const std::string& shape = toks[1].text;
            if (shape == "AddObject") {
                cell.shape = CellShape::add_object;
                if (toks.size() >= 3)
                    cell.prefix = toks[2].text;
            }
            else if (shape == "AttachDisk") {
                cell.shape = CellShape::attach_disk;
                if (toks.size() < 5)
                    throw ParseError(no, toks[0].col, "expected 'attach AttachDisk <n> <src> <dst> [prefix]'");
                cell.n = parse_int(toks[2], no);
                cell.x = toks[3].text;
                cell.y = toks[4].text;
                if (toks.size() >= 6)
                    cell.prefix = toks[5].text;
            }
            else if (shape == "KillCycle") {
                cell.shape = CellShape::kill_cycle;
                size_t eq = 0;
                for (size_t i = 0; i < toks.size(); ++i)
                    if (toks[i].text == "=")
                        eq = i;
                if (eq < 5 || toks.size() < eq + 2)
                    throw ParseError(no, toks[0].col,
                                     "expected 'attach KillCycle <n> <src> <dst> [prefix] = <sum>'");
                cell.n = parse_int(toks[2], no);
                cell.x = toks[3].text;
                cell.y = toks[4].text;
                if (eq >= 6)
                    cell.prefix = toks[5].text;
                std::string raw;
                for (size_t i = eq + 1; i < toks.size(); ++i)
                    raw += (raw.empty() ? "" : " ") + toks[i].text;
                script.cells.push_back(std::move(cell));
                script.cycle_texts.resize(script.cells.size());
                script.cycle_texts.back() = raw;
                continue;
            }
            else if (shape == "AttachHtpyEq") {
                cell.shape = CellShape::attach_htpy_eq;
                if (toks.size() < 3)
                    throw ParseError(no, toks[0].col, "expected 'attach AttachHtpyEq <obj> [prefix]'");
                cell.x = toks[2].text;
                if (toks.size() >= 4)
                    cell.prefix = toks[3].text;
            }
            else {
                throw ParseError(no, toks[1].col, "unknown attachment shape '" + shape + "'");
            }
            script.cells.push_back(std::move(cell));
            script.cycle_texts.resize(script.cells.size());
        }
        else {
            throw ParseError(no, toks[0].col, "unknown directive '" + head + "'");
        }
    }
    if (!script.base)
        throw DgError("attachment script needs a base line");
    return script;
}

}  // namespace dgcat
