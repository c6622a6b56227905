#include "liftlim/spec_format.hpp"

#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include "liftlim/errors.hpp"

namespace liftlim {

namespace {

struct Line {
  std::size_t number;
  std::string text;    // comment stripped
  std::size_t indent;  // columns removed on the left
};

std::string trim(const std::string& s, std::size_t* left = nullptr) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  if (left) *left = a;
  return s.substr(a, b - a);
}

/// A value inside a line, remembering where it starts for diagnostics.
struct Field {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Field> split_list(const Field& f) {
  std::vector<Field> out;
  std::size_t start = 0;
  while (start <= f.text.size()) {
    std::size_t end = f.text.find(',', start);
    if (end == std::string::npos) end = f.text.size();
    std::size_t left = 0;
    const std::string item = trim(f.text.substr(start, end - start), &left);
    if (!item.empty()) out.push_back({item, f.column + start + left});
    start = end + 1;
  }
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, std::optional<std::size_t> budget) : budget_override_(budget) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
      ++n;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      std::size_t left = 0;
      std::string t = trim(raw, &left);
      if (!t.empty()) lines_.push_back({n, std::move(t), left});
    }
  }

  SpecDocument run() {
    std::size_t i = 0;
    while (i < lines_.size()) {
      const Line& head = lines_[i];
      if (head.text.front() != '[' || head.text.back() != ']') fail(head, 1, "expected a section header");
      std::size_t end = i + 1;
      while (end < lines_.size() && lines_[end].text.front() != '[') ++end;
      section(head, i + 1, end);
      i = end;
    }
    if (!tower_line_) throw ParseError(0, 1, "missing [tower] section");
    build_tower();
    build_base();
    build_map();
    return std::move(doc_);
  }

 private:
  [[noreturn]] void fail(const Line& l, std::size_t column, const std::string& msg) const {
    throw ParseError(l.number, l.indent + column, msg);
  }

  template <class F>
  auto located(const Line& l, const Field& f, F&& body) -> decltype(body()) {
    try {
      return body();
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(l.number, l.indent + f.column + e.column() - 1, e.message());
    }
  }

  GroupRef group_named(const Line& l, const Field& f) const {
    const auto it = doc_.groups.find(f.text);
    if (it == doc_.groups.end()) throw ReferenceError(f.text);
    (void)l;
    return it->second;
  }

  const NamedHom& hom_named(const Field& f) const {
    const auto it = doc_.homs.find(f.text);
    if (it == doc_.homs.end()) throw ReferenceError(f.text);
    return it->second;
  }

  std::size_t number(const Line& l, const Field& f) const {
    if (f.text.empty() || f.text.size() > 18 ||
        !std::all_of(f.text.begin(), f.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail(l, f.column, "expected a nonnegative integer");
    return std::stoull(f.text);
  }

  /// `key = value`
  std::pair<Field, Field> assignment(const Line& l) const {
    const auto eq = l.text.find('=');
    if (eq == std::string::npos) fail(l, 1, "expected 'key = value'");
    std::size_t left = 0;
    const std::string key = trim(l.text.substr(0, eq), &left);
    std::size_t vleft = 0;
    const std::string value = trim(l.text.substr(eq + 1), &vleft);
    return {{key, left + 1}, {value, eq + 2 + vleft}};
  }

  /// `stage 3: rest` / `tail: rest` / `bonding 2: rest`
  struct Labeled {
    std::string label;
    std::optional<std::size_t> index;
    Field rest;
  };

  std::optional<Labeled> labeled(const Line& l) const {
    static const std::regex re(R"(^([a-z_]+)(?:\s+([0-9]+))?\s*:\s*(.*)$)");
    std::smatch m;
    if (!std::regex_match(l.text, m, re)) return std::nullopt;
    Labeled out;
    out.label = m[1];
    if (m[2].matched) out.index = std::stoull(m[2]);
    out.rest = {m[3], static_cast<std::size_t>(m.position(3)) + 1};
    return out;
  }

  /// `k1=v1 k2=v2`, values may contain spaces after commas
  std::map<std::string, Field> keyed(const Line& l, const Field& f, const std::vector<std::string>& keys) const {
    static const std::regex re(R"((?:^|\s)([a-z_0-9]+)=)");
    std::map<std::string, Field> out;
    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> found;  // key, (key start, value start)
    for (auto it = std::sregex_iterator(f.text.begin(), f.text.end(), re); it != std::sregex_iterator(); ++it)
      found.push_back({(*it)[1], {static_cast<std::size_t>(it->position(1)),
                                  static_cast<std::size_t>(it->position(0) + it->length(0))}});
    if (found.empty() || trim(f.text.substr(0, found[0].second.first)) != "")
      fail(l, f.column, "expected key=value pairs");
    for (std::size_t k = 0; k < found.size(); ++k) {
      const auto& [key, pos] = found[k];
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail(l, f.column + pos.first, "unknown key '" + key + "'");
      if (out.count(key)) fail(l, f.column + pos.first, "duplicate key '" + key + "'");
      const std::size_t end = k + 1 < found.size() ? found[k + 1].second.first : f.text.size();
      std::size_t left = 0;
      out[key] = {trim(f.text.substr(pos.second, end - pos.second), &left), f.column + pos.second + left};
    }
    for (const auto& key : keys)
      if (!out.count(key)) fail(l, f.column, "missing key '" + key + "'");
    return out;
  }

  std::vector<Word> words(const Line& l, const Field& f, const StageGroup& g) {
    if (f.text == "1") return {};
    if (f.text == "full") {
      std::vector<Word> all;
      for (std::size_t i = 0; i < g.rank(); ++i) all.push_back(Word::generator(g.alphabet, i));
      return all;
    }
    std::vector<Word> out;
    for (const auto& item : split_list(f)) out.push_back(located(l, item, [&] { return parse_word(item.text, g.alphabet); }));
    if (out.empty()) fail(l, f.column, "expected words, '1' or 'full'");
    return out;
  }

  void section(const Line& head, std::size_t from, std::size_t to) {
    static const std::regex group_re(R"(^\[\s*group\s+([A-Za-z_][A-Za-z0-9_]*)\s*\]$)");
    static const std::regex hom_re(
        R"(^\[\s*hom\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*([A-Za-z_][A-Za-z0-9_]*)\s*->\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]$)");
    std::smatch m;
    if (std::regex_match(head.text, m, group_re)) return group_section(head, m[1], from, to);
    if (std::regex_match(head.text, m, hom_re)) {
      const Field src{m[2], static_cast<std::size_t>(m.position(2)) + 1};
      const Field dst{m[3], static_cast<std::size_t>(m.position(3)) + 1};
      return hom_section(head, m[1], src, dst, from, to);
    }
    auto once = [&](std::optional<std::size_t>& slot) {
      if (slot) fail(head, 1, "duplicate " + head.text + " section");
      slot = from;
      ends_[from] = to;
    };
    if (head.text == "[tower]") return once(tower_line_);
    if (head.text == "[base]") return once(base_line_);
    if (head.text == "[map]") return once(map_line_);
    fail(head, 1, "unknown section " + head.text);
  }

  void group_section(const Line& head, const std::string& name, std::size_t from, std::size_t to) {
    if (doc_.groups.count(name)) fail(head, 1, "group '" + name + "' defined twice");
    std::optional<Backend> kind;
    std::vector<std::string> gens;
    bool have_gens = false;
    std::vector<std::pair<Field, const Line*>> relators;
    for (std::size_t i = from; i < to; ++i) {
      const Line& l = lines_[i];
      const auto [key, value] = assignment(l);
      if (key.text == "kind") {
        if (value.text == "abelian") kind = Backend::Abelian;
        else if (value.text == "free") kind = Backend::Free;
        else if (value.text == "fp") kind = Backend::Fp;
        else fail(l, value.column, "kind must be abelian, free or fp");
      } else if (key.text == "generators") {
        have_gens = true;
        for (const auto& g : split_list(value)) gens.push_back(g.text);
      } else if (key.text == "relators") {
        for (const auto& r : split_list(value)) relators.push_back({r, &l});
      } else {
        fail(l, key.column, "unknown key '" + key.text + "'");
      }
    }
    if (!have_gens) fail(head, 1, "group '" + name + "' needs a generators line");
    const Backend backend = kind.value_or(relators.empty() ? Backend::Free : Backend::Fp);
    if (backend != Backend::Fp && !relators.empty()) fail(*relators[0].second, relators[0].first.column, "only fp groups take relators");
    GroupRef g;
    try {
      g = make_group(name, backend, gens);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(head, 1, e.what());
    }
    auto full = std::make_shared<StageGroup>(*g);
    for (const auto& [r, l] : relators) {
      const Word w = located(*l, r, [&] { return parse_word(r.text, full->alphabet); });
      if (w.is_identity()) fail(*l, r.column, "relator reduces to the identity");
      full->relators.push_back(w);
    }
    doc_.groups[name] = full;
  }

  void hom_section(const Line& head, const std::string& name, const Field& src, const Field& dst, std::size_t from,
                   std::size_t to) {
    if (doc_.homs.count(name)) fail(head, 1, "hom '" + name + "' defined twice");
    const GroupRef s = group_named(head, src), d = group_named(head, dst);
    std::vector<std::optional<Word>> images(s->rank());
    for (std::size_t i = from; i < to; ++i) {
      const Line& l = lines_[i];
      const auto arrow = l.text.find("->");
      if (arrow == std::string::npos) fail(l, 1, "expected 'generator -> word'");
      const std::string gen = trim(l.text.substr(0, arrow));
      const auto idx = s->alphabet.index_of(gen);
      if (!idx) fail(l, 1, "'" + gen + "' is not a generator of " + src.text);
      if (images[*idx]) fail(l, 1, "generator '" + gen + "' mapped twice");
      std::size_t left = 0;
      const Field value{trim(l.text.substr(arrow + 2), &left), arrow + 3 + left};
      images[*idx] = located(l, value, [&] { return parse_word(value.text, d->alphabet); });
    }
    std::vector<Word> out;
    for (std::size_t g = 0; g < images.size(); ++g) {
      if (!images[g]) fail(head, 1, "hom '" + name + "' does not map generator '" + s->alphabet.name(g) + "'");
      out.push_back(*images[g]);
    }
    doc_.homs.emplace(name, NamedHom{src.text, dst.text, GroupHom(s->alphabet, d->alphabet, std::move(out))});
  }

  void build_tower() {
    const std::size_t from = *tower_line_, to = ends_[from];
    const Line& head = lines_[from - 1];
    struct StageSpec { GroupRef group; const Line* line; Field thread; };
    std::map<std::size_t, StageSpec> stages;
    std::map<std::size_t, std::pair<const Line*, Field>> bondings;
    std::optional<std::pair<const Line*, std::map<std::string, Field>>> tail;
    std::optional<std::size_t> budget;
    for (std::size_t i = from; i < to; ++i) {
      const Line& l = lines_[i];
      if (auto lab = labeled(l)) {
        if (lab->label == "stage" && lab->index) {
          if (stages.count(*lab->index)) fail(l, 1, "stage " + std::to_string(*lab->index) + " given twice");
          auto kv = keyed(l, lab->rest, {"group", "thread"});
          stages[*lab->index] = {group_named(l, kv["group"]), &l, kv["thread"]};
        } else if (lab->label == "bonding" && lab->index) {
          if (bondings.count(*lab->index)) fail(l, 1, "bonding " + std::to_string(*lab->index) + " given twice");
          hom_named(lab->rest);
          bondings[*lab->index] = {&l, lab->rest};
        } else if (lab->label == "tail" && !lab->index) {
          if (tail) fail(l, 1, "tail given twice");
          tail = {&l, keyed(l, lab->rest, {"group", "bonding", "thread_step", "thread0"})};
          group_named(l, tail->second["group"]);
          hom_named(tail->second["bonding"]);
          hom_named(tail->second["thread_step"]);
        } else {
          fail(l, 1, "unexpected '" + lab->label + "' line in [tower]");
        }
        continue;
      }
      const auto [key, value] = assignment(l);
      if (key.text == "horizon") {
        doc_.horizon = number(l, value);
        if (*doc_.horizon == 0) fail(l, value.column, "horizon must be positive");
      } else if (key.text == "budget") {
        budget = number(l, value);
      } else {
        fail(l, key.column, "unknown key '" + key.text + "'");
      }
    }
    EnumerationBudget eb;
    if (budget) eb.max_cosets = *budget;
    if (budget_override_) eb.max_cosets = *budget_override_;

    std::vector<GroupRef> groups;
    Thread th;
    for (const auto& [i, st] : stages) {
      if (i != groups.size()) fail(*st.line, 1, "stages must be numbered 0, 1, 2, ...");
      groups.push_back(st.group);
      const auto ws = words(*st.line, st.thread, *st.group);
      th.prefix.push_back(located(*st.line, st.thread, [&] { return Subgroup(*st.group, ws, eb); }));
    }
    std::optional<Tail> tl;
    if (tail) {
      auto& kv = tail->second;
      const GroupRef g = group_named(*tail->first, kv["group"]);
      tl = Tail{g, hom_named(kv["bonding"]).hom, hom_named(kv["thread_step"]).hom};
      th.tail_start = Subgroup(*g, words(*tail->first, kv["thread0"], *g), eb);
      th.tail_step = tl->step;
    }
    const std::size_t expected = groups.empty() ? 0 : groups.size() - 1 + (tl ? 1 : 0);
    std::vector<GroupHom> bs;
    for (const auto& [i, b] : bondings) {
      if (i != bs.size() || i >= expected)
        fail(*b.first, 1, "bonding " + std::to_string(i) + " does not join two consecutive stages");
      bs.push_back(hom_named(b.second).hom);
    }
    if (bs.size() != expected) fail(head, 1, "tower needs bondings 0.." + std::to_string(expected) + " (exclusive)");
    try {
      doc_.tower.emplace(std::move(groups), std::move(bs), std::move(th), std::move(tl), eb);
    } catch (const ParseError&) {
      throw;
    } catch (const BudgetExceeded&) {
      throw;
    } catch (const Error& e) {
      fail(head, 1, e.what());
    }
  }

  /// `stage i: hom` and `tail: hom` lines for [base] and [map].
  std::pair<std::vector<GroupHom>, std::optional<GroupHom>> stage_maps(std::size_t from, std::size_t to,
                                                                       bool allow_group, GroupRef* group) {
    std::map<std::size_t, GroupHom> maps;
    std::optional<GroupHom> tail;
    for (std::size_t i = from; i < to; ++i) {
      const Line& l = lines_[i];
      if (auto lab = labeled(l)) {
        if (lab->label == "stage" && lab->index) {
          if (maps.count(*lab->index)) fail(l, 1, "stage " + std::to_string(*lab->index) + " given twice");
          maps.emplace(*lab->index, hom_named(lab->rest).hom);
        } else if (lab->label == "tail" && !lab->index) {
          if (tail) fail(l, 1, "tail given twice");
          tail = hom_named(lab->rest).hom;
        } else {
          fail(l, 1, "unexpected '" + lab->label + "' line");
        }
        continue;
      }
      const auto [key, value] = assignment(l);
      if (!allow_group || key.text != "group") fail(l, key.column, "unknown key '" + key.text + "'");
      *group = group_named(l, value);
    }
    std::vector<GroupHom> out;
    for (auto& [i, h] : maps) {
      if (i != out.size()) throw ParseError(lines_[from - 1].number, 1, "stage maps must be numbered 0, 1, 2, ...");
      out.push_back(h);
    }
    return {out, tail};
  }

  void build_base() {
    if (!base_line_) return;
    GroupRef p;
    auto [maps, tail] = stage_maps(*base_line_, ends_[*base_line_], true, &p);
    const Line& head = lines_[*base_line_ - 1];
    if (!p) fail(head, 1, "[base] needs 'group = <name>'");
    for (const auto& h : maps)
      if (!(h.source() == p->alphabet)) fail(head, 1, "base stage maps must start at the base group");
    if (tail && !(tail->source() == p->alphabet)) fail(head, 1, "base tail map must start at the base group");
    doc_.base = BaseModel{p, std::move(maps), std::move(tail)};
  }

  void build_map() {
    if (!map_line_) return;
    auto [maps, tail] = stage_maps(*map_line_, ends_[*map_line_], false, nullptr);
    doc_.map = TowerMap{std::move(maps), std::move(tail)};
  }

  std::vector<Line> lines_;
  std::optional<std::size_t> budget_override_;
  std::optional<std::size_t> tower_line_, base_line_, map_line_;
  std::map<std::size_t, std::size_t> ends_;
  SpecDocument doc_;
};

}  // namespace

SpecDocument parse_spec(std::string_view text, std::optional<std::size_t> budget) { return Parser(text, budget).run(); }

SpecDocument load_spec(const std::string& path, std::optional<std::size_t> budget) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str(), budget);
}

}  // namespace liftlim
