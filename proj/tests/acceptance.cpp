// Acceptance run: one PASS/FAIL line per criterion, each with a pinned time limit.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "liftlim/cli.hpp"
#include "liftlim/errors.hpp"
#include "liftlim/gallery.hpp"
#include "liftlim/kernels.hpp"
#include "oracles.hpp"

using namespace liftlim;

namespace {

const std::string kRoot = LIFTLIM_SOURCE_DIR;

/// Collects failed expectations of one criterion.
struct Checks {
  std::vector<std::string> failures;
  std::size_t count = 0;
  void expect(bool ok, const std::string& what) {
    ++count;
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok && failures.size() == 5) failures.push_back("...");
  }
};

Word power_of(const GroupRef& g, const Integer& k) { return Word::generator(g->alphabet, 0, k); }

Subgroup multiples(const StageGroup& g, const Integer& k) { return Subgroup(g, {Word::generator(g.alphabet, 0, k)}); }

Integer ipow(long b, std::size_t e) {
  Integer r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

std::size_t v2(long k) { return static_cast<std::size_t>(__builtin_ctzl(static_cast<unsigned long>(k))); }

/// The parts of criterion 1 shared with criterion 8: verdicts keyed by name.
std::map<std::string, std::string> certified_verdicts(const Tower& t, const BaseModel& m, std::size_t h) {
  std::map<std::string, std::string> out;
  const auto c = stability_analysis(t, h).classification;
  out["classify"] = to_string(c) + " " + to_string(c.certainty);
  const auto d = density(t, m, h);
  out["density"] = std::string(d.kind == DensityKind::Dense ? "Dense " : "other ") + to_string(d.certainty);
  for (long k = 1; k <= 64; ++k) {
    const auto r = pi1_membership(t, m, power_of(m.group, k), h);
    out["pi1 a^" + std::to_string(k)] = std::string(r.accepted ? "accepted " : "rejected ") + to_string(r.certainty);
  }
  const auto e = pi1_membership(t, m, Word(m.group->alphabet), h);
  out["pi1 1"] = std::string(e.accepted ? "accepted " : "rejected ") + to_string(e.certainty);
  return out;
}

void dyadic_suite(Checks& c) {
  const GalleryEntry e = make_gallery("p-solenoid", {{"p", 2}});
  const Tower& t = e.tower;
  const std::size_t h = 20;
  c.expect(check_coherence(t, h).ok() && check_coherence(t, h).certainty.certified, "coherence");
  const auto cls = stability_analysis(t, h).classification;
  c.expect(cls.kind == ClassKind::StrictLifting && cls.certainty.certified, "classification " + to_string(cls));
  const auto f = fiber_model(t, h);
  c.expect(f.limit == FiberKind::Uncountable && f.certainty.certified, "fiber limit");
  c.expect(f.counts.size() == h + 1, "fiber stage count");
  for (std::size_t i = 0; i < f.counts.size(); ++i) c.expect(f.counts[i] == ipow(2, i), "fiber count " + std::to_string(i));
  for (long k = 1; k <= 64; ++k) {
    const auto r = pi1_membership(t, e.base, power_of(e.base.group, k), h);
    c.expect(!r.accepted && r.rejected_stage == v2(k) + 1 && r.certainty.certified, "pi1 a^" + std::to_string(k));
  }
  const auto eps = pi1_membership(t, e.base, Word(e.base.group->alphabet), h);
  c.expect(eps.accepted && eps.certainty.certified, "pi1 identity");
  const auto d = deck_tower(t, h);
  c.expect(d.certainty.certified && d.stages.size() == h + 1, "deck certainty");
  for (const auto& s : d.stages) {
    c.expect(s.order == ipow(2, s.stage), "deck order " + std::to_string(s.stage));
    c.expect(s.structure == (s.stage == 0 ? "1" : "Z/" + ipow(2, s.stage).get_str()), "deck structure " + s.structure);
    // Z/2^i -> Z/2^{i-1}, 1 -> 1: reduction mod 2^{i-1}
    if (s.stage >= 2) c.expect(s.bonding == "[[1]]", "deck bonding " + s.bonding);
  }
  const auto dn = density(t, e.base, h);
  const auto has = [&](const std::string& k) { return std::count(dn.criteria.begin(), dn.criteria.end(), k) > 0; };
  c.expect(dn.kind == DensityKind::Dense && dn.certainty.certified, "density verdict");
  c.expect(has("stagewise") && has("cor-4"), "density criteria stagewise and cor-4 must agree");
}

void covering_detection(Checks& c) {
  const GalleryEntry e = make_gallery("constant-cover", {{"m", 2}});
  const auto cls = stability_analysis(e.tower, 16).classification;
  c.expect(cls.kind == ClassKind::Covering && cls.stage == 0 && cls.certainty.certified, "classification " + to_string(cls));
  const auto f = fiber_model(e.tower, 16);
  c.expect(f.limit == FiberKind::Finite && f.limit_count == 2 && f.certainty.certified, "fiber Finite(2)");
  const auto p = pi0_report(e.tower, e.base, 16);
  c.expect(p.kind == Pi0Kind::Trivial && p.certainty.certified, "pi0 Trivial");
}

void lifting_triple(Checks& c) {
  const GalleryEntry dy = make_gallery("p-solenoid", {{"p", 2}});
  const GalleryEntry tri = make_gallery("p-solenoid", {{"p", 3}});
  const Alphabet& a = dy.base.group->alphabet;
  const TowerMap id{{}, GroupHom::identity(a)};
  const TowerMap times3{{}, GroupHom(a, a, {Word::generator(a, 0, Integer(3))})};
  const std::size_t h = 16;
  const auto expect_identity_witnesses = [&](const LiftResult& r, const std::string& what) {
    c.expect(r.kind == LiftKind::Liftable && r.certainty.certified, what + ": Liftable");
    for (std::size_t i = 0; i < r.witnesses.size(); ++i) c.expect(r.witnesses[i] == i, what + ": j(i) = i");
    c.expect(!r.witnesses.empty() && r.tail_offset == std::size_t{0}, what + ": tail offset 0");
  };
  expect_identity_witnesses(lift_exists(dy.tower, dy.tower, id, h), "identity dyadic -> dyadic");
  const auto ob = lift_exists(dy.tower, tri.tower, id, h);
  c.expect(ob.kind == LiftKind::Obstructed && ob.stage == 1 && ob.certainty.certified, "dyadic -> triadic Obstructed(1)");
  expect_identity_witnesses(lift_exists(dy.tower, dy.tower, times3, h), "x3 dyadic -> dyadic");
}

void thread_meet_suite(Checks& c) {
  const GalleryEntry dy = make_gallery("p-solenoid", {{"p", 2}});
  const GalleryEntry tri = make_gallery("p-solenoid", {{"p", 3}});
  const std::size_t h = 16;
  const Tower m = thread_meet(dy.tower, tri.tower, h);
  for (std::size_t i = 0; i <= h; ++i) c.expect(m.thread(i) == multiples(m.group(i), ipow(6, i)), "meet G_" + std::to_string(i));
  std::mt19937 rng(4);
  std::vector<Word> corpus;
  for (int k = 0; k < 200; ++k) corpus.push_back(oracle::random_word(dy.base.group->alphabet, rng, 0, 12));
  for (std::size_t i = 0; i <= h; ++i) {
    const auto in_m = batch_member(m.group(i), m.thread(i), corpus);
    const auto in_d = batch_member(dy.tower.group(i), dy.tower.thread(i), corpus);
    const auto in_t = batch_member(tri.tower.group(i), tri.tower.thread(i), corpus);
    for (std::size_t w = 0; w < corpus.size(); ++w)
      c.expect(in_m[w] == (in_d[w] && in_t[w]), "meet membership " + to_string(corpus[w]) + " at " + std::to_string(i));
  }
  const auto rm = batch_pi1(m, dy.base, corpus, h);
  const auto rd = batch_pi1(dy.tower, dy.base, corpus, h);
  const auto rt = batch_pi1(tri.tower, tri.base, corpus, h);
  for (std::size_t w = 0; w < corpus.size(); ++w) {
    c.expect(rm[w].accepted == (rd[w].accepted && rt[w].accepted), "meet pi1 " + to_string(corpus[w]));
    if (!rm[w].accepted)
      c.expect(rm[w].rejected_stage == std::min(rd[w].accepted ? h + 1 : rd[w].rejected_stage,
                                                rt[w].accepted ? h + 1 : rt[w].rejected_stage),
               "meet rejection stage " + to_string(corpus[w]));
  }
  const auto cls = stability_analysis(m, h).classification;
  c.expect(cls.kind == ClassKind::StrictLifting, "meet classification " + to_string(cls));
}

void todd_coxeter_oracle(Checks& c) {
  const auto cases = oracle::corpus();
  c.expect(cases.size() >= 6, "corpus size");
  for (const auto& g : cases) {
    const Alphabet alpha(g.gens);
    std::vector<Word> rels;
    for (const auto& r : g.relators) rels.push_back(parse_word(r, alpha));
    const std::size_t degree = g.perms[0].size();
    const std::size_t order = oracle::closure_order(g.perms, degree);
    c.expect(order <= 24, g.name + " order");
    for (const auto& r : rels) c.expect(oracle::evaluate(r, g.perms) == oracle::evaluate(Word(alpha), g.perms), g.name + " model");
    for (const auto& sub : g.subgroups) {
      std::vector<Word> gens;
      std::vector<oracle::Perm> perms;
      for (const auto& s : sub) {
        gens.push_back(parse_word(s, alpha));
        perms.push_back(oracle::evaluate(gens.back(), g.perms));
      }
      const std::size_t sub_order = perms.empty() ? 1 : oracle::closure_order(perms, degree);
      c.expect(todd_coxeter(Presentation(alpha, rels), gens).size() == order / sub_order, g.name + " index");
    }
  }
  const Alphabet a({"a"}), ab({"a", "b"});
  const Presentation s3(ab, {parse_word("a^2", ab), parse_word("b^3", ab), parse_word("(a*b)^2", ab)});
  c.expect(todd_coxeter(s3, {parse_word("a", ab)}).size() == 3, "S3 <a> -> 3");
  c.expect(todd_coxeter(Presentation(a, {parse_word("a^5", a)}), {}).size() == 5, "<a | a^5> -> 5");
  const Presentation q8(ab, {parse_word("a^4", ab), parse_word("a^2*b^-2", ab), parse_word("b^-1*a*b*a", ab)});
  c.expect(todd_coxeter(q8, {}).size() == 8, "quaternion order 8");
  bool budget = false;
  try {
    todd_coxeter(Presentation(ab), {}, {1000, 100000});
  } catch (const BudgetExceeded&) {
    budget = true;
  }
  c.expect(budget, "free group exceeds the budget");
}

void stallings_oracle(Checks& c) {
  std::mt19937 rng(2024);
  const Alphabet ab({"a", "b"});
  const auto universe = oracle::all_words(ab, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Word> gens;
    for (int k = static_cast<int>(1 + rng() % 3); k > 0; --k) gens.push_back(oracle::random_word(ab, rng, 1, 4));
    const auto g = fold_graph(gens, ab);
    for (const auto& s : oracle::products(gens, ab, 3)) c.expect(graph_member(g, parse_word(s, ab)), "product " + s);
    const auto closed = oracle::bounded_closure(gens, ab, 8);
    for (const auto& w : universe)
      c.expect(graph_member(g, w) == (closed.count(to_string(w)) > 0), "membership of " + to_string(w));
  }
  const auto two = fold_graph({parse_word("a^2", ab), parse_word("b", ab), parse_word("a*b*a^-1", ab)}, ab);
  c.expect(graph_index(two) == Integer(2), "index of <a^2, b, aba^-1>");
}

void divisible_core_oracle(Checks& c) {
  std::mt19937 rng(7);
  std::vector<IntMatrix> cases;
  const auto mat = [](long a, long b, long cc, long d) {
    IntMatrix m(2, 2);
    m(0, 0) = a, m(0, 1) = b, m(1, 0) = cc, m(1, 1) = d;
    return m;
  };
  cases.push_back(mat(2, 0, 0, 1));   // diag(2, 1)
  cases.push_back(mat(2, 0, 0, 2));   // x2
  cases.push_back(mat(1, 1, 0, 1));   // unimodular
  cases.push_back(mat(2, 1, 1, 1));   // unimodular
  cases.push_back(mat(0, 1, -1, 0));  // unimodular
  for (int k = 0; k < 100; ++k) cases.push_back(oracle::random_small_det(rng, 4, 8));
  for (const auto& m : cases) {
    const AbelianHom h(m);
    const Lattice core = divisible_core(h, Lattice::full(2));
    c.expect(core == oracle::core_2x2(m), "core of " + to_string(m));
    Lattice cur = Lattice::full(2), prev = cur;
    for (int k = 0; k < 12; ++k) {
      prev = cur;
      cur = image(h, cur);
      c.expect(contains(cur, core), "core inside the horizon chain for " + to_string(m));
    }
    if (prev == cur) c.expect(cur == core, "stabilised horizon chain equals the core for " + to_string(m));
  }
}

void cofinal_invariance(Checks& c) {
  const GalleryEntry e = make_gallery("p-solenoid", {{"p", 2}});
  const IndexSequence even = parse_indices("0:2");
  const Tower r = restrict_cofinal(e.tower, even);
  const BaseModel rb = restrict_base(e.tower, e.base, even);
  for (std::size_t i = 0; i <= 10; ++i) c.expect(r.thread(i) == multiples(r.group(i), ipow(4, i)), "4^i Z at " + std::to_string(i));
  c.expect(r.has_tail() && r.prefix_length() == 0, "restriction stays stationary");
  const auto a = certified_verdicts(e.tower, e.base, 20);
  const auto b = certified_verdicts(r, rb, 20);
  for (const auto& [k, v] : a) c.expect(b.at(k) == v, k + ": " + v + " vs " + b.at(k));
}

void hawaiian_suite(Checks& c) {
  for (long n = 1; n <= 6; ++n) {
    const GalleryEntry e = make_gallery("hawaiian", {{"n", n}});
    const std::string tag = "n=" + std::to_string(n) + " ";
    const auto s = stability_analysis(e.tower, 16);
    c.expect(s.ml_known == true && s.ml_certainty.certified && s.ml_certainty.rule == "surjective-bondings", tag + "ML");
    const Alphabet& a = e.base.group->alphabet;
    if (n >= 2) {
      const Word comm = commutator(Word::generator(a, 0), Word::generator(a, 1));
      const auto r = pi1_membership(e.tower, e.base, comm, 16);
      c.expect(!r.accepted && r.rejected_stage == 2 && r.certainty.certified, tag + "[a1,a2] rejected at 2");
    }
    const auto eps = pi1_membership(e.tower, e.base, Word(a), 16);
    c.expect(eps.accepted && eps.certainty.certified, tag + "identity accepted");
    std::mt19937 rng(static_cast<unsigned>(n));
    std::vector<Word> corpus;
    for (int k = 0; k < 100; ++k) corpus.push_back(oracle::random_word(a, rng, 0, 10));
    const auto verdicts = batch_pi1(e.tower, e.base, corpus, 16);
    for (std::size_t w = 0; w < corpus.size(); ++w) {
      bool all = true;
      for (std::size_t i = 0; i < e.tower.prefix_length(); ++i) all = all && in_kernel(e.base.map(i), corpus[w], KernelTarget::Free);
      c.expect(verdicts[w].accepted == all, tag + "in_kernel agreement on " + to_string(corpus[w]));
    }
  }
}

/// cli_main on an argument list, output captured.
int cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "liftlim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  return code;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void cli_determinism(Checks& c) {
  std::ifstream manifest(kRoot + "/tests/golden/MANIFEST");
  std::string line;
  std::size_t entries = 0;
  std::set<std::string> specs_seen;
  while (std::getline(manifest, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string golden, word;
    fields >> golden;
    std::vector<std::string> args;
    while (fields >> word) args.push_back(word.find("specs/") == 0 || word.find("tests/") == 0 ? kRoot + "/" + word : word);
    args.push_back("--report");
    args.push_back("structured");
    std::string first, second;
    const int code = cli(args, &first);
    cli(args, &second);
    c.expect(code == 0, golden + " exit " + std::to_string(code));
    c.expect(first == second, golden + " differs between runs");
    c.expect(first == slurp(kRoot + "/tests/golden/" + golden), golden + " differs from golden");
    specs_seen.insert(args[1]);
    ++entries;
  }
  c.expect(entries > 0, "manifest read");
  for (const auto& name : gallery_names()) {
    const std::string path = kRoot + "/specs/gallery/" + name + ".tower";
    c.expect(specs_seen.count(path) > 0, name + " spec file covered by goldens");
    for (const auto& [cmd, verdict] : make_gallery(name).expected) {
      std::string out;
      cli({cmd, path, "--report", "structured"}, &out);
      c.expect(!out.empty() && nlohmann::json::parse(out)["verdict"] == verdict, name + " " + cmd + " -> " + verdict);
    }
  }
  for (const char* f : {"malformed", "undefined-hom", "duplicate-tower", "bad-word"})
    c.expect(cli({"check", kRoot + "/tests/fixtures/" + f + ".tower"}) == 2, std::string(f) + " exits 2");
  c.expect(cli({"classify", kRoot + "/tests/fixtures/incoherent.tower"}) == 3, "incoherent exits 3");
  c.expect(cli({"pi1", kRoot + "/tests/fixtures/free-solenoid.tower", "--word", "a^1073741824", "--require-certified"}) == 5,
           "horizon-limited with --require-certified exits 5");
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void(Checks&)> run;
};

}  // namespace

int main() {
  unsetenv("LIFTLIM_DEFAULT_HORIZON");
  const std::vector<Criterion> criteria = {
      {1, "dyadic solenoid suite", 1.0, dyadic_suite},
      {2, "covering detection", 0.1, covering_detection},
      {3, "lifting criterion triple", 0.1, lifting_triple},
      {4, "thread meet", 1.0, thread_meet_suite},
      {5, "Todd-Coxeter oracle", 5.0, todd_coxeter_oracle},
      {6, "Stallings oracle", 5.0, stallings_oracle},
      {7, "divisible core vs horizon iteration", 5.0, divisible_core_oracle},
      {8, "cofinal invariance", 1.0, cofinal_invariance},
      {9, "Hawaiian prefix suite", 2.0, hawaiian_suite},
      {10, "CLI determinism", 5.0, cli_determinism},
  };
  int failed = 0;
  for (const auto& k : criteria) {
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      k.run(checks);
    } catch (const std::exception& e) {
      checks.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < k.limit_seconds;
    const bool ok = checks.failures.empty() && in_time;
    if (!ok) ++failed;
    std::printf("criterion %2d %s  %-36s %7.3f s (limit %.1f s)  %6zu checks", k.id, ok ? "PASS" : "FAIL", k.name, secs,
                k.limit_seconds, checks.count);
    if (!in_time) std::printf("  too slow");
    for (const auto& f : checks.failures) std::printf("\n    %s", f.c_str());
    std::printf("\n");
  }
  return failed == 0 ? 0 : 1;
}
