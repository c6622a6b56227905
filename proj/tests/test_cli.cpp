#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"
#include "liftlim/cli.hpp"
#include "liftlim/errors.hpp"
#include "liftlim/gallery.hpp"

using namespace liftlim;
using Json = nlohmann::ordered_json;

namespace {

const std::string kRoot = LIFTLIM_SOURCE_DIR;

SpecDocument spec(const std::string& rel) { return load_spec(kRoot + "/" + rel); }

Json run(const SpecDocument& doc, const std::string& cmd, CommandOptions o, int expect_exit = 0) {
  o.format = ReportFormat::Structured;
  const CommandOutcome out = run_command(doc, cmd, o);
  INFO(out.diagnostics);
  CHECK(out.exit_code == expect_exit);
  return out.report.empty() ? Json() : Json::parse(out.report);
}

CommandOptions horizon(std::size_t h) {
  CommandOptions o;
  o.horizon = h;
  return o;
}

const char* kMinimal = R"(
[group Z]
kind = abelian
generators = a
[hom id: Z -> Z]
a -> a
[hom d: Z -> Z]
a -> a^2
[tower]
tail: group=Z bonding=id thread_step=d thread0=full
)";

}  // namespace

TEST_CASE("p-solenoid spec file round trip") {
  const SpecDocument d = spec("specs/gallery/p-solenoid.tower");
  REQUIRE(d.tower);
  CHECK(d.tower->prefix_length() == 0);
  CHECK(d.tower->has_tail());
  CHECK(d.tower->backend() == Backend::Abelian);
  CHECK(d.horizon == 20u);
  REQUIRE(d.base);
  CHECK(d.base->group->name == "Z");
  CHECK(d.groups.size() == 1);
  CHECK(d.homs.size() == 2);
  const Subgroup& g3 = d.tower->thread(3);
  CHECK(g3 == Subgroup(d.tower->group(3), {Word::generator(d.tower->group(3).alphabet, 0, Integer(8))}));
}

TEST_CASE("parse errors carry line and column") {
  const auto err = [](const std::string& rel) -> std::pair<std::size_t, std::size_t> {
    try {
      spec(rel);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  CHECK(err("tests/fixtures/malformed.tower") == std::pair<std::size_t, std::size_t>{7, 1});
  CHECK(err("tests/fixtures/duplicate-tower.tower") == std::pair<std::size_t, std::size_t>{11, 1});
  CHECK(err("tests/fixtures/bad-word.tower") == std::pair<std::size_t, std::size_t>{6, 8});
  CHECK_THROWS_AS(parse_spec("[group Z]\nkind = abelian\ngenerators = a\n"), ParseError);     // no tower
  CHECK_THROWS_AS(parse_spec("generators = a\n"), ParseError);                               // no header
  CHECK_THROWS_AS(parse_spec(std::string(kMinimal) + "[group Z]\ngenerators = b\n"), ParseError);
  CHECK_THROWS_AS(parse_spec(std::string(kMinimal) + "[hom x: Z -> Z]\nb -> a\n"), ParseError);
  CHECK_THROWS_AS(parse_spec(std::string(kMinimal) + "[hom x: Z -> Z]\n"), ParseError);  // a unmapped
  CHECK_THROWS_AS(parse_spec(std::string(kMinimal) + "[weird]\n"), ParseError);
}

TEST_CASE("undefined names raise ReferenceError") {
  try {
    spec("tests/fixtures/undefined-hom.tower");
    FAIL("no error");
  } catch (const ReferenceError& e) {
    CHECK(e.name() == "u");
  }
  CHECK_THROWS_AS(parse_spec(std::string(kMinimal) + "[base]\ngroup = P\n"), ReferenceError);
  CHECK_THROWS_AS(parse_spec(std::string(kMinimal) + "[hom y: Z -> Q]\na -> a\n"), ReferenceError);
}

TEST_CASE("stage lists, thread keywords and budgets") {
  const SpecDocument d = parse_spec(R"(
[group Z2]
kind = abelian
generators = x, y   # comment
[group Z1]
kind = abelian
generators = x
[hom p: Z2 -> Z1]
x -> x
y -> 1
[tower]
stage 0: group=Z1 thread=full
stage 1: group=Z2 thread=x^2, y
bonding 0: p
budget = 77
)");
  REQUIRE(d.tower);
  CHECK(d.tower->prefix_length() == 2);
  CHECK(d.tower->budget().max_cosets == 77);
  CHECK(d.tower->thread(1).lattice().rank() == 2);
  CHECK(parse_spec(kMinimal, 5).tower->budget().max_cosets == 5);
  CHECK_THROWS_AS(parse_spec(R"(
[group Z]
kind = abelian
generators = a
[tower]
stage 1: group=Z thread=1
)"),
                  ParseError);
}

TEST_CASE("fp groups and relators") {
  const SpecDocument d = parse_spec(R"(
[group S3]
generators = a, b
relators = a^2, b^3, (a*b)^2
[hom id: S3 -> S3]
a -> a
b -> b
[tower]
stage 0: group=S3 thread=1
stage 1: group=S3 thread=1
bonding 0: id
)");
  CHECK(d.tower->backend() == Backend::Fp);
  const Json r = run(d, "fiber", horizon(4));
  CHECK(r["verdict"] == "Finite(6)");
  CHECK_THROWS_AS(parse_spec("[group A]\nkind = abelian\ngenerators = a\nrelators = a^2\n[tower]\n"), ParseError);
}

TEST_CASE("run_command examples") {
  const SpecDocument d = spec("specs/gallery/dyadic-solenoid.tower");
  Json r = run(d, "classify", horizon(10));
  CHECK(r["schema"] == "liftlim-report/1");
  CHECK(r["verdict"] == "StrictLifting");
  CHECK(r["certainty"] == "Certified");
  CHECK(r["rule"] == "stationary-induction");
  CHECK(r["horizon"] == 10);

  CommandOptions o = horizon(16);
  o.word = "a^4";
  r = run(d, "pi1", o);
  CHECK(r["verdict"] == "RejectedAtStage(3)");
  CHECK(r["certainty"] == "Certified");

  const Json f = run(d, "fiber", horizon(5));
  std::vector<long> counts;
  for (const auto& s : f["stages"]) counts.push_back(s["cosets"].get<long>());
  CHECK(counts == std::vector<long>{1, 2, 4, 8, 16, 32});
}

TEST_CASE("exit codes") {
  const SpecDocument d = spec("specs/gallery/dyadic-solenoid.tower");
  run(d, "pi1", horizon(4), 2);       // no --word
  run(d, "meet", horizon(4), 2);      // no --target
  run(d, "restrict", horizon(4), 2);  // no --indices
  CommandOptions o = horizon(4);
  o.word = "b";
  run(d, "pi1", o, 2);
  o.indices = "0,1";
  run(d, "restrict", o, 1);  // not cofinal
  run(d, "nonsense", horizon(4), 2);

  const Json bad = run(spec("tests/fixtures/incoherent.tower"), "classify", horizon(4), 3);
  CHECK(bad["verdict"] == "CoherenceViolation");
  CHECK(bad["witnesses"][0] == "bonding 0: a^3 not in G_0");
  run(spec("tests/fixtures/incoherent.tower"), "check", horizon(4), 3);

  const SpecDocument free = spec("tests/fixtures/free-solenoid.tower");
  CommandOptions w = horizon(16);
  w.word = "a^1073741824";
  CHECK(run(free, "pi1", w)["certainty"] == "HorizonLimited(16)");
  w.require_certified = true;
  run(free, "pi1", w, 5);
  CommandOptions ok = horizon(10);
  ok.require_certified = true;
  run(d, "classify", ok, 0);
}

TEST_CASE("horizon precedence") {
  const SpecDocument with = spec("specs/gallery/dyadic-solenoid.tower");
  const SpecDocument without = spec("specs/gallery/constant-cover.tower");
  CHECK(resolve_horizon(7, with, "9") == 7);
  CHECK(resolve_horizon(std::nullopt, with, "9") == 20);
  CHECK(resolve_horizon(std::nullopt, without, "9") == 9);
  CHECK(resolve_horizon(std::nullopt, without, nullptr) == kDefaultHorizon);
  CHECK(resolve_horizon(std::nullopt, without, "") == kDefaultHorizon);
  CHECK_THROWS(resolve_horizon(std::nullopt, without, "0"));
  CHECK_THROWS(resolve_horizon(std::nullopt, without, "x3"));
  CHECK_THROWS(resolve_horizon(0, without, nullptr));
}

TEST_CASE("gallery spec files agree with the programmatic gallery") {
  for (const auto& name : gallery_names()) {
    const GalleryEntry e = make_gallery(name);
    const SpecDocument d = spec("specs/gallery/" + name + ".tower");
    for (const auto& [cmd, verdict] : e.expected) {
      CAPTURE(name);
      CAPTURE(cmd);
      CHECK(run(d, cmd, horizon(12))["verdict"] == verdict);
    }
    for (std::size_t i = 0; i < e.tower.stages_up_to(5); ++i) CHECK(d.tower->thread(i) == e.tower.thread(i));
  }
}

TEST_CASE("structured reports are deterministic") {
  const SpecDocument d = spec("specs/gallery/hawaiian.tower");
  CommandOptions o = horizon(8);
  o.format = ReportFormat::Structured;
  for (const auto& cmd : {"check", "classify", "deck", "density", "pi0"})
    CHECK(run_command(d, cmd, o).report == run_command(spec("specs/gallery/hawaiian.tower"), cmd, o).report);
}
