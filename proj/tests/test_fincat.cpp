#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "oracles.hpp"
#include "symcat/error.hpp"
#include "symcat/fincat.hpp"

using namespace symcat;
using namespace symcat::fincat;

namespace {

MorId mor(const FinCategory& c, const char* name) { return *c.find_morphism(name); }

bool witness_mentions(const LawReport& r, const std::vector<std::string>& names) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) {
    return std::all_of(names.begin(), names.end(), [&](const std::string& n) {
      return std::find(v.witness.begin(), v.witness.end(), n) != v.witness.end();
    });
  });
}

FunctorData collapse_to(const FinCategory& arrow, const char* obj) {
  const ObjId o = *arrow.find_object(obj);
  const MorId id = *arrow.identity(o);
  return FunctorData{{o, o}, {id, id, id}};
}

}  // namespace

TEST_CASE("validate_category accepts the small catalog", "[fincat]") {
  for (const auto& c : {catalog::terminal(), catalog::arrow(), catalog::bz2(), catalog::parallel_pair(), catalog::iso_pair(),
                        catalog::discrete(3)}) {
    const auto rep = validate_category(c);
    CHECK(rep.passed());
    CHECK(oracle::category_ok(c));
  }
  // BZ2: every one of the 8 triples is composable and examined.
  const auto rep = validate_category(catalog::bz2());
  CHECK(rep.cases == 1 + 4 + 4 + 8);
}

TEST_CASE("validate_category reports planted composition mutants", "[fincat]") {
  const auto c = catalog::bz2();
  const MorId e = mor(c, "e");
  const MorId s = mor(c, "s");

  const auto bad = c.with_composite(s, e, e);
  const auto rep = validate_category(bad);
  REQUIRE_FALSE(rep.passed());
  CHECK(witness_mentions(rep, {"s", "e"}));
  CHECK(rep.violations.front().law == "right_identity");

  // Rewiring s o s to s leaves the two-element idempotent monoid {1, 0},
  // which satisfies every category axiom; it is an equivalent mutant.
  const auto idem = c.with_composite(s, s, s);
  CHECK(validate_category(idem).passed());
  CHECK(oracle::category_ok(idem));
}

TEST_CASE("validate_category finds missing identities and composites", "[fincat]") {
  const auto c = catalog::arrow();
  const auto no_id = c.with_identity(*c.find_object("b"), std::nullopt);
  auto rep = validate_category(no_id);
  CHECK_FALSE(rep.passed());
  CHECK(witness_mentions(rep, {"b"}));

  const auto hole = c.with_composite(mor(c, "f"), mor(c, "id_a"), std::nullopt);
  rep = validate_category(hole);
  CHECK_FALSE(rep.passed());
  CHECK(rep.violations.front().law == "composition_total");
}

TEST_CASE("FinCategory rejects dangling ids and non-composable entries", "[fincat]") {
  CHECK_THROWS_AS(FinCategory({"a"}, {{"f", "a", "z"}}, {}, {}), Error);
  try {
    FinCategory({"a", "b"}, {{"f", "a", "b"}}, {}, {{"f", "f", "f"}});
    FAIL("expected MalformedDocument");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedDocument);
  }
}

TEST_CASE("witness cap keeps the total violation count", "[fincat]") {
  const auto c = catalog::bz2();
  const auto bad = c.with_composite(mor(c, "e"), mor(c, "e"), mor(c, "s"));
  const auto all = validate_category(bad);
  const auto capped = validate_category(bad, CheckOptions{1});
  REQUIRE(all.violations.size() > 1);
  CHECK(capped.violations.size() == 1);
  CHECK(capped.violation_count == all.violation_count);
  CHECK(capped.violations.front() == all.violations.front());
}

TEST_CASE("check_functor", "[fincat]") {
  const auto arrow = catalog::arrow();
  const auto bz2 = catalog::bz2();
  CHECK(check_functor(identity_functor(arrow), arrow, arrow).passed());
  CHECK(check_functor(catalog::bz2_collapse(), bz2, bz2).passed());

  FunctorData bad = identity_functor(arrow);
  bad.mor_map[mor(arrow, "f")] = mor(arrow, "id_b");
  const auto rep = check_functor(bad, arrow, arrow);
  REQUIRE_FALSE(rep.passed());
  CHECK(rep.violations.front().law == "endpoints");
  CHECK(witness_mentions(rep, {"f"}));

  FunctorData short_map{{0}, {0, 1, 2}};
  CHECK_THROWS_AS(check_functor(short_map, arrow, arrow), Error);
}

TEST_CASE("check_natural", "[fincat]") {
  const auto bz2 = catalog::bz2();
  const auto id = identity_functor(bz2);
  const auto collapse = catalog::bz2_collapse();
  const MorId s = mor(bz2, "s");

  CHECK(check_natural(identity_transformation(id, bz2, bz2), id, id, bz2, bz2).passed());
  CHECK(check_natural(NatTransformData{{s}}, id, id, bz2, bz2).passed());

  const auto rep = check_natural(NatTransformData{{s}}, id, collapse, bz2, bz2);
  REQUIRE_FALSE(rep.passed());
  CHECK(rep.violations.size() == 1);
  CHECK(rep.violations.front().witness == std::vector<std::string>{"s"});

  CHECK_THROWS_AS(check_natural(NatTransformData{}, id, id, bz2, bz2), Error);
}

TEST_CASE("enumerate_hyp counts", "[fincat]") {
  const auto arrow_hyp = enumerate_hyp(catalog::arrow());
  CHECK(arrow_hyp.endofunctors.size() == 3);
  const auto arrow = catalog::arrow();
  CHECK(arrow_hyp.find_functor(identity_functor(arrow)));
  CHECK(arrow_hyp.find_functor(collapse_to(arrow, "a")));
  CHECK(arrow_hyp.find_functor(collapse_to(arrow, "b")));

  const auto bz2_hyp = enumerate_hyp(catalog::bz2());
  REQUIRE(bz2_hyp.endofunctors.size() == 2);
  const std::size_t i = bz2_hyp.identity_functor_index();
  const std::size_t k = *bz2_hyp.find_functor(catalog::bz2_collapse());
  CHECK(bz2_hyp.homs[i][i].size() == 2);
  CHECK(bz2_hyp.homs[k][k].size() == 2);
  CHECK(bz2_hyp.homs[i][k].empty());
  CHECK(bz2_hyp.homs[k][i].empty());

  const auto term = enumerate_hyp(catalog::terminal());
  CHECK(term.endofunctors.size() == 1);
  CHECK(term.transformation_count() == 1);
}

TEST_CASE("enumerate_hyp refuses over budget", "[fincat]") {
  try {
    enumerate_hyp(catalog::discrete(8));
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
  CHECK_NOTHROW(enumerate_hyp(catalog::discrete(4)));
}

TEST_CASE("enumerate_hyp output is duplicate-free and closed", "[fincat]") {
  symcat::CounterRng rng(7);
  std::vector<FinCategory> cats{catalog::arrow(), catalog::bz2(), catalog::parallel_pair(), catalog::iso_pair()};
  for (int t = 0; t < 5; ++t) cats.push_back(oracle::random_preorder(rng, 3));
  for (const auto& c : cats) {
    const auto hyp = enumerate_hyp(c, EnumerationLimits{1e12});
    auto fs = hyp.endofunctors;
    std::sort(fs.begin(), fs.end());
    CHECK(std::adjacent_find(fs.begin(), fs.end()) == fs.end());
    for (const auto& f : hyp.endofunctors) CHECK(oracle::functor_ok(f, c, c));
    const std::size_t nf = hyp.endofunctors.size();
    for (std::size_t i = 0; i < nf; ++i) {
      for (std::size_t j = 0; j < nf; ++j) {
        auto h = hyp.homs[i][j];
        std::sort(h.begin(), h.end());
        CHECK(std::adjacent_find(h.begin(), h.end()) == h.end());
        for (const auto& eta : hyp.homs[i][j]) {
          CHECK(oracle::natural_ok(eta, hyp.endofunctors[i], hyp.endofunctors[j], c, c));
          for (std::size_t k = 0; k < nf; ++k) {
            for (const auto& beta : hyp.homs[j][k]) {
              const Cell v = compose_nat(CompositionKind::vertical, {j, k, beta}, {i, j, eta}, hyp);
              CHECK(hyp.find_cell(v));
              CHECK(check_natural(v.eta, hyp.endofunctors[v.source], hyp.endofunctors[v.target], c, c).passed());
            }
          }
          for (std::size_t p = 0; p < nf; ++p) {
            for (std::size_t q = 0; q < nf; ++q) {
              for (const auto& beta : hyp.homs[p][q]) {
                const Cell hcomp = compose_nat(CompositionKind::horizontal, {p, q, beta}, {i, j, eta}, hyp);
                CHECK(hyp.find_cell(hcomp));
                CHECK(check_natural(hcomp.eta, hyp.endofunctors[hcomp.source], hyp.endofunctors[hcomp.target], c, c).passed());
              }
            }
          }
        }
      }
    }
  }
}

TEST_CASE("vertical composition in Hyp2(BZ2) is the Z2 table", "[fincat]") {
  const auto hyp = enumerate_hyp(catalog::bz2());
  const std::size_t i = hyp.identity_functor_index();
  const auto& h = hyp.homs[i][i];
  REQUIRE(h.size() == 2);
  // homs are sorted lexicographically: index 0 has component e, index 1 has s.
  CHECK(h[0].components == std::vector<MorId>{0});
  CHECK(h[1].components == std::vector<MorId>{1});
  const auto table = vertical_table(hyp, i, i, i);
  CHECK(table == std::vector<std::vector<std::size_t>>{{0, 1}, {1, 0}});

  const Cell id = hyp.identity_cell(i);
  CHECK(compose_nat(CompositionKind::vertical, id, id, hyp) == id);
}

TEST_CASE("compose_nat rejects mismatched boundaries", "[fincat]") {
  const auto hyp = enumerate_hyp(catalog::bz2());
  const std::size_t i = hyp.identity_functor_index();
  const std::size_t k = *hyp.find_functor(catalog::bz2_collapse());
  try {
    compose_nat(CompositionKind::vertical, hyp.identity_cell(i), hyp.identity_cell(k), hyp);
    FAIL("expected NotComposable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotComposable);
  }
}

TEST_CASE("interchange law holds in Hyp2 of the catalog", "[fincat]") {
  for (const auto& c : {catalog::bz2(), catalog::arrow(), catalog::parallel_pair()}) {
    const auto rep = check_interchange(enumerate_hyp(c));
    CHECK(rep.passed());
    CHECK(rep.cases > 0);
  }
}

TEST_CASE("check_stability", "[fincat]") {
  const auto bz2 = catalog::bz2();
  const auto hyp = enumerate_hyp(bz2);
  const auto id = identity_functor(bz2);

  const auto pass = check_stability(identity_transformation(id, bz2, bz2), id, hyp);
  CHECK(pass.passed());
  CHECK_FALSE(pass.vacuous);

  const auto failing = check_stability(NatTransformData{{mor(bz2, "s")}}, id, hyp);
  REQUIRE_FALSE(failing.passed());
  CHECK(witness_mentions(failing, {"F" + std::to_string(hyp.identity_functor_index()) + "=>F" +
                                   std::to_string(hyp.identity_functor_index()) + "[e]"}));
  CHECK_FALSE(failing.notes.empty());  // s is invertible: holds up to iso

  const auto term = catalog::terminal();
  const auto thyp = enumerate_hyp(term);
  const auto vac = check_stability(identity_transformation(identity_functor(term), term, term), identity_functor(term), thyp);
  CHECK(vac.passed());
  CHECK(vac.vacuous);

  FunctorData stranger{{0}, {1, 1}};
  CHECK_THROWS_AS(check_stability(NatTransformData{{0}}, stranger, hyp), Error);
}

TEST_CASE("check_stability passes exactly on identity transformations", "[fincat]") {
  symcat::CounterRng rng(11);
  std::vector<FinCategory> cats{catalog::arrow(), catalog::bz2(), catalog::parallel_pair(), catalog::iso_pair()};
  for (int t = 0; t < 5; ++t) cats.push_back(oracle::random_preorder(rng, 3));
  for (const auto& c : cats) {
    const auto hyp = enumerate_hyp(c, EnumerationLimits{1e12});
    for (std::size_t i = 0; i < hyp.endofunctors.size(); ++i) {
      for (const auto& gamma : hyp.homs[i][i]) {
        const bool is_id = Cell{i, i, gamma} == hyp.identity_cell(i);
        CHECK(check_stability(gamma, hyp.endofunctors[i], hyp).passed() == is_id);
      }
    }
  }
}

TEST_CASE("fixed_subcategory", "[fincat]") {
  const auto arrow = catalog::arrow();
  auto all = fixed_subcategory(identity_functor(arrow), arrow);
  CHECK(all.strict == arrow);
  CHECK(all.report.passed());

  const auto bz2 = catalog::bz2();
  auto col = fixed_subcategory(catalog::bz2_collapse(), bz2);
  CHECK(col.strict.morphism_names() == std::vector<std::string>{"e"});
  REQUIRE_FALSE(col.report.passed());
  CHECK(col.report.violations.front().witness == std::vector<std::string>{"s"});
  CHECK(validate_category(col.strict).passed());

  auto to_a = fixed_subcategory(collapse_to(arrow, "a"), arrow);
  CHECK(to_a.strict.object_names() == std::vector<std::string>{"a"});
  CHECK(to_a.strict.morphism_names() == std::vector<std::string>{"id_a"});
  CHECK(to_a.iso_fixed_objects.empty());

  // Swap on the iso pair: neither object is fixed but both are iso-fixed.
  const auto iso = catalog::iso_pair();
  FunctorData swap{{1, 0}, {1, 0, 3, 2}};
  REQUIRE(check_functor(swap, iso, iso).passed());
  auto sw = fixed_subcategory(swap, iso);
  CHECK(sw.strict_objects.empty());
  CHECK(sw.iso_fixed_objects == std::vector<ObjId>{0, 1});
}

TEST_CASE("check_bifunctor", "[fincat]") {
  const auto arrow = catalog::arrow();
  const auto prod = product_category(arrow, arrow);
  CHECK(validate_category(prod).passed());
  CHECK(check_bifunctor(product_bifunctor(arrow, arrow), arrow, arrow, prod).passed());
  CHECK(check_bifunctor(projection_bifunctor(arrow, arrow), arrow, arrow, arrow).passed());

  auto bad = product_bifunctor(arrow, arrow);
  const MorId f = mor(arrow, "f");
  bad.mor_map[f * arrow.morphism_count() + f] = *prod.find_morphism("(f,id_b)");
  const auto rep = check_bifunctor(bad, arrow, arrow, prod);
  REQUIRE_FALSE(rep.passed());
  CHECK(witness_mentions(rep, {"f"}));
  CHECK(witness_mentions(rep, {"f", "f"}));
  CHECK(rep.violations.front().law == "endpoints");

  BifunctorData short_b{{0}, {0}};
  CHECK_THROWS_AS(check_bifunctor(short_b, arrow, arrow, prod), Error);
}

TEST_CASE("iso_lift", "[fincat]") {
  const auto arrow = catalog::arrow();
  const auto prod = product_category(arrow, arrow);
  const auto b = product_bifunctor(arrow, arrow);
  const auto lift = iso_lift(b, arrow, arrow, prod, *prod.find_morphism("(id_a,id_a)"));
  REQUIRE(lift.found);
  CHECK(lift.found->first == mor(arrow, "id_a"));
  CHECK(lift.found->second == mor(arrow, "id_a"));

  CHECK_THROWS_AS(iso_lift(b, arrow, arrow, prod, *prod.find_morphism("(f,f)")), Error);

  // Two discrete objects sent to the two ends of an isomorphism: the iso u
  // lies between image objects but no pair of morphisms reaches it.
  const auto two = catalog::discrete(2);
  const auto one = catalog::terminal();
  const auto iso = catalog::iso_pair();
  BifunctorData split{{0, 1}, {*iso.find_morphism("id_x"), *iso.find_morphism("id_y")}};
  REQUIRE(check_bifunctor(split, two, one, iso).passed());
  const auto none = iso_lift(split, two, one, iso, *iso.find_morphism("u"));
  CHECK_FALSE(none.found);
  CHECK(none.tried.size() == 2);
}

TEST_CASE("check_equivariant_functor", "[fincat]") {
  const auto pp = catalog::parallel_pair();
  const auto act = catalog::parallel_swap_action();
  CHECK(validate_cat_action(act, pp).passed());
  CHECK(check_equivariant_functor(identity_functor(pp), act, pp).passed());
  CHECK(check_equivariant_functor(act.functors[1], act, pp).passed());

  FunctorData collapse = identity_functor(pp);
  collapse.mor_map[mor(pp, "v")] = mor(pp, "u");
  REQUIRE(check_functor(collapse, pp, pp).passed());
  const auto rep = check_equivariant_functor(collapse, act, pp);
  REQUIRE_FALSE(rep.passed());
  CHECK(witness_mentions(rep, {"r1", "u"}));

  auto broken = act;
  broken.functors[0] = act.functors[1];
  CHECK_FALSE(validate_cat_action(broken, pp).passed());
}

TEST_CASE("checker and oracle agree on every single-entry mutant", "[fincat][mutation]") {
  for (const auto& c : {catalog::arrow(), catalog::bz2()}) {
    const std::size_t m = c.morphism_count();
    std::size_t killed = 0;
    std::size_t equivalent = 0;
    auto check = [&](const FinCategory& mutant, const std::vector<std::string>& entry) {
      const bool ok = oracle::category_ok(mutant);
      const auto rep = validate_category(mutant);
      CHECK(rep.passed() == ok);
      if (!ok) {
        ++killed;
        CHECK(witness_mentions(rep, entry));
      } else {
        ++equivalent;
      }
    };
    for (MorId g = 0; g < m; ++g) {
      for (MorId f = 0; f < m; ++f) {
        auto cur = c.compose(g, f);
        if (!cur) continue;
        for (MorId r = 0; r < m; ++r) {
          if (r != *cur) check(c.with_composite(g, f, r), {c.morphism_name(g), c.morphism_name(f)});
        }
      }
    }
    for (ObjId a = 0; a < c.object_count(); ++a) {
      for (MorId r = 0; r < m; ++r) {
        if (r != *c.identity(a)) check(c.with_identity(a, r), {});
      }
    }
    CHECK(killed > 0);
    INFO("equivalent mutants: " << equivalent);
    CHECK(equivalent <= 1);
  }
}

TEST_CASE("random functor tables agree with the oracle", "[fincat][oracle]") {
  symcat::CounterRng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto c = oracle::random_preorder(rng, 2 + rng.next_below(2));
    FunctorData f;
    for (std::size_t i = 0; i < c.object_count(); ++i) f.obj_map.push_back(rng.next_below(c.object_count()));
    for (std::size_t i = 0; i < c.morphism_count(); ++i) f.mor_map.push_back(rng.next_below(c.morphism_count()));
    CHECK(check_functor(f, c, c).passed() == oracle::functor_ok(f, c, c));
  }
}
