#include <doctest.h>

#include <algorithm>

#include "relconj/groups.hpp"
#include "support/testutil.hpp"

using namespace relconj;
using namespace relconj::testutil;

namespace {

Element elt(const GroupRef& g, const std::string& text) {
  return g->element_of(parse_word(text, g->alphabet_ref()));
}

}  // namespace

TEST_CASE("element_of across backends") {
  auto fpq = make_free_pq();
  CHECK(elt(fpq, "p p^-1").is_identity());

  auto z2 = AbelianGroup::make({"u", "v"}, 2, {});
  CHECK(elt(z2, "u v u").abelian_coords() == std::vector<std::int64_t>{2, 1});

  auto z3 = make_z3();
  CHECK(elt(z3, "t t t t") == elt(z3, "t"));
}

TEST_CASE("free product multiplication merges syllables") {
  auto g = make_z2z3();
  CHECK(g->multiply(elt(g, "s"), elt(g, "s")).is_identity());

  Element st = elt(g, "s t");
  CHECK(g->multiply(st, elt(g, "t")) == elt(g, "s t t"));
  CHECK(g->multiply(st, elt(g, "t")).product_syllables().size() == 2);
  CHECK(g->multiply(st, elt(g, "t t")) == elt(g, "s"));
}

TEST_CASE("inverse across backends") {
  auto g = make_z2z3();
  CHECK(g->inverse(g->identity()).is_identity());
  CHECK(g->inverse(elt(g, "s t")) == elt(g, "t t s"));

  auto z2 = AbelianGroup::make({"u", "v"}, 2, {});
  Element a = elt(z2, "u u v");
  CHECK(z2->inverse(a).abelian_coords() ==
        std::vector<std::int64_t>{-2, -1});
  CHECK(z2->multiply(a, z2->inverse(a)).is_identity());
}

TEST_CASE("conjugate") {
  auto g = make_z2z3();
  CHECK(g->conjugate(elt(g, "s t"), elt(g, "s")) == elt(g, "t s"));
  CHECK(g->conjugate(elt(g, "s t"), g->identity()) == elt(g, "s t"));

  auto z2 = AbelianGroup::make({"u", "v"}, 2, {});
  CHECK(z2->conjugate(elt(z2, "u v"), elt(z2, "v v")) == elt(z2, "u v"));
}

TEST_CASE("x_length") {
  auto g = make_z2z3();
  CHECK(g->x_length(g->identity()) == 0);

  auto z3 = make_z3();
  CHECK(z3->x_length(elt(z3, "t t")) == 1);  // reachable as t^-1

  // (s, t^2, s) has X-length 3: confirmed against the raw-word oracle.
  Element a = elt(g, "s t t s");
  CHECK(g->x_length(a) == 3);
  auto oracle = raw_ball(g, 3);
  bool found = false;
  for (const auto& [w, e] : oracle) {
    if (e == a) {
      CHECK(w.size() == 3);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("abelian x_length uses torsion shortcuts") {
  auto za = AbelianGroup::make({"u", "c"}, 1, {5});
  Element e = elt(za, "u^-1 u^-1 c c c c");
  CHECK(za->x_length(e) == 3);  // |−2| + min(4, 5−4)
  CHECK(print_word(za->canonical_word(e)) == "u^-1 u^-1 c^-1");
}

TEST_CASE("ball_enumerate basics") {
  auto g = make_z2z3();
  CHECK(enumerate_ball(g, 0).size() == 1);

  auto fpq = make_free_pq();
  auto b1 = enumerate_ball(fpq, 1);
  REQUIRE(b1.size() == 5);
  CHECK(b1[0].is_identity());
  CHECK(print_word(fpq->canonical_word(b1[1])) == "p");
  CHECK(print_word(fpq->canonical_word(b1[2])) == "p^-1");
  CHECK(print_word(fpq->canonical_word(b1[3])) == "q");
  CHECK(print_word(fpq->canonical_word(b1[4])) == "q^-1");

  // |B_2| over {s, t, t^-1}: frozen from the raw-word oracle.
  auto oracle = raw_ball(g, 2);
  auto ball = enumerate_ball(g, 2);
  CHECK(oracle.size() == 8);
  REQUIRE(ball.size() == oracle.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    CHECK(ball[i] == oracle[i].second);
  }
}

TEST_CASE("ball_enumerate matches the raw-word oracle order") {
  for (const auto& g : {make_z2z3(), make_zu_zv(), make_zu_z2(),
                        GroupRef(make_free_pq()), make_s3()}) {
    auto oracle = raw_ball(g, 3);
    auto ball = enumerate_ball(g, 3);
    REQUIRE(ball.size() == oracle.size());
    for (std::size_t i = 0; i < ball.size(); ++i) {
      CHECK(ball[i] == oracle[i].second);
      CHECK(g->canonical_word(ball[i]) == oracle[i].first);
    }
  }
}

TEST_CASE("ball_enumerate respects the element cap") {
  auto fpq = make_free_pq();
  EnumLimits limits;
  limits.max_elements = 10;
  CHECK_THROWS_AS(enumerate_ball(fpq, 3, limits), Error);
  try {
    enumerate_ball(fpq, 3, limits);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::resource_limit);
  }
}

TEST_CASE("finite group exhausts and stops") {
  auto s3 = make_s3();
  auto ball = enumerate_ball(s3, 100);
  CHECK(ball.size() == 6);
  BallEnumerator it(s3, 100);
  while (it.next_sphere()) {
  }
  CHECK(it.exhausted());
  CHECK(static_cast<const FiniteGroup*>(s3.get())->diameter() == 3);
}

TEST_CASE("group axioms on random elements") {
  SplitMix64 rng{77001};
  for (const auto& g : {make_z2z3(), make_zu_zv(), make_zu_z2(),
                        GroupRef(make_free_pq()), make_s3(),
                        GroupRef(AbelianGroup::make({"u", "c"}, 1, {4}))}) {
    for (int trial = 0; trial < 400; ++trial) {
      Element a = g->element_of(random_word(rng, g->alphabet_ref(), 6));
      Element b = g->element_of(random_word(rng, g->alphabet_ref(), 6));
      Element c = g->element_of(random_word(rng, g->alphabet_ref(), 6));

      CHECK(g->multiply(g->multiply(a, b), c) ==
            g->multiply(a, g->multiply(b, c)));
      CHECK(g->multiply(a, g->identity()) == a);
      CHECK(g->multiply(g->identity(), a) == a);
      CHECK(g->multiply(a, g->inverse(a)).is_identity());
      CHECK(g->x_length(g->multiply(a, b)) <=
            g->x_length(a) + g->x_length(b));
      CHECK(g->element_of(g->canonical_word(a)) == a);
      CHECK(static_cast<long long>(g->canonical_word(a).size()) ==
            g->x_length(a));
    }
  }
}

TEST_CASE("homomorphism property of element_of") {
  SplitMix64 rng{77002};
  for (const auto& g :
       {make_z2z3(), make_zu_z2(), GroupRef(make_free_pq())}) {
    for (int trial = 0; trial < 300; ++trial) {
      Word u = random_word(rng, g->alphabet_ref(), 8);
      Word v = random_word(rng, g->alphabet_ref(), 8);
      std::vector<std::int32_t> joined(u.letters().begin(), u.letters().end());
      joined.insert(joined.end(), v.letters().begin(), v.letters().end());
      CHECK(g->element_of(Word(g->alphabet_ref(), joined)) ==
            g->multiply(g->element_of(u), g->element_of(v)));
    }
  }
}

TEST_CASE("free product normal form invariants") {
  SplitMix64 rng{77003};
  auto g = make_z2z3();
  for (int trial = 0; trial < 500; ++trial) {
    Element e = g->element_of(random_word(rng, g->alphabet_ref(), 10));
    const auto& syllables = e.product_syllables();
    for (std::size_t i = 0; i < syllables.size(); ++i) {
      CHECK(!syllables[i].element.is_identity());
      if (i > 0) CHECK(syllables[i].factor != syllables[i - 1].factor);
    }
  }
}

TEST_CASE("ball spheres nest and respect x_length") {
  auto g = make_zu_z2();
  auto b2 = enumerate_ball(g, 2);
  auto b3 = enumerate_ball(g, 3);
  CHECK(std::equal(b2.begin(), b2.end(), b3.begin()));
  ElementSet seen;
  for (const auto& e : b3) {
    CHECK(g->x_length(e) <= 3);
    CHECK(!seen.contains(e));
    seen.insert(e);
  }
}

TEST_CASE("free group ball sizes match the closed form") {
  auto fpq = make_free_pq();
  long long expected = 1;
  BallEnumerator it(fpq, 8);
  long long total = 0;
  while (auto sphere = it.next_sphere()) {
    total += static_cast<long long>(sphere->size());
    long long r = it.radius_reached();
    expected = 2 * 1 - 1;
    for (long long i = 0, p = 1; i <= r; ++i, p *= 3) expected = 2 * p - 1;
    CHECK(total == expected);
  }
}

TEST_CASE("parallel ball expansion equals serial") {
  EnumLimits serial{.max_elements = 1'000'000, .workers = 1};
  EnumLimits parallel{.max_elements = 1'000'000, .workers = 4};
  auto g = make_z2z3();
  auto a = enumerate_ball(g, 12, serial);
  auto b = enumerate_ball(g, 12, parallel);
  REQUIRE(a.size() == b.size());
  CHECK(std::equal(a.begin(), a.end(), b.begin()));

  // Spheres of F(p,q) at radius 8 are wide enough to exercise the chunked
  // expansion path.
  auto fpq = make_free_pq();
  auto c = enumerate_ball(fpq, 8, serial);
  auto d = enumerate_ball(fpq, 8, parallel);
  REQUIRE(c.size() == d.size());
  CHECK(std::equal(c.begin(), c.end(), d.begin()));
}

TEST_CASE("finite table validation") {
  FiniteGroup::Spec spec;
  spec.generators = {"s"};
  spec.element_names = {"e", "s"};
  spec.table = {{0, 1}, {1, 1}};  // not a Latin square
  spec.generator_map = {{"s", 1}};
  CHECK_THROWS_AS(FiniteGroup::make(spec), Error);

  FiniteGroup::Spec no_id;  // Latin square without a two-sided identity
  no_id.generators = {"s"};
  no_id.element_names = {"x", "y", "z"};
  no_id.table = {{1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  no_id.generator_map = {{"s", 1}};
  CHECK_THROWS_AS(FiniteGroup::make(no_id), Error);

  FiniteGroup::Spec z4;
  z4.generators = {"c"};
  z4.element_names = {"e", "c", "c2", "c3"};
  z4.table = {{0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
  z4.generator_map = {{"c", 1}};
  z4.declared_involutions = {"c"};  // c^2 != e
  CHECK_THROWS_AS(FiniteGroup::make(z4), Error);

  FiniteGroup::Spec sub;  // <c^2> does not generate Z/4
  sub.generators = {"d"};
  sub.element_names = {"e", "c", "c2", "c3"};
  sub.table = {{0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
  sub.generator_map = {{"d", 2}};
  CHECK_THROWS_AS(FiniteGroup::make(sub), Error);
}

TEST_CASE("abelian validation") {
  CHECK_THROWS_AS(AbelianGroup::make({"u"}, 2, {}), Error);
  CHECK_THROWS_AS(AbelianGroup::make({"u"}, 0, {1}), Error);
  CHECK_THROWS_AS(AbelianGroup::make({"u"}, 1, {}, {"u"}), Error);
  auto ok = AbelianGroup::make({"u"}, 0, {2}, {"u"});
  CHECK(ok->alphabet().size() == 1);
  CHECK(ok->multiply(ok->letter(0), ok->letter(0)).is_identity());
}

TEST_CASE("free product validation") {
  CHECK_THROWS_AS(FreeProductGroup::make({}), Error);
  auto z2 = make_z2();
  CHECK_THROWS_AS(FreeProductGroup::make({z2, z2}), Error);  // name clash
  auto nested = make_z2z3();
  CHECK_THROWS_AS(FreeProductGroup::make({nested}), Error);
}

TEST_CASE("handle mismatch is rejected") {
  auto g1 = make_zu_zv();
  auto g2 = make_zu_zv();
  CHECK_THROWS_AS(g1->multiply(g1->identity(), g2->identity()), Error);
}
