#include "doctest.h"

#include "diamondlab/complex.hpp"
#include "diamondlab/rng.hpp"

using namespace diamondlab;

namespace {
RPoint rp(double x, double y, double z) {
    return {rational_from_double(x), rational_from_double(y), rational_from_double(z)};
}
}  // namespace

TEST_CASE("toy level 1: exactly one record with jump cost 1/8") {
    DiamondComplex cx = build_complex(build_schedule(2, 1, true), 1);
    REQUIRE(cx.records_complete());
    REQUIRE(cx.records().size() == 1);
    const DoublingRecord& r = cx.records()[0];
    CHECK(r.stage == 1);
    CHECK(r.base_cube.side == Rational(1));
    CHECK(r.k_region.origin.x == Rational(1, 3));
    CHECK(r.k_region.side == Rational(1, 3));
    CHECK(r.gate_cell.side == Rational(1, 9));
    CHECK(r.jump_cost == Rational(1, 8));  // slen/(4 n) with n = 2
    CHECK(r.jump_center.x == Rational(1, 2));
}

TEST_CASE("toy level 0: no records") {
    DiamondComplex cx = build_complex(build_schedule(2, 3, true), 0);
    CHECK(cx.records().empty());
}

TEST_CASE("full-size n=26 diamond on the unit cube: jump cost 1/104") {
    LevelSchedule s = build_schedule(25, 1, false);  // n_1 = 26
    DiamondComplex cx = build_complex(s, 1);
    REQUIRE(cx.records().size() == 1);
    CHECK(cx.records()[0].jump_cost == Rational(1, 104));
}

TEST_CASE("record census and stage partition at toy levels") {
    DiamondComplex cx = build_complex(build_schedule(2, 3, true), 3);
    REQUIRE(cx.records_complete());
    CHECK(cx.records_at_stage(1).size() == 1);
    // 27 cells minus the one containing the stage-1 gate.
    CHECK(cx.records_at_stage(2).size() == 26);
    // 729 cells minus the stage-1 gate cell minus the 26 cells holding stage-2 gates.
    CHECK(cx.records_at_stage(3).size() == 702);
    // Open K regions at one stage are pairwise disjoint.
    for (int stage = 1; stage <= 3; ++stage) {
        auto recs = cx.records_at_stage(stage);
        for (std::size_t a = 0; a < recs.size(); ++a)
            for (std::size_t b = a + 1; b < recs.size(); ++b)
                CHECK(!recs[a]->k_region.overlaps_open(recs[b]->k_region));
    }
    // Gate cells sit inside their K region and are never doubled later.
    for (int stage = 1; stage <= 3; ++stage)
        for (const DoublingRecord* r : cx.records_at_stage(stage)) {
            CHECK(r->k_region.contains_open(r->gate_cell.center()));
            for (int later = stage + 1; later <= 3; ++later)
                for (const DoublingRecord* d : cx.records_at_stage(later))
                    CHECK(!d->k_region.overlaps_open(r->gate_cell));
        }
}

TEST_CASE("resolve_word spec cases") {
    DiamondComplex cx = build_complex(build_schedule(2, 2, true), 2);
    // Corner is never interior to a central K.
    LabeledPoint corner = cx.resolve_word(rp(0, 0, 0), 2);
    CHECK(corner.word[0] == Color::Wildcard);
    CHECK(corner.word[1] == Color::Wildcard);
    // Center of the cube picks up the requested stage-1 color.
    LabeledPoint center_g = cx.resolve_word(rp(0.5, 0.5, 0.5), 1, Color::Green);
    CHECK(center_g.word[0] == Color::Green);
    LabeledPoint center_r = cx.resolve_word(rp(0.5, 0.5, 0.5), 1, Color::Red);
    CHECK(center_r.word[0] == Color::Red);
    // Inside a stage-2 K but outside the stage-1 K: word (wildcard, color).
    auto recs = cx.records_at_stage(2);
    RPoint c2 = recs[0]->k_region.center();
    LabeledPoint p = cx.resolve_word(c2, 2, Color::Red);
    CHECK(p.word[0] == Color::Wildcard);
    CHECK(p.word[1] == Color::Red);
    CHECK(cx.is_canonical(p));
}

TEST_CASE("word consistency under membership re-check (random points)") {
    DiamondComplex cx = build_complex(build_schedule(2, 3, true), 3);
    CounterRng rng(20240817);
    for (int i = 0; i < 10000; ++i) {
        RPoint b = rp(rng.uniform(i, 0), rng.uniform(i, 1), rng.uniform(i, 2));
        LabeledPoint p = cx.resolve_word(b, 3);
        for (int j = 1; j <= 3; ++j) {
            bool inside = cx.doubled_region_at(j, b).has_value();
            CHECK((p.word[j - 1] != Color::Wildcard) == inside);
        }
        CHECK(cx.is_canonical(p));
    }
}

TEST_CASE("projection truncates the word") {
    DiamondComplex cx = build_complex(build_schedule(2, 3, true), 3);
    LabeledPoint p = cx.resolve_word(rp(0.5, 0.5, 0.5), 3, Color::Red);
    CHECK(project(p, p.level()).word == p.word);
    CHECK(project(p, 0).word.empty());
    LabeledPoint q = project(p, 2);
    CHECK(q.level() == 2);
    CHECK(q.word[0] == p.word[0]);
    CHECK_THROWS_AS(project(q, 3), std::invalid_argument);
}

TEST_CASE("json round trip") {
    DiamondComplex cx = build_complex(build_schedule(2, 2, true), 2);
    std::string text = cx.to_json();
    DiamondComplex back = DiamondComplex::from_json(text);
    CHECK(back.level() == cx.level());
    REQUIRE(back.records().size() == cx.records().size());
    for (std::size_t i = 0; i < cx.records().size(); ++i) {
        CHECK(back.records()[i].stage == cx.records()[i].stage);
        CHECK(back.records()[i].jump_cost == cx.records()[i].jump_cost);
        CHECK(back.records()[i].base_cube.origin.x == cx.records()[i].base_cube.origin.x);
    }
    CHECK(back.to_json() == text);
}
