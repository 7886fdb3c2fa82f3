#include <doctest.h>

#include "support.hpp"
#include "vbench/parse.hpp"
#include "vbench/prompts.hpp"
#include "vbench/synth.hpp"

using namespace vbench;

namespace {

const ClipCatalog& demo() {
    static ClipCatalog cat = vbtest::make_catalog(30, 3, 8, 2);
    return cat;
}

TaskInstance handmade_instance(KeyKind kind) {
    TaskInstance inst;
    inst.id = "hand-1";
    inst.candidates = {"swimming",        "diving",         "ice skating",  "playing tennis",
                       "rock climbing",   "surfing",        "kayaking",     "bowling",
                       "baking cookies",  "making pizza",   "snorkeling",   "rowing boat",
                       "playing golf",    "tap dancing",    "making tea",   "barbequing",
                       "playing violin",  "water skiing",   "windsurfing",  "playing soccer"};
    inst.video.id = "v-hand-1";
    auto seg = [&](const std::string& label) {
        return Segment{"k", "c-" + label, label, "clips/x.mp4", 5.0};
    };
    switch (kind) {
        case KeyKind::full_sequence:
            for (const char* l : {"swimming", "diving", "ice skating", "playing tennis"})
                inst.video.segments.push_back(seg(l));
            inst.task = TaskKind::t1_sequencing;
            inst.level = Level::l1;
            inst.key.kind = kind;
            inst.key.labels = inst.chronology();
            break;
        case KeyKind::sub_sequence:
            for (const char* l : {"swimming", "diving", "ice skating", "playing tennis"})
                inst.video.segments.push_back(seg(l));
            inst.task = TaskKind::t2_relative;
            inst.level = Level::l1;
            inst.query.kind = TaskQuery::Kind::relative_pair;
            inst.query.qi = 1;
            inst.query.qj = 4;
            inst.key.kind = kind;
            inst.key.labels = {"diving", "ice skating"};
            break;
        case KeyKind::positions:
            for (const char* l : {"swimming", "diving", "ice skating", "playing tennis"})
                inst.video.segments.push_back(seg(l));
            inst.task = TaskKind::t3_position;
            inst.level = Level::l1;
            inst.query.kind = TaskQuery::Kind::position_probe;
            inst.query.probe_labels = {"ice skating", "swimming"};
            inst.key.kind = kind;
            inst.key.positions = {3, 1};
            break;
        case KeyKind::outlier_position:
            for (const char* l : {"swimming", "diving", "swimming", "bowling", "diving",
                                  "swimming", "diving"})
                inst.video.segments.push_back(seg(l));
            inst.task = TaskKind::t5_pattern_outlier;
            inst.level = Level::l1;
            inst.key.kind = kind;
            inst.key.position = 4;
            inst.pattern = PatternSpec{2, 3, {"swimming", "diving"}, "bowling", 4};
            break;
        case KeyKind::single_label:
            inst.video.segments.push_back(seg("swimming"));
            inst.task = TaskKind::t0_single_event;
            inst.key.kind = kind;
            inst.key.label = "swimming";
            break;
    }
    return inst;
}

}  // namespace

TEST_CASE("canonical answer rendering") {
    AnswerKey key;
    key.kind = KeyKind::full_sequence;
    key.labels = {"a", "b", "c", "d"};
    CHECK(prompts::render_answer(key) == "a, b, c, d");
    key.kind = KeyKind::positions;
    key.positions = {3, 1};
    CHECK(prompts::render_answer(key) == "3, 1");
    key.kind = KeyKind::outlier_position;
    key.position = 4;
    CHECK(prompts::render_answer(key) == "4");
    key.kind = KeyKind::single_label;
    key.label = "swimming";
    CHECK(prompts::render_answer(key) == "swimming");
}

TEST_CASE("prompts are deterministic and carry candidates, query, format") {
    TaskInstance inst = handmade_instance(KeyKind::full_sequence);
    const std::string p1 = prompts::render_prompt(inst);
    CHECK(p1 == prompts::render_prompt(inst));
    CHECK(p1.find("1. swimming") != std::string::npos);
    CHECK(p1.find("20. playing soccer") != std::string::npos);
    CHECK(p1.find("chronological order") != std::string::npos);
    CHECK(p1.find("comma-separated list") != std::string::npos);

    TaskInstance t3 = handmade_instance(KeyKind::positions);
    const std::string p3 = prompts::render_prompt(t3);
    CHECK(p3.find("1. ice skating") != std::string::npos);
    CHECK(p3.find("2. swimming") != std::string::npos);
    CHECK(p3.find("one for each queried action") != std::string::npos);

    TaskInstance t2 = handmade_instance(KeyKind::sub_sequence);
    const std::string p2 = prompts::render_prompt(t2);
    CHECK(p2.find("\"swimming\"") != std::string::npos);
    CHECK(p2.find("\"playing tennis\"") != std::string::npos);
    CHECK(p2.find("strictly between") != std::string::npos);
}

TEST_CASE("cot prompt pair embeds the context verbatim before the question") {
    const prompts::CotPromptPair& cot = prompts::default_cot();
    CHECK(cot.gen.find("chronological") != std::string::npos);
    const std::string q = prompts::render_cot_query(cot, "CTX-12345", "QUESTION?");
    const auto ctx_pos = q.find("CTX-12345");
    const auto question_pos = q.find("QUESTION?");
    REQUIRE(ctx_pos != std::string::npos);
    REQUIRE(question_pos != std::string::npos);
    CHECK(ctx_pos < question_pos);
}

TEST_CASE("parse: normalization examples") {
    TaskInstance full = handmade_instance(KeyKind::full_sequence);
    auto parsed = parse_answer("1. swimming\n2. diving", full);
    CHECK(parsed.labels == std::vector<std::string>{"swimming", "diving"});

    parsed = parse_answer("**Swimming**, *diving*, `ice skating`, PLAYING TENNIS", full);
    CHECK(parsed.labels ==
          std::vector<std::string>{"swimming", "diving", "ice skating", "playing tennis"});

    // numeric aliases against the numbered candidate list
    parsed = parse_answer("2, 4, 1, 3", full);
    CHECK(parsed.labels ==
          std::vector<std::string>{"diving", "playing tennis", "swimming", "ice skating"});

    // interior enumeration markers do not leak in as aliases
    parsed = parse_answer("1) swimming 2) diving 3) ice skating 4) playing tennis", full);
    CHECK(parsed.labels ==
          std::vector<std::string>{"swimming", "diving", "ice skating", "playing tennis"});
}

TEST_CASE("parse: duplicates keep the first occurrence; unknown labels are dropped") {
    TaskInstance full = handmade_instance(KeyKind::full_sequence);
    auto parsed = parse_answer("swimming, diving, swimming, ice skating", full);
    CHECK(parsed.labels == std::vector<std::string>{"swimming", "diving", "ice skating"});
    parsed = parse_answer("skydiving, swimming, moonwalking, diving", full);
    CHECK(parsed.labels == std::vector<std::string>{"swimming", "diving"});
    parsed = parse_answer("nothing recognizable here", full);
    CHECK(parsed.is_unparseable());
    CHECK(parsed.reason == "no candidate label found");
}

TEST_CASE("parse: labels with apostrophes survive markup stripping") {
    TaskInstance inst = handmade_instance(KeyKind::full_sequence);
    inst.candidates[7] = "massaging person's head";
    auto parsed = parse_answer("swimming, massaging person's head", inst);
    CHECK(parsed.labels ==
          std::vector<std::string>{"swimming", "massaging person's head"});
    TaskInstance single = handmade_instance(KeyKind::single_label);
    single.candidates[3] = "massaging person's head";
    single.key.label = "massaging person's head";
    const auto rt = parse_answer(prompts::render_answer(single.key), single);
    CHECK(rt.label == "massaging person's head");
}

TEST_CASE("parse: longer labels win substring collisions deterministically") {
    TaskInstance inst = handmade_instance(KeyKind::full_sequence);
    inst.candidates[5] = "skating";  // now both "skating" and "ice skating" are candidates
    auto parsed = parse_answer("ice skating then skating", inst);
    CHECK(parsed.labels == std::vector<std::string>{"ice skating", "skating"});
}

TEST_CASE("parse: positions") {
    TaskInstance t3 = handmade_instance(KeyKind::positions);
    CHECK(parse_answer("3, 1", t3).positions == std::vector<int>{3, 1});
    CHECK(parse_answer("Positions: 3 and 1.", t3).positions == std::vector<int>{3, 1});
    CHECK(parse_answer("1. 3\n2. 1", t3).positions == std::vector<int>{3, 1});
    auto p = parse_answer("I think maybe skiing?", t3);
    CHECK(p.is_unparseable());
    CHECK(p.reason == "no index found");
    // out-of-range indices invalidate the answer rather than being clipped
    CHECK(parse_answer("5, 1", t3).is_unparseable());
    CHECK(parse_answer("3", t3).is_unparseable());  // too few
}

TEST_CASE("parse: outlier position") {
    TaskInstance t5 = handmade_instance(KeyKind::outlier_position);
    CHECK(parse_answer("4", t5).position == 4);
    CHECK(parse_answer("The outlier is at position 4.", t5).position == 4);
    CHECK(parse_answer("9", t5).is_unparseable());
    CHECK(parse_answer("no idea", t5).is_unparseable());
}

TEST_CASE("parse: single label") {
    TaskInstance t0 = handmade_instance(KeyKind::single_label);
    CHECK(parse_answer("swimming", t0).label == "swimming");
    CHECK(parse_answer("It looks like SWIMMING to me.", t0).label == "swimming");
    CHECK(parse_answer("1", t0).label == t0.candidates[0]);
    CHECK(parse_answer("hard to say", t0).is_unparseable());
}

TEST_CASE("round-trip: parse(render_answer(key)) == key across generated instances") {
    std::vector<synth::BatchSpec> rows;
    for (TaskKind task : {TaskKind::t1_sequencing, TaskKind::t2_relative, TaskKind::t3_position,
                          TaskKind::t4_semantic_outlier, TaskKind::t5_pattern_outlier,
                          TaskKind::t0_single_event}) {
        synth::BatchSpec spec;
        spec.task = task;
        if (task != TaskKind::t0_single_event) spec.level = Level::l2;
        spec.n_q = 3;
        spec.m = 3;
        spec.count = 120;
        spec.seed = 99;
        rows.push_back(spec);
    }
    for (const auto& spec : rows) {
        for (const TaskInstance& inst : synth::generate_batch(demo(), spec)) {
            const ParsedAnswer parsed = parse_answer(prompts::render_answer(inst.key), inst);
            REQUIRE(!parsed.is_unparseable());
            CHECK(parsed.labels == inst.key.labels);
            CHECK(parsed.positions == inst.key.positions);
            CHECK(parsed.position == inst.key.position);
            CHECK(parsed.label == inst.key.label);
        }
    }
}

TEST_CASE("idempotence: re-parsing the canonical re-rendering is stable") {
    TaskInstance full = handmade_instance(KeyKind::full_sequence);
    const auto first = parse_answer("Sure! The order: diving, then swimming, then bowling.", full);
    REQUIRE(!first.is_unparseable());
    AnswerKey as_key;
    as_key.kind = KeyKind::full_sequence;
    as_key.labels = first.labels;
    const auto second = parse_answer(prompts::render_answer(as_key), full);
    CHECK(second.same_prediction(first));
}
