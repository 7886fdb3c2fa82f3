#include <tuple>
// Python bindings for the core operations: catalog loading, instance
// generation, prompt rendering, answer parsing, scoring, diagnostics and
// chance baselines. Structured values cross the boundary as JSON strings; the
// vectorbench package turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vbench/catalog.hpp"
#include "vbench/chance.hpp"
#include "vbench/clients.hpp"
#include "vbench/harness.hpp"
#include "vbench/metrics.hpp"
#include "vbench/parse.hpp"
#include "vbench/prompts.hpp"
#include "vbench/synth.hpp"
#include "vbench/util.hpp"

namespace py = pybind11;
using namespace vbench;

namespace {

TaskInstance instance_from_text(const std::string& instance_json) {
    return instance_from_json(json::parse(instance_json));
}

synth::BatchSpec make_spec(const std::string& task, const std::string& level, int n_q, int m,
                           std::size_t count, std::uint64_t seed) {
    synth::BatchSpec spec;
    spec.task = task_from_name(task);
    if (spec.task != TaskKind::t0_single_event) spec.level = level_from_name(level);
    spec.n_q = n_q;
    spec.m = m;
    spec.count = count;
    spec.seed = seed;
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "vector benchmark engine bindings";

    mod.def("validate_catalog", [](const std::string& path) {
        ClipCatalog cat = ClipCatalog::load(path);
        py::dict stats;
        stats["categories"] = cat.categories().size();
        stats["groups"] = cat.groups().size();
        stats["clips"] = cat.clips().size();
        stats["usable_categories"] = cat.usable_category_ids().size();
        return stats;
    });

    mod.def(
        "generate",
        [](const std::string& catalog_path, const std::string& task, const std::string& level,
           std::size_t count, std::uint64_t seed, int n_q, int m) {
            ClipCatalog cat = ClipCatalog::load(catalog_path);
            std::vector<std::string> out;
            for (const TaskInstance& inst :
                 synth::generate_batch(cat, make_spec(task, level, n_q, m, count, seed)))
                out.push_back(to_json(inst).dump());
            return out;
        },
        py::arg("catalog"), py::arg("task"), py::arg("level") = "l1", py::arg("count") = 1,
        py::arg("seed") = 0, py::arg("nq") = 1, py::arg("m") = 2);

    mod.def("render_prompt", [](const std::string& instance_json) {
        return prompts::render_prompt(instance_from_text(instance_json));
    });
    mod.def("render_answer", [](const std::string& instance_json) {
        return prompts::render_answer(instance_from_text(instance_json).key);
    });
    mod.def("parse_answer", [](const std::string& raw, const std::string& instance_json) {
        return to_json(parse_answer(raw, instance_from_text(instance_json))).dump();
    });
    mod.def("score_answer", [](const std::string& raw, const std::string& instance_json) {
        const TaskInstance inst = instance_from_text(instance_json);
        const metrics::ScoreSet s = metrics::score_answer(parse_answer(raw, inst), inst);
        py::dict out;
        out["em"] = s.em;
        if (s.sequence_metrics) {
            out["pm"] = s.pm;
            out["lm"] = s.lm;
            out["om"] = s.om;
        }
        return out;
    });

    mod.def("exact_match", &metrics::exact_match_lists);
    mod.def("partial_match", &metrics::partial_match);
    mod.def("lcs_match", &metrics::lcs_match);
    mod.def("orderless_match", &metrics::orderless_match);

    mod.def("robustness_ratio", [](double acc_original, double acc_shuffled) -> py::object {
        const metrics::RobustnessOutcome o =
            metrics::robustness_ratio(acc_original, acc_shuffled);
        if (!o.rho) return py::none();
        return py::float_(*o.rho);
    });

    mod.def("biased_ratio",
            [](const std::vector<std::tuple<std::string, std::string, bool, bool>>& pairs) {
                std::vector<metrics::PairOutcome> outcomes;
                for (const auto& [po, ps, co, cs] : pairs) {
                    metrics::PairOutcome p;
                    p.pred_original = parsed_from_json(json::parse(po));
                    p.pred_shuffled = parsed_from_json(json::parse(ps));
                    p.correct_original = co;
                    p.correct_shuffled = cs;
                    outcomes.push_back(std::move(p));
                }
                const metrics::ShuffleOutcome o = metrics::biased_ratio(outcomes);
                py::dict out;
                out["pairs"] = o.pairs;
                out["eligible"] = o.eligible;
                out["biased"] = o.biased;
                out["eta"] = o.eta ? py::object(py::float_(*o.eta)) : py::object(py::none());
                out["low_confidence"] = o.low_confidence;
                return out;
            });

    mod.def(
        "chance",
        [](const std::string& task, const std::string& level, const std::string& metric, int n_q,
           int m, std::uint64_t trials, std::uint64_t seed) {
            chance::ChanceQuery q;
            q.task = task_from_name(task);
            if (q.task != TaskKind::t0_single_event) q.level = level_from_name(level);
            q.n_q = n_q;
            q.m = m;
            q.metric = chance::metric_from_name(metric);
            const chance::ChanceEstimate e = chance::chance_baseline(q, trials, seed);
            py::dict out;
            out["value"] = e.value;
            out["ci95"] = e.ci95;
            out["analytic"] = e.analytic;
            out["trials"] = e.trials;
            out["model"] = e.model_note;
            out["display"] = q.metric == chance::Metric::em
                                 ? chance::display_chance(q.task, e.value)
                                 : format_fixed2(e.value);
            return out;
        },
        py::arg("task"), py::arg("level") = "l1", py::arg("metric") = "em", py::arg("nq") = 1,
        py::arg("m") = 2, py::arg("trials") = 100000, py::arg("seed") = 2024);

    mod.def(
        "run_campaign",
        [](const std::string& instances, const std::string& backend, const std::string& records,
           bool cot, int frames) {
            harness::CampaignConfig cfg;
            cfg.instances = instances;
            cfg.records = records;
            cfg.backend = clients::resolve_backend(backend);
            cfg.cot = cot;
            cfg.frames = frames;
            const harness::CampaignResult result = harness::run_campaign(cfg);
            py::dict out;
            out["evaluated"] = result.evaluated;
            out["resumed"] = result.resumed;
            out["failed"] = result.failed;
            double em = 0.0;
            for (const harness::EvalRecord& r : result.records) em += r.scores.em;
            out["mean_em"] = result.records.empty() ? 0.0 : em / result.records.size();
            return out;
        },
        py::arg("instances"), py::arg("backend"), py::arg("records"), py::arg("cot") = false,
        py::arg("frames") = 32);
}
