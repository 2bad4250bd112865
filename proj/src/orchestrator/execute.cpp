#include <fstream>

#include "lcpbridge/error.hpp"
#include "lcpbridge/mendix.hpp"
#include "lcpbridge/orchestrator.hpp"
#include "lcpbridge/pivot/dsl.hpp"
#include "lcpbridge/pivot/validate.hpp"
#include "lcpbridge/plantuml.hpp"
#include "lcpbridge/spreadsheet.hpp"
#include "lcpbridge/tabular.hpp"
#include "lcpbridge/xlsx.hpp"

namespace lcpbridge::orchestrator {

namespace fs = std::filesystem;
using pivot::DomainModel;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::UnreadableFile, "cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw Error(ErrorCode::UnwritablePath, "cannot write " + path.string());
}

std::string extension(const fs::path& p) { return pivot::to_lower(p.extension().string()); }

std::vector<fs::path> with_extension(const std::vector<fs::path>& files, std::initializer_list<const char*> exts) {
    std::vector<fs::path> out;
    for (const auto& f : files) {
        for (const char* e : exts) {
            if (extension(f) == e) out.push_back(f);
        }
    }
    return out;
}

// Runs `body` and tags any library error with the step name.
template <typename F>
auto step(const std::string& name, F body) -> decltype(body()) {
    try {
        return body();
    } catch (Error& e) {
        if (e.step().empty()) e.set_step(name);
        throw;
    } catch (const std::filesystem::filesystem_error& e) {
        Error wrapped(ErrorCode::UnwritablePath, e.what());
        wrapped.set_step(name);
        throw wrapped;
    }
}

Error missing(const std::string& what, const std::string& step_name) {
    Error e(ErrorCode::MissingInput, step_name + " needs " + what);
    e.set_step(step_name);
    return e;
}

class Runner {
public:
    Runner(const MigrationPlan& plan, const MigrationInputs& inputs, const ExecuteOptions& options)
        : plan_(plan), inputs_(inputs), options_(options) {}

    MigrationOutcome run() {
        step("prepare", [&] { fs::create_directories(options_.out_dir); });
        out_.losses = plan_.expected_losses;
        for (const auto& s : plan_.chain) out_.losses.merge(adapter_losses(s.adapter));

        DomainModel model;
        if (inputs_.pivot_file) {
            model = step("read-pivot", [&] { return read_pivot_file(*inputs_.pivot_file); });
        } else {
            std::optional<DomainModel> partial;
            for (const auto& s : plan_.chain) {
                if (s.kind != AdapterKind::Importer) continue;
                partial = step(s.adapter, [&] { return import(s.adapter, partial); });
            }
            if (!partial) throw missing("an importer step", "plan");
            model = std::move(*partial);
        }

        const auto pivot_path = options_.out_dir / kPivotFile;
        step("write-pivot", [&] {
            pivot::require_valid(model);
            write_file(pivot_path, pivot::print_pivot_text(model));
        });
        out_.files.push_back(pivot_path);
        if (options_.review) {
            step("review", [&] { options_.review(pivot_path); });
        }
        // Generate from the file on disk so reruns from it give the same bytes.
        out_.model = step(options_.review ? "review" : "read-pivot", [&] { return read_pivot_file(pivot_path); });

        for (const auto& s : plan_.chain) {
            if (s.kind == AdapterKind::Exporter) step(s.adapter, [&] { generate(s.adapter); });
        }

        step("report", [&] {
            const auto loss_path = options_.out_dir / kLossReportFile;
            write_file(loss_path, out_.losses.to_json().dump(2) + "\n");
            LossReport::from_json(nlohmann::json::parse(read_file(loss_path)));
            out_.files.push_back(loss_path);
            if (out_.merge) {
                const auto merge_path = options_.out_dir / kMergeReportFile;
                write_file(merge_path, llm::to_json(*out_.merge).dump(2) + "\n");
                nlohmann::json::parse(read_file(merge_path));
                out_.files.push_back(merge_path);
            }
        });
        return std::move(out_);
    }

private:
    DomainModel import(const std::string& adapter, const std::optional<DomainModel>& partial) {
        if (adapter == "mendix-json") {
            const auto files = with_extension(inputs_.files, {".json"});
            if (files.empty()) throw missing("a Mendix JSON export (.json)", adapter);
            auto r = mendix::mendix_to_pivot(mendix::parse_mendix_export(read_file(files.front())));
            out_.losses.merge(r.losses);
            return std::move(r.model);
        }
        if (adapter == "plantuml") {
            const auto files = with_extension(inputs_.files, {".puml", ".plantuml", ".txt"});
            if (files.empty()) throw missing("a PlantUML file (.puml)", adapter);
            auto r = plantuml::parse_plantuml(read_file(files.front()), files.front().stem().string());
            out_.losses.merge(r.losses);
            return std::move(r.model);
        }
        if (adapter == "tabular") {
            const auto files = with_extension(inputs_.files, {".csv", ".xlsx"});
            if (files.empty()) {
                // The tabular partial only supplements the screenshot.
                out_.losses.add("adapter", adapter, LossReason::Dropped, Severity::Info,
                                "no CSV or XLSX partial export supplied; relying on the screenshot alone");
                return partial.value_or(DomainModel{"Model", {}, {}, {}, {}});
            }
            auto r = tabular::infer_model(tabular::load_tabular(files));
            out_.losses.merge(r.losses);
            return std::move(r.model);
        }
        if (adapter == "image-llm") return vision(partial);
        throw Error(ErrorCode::UnknownAdapter, "importer '" + adapter + "' cannot run in a migration");
    }

    DomainModel vision(const std::optional<DomainModel>& partial) {
        const std::string name = "image-llm";
        if (inputs_.images.empty()) throw missing("a screenshot of the data model (--image)", name);
        if (!inputs_.llm) throw missing("an LLM client (live or replay)", name);
        llm::VisionRequest request;
        for (const auto& path : inputs_.images) request.images.push_back(llm::load_image(path));
        const bool has_partial = partial && !partial->classes.empty();
        const auto base = llm::build_prompt(llm::prompt_context(plan_.source), has_partial ? &*partial : nullptr);

        std::string feedback;
        std::string last_answer;
        for (int attempt = 0;; ++attempt) {
            request.prompt_text = base + feedback;
            last_answer = llm::invoke_vision_model(request, *inputs_.llm);
            try {
                auto extraction = llm::extract_model(last_answer, partial ? partial->name : "Model");
                out_.losses.merge(extraction.losses);
                if (!has_partial) return std::move(extraction.model);
                auto merged = llm::merge_models(*partial, extraction.model);
                out_.merge = merged.report;
                return std::move(merged.model);
            } catch (Error& e) {
                if (attempt >= options_.llm_retries) {
                    const auto raw = options_.out_dir / kLlmAnswerFile;
                    write_file(raw, e.attachment().empty() ? last_answer : e.attachment());
                    out_.files.push_back(raw);
                    Error failed(e.code(), std::string(e.what()) + " (after " + std::to_string(attempt + 1) +
                                               " attempts; answer saved to " + raw.string() + " for manual repair)");
                    failed.set_attachment(e.attachment().empty() ? last_answer : e.attachment());
                    throw failed;
                }
                feedback = "\nYour previous answer could not be used: " + std::string(e.what()) +
                           "\nAnswer again with one corrected PlantUML block.\n";
            }
        }
    }

    void generate(const std::string& adapter) {
        const auto& model = out_.model;
        if (adapter == "workbook" || adapter == "csv") {
            spreadsheet::PlanOptions opts;
            opts.sample_row = options_.sample_row;
            auto planned = spreadsheet::plan_workbook(model, opts);
            out_.losses.merge(planned.losses);
            if (adapter == "csv") {
                const auto paths = spreadsheet::emit_csv(planned.manifest, options_.out_dir);
                if (!paths.empty()) tabular::load_tabular(paths);
                out_.files.insert(out_.files.end(), paths.begin(), paths.end());
                return;
            }
            const auto path = options_.out_dir / "model.xlsx";
            spreadsheet::emit_workbook(planned.manifest, path);
            // Read both files back to make sure they load.
            xlsx::read_workbook(read_file(path));
            spreadsheet::check_manifest(
                spreadsheet::manifest_from_json(nlohmann::json::parse(read_file(spreadsheet::manifest_path(path)))));
            out_.files.push_back(path);
            out_.files.push_back(spreadsheet::manifest_path(path));
        } else if (adapter == "apex-sql") {
            auto planned = apex::plan_relational(model);
            out_.losses.merge(planned.losses);
            const auto path = options_.out_dir / "model.sql";
            write_file(path, apex::emit_sql(planned.plan, options_.dialect));
            out_.files.push_back(path);
        } else if (adapter == "plantuml") {
            const auto path = options_.out_dir / "model.puml";
            write_file(path, plantuml::emit_plantuml(model));
            plantuml::parse_plantuml(read_file(path), model.name);
            out_.files.push_back(path);
        } else {
            throw Error(ErrorCode::UnknownAdapter, "exporter '" + adapter + "' cannot run in a migration");
        }
    }

    const MigrationPlan& plan_;
    const MigrationInputs& inputs_;
    const ExecuteOptions& options_;
    MigrationOutcome out_;
};

}  // namespace

DomainModel read_pivot_file(const fs::path& path) {
    auto model = pivot::parse_pivot_text(read_file(path));
    pivot::require_valid(model);
    return model;
}

MigrationOutcome execute_migration(const MigrationPlan& plan, const MigrationInputs& inputs,
                                   const ExecuteOptions& options) {
    return Runner(plan, inputs, options).run();
}

}  // namespace lcpbridge::orchestrator
