#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include "lcpbridge/error.hpp"
#include "lcpbridge/orchestrator.hpp"
#include "lcpbridge/pivot/dsl.hpp"
#include "lcpbridge/pivot/validate.hpp"
#include "lcpbridge/toml_lite.hpp"

namespace lcpbridge::cli {

namespace fs = std::filesystem;
using namespace lcpbridge::orchestrator;

namespace {

constexpr const char* kConfigFile = "lcpbridge.toml";

// Settings shared by several subcommands; flags override `lcpbridge.toml`.
struct Settings {
    std::string config_path;
    std::string capabilities_path;
    std::string out_dir = "out";
    std::string dialect = "oracle";
    bool no_sample_row = false;
    bool review = false;
    std::string llm_mode = "replay";
    std::string replay_dir;
    std::string llm_endpoint;
    std::string llm_model;
    int llm_retries = 2;
};

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

// Fills settings the command line left unset from the config file.
void apply_config(Settings& s, const CLI::App& app) {
    fs::path path = s.config_path;
    if (path.empty()) {
        if (!fs::exists(kConfigFile)) return;
        path = kConfigFile;
    }
    const auto doc = toml::parse(read_text(path));
    const auto given = [&](const char* flag) {
        for (const auto* sub : app.get_subcommands()) {
            if (const auto* opt = sub->get_option_no_throw(flag); opt && opt->count() > 0) return true;
        }
        const auto* opt = app.get_option_no_throw(flag);
        return opt && opt->count() > 0;
    };
    const auto str = [&](const nlohmann::json& table, const char* key, const char* flag, std::string& target) {
        if (!table.contains(key) || given(flag)) return;
        if (!table.at(key).is_string()) throw Error(ErrorCode::InvalidConfig, std::string(key) + " must be a string");
        target = table.at(key).get<std::string>();
    };
    const auto boolean = [&](const nlohmann::json& table, const char* key, const char* flag, bool& target,
                             bool invert) {
        if (!table.contains(key) || given(flag)) return;
        if (!table.at(key).is_boolean()) throw Error(ErrorCode::InvalidConfig, std::string(key) + " must be a boolean");
        target = table.at(key).get<bool>() != invert;
    };
    const auto known = [&](const std::string& section, const nlohmann::json& table,
                           std::initializer_list<const char*> keys) {
        for (const auto& [key, value] : table.items()) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
                throw Error(ErrorCode::InvalidConfig, path.string() + ": unknown key '" + section + "." + key + "'");
            }
        }
    };
    for (const auto& [section, table] : doc.items()) {
        if (!table.is_object()) {
            if (section == "capabilities" && table.is_string()) {
                if (!given("--capabilities")) s.capabilities_path = table.get<std::string>();
                continue;
            }
            throw Error(ErrorCode::InvalidConfig, path.string() + ": unknown key '" + section + "'");
        }
        if (section == "llm") {
            known(section, table, {"mode", "replay_dir", "endpoint", "model", "retries"});
            str(table, "mode", "--llm-mode", s.llm_mode);
            str(table, "replay_dir", "--replay-dir", s.replay_dir);
            str(table, "endpoint", "--llm-endpoint", s.llm_endpoint);
            str(table, "model", "--llm-model", s.llm_model);
            if (table.contains("retries") && !given("--llm-retries")) {
                if (!table.at("retries").is_number_integer()) {
                    throw Error(ErrorCode::InvalidConfig, "llm.retries must be an integer");
                }
                s.llm_retries = table.at("retries").get<int>();
            }
        } else if (section == "output") {
            known(section, table, {"dir", "dialect", "sample_row", "review"});
            str(table, "dir", "--out", s.out_dir);
            str(table, "dialect", "--dialect", s.dialect);
            boolean(table, "sample_row", "--no-sample-row", s.no_sample_row, true);
            boolean(table, "review", "--review", s.review, false);
        } else {
            throw Error(ErrorCode::InvalidConfig, path.string() + ": unknown section [" + section + "]");
        }
    }
}

CapabilityMatrix load_matrix(const Settings& s) {
    if (s.capabilities_path.empty()) return CapabilityMatrix::builtin();
    return CapabilityMatrix::from_toml(read_text(s.capabilities_path));
}

std::string levels(const CapabilityRecord& r) {
    std::string formats;
    for (const auto& f : r.formats) formats += (formats.empty() ? "" : "+") + f;
    return "data=" + std::string(to_string(r.data)) + " gui=" + std::string(to_string(r.gui)) +
           " behavior=" + std::string(to_string(r.behavior)) + " format=" + (formats.empty() ? "-" : formats) +
           (r.third_party ? " third-party" : "");
}

nlohmann::ordered_json record_json(const CapabilityRecord& r) {
    return {{"data", to_string(r.data)},
            {"gui", to_string(r.gui)},
            {"behavior", to_string(r.behavior)},
            {"third_party", r.third_party},
            {"formats", r.formats}};
}

class Session {
public:
    Session(const Settings& s, std::istream& in, std::ostream& out, std::ostream& err)
        : s_(s), in_(in), out_(out), err_(err) {}

    ExecuteOptions options() const {
        ExecuteOptions o;
        o.out_dir = s_.out_dir;
        if (s_.dialect == "oracle") {
            o.dialect = apex::Dialect::Oracle;
        } else if (s_.dialect == "ansi") {
            o.dialect = apex::Dialect::Ansi;
        } else {
            throw Error(ErrorCode::InvalidConfig, "unknown dialect '" + s_.dialect + "' (oracle or ansi)");
        }
        o.sample_row = !s_.no_sample_row;
        o.llm_retries = s_.llm_retries;
        if (s_.review) {
            o.review = [this](const fs::path& path) {
                err_ << "review: edit " << path.string() << " and press Enter to continue\n";
                std::string line;
                std::getline(in_, line);
            };
        }
        return o;
    }

    llm::VisionModelClient* client(const MigrationPlan& plan) {
        if (!plan.uses("image-llm")) return nullptr;
        if (s_.llm_mode == "replay") {
            if (s_.replay_dir.empty()) throw Error(ErrorCode::InvalidConfig, "replay mode needs --replay-dir");
            client_ = std::make_unique<llm::ReplayClient>(s_.replay_dir);
        } else if (s_.llm_mode == "live") {
            llm::LiveConfig config;
            if (!s_.llm_endpoint.empty()) config.endpoint = s_.llm_endpoint;
            if (!s_.llm_model.empty()) config.model = s_.llm_model;
            config.api_key = llm::api_key_from_env();
            client_ = std::make_unique<llm::LiveClient>(config);
        } else {
            throw Error(ErrorCode::InvalidConfig, "unknown LLM mode '" + s_.llm_mode + "' (live or replay)");
        }
        return client_.get();
    }

    int execute(const MigrationPlan& plan, MigrationInputs inputs) {
        inputs.llm = client(plan);
        const auto outcome = execute_migration(plan, inputs, options());
        for (const auto& f : outcome.files) out_ << f.string() << "\n";
        if (!outcome.losses.empty()) err_ << outcome.losses.summary();
        if (outcome.merge) {
            const auto& m = *outcome.merge;
            err_ << "merge: +" << m.added_classes.size() << " classes, +" << m.added_properties.size()
                 << " properties, +" << m.added_associations.size() << " associations, " << m.conflicts.size()
                 << " conflicts\n";
        }
        return kExitOk;
    }

private:
    const Settings& s_;
    std::istream& in_;
    std::ostream& out_;
    std::ostream& err_;
    std::unique_ptr<llm::VisionModelClient> client_;
};

// Splits --input files into platform exports and an optional pivot file.
MigrationInputs gather(const std::vector<std::string>& files, const std::vector<std::string>& images) {
    MigrationInputs inputs;
    for (const auto& f : files) {
        if (pivot::to_lower(fs::path(f).extension().string()) == ".bml") {
            inputs.pivot_file = f;
        } else {
            inputs.files.emplace_back(f);
        }
    }
    for (const auto& i : images) inputs.images.emplace_back(i);
    return inputs;
}

bool usage_error(ErrorCode code) {
    return code == ErrorCode::UnknownPlatform || code == ErrorCode::UnknownAdapter || code == ErrorCode::InvalidConfig ||
           code == ErrorCode::NoCredentials;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Moves data models between low-code platforms", "lcpbridge"};
    app.require_subcommand(1);
    Settings s;
    app.add_option("--config", s.config_path, "Config file (default: ./lcpbridge.toml when present)");
    app.add_option("--capabilities", s.capabilities_path, "Capability matrix override (TOML)");

    auto* caps = app.add_subcommand("capabilities", "Show export/import support per platform");
    std::string platform;
    bool as_json = false;
    caps->add_option("--platform", platform, "Platform id");
    caps->add_flag("--json", as_json, "JSON output");

    auto* plan_cmd = app.add_subcommand("plan", "Show the migration path between two platforms");
    std::string from, to;
    plan_cmd->add_option("--from", from, "Source platform id")->required();
    plan_cmd->add_option("--to", to, "Target platform id")->required();
    plan_cmd->add_flag("--json", as_json, "JSON output");

    std::vector<std::string> inputs, images;
    const auto common = [&](CLI::App* cmd) {
        cmd->add_option("--out", s.out_dir, "Output directory");
        cmd->add_option("--dialect", s.dialect, "SQL dialect: oracle or ansi");
        cmd->add_flag("--no-sample-row", s.no_sample_row, "Leave the sample data row out of workbooks");
        cmd->add_option("--llm-mode", s.llm_mode, "live or replay");
        cmd->add_option("--replay-dir", s.replay_dir, "Directory of recorded LLM answers");
        cmd->add_option("--llm-endpoint", s.llm_endpoint, "Chat-completions URL for live mode");
        cmd->add_option("--llm-model", s.llm_model, "Model name for live mode");
        cmd->add_option("--llm-retries", s.llm_retries, "Re-prompts after an unusable LLM answer");
    };

    auto* migrate = app.add_subcommand("migrate", "Run a full migration");
    migrate->add_option("--from", from, "Source platform id")->required();
    migrate->add_option("--to", to, "Target platform id")->required();
    migrate->add_option("--input", inputs, "Export files (.json, .csv, .xlsx) or a pivot file (.bml)");
    migrate->add_option("--image", images, "Screenshots of the data model (.png, .jpg)");
    migrate->add_flag("--review", s.review, "Pause after writing model.bml so it can be edited");
    common(migrate);

    auto* import_cmd = app.add_subcommand("import", "Read a model into a pivot file");
    std::string adapter;
    import_cmd->add_option("adapter", adapter, "mendix-json, plantuml, tabular or image-llm")->required();
    import_cmd->add_option("--input", inputs, "Input files");
    import_cmd->add_option("--image", images, "Screenshots for image-llm");
    import_cmd->add_option("--platform", platform, "Platform shown in the screenshots (image-llm)");
    common(import_cmd);

    auto* export_cmd = app.add_subcommand("export", "Generate target files from a pivot file");
    std::string model_path;
    export_cmd->add_option("adapter", adapter, "apex-sql, workbook, csv or plantuml")->required();
    export_cmd->add_option("--model", model_path, "Pivot file (.bml)")->required();
    common(export_cmd);

    auto* validate = app.add_subcommand("validate", "Check a pivot file");
    validate->add_option("file", model_path, "Pivot file (.bml)")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        apply_config(s, app);
        const auto matrix = load_matrix(s);
        Session session(s, in, out, err);

        if (caps->parsed()) {
            std::vector<const PlatformCapabilities*> rows;
            if (platform.empty()) {
                for (const auto& p : matrix.platforms()) rows.push_back(&p);
            } else {
                rows.push_back(&matrix.platform(platform));
            }
            if (as_json) {
                nlohmann::ordered_json doc = nlohmann::ordered_json::array();
                for (const auto* p : rows) {
                    doc.push_back({{"id", p->id},
                                   {"name", p->name},
                                   {"export", record_json(p->exports)},
                                   {"import", record_json(p->imports)}});
                }
                out << doc.dump(2) << "\n";
            } else {
                for (const auto* p : rows) {
                    out << p->name << " (" << p->id << ")\n";
                    out << "  export: " << levels(p->exports) << "\n";
                    out << "  import: " << levels(p->imports) << "\n";
                }
            }
            return kExitOk;
        }
        if (plan_cmd->parsed()) {
            const auto plan = plan_migration(from, to, matrix);
            out << (as_json ? to_json(plan).dump(2) + "\n" : describe(plan));
            return kExitOk;
        }
        if (migrate->parsed()) {
            return session.execute(plan_migration(from, to, matrix), gather(inputs, images));
        }
        if (import_cmd->parsed()) {
            const auto& importer = AdapterRegistry::builtin().get(adapter, AdapterKind::Importer);
            MigrationPlan plan;
            if (importer.id == "image-llm") {
                if (platform.empty()) throw Error(ErrorCode::InvalidConfig, "image-llm needs --platform");
                plan.source = matrix.platform(platform).id;
                if (!inputs.empty()) plan.chain.push_back({"tabular", AdapterKind::Importer, "CSV", "PIVOT"});
            }
            plan.chain.push_back({importer.id, AdapterKind::Importer, importer.inputs.front(), "PIVOT"});
            return session.execute(plan, gather(inputs, images));
        }
        if (export_cmd->parsed()) {
            const auto& exporter = AdapterRegistry::builtin().get(adapter, AdapterKind::Exporter);
            MigrationPlan plan;
            plan.chain.push_back({exporter.id, AdapterKind::Exporter, "PIVOT", exporter.outputs.front()});
            MigrationInputs in_files;
            in_files.pivot_file = model_path;
            return session.execute(plan, in_files);
        }
        if (validate->parsed()) {
            std::ifstream file(model_path, std::ios::binary);
            if (!file) throw Error(ErrorCode::UnreadableFile, "cannot read " + model_path);
            const auto model = pivot::parse_pivot_text(std::string((std::istreambuf_iterator<char>(file)), {}));
            const auto result = pivot::validate_model(model);
            if (!result.ok()) {
                err << result.describe();
                return kExitDomainError;
            }
            out << model_path << ": valid (" << model.classes.size() << " classes, " << model.associations.size()
                << " associations)\n";
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error";
        if (!e.step().empty()) err << " in " << e.step();
        err << " [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return usage_error(e.code()) ? kExitUsage : kExitDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
    return kExitUsage;
}

}  // namespace lcpbridge::cli
