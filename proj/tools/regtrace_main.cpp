// regtrace: lint, model, trace, and score annotated regulation text.
//
// Exit codes: 0 success (warnings allowed), 1 validation errors found,
// 2 usage, IO, or parse failure. Reports go to stdout, diagnostics to
// stderr; identical inputs produce byte-identical outputs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "regtrace/annotation.hpp"
#include "regtrace/corpus.hpp"
#include "regtrace/errors.hpp"
#include "regtrace/model.hpp"
#include "regtrace/scoring.hpp"
#include "regtrace/survey.hpp"

namespace {

using namespace regtrace;
using nlohmann::ordered_json;

constexpr int kExitSuccess = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageFailure("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageFailure("cannot write file: " + path);
    out << content;
}

void print_diagnostics(const std::vector<Diagnostic>& diags, const std::string& origin) {
    for (const auto& d : diags) {
        std::cerr << origin << ": " << to_string(d) << "\n";
    }
}

std::string format_ratio(double ratio) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.4f", ratio);
    return buffer;
}

// ----------------------------------------------------------- subcommands

int cmd_parse(const std::string& corpus_path, const std::string& format) {
    const LegalDocument doc = parse_corpus(read_file(corpus_path));
    if (format == "json") {
        std::cout << serialize_corpus(doc);
    } else {
        std::cout << doc.id << ": " << doc.articles.size() << " articles, "
                  << list_provisions(doc).size() << " provisions\n";
    }
    return kExitSuccess;
}

int cmd_validate(const std::string& corpus_path, const std::vector<std::string>& annotation_paths) {
    const LegalDocument doc = parse_corpus(read_file(corpus_path));
    bool failed = false;
    for (const auto& path : annotation_paths) {
        const AnnotationSet set = parse_annotation_set(read_file(path));
        const auto diags = validate_annotations(set, doc);
        print_diagnostics(diags, path);
        failed = failed || has_errors(diags);
    }
    return failed ? kExitValidation : kExitSuccess;
}

int cmd_model_build(const std::string& corpus_path, const std::vector<std::string>& annotation_paths,
                    const std::string& decls_path, const std::string& out_path) {
    const LegalDocument doc = parse_corpus(read_file(corpus_path));
    std::vector<AnnotationSet> sets;
    for (const auto& path : annotation_paths) {
        sets.push_back(load_annotations(read_file(path), doc));
    }
    const ModelDecls decls = parse_model_decls(read_file(decls_path));
    ModelBundle bundle;
    bundle.model = build_model(std::move(sets), decls, doc);
    bundle.document = doc;
    write_file(out_path, serialize_model(bundle));
    return kExitSuccess;
}

int cmd_model_check(const std::string& model_path) {
    const ModelBundle bundle = parse_model(read_file(model_path));
    const auto diags = check_model(bundle.model);
    print_diagnostics(diags, model_path);
    return has_errors(diags) ? kExitValidation : kExitSuccess;
}

int cmd_derive(const std::string& model_path, const std::string& format) {
    const ModelBundle bundle = parse_model(read_file(model_path));
    const SpecDerivation specs = derive_specs(bundle.model);
    if (format == "json") {
        ordered_json out;
        for (const char* key : {"requirements", "components"}) {
            out[key] = ordered_json::array();
        }
        for (const auto& inst : specs.requirements) {
            out["requirements"].push_back({{"id", inst.id}, {"name", inst.name}});
        }
        for (const auto& inst : specs.components) {
            out["components"].push_back({{"id", inst.id}, {"name", inst.name}});
        }
        std::cout << out.dump(2) << "\n";
        return kExitSuccess;
    }
    std::cout << "requirements: " << specs.requirements.size() << "\n";
    for (const auto& inst : specs.requirements) {
        std::cout << "  " << inst.id << "  " << concept_marker(inst.kind) << " " << inst.name
                  << "\n";
    }
    std::cout << "components: " << specs.components.size() << "\n";
    for (const auto& inst : specs.components) {
        std::cout << "  " << inst.id << "  " << concept_marker(inst.kind) << " " << inst.name
                  << "\n";
    }
    return kExitSuccess;
}

int cmd_trace(const std::string& model_path, const std::string& from_ref,
              const std::string& to_instance, bool matrix, const std::string& format) {
    const ModelBundle bundle = parse_model(read_file(model_path));
    const ContentModel& model = bundle.model;
    const LegalDocument& doc = bundle.document;

    if (matrix) {
        const TraceMatrix m = trace_matrix(model, doc);
        if (format == "json") {
            ordered_json out;
            out["columns"] = m.columns;
            out["rows"] = ordered_json::array();
            for (std::size_t r = 0; r < m.rows.size(); ++r) {
                ordered_json row;
                row["provision"] = m.rows[r].str();
                row["cells"] = m.cells[r];
                out["rows"].push_back(std::move(row));
            }
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << trace_matrix_csv(m);
        }
        return kExitSuccess;
    }

    if (!from_ref.empty()) {
        ProvisionRef ref;
        try {
            ref = ProvisionRef::parse(from_ref);
        } catch (const ParseError& e) {
            throw UsageFailure(e.what());
        }
        TraceForwardResult result;
        try {
            result = trace_forward(model, doc, ref);
        } catch (const ValidationError& e) {
            throw UsageFailure(e.what());
        }
        if (format == "json") {
            ordered_json out;
            out["requirements"] = result.requirements;
            out["components"] = ordered_json::array();
            for (const auto& tc : result.components) {
                out["components"].push_back({{"id", tc.instance}, {"indirect", tc.indirect}});
            }
            std::cout << out.dump(2) << "\n";
            return kExitSuccess;
        }
        for (const auto& id : result.requirements) {
            const Instance* inst = model.find_instance(id);
            std::cout << "requirement  " << id << "  " << concept_marker(inst->kind) << " "
                      << inst->name << "\n";
        }
        for (const auto& tc : result.components) {
            const Instance* inst = model.find_instance(tc.instance);
            std::cout << (tc.indirect ? "component (indirect)  " : "component  ") << tc.instance
                      << "  " << concept_marker(inst->kind) << " " << inst->name << "\n";
        }
        return kExitSuccess;
    }

    std::vector<ProvisionRef> refs;
    try {
        refs = trace_backward(model, doc, to_instance);
    } catch (const ValidationError& e) {
        throw UsageFailure(e.what());
    }
    if (format == "json") {
        ordered_json out = ordered_json::array();
        for (const auto& ref : refs) out.push_back(ref.str());
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& ref : refs) std::cout << ref.str() << "\n";
    }
    return kExitSuccess;
}

int cmd_coverage(const std::string& model_path, const std::string& corpus_path,
                 const std::string& format) {
    const ModelBundle bundle = parse_model(read_file(model_path));
    const LegalDocument doc = parse_corpus(read_file(corpus_path));
    if (doc.id != bundle.model.corpus_id) {
        throw ValidationError("model is for corpus \"" + bundle.model.corpus_id +
                              "\" but document is \"" + doc.id + "\"");
    }
    const CoverageReport report = coverage(bundle.model, doc);
    if (format == "json") {
        ordered_json out;
        out["covered"] = ordered_json::array();
        for (const auto& ref : report.covered) out["covered"].push_back(ref.str());
        out["uncovered"] = ordered_json::array();
        for (const auto& ref : report.uncovered) out["uncovered"].push_back(ref.str());
        out["ratio"] = report.ratio;
        std::cout << out.dump(2) << "\n";
        return kExitSuccess;
    }
    const std::size_t total = report.covered.size() + report.uncovered.size();
    std::cout << "covered: " << report.covered.size() << "/" << total << " ("
              << format_ratio(report.ratio) << ")\n";
    for (const auto& ref : report.uncovered) {
        std::cout << "  uncovered  " << ref.str() << "\n";
    }
    return kExitSuccess;
}

int cmd_score(const std::string& corpus_path, const std::string& gold_path,
              const std::vector<std::string>& candidate_paths,
              const std::vector<std::string>& component_models, const std::string& aliases_path,
              bool aggregate, const std::string& format) {
    const LegalDocument doc = parse_corpus(read_file(corpus_path));
    const AnnotationSet gold = load_annotations(read_file(gold_path), doc);

    std::vector<ScoreReport> reports;
    for (const auto& path : candidate_paths) {
        const AnnotationSet candidate = load_annotations(read_file(path), doc);
        const auto matching = match_annotations(candidate, gold);
        reports.push_back(score(matching, candidate, gold));
    }

    bool compared = false;
    ComponentComparison comparison;
    std::vector<std::pair<std::string, std::string>> component_columns;  // id, name
    std::string component_participant;
    if (!component_models.empty()) {
        const ModelBundle gold_model = parse_model(read_file(component_models[0]));
        const ModelBundle cand_model = parse_model(read_file(component_models[1]));
        AliasMap aliases;
        if (!aliases_path.empty()) aliases = parse_aliases(read_file(aliases_path));
        comparison = compare_components(cand_model.model, gold_model.model, aliases);
        for (const auto& inst : gold_model.model.instances) {
            if (inst.level == AbstractionLevel::System) {
                component_columns.emplace_back(inst.id, inst.name);
            }
        }
        component_participant =
            cand_model.model.sources.empty() ? "candidate" : cand_model.model.sources.front().author;
        compared = true;
    }

    if (format == "json") {
        ordered_json out;
        out["reports"] = ordered_json::array();
        for (const auto& report : reports) {
            ordered_json jr;
            jr["participant"] = report.participant;
            jr["scores"] = ordered_json::object();
            for (const auto& [id, value] : report.per_gold) {
                jr["scores"][id] = format_centi(value);
            }
            jr["extras"] = report.extras;
            out["reports"].push_back(std::move(jr));
        }
        if (aggregate) {
            out["aggregate"] = ordered_json::array();
            for (const auto& cell : aggregate_scores(reports)) {
                out["aggregate"].push_back({{"gold", cell.gold},
                                            {"median", format_centi(cell.median)},
                                            {"modes", format_centi_list(cell.modes)}});
            }
        }
        if (compared) {
            ordered_json jc;
            jc["participant"] = component_participant;
            jc["matched"] = ordered_json::object();
            for (const auto& [name, matched] : comparison.per_gold_component) {
                jc["matched"][name] = matched;
            }
            jc["extras"] = comparison.extras;
            out["components"] = std::move(jc);
        }
        std::cout << out.dump(2) << "\n";
        return kExitSuccess;
    }

    std::cout << score_table_csv(reports, aggregate);
    if (compared) {
        std::cout << "\nparticipant";
        for (const auto& [id, name] : component_columns) {
            (void)name;
            std::cout << "," << id;
        }
        std::cout << ",C+\n" << component_participant;
        for (const auto& [name, matched] : comparison.per_gold_component) {
            (void)name;
            std::cout << (matched ? ",+" : ",-");
        }
        std::cout << "," << comparison.extras << "\n";
    }
    return kExitSuccess;
}

int cmd_survey(const std::string& survey_path, bool aggregate, const std::string& format) {
    const SurveyDataset dataset = load_survey(read_file(survey_path));
    print_diagnostics(validate_survey(dataset), survey_path);
    if (!aggregate) return kExitSuccess;
    const SurveySummary summary = aggregate_survey(dataset);
    if (format == "json") {
        ordered_json out = ordered_json::array();
        for (int i = 0; i < kSurveyObjectives; ++i) {
            const auto& cell = summary.objectives[i];
            out.push_back({{"objective", objective_label(i)},
                           {"rating_median", format_centi(cell.rating_median)},
                           {"rating_modes", format_centi_list(cell.rating_modes)},
                           {"secondary_rating_median", format_centi(cell.secondary_rating_median)},
                           {"ranking_median", format_centi(cell.ranking_median)},
                           {"ranking_modes", format_centi_list(cell.ranking_modes)}});
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << survey_summary_csv(summary);
    }
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Annotation, content-model, traceability, and scoring toolkit "
                 "for regulation texts"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string format = "text";
    const auto add_format = [&](CLI::App* cmd, const char* dflt) {
        cmd->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"text", "csv", "json"}))
            ->default_val(dflt);
    };

    // parse
    std::string corpus_path;
    auto* parse_cmd = app.add_subcommand("parse", "Parse a corpus file and report its shape");
    parse_cmd->add_option("corpus", corpus_path, "Corpus file")->required();
    add_format(parse_cmd, "text");

    // validate
    std::vector<std::string> annotation_paths;
    auto* validate_cmd =
        app.add_subcommand("validate", "Validate annotation sets against a corpus");
    validate_cmd->add_option("corpus", corpus_path, "Corpus file")->required();
    validate_cmd->add_option("annotations", annotation_paths, "Annotation files")->required();

    // model build / model check
    auto* model_cmd = app.add_subcommand("model", "Build or check content models");
    model_cmd->require_subcommand(1);
    std::vector<std::string> build_inputs;
    std::string out_path, model_path;
    auto* build_cmd = model_cmd->add_subcommand(
        "build", "Assemble a model from corpus, annotations, and declarations");
    build_cmd->add_option("corpus", corpus_path, "Corpus file")->required();
    build_cmd
        ->add_option("inputs", build_inputs,
                     "Annotation files followed by the declaration file")
        ->required();
    build_cmd->add_option("-o,--output", out_path, "Model output file")->required();
    auto* check_cmd = model_cmd->add_subcommand("check", "Run model consistency checks");
    check_cmd->add_option("model", model_path, "Model file")->required();

    // derive
    auto* derive_cmd =
        app.add_subcommand("derive", "Partition instances into requirements and components");
    derive_cmd->add_option("model", model_path, "Model file")->required();
    add_format(derive_cmd, "text");

    // trace
    std::string from_ref, to_instance;
    bool matrix = false;
    auto* trace_cmd = app.add_subcommand("trace", "Answer trace queries against a model");
    trace_cmd->add_option("model", model_path, "Model file")->required();
    trace_cmd->add_option("--from", from_ref, "Provision reference to trace forward from");
    trace_cmd->add_option("--to", to_instance, "Instance id to trace backward from");
    trace_cmd->add_flag("--matrix", matrix, "Print the provision x instance trace matrix");
    add_format(trace_cmd, "text");

    // coverage
    auto* coverage_cmd =
        app.add_subcommand("coverage", "Report provision coverage of a model");
    coverage_cmd->add_option("model", model_path, "Model file")->required();
    coverage_cmd->add_option("corpus", corpus_path, "Corpus file")->required();
    add_format(coverage_cmd, "text");

    // score
    std::string gold_path, aliases_path;
    std::vector<std::string> candidate_paths, component_models;
    bool aggregate = false;
    auto* score_cmd =
        app.add_subcommand("score", "Score candidate annotation sets against a gold standard");
    score_cmd->add_option("corpus", corpus_path, "Corpus file")->required();
    score_cmd->add_option("gold", gold_path, "Gold annotation file")->required();
    score_cmd->add_option("candidates", candidate_paths, "Candidate annotation files")->required();
    score_cmd
        ->add_option("--components", component_models,
                     "Gold and candidate model files for component comparison")
        ->expected(2);
    score_cmd->add_option("--aliases", aliases_path, "Component name equivalence file");
    score_cmd->add_flag("--aggregate", aggregate, "Append median and mode rows");
    add_format(score_cmd, "csv");

    // survey
    std::string survey_path;
    auto* survey_cmd = app.add_subcommand("survey", "Validate and aggregate survey data");
    survey_cmd->add_option("file", survey_path, "Survey CSV file")->required();
    survey_cmd->add_flag("--aggregate", aggregate, "Print the per-objective summary");
    add_format(survey_cmd, "csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion") {
            return app.exit(e);
        }
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (parse_cmd->parsed()) return cmd_parse(corpus_path, format);
        if (validate_cmd->parsed()) return cmd_validate(corpus_path, annotation_paths);
        if (model_cmd->parsed() && build_cmd->parsed()) {
            if (build_inputs.size() < 2) {
                throw UsageFailure(
                    "model build needs at least one annotation file and a declaration file");
            }
            const std::string decls_path = build_inputs.back();
            build_inputs.pop_back();
            return cmd_model_build(corpus_path, build_inputs, decls_path, out_path);
        }
        if (model_cmd->parsed() && check_cmd->parsed()) return cmd_model_check(model_path);
        if (derive_cmd->parsed()) return cmd_derive(model_path, format);
        if (trace_cmd->parsed()) {
            const int selected = (!from_ref.empty() ? 1 : 0) + (!to_instance.empty() ? 1 : 0) +
                                 (matrix ? 1 : 0);
            if (selected != 1) {
                throw UsageFailure("trace requires exactly one of --from, --to, --matrix");
            }
            return cmd_trace(model_path, from_ref, to_instance, matrix, format);
        }
        if (coverage_cmd->parsed()) return cmd_coverage(model_path, corpus_path, format);
        if (score_cmd->parsed()) {
            return cmd_score(corpus_path, gold_path, candidate_paths, component_models,
                             aliases_path, aggregate, format);
        }
        if (survey_cmd->parsed()) return cmd_survey(survey_path, aggregate, format);
        throw UsageFailure("no subcommand selected");
    } catch (const UsageFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitSuccess;
}
