#include "pivotheso/cli.hpp"

#include "pivotheso/aligner.hpp"
#include "pivotheso/descriptor.hpp"
#include "pivotheso/referential.hpp"
#include "pivotheso/service.hpp"
#include "pivotheso/turtle.hpp"
#include "pivotheso/validator.hpp"
#include "pivotheso/views.hpp"
#include "pivotheso/workspace.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <functional>
#include <ostream>

namespace pivotheso {
namespace {

HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
    if (g_server != nullptr) g_server->stop();
}

CLI::Validator match_type_validator() {
    return CLI::Validator(
        [](std::string& s) -> std::string {
            return parse_match_type(s) ? std::string() : "unknown match type '" + s + "'";
        },
        "MATCH_TYPE");
}

CLI::Validator profile_validator() {
    return CLI::Validator(
        [](std::string& s) -> std::string {
            try {
                parse_profile(s);
                return {};
            } catch (const Error& e) {
                return e.what();
            }
        },
        "PROFILE");
}

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::string store_opt;
    std::string config_opt;
    WorkspaceConfig cfg;

    void configure() {
        cfg = load_config(config_opt.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_opt));
        if (!store_opt.empty()) cfg.store_path = store_opt;
    }

    Store load() const { return load_store(cfg); }

    void mutate(const std::function<void(Store&)>& fn) const {
        StoreLock lock(cfg.store_path);
        Store s = load_store(cfg);
        fn(s);
        save_store(s, cfg.store_path);
    }

    std::string label(const Store& s, const ConceptId& id) const {
        const Concept* c = s.find(id);
        return c == nullptr ? id.str() : c->label(cfg.default_lang);
    }
};

void print_diagnostics(std::ostream& out, const std::vector<Diagnostic>& diags, bool json) {
    std::size_t errors = 0;
    for (const auto& d : diags) {
        errors += d.severity == Severity::Error;
        out << (json ? render_json_line(d) : render_text(d)) << "\n";
    }
    if (!json) out << errors << " error(s), " << diags.size() - errors << " warning(s)\n";
}

void print_tree(std::ostream& out, const nlohmann::json& node, int indent) {
    out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << node.at("label").get<std::string>() << "  <"
        << node.at("id").get<std::string>() << ">";
    if (!node.contains("children") && node.at("narrower_count").get<std::size_t>() > 0) {
        out << "  (+" << node.at("narrower_count").get<std::size_t>() << ")";
    }
    out << "\n";
    if (node.contains("children")) {
        for (const auto& child : node.at("children")) print_tree(out, child, indent + 1);
    }
}

void print_concept(const Context& ctx, const Store& s, const ConceptId& id) {
    std::ostream& out = ctx.out;
    const Concept& c = s.concept_at(id);
    out << c.id.str() << "\n";
    for (const auto& [lang, l] : c.pref_labels) out << "prefLabel@" << lang << ": " << l.text << "\n";
    for (const auto& l : c.alt_labels) out << "altLabel@" << l.lang << ": " << l.text << "\n";
    if (c.definition) {
        out << "definition: " << c.definition->text << "\n";
        for (const auto& src : c.definition->sources) out << "source: " << src << "\n";
        for (const auto& r : c.definition->external_resources) out << "seeAlso: " << r << "\n";
    }
    auto list = [&](const char* name, const std::set<ConceptId>& ids) {
        for (const auto& x : ids) out << name << ": " << ctx.label(s, x) << "  <" << x.str() << ">\n";
    };
    list("broader", c.broader);
    list("narrower", c.narrower);
    list("related", c.related);
    for (const auto& p : s.paths_to_top(id)) out << "path: " << p << "\n";
}

void print_mapping(const Context& ctx, const Store& s, const Mapping& m) {
    ctx.out << m.id.str() << "  " << to_string(m.status) << "  " << to_string(m.match_type) << "  "
            << ctx.label(s, m.source) << " <" << m.source.str() << "> -> " << ctx.label(s, m.target) << " <"
            << m.target.str() << ">  score=" << aligner::format_score(m.score) << "\n";
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Thesaurus engine and alignment workbench", "pivotheso"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every command");

    Context ctx{out, err, {}, {}, {}};
    app.add_option("--store", ctx.store_opt, "Native store file (overrides config and PIVOTHESO_STORE)");
    app.add_option("--config", ctx.config_opt, "Config file (key=value lines)")->check(CLI::ExistingFile);

    std::function<int()> action;

    // import
    auto* import_cmd = app.add_subcommand("import", "Import a SKOS Turtle file into the store");
    std::string import_file;
    std::string import_profile = "documentary";
    import_cmd->add_option("file", import_file, "Turtle file")->required()->check(CLI::ExistingFile);
    import_cmd->add_option("--profile", import_profile, "documentary or research")->check(profile_validator());
    import_cmd->callback([&] {
        action = [&] {
            const std::string bytes = read_file(import_file);
            ImportSummary sum;
            ctx.mutate([&](Store& s) { sum = import_turtle(s, bytes, parse_profile(import_profile)); });
            for (const auto& w : sum.warnings) {
                err << import_file << ":" << w.line << ":" << w.column << ": warning: " << w.message << "\n";
            }
            out << "imported " << sum.schemes << " scheme(s), " << sum.concepts << " concept(s), " << sum.mappings
                << " mapping(s)\n";
            return 0;
        };
    });

    // export
    auto* export_cmd = app.add_subcommand("export", "Export one scheme as Turtle");
    std::string export_scheme, export_file;
    export_cmd->add_option("scheme", export_scheme, "Scheme id or title")->required();
    export_cmd->add_option("file", export_file, "Output file, '-' for stdout")->required();
    export_cmd->callback([&] {
        action = [&] {
            const Store s = ctx.load();
            const std::string ttl = skos::serialize_turtle(skos::project_scheme(s, resolve_scheme(s, export_scheme)));
            if (export_file == "-") {
                out << ttl;
            } else {
                write_file_atomic(export_file, ttl);
            }
            return 0;
        };
    });

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check a scheme against rules R1-R8");
    std::string validate_scheme, validate_profile;
    bool validate_json = false;
    validate_cmd->add_option("scheme", validate_scheme, "Scheme id or title")->required();
    validate_cmd->add_option("--profile", validate_profile, "Override the scheme profile")->check(profile_validator());
    validate_cmd->add_flag("--json", validate_json, "One JSON object per line");
    validate_cmd->callback([&] {
        action = [&] {
            const Store s = ctx.load();
            const SchemeId id = resolve_scheme(s, validate_scheme);
            const auto diags = validate_profile.empty() ? validator::validate(s, id)
                                                        : validator::validate(s, id, parse_profile(validate_profile));
            print_diagnostics(out, diags, validate_json);
            return validator::has_errors(diags) ? 1 : 0;
        };
    });

    // explain
    auto* explain_cmd = app.add_subcommand("explain", "Describe a validation rule");
    std::string explain_code;
    explain_cmd->add_option("rule", explain_code, "Rule code, e.g. R6")->required();
    explain_cmd->callback([&] {
        action = [&] {
            out << validator::explain(explain_code) << "\n";
            return 0;
        };
    });

    // paths
    auto* paths_cmd = app.add_subcommand("paths", "Print every access path of a concept");
    std::string paths_ark;
    paths_cmd->add_option("ark", paths_ark, "Concept ark")->required();
    paths_cmd->callback([&] {
        action = [&] {
            const Store s = ctx.load();
            for (const auto& p : s.paths_to_top(resolve_concept(s, paths_ark))) out << p << "\n";
            return 0;
        };
    });

    // concept
    auto* concept_cmd = app.add_subcommand("concept", "Show a concept");
    std::string concept_ark;
    bool concept_json = false;
    concept_cmd->add_option("ark", concept_ark, "Concept ark")->required();
    concept_cmd->add_flag("--json", concept_json, "JSON output");
    concept_cmd->callback([&] {
        action = [&] {
            const Store s = ctx.load();
            const ConceptId id = resolve_concept(s, concept_ark);
            if (concept_json) {
                out << views::concept_view(s, id).dump(2) << "\n";
            } else {
                print_concept(ctx, s, id);
            }
            return 0;
        };
    });

    // tree
    auto* tree_cmd = app.add_subcommand("tree", "Print the hierarchy of a scheme");
    std::string tree_scheme, tree_root;
    int tree_depth = -1;
    tree_cmd->add_option("scheme", tree_scheme, "Scheme id or title")->required();
    tree_cmd->add_option("--root", tree_root, "Start from this concept");
    tree_cmd->add_option("--depth", tree_depth, "Levels below the root (-1: all)");
    tree_cmd->callback([&] {
        action = [&] {
            const Store s = ctx.load();
            std::optional<ConceptId> root;
            if (!tree_root.empty()) root = resolve_concept(s, tree_root);
            const auto tree = views::tree_view(s, resolve_scheme(s, tree_scheme), root, tree_depth);
            for (const auto& node : tree.at("roots")) print_tree(out, node, 0);
            return 0;
        };
    });

    // align
    auto* align = app.add_subcommand("align", "Cross-scheme mappings");
    align->require_subcommand(1);

    auto* suggest_cmd = align->add_subcommand("suggest", "Record and print mapping candidates as CSV");
    std::string suggest_src, suggest_tgt, suggest_out;
    double suggest_min = aligner::default_min_score;
    suggest_cmd->add_option("source", suggest_src, "Source scheme")->required();
    suggest_cmd->add_option("target", suggest_tgt, "Target scheme")->required();
    suggest_cmd->add_option("--min-score", suggest_min, "Minimum score")->check(CLI::Range(0.0, 1.0));
    suggest_cmd->add_option("-o,--output", suggest_out, "Write the CSV to this file");
    suggest_cmd->callback([&] {
        action = [&] {
            std::string csv_text;
            std::size_t n = 0;
            ctx.mutate([&](Store& s) {
                const auto candidates =
                    aligner::suggest_mappings(s, resolve_scheme(s, suggest_src), resolve_scheme(s, suggest_tgt), suggest_min);
                aligner::record_suggestions(s, candidates);
                csv_text = aligner::suggestions_csv(s, candidates);
                n = candidates.size();
            });
            if (suggest_out.empty()) {
                out << csv_text;
            } else {
                write_file_atomic(suggest_out, csv_text);
                out << n << " suggestion(s) written to " << suggest_out << "\n";
            }
            return 0;
        };
    });

    auto* decide_cmd = align->add_subcommand("decide", "Accept or reject a suggested mapping");
    std::string decide_id, decide_what, decide_type;
    decide_cmd->add_option("mapping", decide_id, "Mapping id")->required();
    decide_cmd->add_option("decision", decide_what, "accept or reject")
        ->required()
        ->check(CLI::IsMember({"accept", "reject"}));
    decide_cmd->add_option("--type", decide_type, "Override the match type")->check(match_type_validator());
    decide_cmd->callback([&] {
        action = [&] {
            std::optional<MatchType> type;
            if (!decide_type.empty()) type = parse_match_type(decide_type);
            ctx.mutate([&](Store& s) {
                const Mapping m = aligner::decide(s, MappingId(decide_id),
                                                  decide_what == "accept" ? aligner::Decision::Accept
                                                                          : aligner::Decision::Reject,
                                                  type);
                print_mapping(ctx, s, m);
                if (m.status == MappingStatus::Accepted) {
                    for (const auto& [id, x] : s.mappings()) {
                        if (x.status == MappingStatus::Accepted && x.source == m.target && x.target == m.source) {
                            print_mapping(ctx, s, x);
                        }
                    }
                }
            });
            return 0;
        };
    });

    auto* add_cmd = align->add_subcommand("add", "Add an accepted mapping and its inverse");
    std::string add_source, add_target, add_type;
    add_cmd->add_option("source", add_source, "Source concept")->required();
    add_cmd->add_option("target", add_target, "Target concept")->required();
    add_cmd->add_option("type", add_type, "Match type")->required()->check(match_type_validator());
    add_cmd->callback([&] {
        action = [&] {
            ctx.mutate([&](Store& s) {
                auto [fwd, inv] = aligner::add_mapping(s, resolve_concept(s, add_source), resolve_concept(s, add_target),
                                                       *parse_match_type(add_type));
                print_mapping(ctx, s, fwd);
                print_mapping(ctx, s, inv);
            });
            return 0;
        };
    });

    auto* list_cmd = align->add_subcommand("list", "List mappings");
    std::string list_status;
    list_cmd->add_option("--status", list_status, "suggested, accepted or rejected")
        ->check(CLI::IsMember({"suggested", "accepted", "rejected"}));
    list_cmd->callback([&] {
        action = [&] {
            const Store s = ctx.load();
            const auto wanted = parse_mapping_status(list_status);
            for (const auto& [id, m] : s.mappings()) {
                if (list_status.empty() || m.status == *wanted) print_mapping(ctx, s, m);
            }
            return 0;
        };
    });

    auto* check_cmd = align->add_subcommand("check", "Check mappings (M1-M4)");
    bool check_json = false;
    check_cmd->add_flag("--json", check_json, "One JSON object per line");
    check_cmd->callback([&] {
        action = [&] {
            const auto diags = aligner::check_mappings(ctx.load());
            print_diagnostics(out, diags, check_json);
            return validator::has_errors(diags) ? 1 : 0;
        };
    });

    auto* group_cmd = align->add_subcommand("group", "Create a bracketed grouping concept over members");
    std::string group_scheme, group_label, group_parent;
    std::vector<std::string> group_members;
    group_cmd->add_option("scheme", group_scheme, "Scheme id or title")->required();
    group_cmd->add_option("label", group_label, "Label without brackets")->required();
    group_cmd->add_option("members", group_members, "Member concepts");
    group_cmd->add_option("--parent", group_parent, "Attach under this concept instead of the top level");
    group_cmd->callback([&] {
        action = [&] {
            ctx.mutate([&](Store& s) {
                std::vector<ConceptId> members;
                for (const auto& m : group_members) {
                    std::string r = m;
                    if (auto pos = r.find("ark:/"); pos != std::string::npos) r = r.substr(pos);
                    members.emplace_back(r);
                }
                std::optional<ConceptId> parent;
                if (!group_parent.empty()) parent = resolve_concept(s, group_parent);
                out << aligner::create_grouping_concept(s, resolve_scheme(s, group_scheme), group_label, members, parent)
                           .str()
                    << "\n";
            });
            return 0;
        };
    });

    // ref
    auto* ref = app.add_subcommand("ref", "Millesime referentials");
    ref->require_subcommand(1);

    auto* register_cmd = ref->add_subcommand("register", "Register a referential rooted at a concept");
    std::string reg_scheme, reg_root, reg_biblio, reg_id;
    int reg_year = 0;
    std::vector<std::string> reg_keywords, reg_roles;
    register_cmd->add_option("scheme", reg_scheme, "Scheme id or title")->required();
    register_cmd->add_option("root", reg_root, "Root concept ark")->required();
    register_cmd->add_option("biblio_key", reg_biblio, "Bibliographic key")->required();
    register_cmd->add_option("millesime", reg_year, "Edition year")->required();
    register_cmd->add_option("--id", reg_id, "Referential id (derived from the key by default)");
    register_cmd->add_option("--keyword", reg_keywords, "Keyword (repeatable)");
    register_cmd->add_option("--role", reg_roles, "Branch root override, role=ark (repeatable)");
    register_cmd->callback([&] {
        action = [&] {
            referential::RegisterRequest req;
            req.biblio_key = reg_biblio;
            req.millesime = reg_year;
            req.keywords = reg_keywords;
            if (!reg_id.empty()) req.id = ReferentialId(reg_id);
            std::vector<std::pair<Role, std::string>> roles;
            for (const auto& r : reg_roles) {
                const auto eq = r.find('=');
                const auto role = eq == std::string::npos ? std::nullopt : parse_role(r.substr(0, eq));
                if (!role) {
                    err << "error: --role expects role=ark with role one of categorie, forme, type, periodisation\n";
                    return 2;
                }
                roles.emplace_back(*role, r.substr(eq + 1));
            }
            ctx.mutate([&](Store& s) {
                req.scheme = resolve_scheme(s, reg_scheme);
                req.root = resolve_concept(s, reg_root);
                for (const auto& [role, ark] : roles) req.role_overrides[role] = resolve_concept(s, ark);
                const Referential r = referential::register_referential(s, req);
                const auto counts = referential::role_counts(s, r.id);
                out << r.id.str() << "\n"
                    << "categories " << counts.categories << "\n"
                    << "formes " << counts.formes << "\n"
                    << "types " << counts.types << "\n"
                    << "periodisation " << counts.periodisation << "\n";
            });
            return 0;
        };
    });

    auto* freeze_cmd = ref->add_subcommand("freeze", "Freeze a referential");
    std::string freeze_id;
    freeze_cmd->add_option("id", freeze_id, "Referential id")->required();
    freeze_cmd->callback([&] {
        action = [&] {
            ctx.mutate([&](Store& s) { referential::freeze(s, ReferentialId(freeze_id)); });
            out << freeze_id << " frozen\n";
            return 0;
        };
    });

    auto* diff_cmd = ref->add_subcommand("diff", "Compare two referentials");
    std::string diff_old, diff_new;
    bool diff_json = false;
    diff_cmd->add_option("old", diff_old, "Older referential id")->required();
    diff_cmd->add_option("new", diff_new, "Newer referential id")->required();
    diff_cmd->add_flag("--json", diff_json, "JSON output");
    diff_cmd->callback([&] {
        action = [&] {
            const auto d = referential::diff_referentials(ctx.load(), ReferentialId(diff_old), ReferentialId(diff_new));
            out << (diff_json ? referential::render_json(d) : referential::render_text(d));
            return 0;
        };
    });

    auto* ref_show = ref->add_subcommand("show", "Show a referential with role counts and ceiling");
    std::string show_ref;
    ref_show->add_option("id", show_ref, "Referential id")->required();
    ref_show->callback([&] {
        action = [&] {
            out << views::referential_view(ctx.load(), ReferentialId(show_ref)).dump(2) << "\n";
            return 0;
        };
    });

    auto* ref_list = ref->add_subcommand("list", "List referentials");
    ref_list->callback([&] {
        action = [&] {
            const Store s = ctx.load();
            for (const auto& [id, r] : s.referentials()) {
                out << id.str() << "  " << r.biblio_key << "  " << r.millesime << (r.frozen ? "  frozen" : "") << "  "
                    << ctx.label(s, r.root_concept) << "\n";
            }
            return 0;
        };
    });

    // desc
    auto* desc = app.add_subcommand("desc", "Artifact descriptions");
    desc->require_subcommand(1);

    auto* compose_cmd = desc->add_subcommand("compose", "Describe one artifact");
    std::string comp_artifact, comp_ref, comp_forme, comp_type, comp_cat, comp_chrono;
    compose_cmd->add_option("artifact_id", comp_artifact, "Inventory id")->required();
    compose_cmd->add_option("--ref", comp_ref, "Referential id")->required();
    compose_cmd->add_option("--forme", comp_forme, "Forme ark or label")->required();
    compose_cmd->add_option("--type", comp_type, "Type ark or label")->required();
    compose_cmd->add_option("--categorie", comp_cat, "Categorie ark or label")->required();
    compose_cmd->add_option("--chronologie", comp_chrono, "Chronologie ark or label")->required();
    compose_cmd->callback([&] {
        action = [&] {
            ctx.mutate([&](Store& s) {
                const ReferentialId rid(comp_ref);
                const auto index = referential::classify(s, rid);
                descriptor::DescriptionInput in;
                in.artifact_id = comp_artifact;
                in.referential = rid;
                in.forme = descriptor::resolve_cell(s, index, Role::Forme, comp_forme);
                in.type = descriptor::resolve_cell(s, index, Role::Type, comp_type);
                in.categorie = descriptor::resolve_cell(s, index, Role::Categorie, comp_cat);
                in.chronologie = descriptor::resolve_cell(s, index, Role::Periodisation, comp_chrono);
                const ArtifactDescription d = descriptor::compose_description(s, in);
                out << descriptor::to_json(descriptor::expand_description(s, d));
            });
            return 0;
        };
    });

    auto* ingest_cmd = desc->add_subcommand("ingest", "Ingest an inventory CSV");
    std::string ingest_file, ingest_ref, ingest_rejects;
    ingest_cmd->add_option("file", ingest_file, "CSV: artifact_id,forme,type,categorie,chronologie")
        ->required()
        ->check(CLI::ExistingFile);
    ingest_cmd->add_option("--ref", ingest_ref, "Referential id")->required();
    ingest_cmd->add_option("--rejects", ingest_rejects, "Write the rejects report here instead of stdout");
    ingest_cmd->callback([&] {
        action = [&] {
            const std::string bytes = read_file(ingest_file);
            descriptor::IngestReport report;
            ctx.mutate([&](Store& s) { report = descriptor::ingest_inventory(s, bytes, ReferentialId(ingest_ref)); });
            const std::string rejects = descriptor::rejects_csv(report);
            out << "stored " << report.stored.size() << ", rejected " << report.rejects.size() << "\n";
            if (ingest_rejects.empty()) {
                if (!report.rejects.empty()) out << rejects;
            } else {
                write_file_atomic(ingest_rejects, rejects);
            }
            return 0;
        };
    });

    auto* ceiling_cmd = desc->add_subcommand("ceiling", "Print the theoretical combination ceiling");
    std::string ceiling_ref;
    bool ceiling_verbose = false;
    ceiling_cmd->add_option("--ref", ceiling_ref, "Referential id")->required();
    ceiling_cmd->add_flag("-v,--verbose", ceiling_verbose, "Also print the counts");
    ceiling_cmd->callback([&] {
        action = [&] {
            const auto c = descriptor::combination_ceiling(ctx.load(), ReferentialId(ceiling_ref));
            out << c.ceiling << "\n";
            if (ceiling_verbose) {
                out << "categories " << c.n_categories << "\ntypes " << c.n_types << "\nformes " << c.n_formes
                    << "\nrealized " << c.realized << "\n";
            }
            return 0;
        };
    });

    auto* show_cmd = desc->add_subcommand("show", "Expand a stored description");
    std::string show_artifact;
    show_cmd->add_option("artifact_id", show_artifact, "Inventory id")->required();
    show_cmd->callback([&] {
        action = [&] {
            const Store s = ctx.load();
            const ArtifactDescription* d = s.find_description(show_artifact);
            if (d == nullptr) {
                err << "error: no description for " << show_artifact << "\n";
                return 1;
            }
            out << descriptor::to_json(descriptor::expand_description(s, *d));
            return 0;
        };
    });

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
    std::string serve_listen;
    serve_cmd->add_option("--listen", serve_listen, "host:port (port 0 picks a free one)");
    serve_cmd->callback([&] {
        action = [&] {
            const ListenAddress addr = parse_listen_address(serve_listen.empty() ? ctx.cfg.listen_address : serve_listen);
            Service service(ctx.load(), ctx.cfg.store_path);
            HttpServer server(service);
            const int port = server.bind(addr.host, addr.port);
            out << "listening on http://" << addr.host << ":" << port << "\n" << std::flush;
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            server.run();
            g_server = nullptr;
            return 0;
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    try {
        ctx.configure();
        return action ? action() : 2;
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return 1;
    }
}

}  // namespace pivotheso
