#include "pivotheso/service.hpp"

#include "pivotheso/aligner.hpp"
#include "pivotheso/descriptor.hpp"
#include "pivotheso/referential.hpp"
#include "pivotheso/validator.hpp"
#include "pivotheso/views.hpp"
#include "pivotheso/workspace.hpp"

#include <httplib.h>
#include <json.hpp>

#include <charconv>
#include <mutex>

namespace pivotheso {

using nlohmann::json;

int http_status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownScheme:
        case ErrorCode::UnknownConcept:
        case ErrorCode::UnknownMapping:
        case ErrorCode::UnknownReferential:
        case ErrorCode::UnknownRule:
            return 404;
        case ErrorCode::DuplicateAccepted:
        case ErrorCode::AlreadyDecided:
        case ErrorCode::ConflictingType:
        case ErrorCode::DuplicateReferential:
        case ErrorCode::AlreadyFrozen:
        case ErrorCode::FrozenReferential:
        case ErrorCode::DuplicateId:
            return 409;
        case ErrorCode::Io:
        case ErrorCode::CorruptStore:
        case ErrorCode::FormatVersionMismatch:
            return 500;
        default:
            return 422;
    }
}

namespace {

struct BadRequest {
    int status;
    std::string code;
    std::string message;
};

Response reply(int status, const json& body) { return {status, body.dump() + "\n"}; }

Response error_reply(int status, std::string_view code, const std::string& message) {
    return reply(status, {{"error", {{"code", code}, {"message", message}}}});
}

Response domain_error(const Error& e) {
    const int status = http_status_for(e.code());
    json body = {{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
    if (auto* se = dynamic_cast<const SyntaxError*>(&e)) {
        body["error"]["line"] = se->line();
        body["error"]["column"] = se->column();
    }
    if (status == 422) {
        body["diagnostics"] = json::array({{{"rule", to_string(e.code())},
                                            {"severity", "error"},
                                            {"subjects", json::array()},
                                            {"message", e.what()}}});
    }
    return reply(status, body);
}

json parse_body(std::string_view body) {
    json j = json::parse(body.begin(), body.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw BadRequest{400, "BadRequest", "request body must be a JSON object"};
    return j;
}

std::string str_field(const json& j, const char* name) {
    if (!j.contains(name) || !j.at(name).is_string()) {
        throw BadRequest{400, "BadRequest", std::string("field '") + name + "' must be a string"};
    }
    return j.at(name).get<std::string>();
}

std::optional<std::string> opt_str(const json& j, const char* name) {
    if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
    return str_field(j, name);
}

std::optional<std::string> param(const std::map<std::string, std::string>& q, const std::string& name) {
    auto it = q.find(name);
    if (it == q.end()) return std::nullopt;
    return it->second;
}

long parse_long(const std::string& s, const char* what) {
    long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw BadRequest{400, "BadRequest", std::string(what) + " must be an integer"};
    }
    return v;
}

double parse_score(const std::string& s) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v < 0.0 || v > 1.0) {
        throw BadRequest{400, "BadRequest", "min_score must be a number in [0,1]"};
    }
    return v;
}

MatchType match_type_field(const std::string& s) {
    auto t = parse_match_type(s);
    if (!t) throw BadRequest{400, "BadRequest", "unknown match type '" + s + "'"};
    return *t;
}

json page(const json& items, const std::map<std::string, std::string>& q) {
    long offset = 0;
    long limit = static_cast<long>(Service::default_page_limit);
    if (auto o = param(q, "offset")) offset = parse_long(*o, "offset");
    if (auto l = param(q, "limit")) limit = parse_long(*l, "limit");
    if (offset < 0 || limit <= 0) throw BadRequest{400, "BadRequest", "offset must be >= 0 and limit > 0"};
    json slice = json::array();
    const auto total = static_cast<long>(items.size());
    for (long i = offset; i < total && i < offset + limit; ++i) slice.push_back(items[static_cast<std::size_t>(i)]);
    return {{"items", slice}, {"total", total}, {"offset", offset}, {"limit", limit}};
}

// Splits "<prefix><middle><suffix>" and returns middle, if it matches.
std::optional<std::string> between(std::string_view path, std::string_view prefix, std::string_view suffix) {
    if (!path.starts_with(prefix) || !path.ends_with(suffix)) return std::nullopt;
    if (path.size() <= prefix.size() + suffix.size()) return std::nullopt;
    return std::string(path.substr(prefix.size(), path.size() - prefix.size() - suffix.size()));
}

}  // namespace

Service::Service(Store store, std::optional<std::filesystem::path> persist_path)
    : store_(std::move(store)), persist_path_(std::move(persist_path)) {}

Store Service::snapshot() const {
    std::shared_lock lk(mu_);
    return store_;
}

Response Service::handle(std::string_view method, std::string_view path,
                         const std::map<std::string, std::string>& query, std::string_view body) {
    try {
        return dispatch(method, path, query, body);
    } catch (const BadRequest& e) {
        return error_reply(e.status, e.code, e.message);
    } catch (const Error& e) {
        return domain_error(e);
    } catch (const std::exception& e) {
        return error_reply(500, "Internal", e.what());
    }
}

Response Service::dispatch(std::string_view method, std::string_view path,
                           const std::map<std::string, std::string>& q, std::string_view body) {
    auto read = [&](auto&& fn) -> Response {
        std::shared_lock lk(mu_);
        return fn(static_cast<const Store&>(store_));
    };
    auto write = [&](auto&& fn) -> Response {
        std::unique_lock lk(mu_);
        Store work = store_;
        Response r = fn(work);
        if (persist_path_) {
            StoreLock lock(*persist_path_);
            save_store(work, *persist_path_);
        }
        store_ = std::move(work);
        return r;
    };

    if (method == "GET") {
        if (path == "/api/schemes") {
            return read([&](const Store& s) {
                json items = json::array();
                for (const auto& [id, sc] : s.schemes()) items.push_back(views::scheme_view(s, sc));
                return reply(200, page(items, q));
            });
        }
        if (auto id = between(path, "/api/schemes/", "/tree")) {
            return read([&](const Store& s) {
                const SchemeId scheme = resolve_scheme(s, *id);
                std::optional<ConceptId> root;
                if (auto r = param(q, "root"); r && !r->empty()) root = resolve_concept(s, *r);
                int depth = 1;
                if (auto d = param(q, "depth")) depth = static_cast<int>(parse_long(*d, "depth"));
                return reply(200, views::tree_view(s, scheme, root, depth));
            });
        }
        if (auto id = between(path, "/api/schemes/", "")) {
            return read([&](const Store& s) { return reply(200, views::scheme_view(s, s.scheme(resolve_scheme(s, *id)))); });
        }
        if (auto ark = between(path, "/api/concepts/", "/paths")) {
            return read([&](const Store& s) {
                const ConceptId id = resolve_concept(s, *ark);
                return reply(200, {{"id", id.str()}, {"paths", s.paths_to_top(id)}});
            });
        }
        if (auto ark = between(path, "/api/concepts/", "")) {
            return read([&](const Store& s) { return reply(200, views::concept_view(s, resolve_concept(s, *ark))); });
        }
        if (path == "/api/suggestions") {
            const auto src = param(q, "src");
            const auto tgt = param(q, "tgt");
            if (!src || !tgt) throw BadRequest{400, "BadRequest", "src and tgt are required"};
            double min_score = aligner::default_min_score;
            if (auto m = param(q, "min_score"); m && !m->empty()) min_score = parse_score(*m);
            return write([&](Store& s) {
                const auto candidates =
                    aligner::suggest_mappings(s, resolve_scheme(s, *src), resolve_scheme(s, *tgt), min_score);
                const auto ids = aligner::record_suggestions(s, candidates);
                json items = json::array();
                for (std::size_t i = 0; i < candidates.size(); ++i) {
                    items.push_back(views::suggestion_view(s, candidates[i], ids[i]));
                }
                return reply(200, page(items, q));
            });
        }
        if (path == "/api/mappings") {
            std::optional<MappingStatus> status;
            if (auto st = param(q, "status"); st && !st->empty()) {
                status = parse_mapping_status(*st);
                if (!status) throw BadRequest{400, "BadRequest", "unknown status '" + *st + "'"};
            }
            return read([&](const Store& s) {
                json items = json::array();
                for (const auto& [id, m] : s.mappings()) {
                    if (!status || m.status == *status) items.push_back(views::mapping_view(s, m));
                }
                return reply(200, page(items, q));
            });
        }
        if (path == "/api/mappings/check") {
            return read([&](const Store& s) {
                const auto diags = aligner::check_mappings(s);
                return reply(200, {{"diagnostics", views::diagnostics_json(diags)}, {"has_errors", validator::has_errors(diags)}});
            });
        }
        if (path == "/api/referentials") {
            return read([&](const Store& s) {
                json items = json::array();
                for (const auto& [id, r] : s.referentials()) items.push_back(views::referential_view(s, id));
                return reply(200, page(items, q));
            });
        }
        if (auto rest = between(path, "/api/referentials/", "")) {
            if (auto pos = rest->find("/diff/"); pos != std::string::npos) {
                const ReferentialId a(rest->substr(0, pos));
                const ReferentialId b(rest->substr(pos + 6));
                return read([&](const Store& s) {
                    return reply(200, json::parse(referential::render_json(referential::diff_referentials(s, a, b))));
                });
            }
            return read([&](const Store& s) { return reply(200, views::referential_view(s, ReferentialId(*rest))); });
        }
        if (auto artifact = between(path, "/api/descriptions/", "")) {
            return read([&](const Store& s) {
                const ArtifactDescription* d = s.find_description(*artifact);
                if (d == nullptr) return error_reply(404, "UnknownDescription", "no description for " + *artifact);
                return reply(200, json::parse(descriptor::to_json(descriptor::expand_description(s, *d))));
            });
        }
        if (auto code = between(path, "/api/rules/", "")) {
            const std::string explanation = validator::explain(*code);
            return reply(200, {{"rule", *code}, {"explanation", explanation}});
        }
    } else if (method == "POST") {
        if (auto id = between(path, "/api/validate/", "")) {
            std::optional<Profile> profile;
            if (auto p = param(q, "profile"); p && !p->empty()) profile = parse_profile(*p);
            return read([&](const Store& s) {
                const SchemeId scheme = resolve_scheme(s, *id);
                const Profile used = profile.value_or(s.scheme(scheme).profile);
                const auto diags = validator::validate(s, scheme, used);
                std::size_t errors = 0;
                for (const auto& d : diags) errors += d.severity == Severity::Error;
                return reply(200, {{"scheme", scheme.str()},
                                   {"profile", to_string(used)},
                                   {"diagnostics", views::diagnostics_json(diags)},
                                   {"errors", errors},
                                   {"warnings", diags.size() - errors}});
            });
        }
        if (path == "/api/mappings") {
            const json b = parse_body(body);
            const std::string source = str_field(b, "source");
            const std::string target = str_field(b, "target");
            const MatchType type = match_type_field(str_field(b, "match_type"));
            return write([&](Store& s) {
                auto [fwd, inv] = aligner::add_mapping(s, resolve_concept(s, source), resolve_concept(s, target), type);
                return reply(201, {{"mapping", views::mapping_view(s, fwd)}, {"inverse", views::mapping_view(s, inv)}});
            });
        }
        if (auto id = between(path, "/api/mappings/", "/decision")) {
            const json b = parse_body(body);
            const std::string decision = str_field(b, "decision");
            aligner::Decision d;
            if (decision == "accept") {
                d = aligner::Decision::Accept;
            } else if (decision == "reject") {
                d = aligner::Decision::Reject;
            } else {
                throw BadRequest{400, "BadRequest", "decision must be 'accept' or 'reject'"};
            }
            std::optional<MatchType> type;
            if (auto t = opt_str(b, "match_type")) type = match_type_field(*t);
            return write([&](Store& s) {
                const Mapping m = aligner::decide(s, MappingId(*id), d, type);
                json out = {{"mapping", views::mapping_view(s, m)}, {"inverse", nullptr}};
                if (m.status == MappingStatus::Accepted) {
                    for (const auto& [mid, x] : s.mappings()) {
                        if (x.status == MappingStatus::Accepted && x.source == m.target && x.target == m.source) {
                            out["inverse"] = views::mapping_view(s, x);
                        }
                    }
                }
                return reply(200, out);
            });
        }
        if (path == "/api/groupings") {
            const json b = parse_body(body);
            const std::string scheme = str_field(b, "scheme");
            const std::string label = str_field(b, "label");
            std::vector<std::string> members;
            if (b.contains("members")) {
                if (!b.at("members").is_array()) throw BadRequest{400, "BadRequest", "members must be an array"};
                for (const auto& m : b.at("members")) {
                    if (!m.is_string()) throw BadRequest{400, "BadRequest", "members must be strings"};
                    members.push_back(m.get<std::string>());
                }
            }
            const auto parent = opt_str(b, "parent");
            return write([&](Store& s) {
                const SchemeId sid = resolve_scheme(s, scheme);
                std::vector<ConceptId> ids;
                for (const auto& m : members) {
                    std::string r = m;
                    if (auto pos = r.find("ark:/"); pos != std::string::npos) r = r.substr(pos);
                    ids.emplace_back(r);
                }
                std::optional<ConceptId> p;
                if (parent) p = resolve_concept(s, *parent);
                const ConceptId id = aligner::create_grouping_concept(s, sid, label, ids, p);
                return reply(201, views::concept_view(s, id));
            });
        }
        if (path == "/api/import") {
            Profile profile = Profile::Documentary;
            if (auto p = param(q, "profile"); p && !p->empty()) profile = parse_profile(*p);
            return write([&](Store& s) {
                const ImportSummary sum = import_turtle(s, body, profile);
                json warnings = json::array();
                for (const auto& w : sum.warnings) {
                    warnings.push_back({{"line", w.line}, {"column", w.column}, {"message", w.message}});
                }
                return reply(200, {{"schemes", sum.schemes},
                                   {"concepts", sum.concepts},
                                   {"mappings", sum.mappings},
                                   {"warnings", warnings}});
            });
        }
        if (path == "/api/referentials") {
            const json b = parse_body(body);
            referential::RegisterRequest req;
            const std::string scheme = str_field(b, "scheme");
            const std::string root = str_field(b, "root");
            req.biblio_key = str_field(b, "biblio_key");
            if (!b.contains("millesime") || !b.at("millesime").is_number_integer()) {
                throw BadRequest{400, "BadRequest", "field 'millesime' must be an integer"};
            }
            req.millesime = b.at("millesime").get<int>();
            if (auto id = opt_str(b, "id")) req.id = ReferentialId(*id);
            if (b.contains("keywords")) {
                for (const auto& k : b.at("keywords")) {
                    if (!k.is_string()) throw BadRequest{400, "BadRequest", "keywords must be strings"};
                    req.keywords.push_back(k.get<std::string>());
                }
            }
            std::map<std::string, std::string> overrides;
            if (b.contains("role_overrides")) {
                if (!b.at("role_overrides").is_object()) {
                    throw BadRequest{400, "BadRequest", "role_overrides must be an object"};
                }
                for (const auto& [role, ark] : b.at("role_overrides").items()) {
                    if (!ark.is_string()) throw BadRequest{400, "BadRequest", "role_overrides values must be strings"};
                    overrides[role] = ark.get<std::string>();
                }
            }
            return write([&](Store& s) {
                req.scheme = resolve_scheme(s, scheme);
                req.root = resolve_concept(s, root);
                for (const auto& [role, ark] : overrides) {
                    auto r = parse_role(role);
                    if (!r) throw BadRequest{400, "BadRequest", "unknown role '" + role + "'"};
                    req.role_overrides[*r] = resolve_concept(s, ark);
                }
                const Referential r = referential::register_referential(s, req);
                return reply(201, views::referential_view(s, r.id));
            });
        }
        if (auto id = between(path, "/api/referentials/", "/freeze")) {
            return write([&](Store& s) {
                referential::freeze(s, ReferentialId(*id));
                return reply(200, views::referential_view(s, ReferentialId(*id)));
            });
        }
        if (path == "/api/descriptions") {
            const json b = parse_body(body);
            const std::string artifact = str_field(b, "artifact_id");
            const std::string ref = str_field(b, "referential");
            const std::string forme = str_field(b, "forme");
            const std::string type = str_field(b, "type");
            const std::string categorie = str_field(b, "categorie");
            const std::string chronologie = str_field(b, "chronologie");
            return write([&](Store& s) {
                const ReferentialId rid(ref);
                const auto index = referential::classify(s, rid);
                descriptor::DescriptionInput in;
                in.artifact_id = artifact;
                in.referential = rid;
                in.forme = descriptor::resolve_cell(s, index, Role::Forme, forme);
                in.type = descriptor::resolve_cell(s, index, Role::Type, type);
                in.categorie = descriptor::resolve_cell(s, index, Role::Categorie, categorie);
                in.chronologie = descriptor::resolve_cell(s, index, Role::Periodisation, chronologie);
                const ArtifactDescription d = descriptor::compose_description(s, in);
                return reply(201, json::parse(descriptor::to_json(descriptor::expand_description(s, d))));
            });
        }
        if (path == "/api/descriptions/ingest") {
            const auto ref = param(q, "ref");
            if (!ref) throw BadRequest{400, "BadRequest", "ref is required"};
            return write([&](Store& s) {
                const auto report = descriptor::ingest_inventory(s, body, ReferentialId(*ref));
                json rejects = json::array();
                for (const auto& r : report.rejects) {
                    rejects.push_back({{"row", r.row}, {"error_code", to_string(r.code)}, {"detail", r.detail}});
                }
                return reply(200, {{"stored", report.stored}, {"rejects", rejects}});
            });
        }
    } else {
        return error_reply(405, "MethodNotAllowed", "method " + std::string(method) + " is not supported");
    }
    return error_reply(404, "NotFound", "no route for " + std::string(method) + " " + std::string(path));
}

struct HttpServer::Impl {
    explicit Impl(Service& s) : service(s) {}
    Service& service;
    httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> query;
        for (const auto& [k, v] : req.params) query.emplace(k, v);
        const Response r = impl_->service.handle(req.method, req.path, query, req.body);
        res.status = r.status;
        res.set_content(r.body, "application/json; charset=utf-8");
    };
    impl_->server.Get(".*", handler);
    impl_->server.Post(".*", handler);
    impl_->server.Put(".*", handler);
    impl_->server.Delete(".*", handler);
    impl_->server.Patch(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) {
        throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace pivotheso
