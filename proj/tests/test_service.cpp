#include "pivotheso/service.hpp"

#include "pivotheso/store_json.hpp"
#include "pivotheso/workspace.hpp"
#include "support.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <thread>

using namespace pivotheso;
using namespace testsupport;
using nlohmann::json;

namespace {

struct Api {
    Service service{load_fixtures({"bibracte.ttl", "pactols.ttl"})};

    std::pair<int, json> get(const std::string& path, std::map<std::string, std::string> q = {}) {
        auto r = service.handle("GET", path, q, "");
        return {r.status, json::parse(r.body)};
    }
    std::pair<int, json> post(const std::string& path, const std::string& body, std::map<std::string, std::string> q = {}) {
        auto r = service.handle("POST", path, q, body);
        return {r.status, json::parse(r.body)};
    }
};

}  // namespace

TEST_CASE("read endpoints") {
    Api api;
    auto [st, schemes] = api.get("/api/schemes");
    CHECK(st == 200);
    CHECK(schemes["total"] == 2);
    CHECK(schemes["limit"] == Service::default_page_limit);

    auto [st2, cview] = api.get("/api/concepts/ark:/39676/bibxtjgnrpk5");
    CHECK(st2 == 200);
    CHECK(cview["alt_labels"].size() == 3);
    CHECK(cview["definition"]["text"].get<std::string>().rfind("Plat à paroi concave", 0) == 0);

    auto [st3, paths] = api.get("/api/concepts/ark:/39676/bibxtjgnrpk5/paths");
    CHECK(st3 == 200);
    CHECK(paths["paths"].size() == 1);

    auto [st4, tree] = api.get("/api/schemes/bibracte/tree", {{"depth", "2"}});
    CHECK(st4 == 200);
    REQUIRE(tree["roots"].size() == 1);
    CHECK(tree["roots"][0]["children"].size() == 3);

    CHECK(api.get("/api/concepts/ark:/1/nothing").first == 404);
    CHECK(api.get("/api/schemes/nothing").first == 404);
    CHECK(api.get("/api/rules/R9").first == 404);
    CHECK(api.get("/api/rules/R4").first == 200);
    CHECK(api.get("/api/nowhere").first == 404);
    CHECK(api.service.handle("DELETE", "/api/schemes", {}, "").status == 405);
}

TEST_CASE("validation endpoint") {
    Api api;
    auto [st, v] = api.post("/api/validate/bibracte", "", {{"profile", "research"}});
    CHECK(st == 200);
    CHECK(v["errors"] == 0);
    auto [st2, p] = api.post("/api/validate/pactols", "", {{"profile", "research"}});
    CHECK(p["errors"].get<int>() > 0);
}

TEST_CASE("suggestion and decision loop") {
    Api api;
    auto [st, s] = api.get("/api/suggestions", {{"src", "bibracte"}, {"tgt", "pactols"}});
    CHECK(st == 200);
    std::string assiette_mapping, campa_mapping;
    for (const auto& item : s["items"]) {
        if (item["source"] == assiette_id.str() && item["tier"] == "ExactStripped") assiette_mapping = item["mapping_id"];
        if (item["source"] == campa_id.str()) campa_mapping = item["mapping_id"];
    }
    REQUIRE_FALSE(assiette_mapping.empty());
    REQUIRE_FALSE(campa_mapping.empty());

    auto [st2, d] = api.post("/api/mappings/" + assiette_mapping + "/decision", R"({"decision":"accept","match_type":"broadMatch"})");
    CHECK(st2 == 200);
    CHECK(d["inverse"]["match_type"] == "narrowMatch");
    CHECK(api.post("/api/mappings/" + assiette_mapping + "/decision", R"({"decision":"accept"})").first == 409);
    CHECK(api.post("/api/mappings/" + campa_mapping + "/decision", R"({"decision":"reject"})").first == 200);
    CHECK(api.post("/api/mappings/m999999/decision", R"({"decision":"reject"})").first == 404);
    CHECK(api.post("/api/mappings/" + campa_mapping + "/decision", R"({"decision":"maybe"})").first == 400);

    auto [st3, again] = api.get("/api/suggestions", {{"src", "bibracte"}, {"tgt", "pactols"}});
    for (const auto& item : again["items"]) CHECK(item["mapping_id"] != campa_mapping);

    auto [st4, accepted] = api.get("/api/mappings", {{"status", "accepted"}});
    CHECK(accepted["total"] == 2);
    auto [st5, check] = api.get("/api/mappings/check");
    CHECK(check["has_errors"] == false);
}

TEST_CASE("mapping creation and errors") {
    Api api;
    auto body = json{{"source", a15_id.str()}, {"target", "https://example.org/pactols/c4c2cb954c80"}, {"match_type", "broadMatch"}};
    auto [st, m] = api.post("/api/mappings", body.dump());
    CHECK(st == 201);
    CHECK(m["inverse"]["rationale"] == "inverse of " + m["mapping"]["id"].get<std::string>());
    CHECK(api.post("/api/mappings", body.dump()).first == 409);
    body["target"] = assiette_id.str();
    auto [st2, err] = api.post("/api/mappings", body.dump());
    CHECK(st2 == 422);
    CHECK(err["error"]["code"] == "SameScheme");
    CHECK(err["diagnostics"].size() == 1);
    CHECK(api.post("/api/mappings", "{not json").first == 400);
}

TEST_CASE("referential and description endpoints") {
    Api api;
    auto reg = json{{"scheme", "bibracte"}, {"root", referential_root_id.str()}, {"biblio_key", "Barrier, Luginbühl 2021"},
                    {"millesime", 2021}, {"id", "bl2021"}, {"keywords", {"Bibracte", "céramique"}}};
    auto [st, r] = api.post("/api/referentials", reg.dump());
    CHECK(st == 201);
    CHECK(r["counts"]["types"] == 8);
    CHECK(r["ceiling"] == 232);
    CHECK(api.post("/api/referentials", reg.dump()).first == 409);
    reg["millesime"] = 1500;
    reg["id"] = "old";
    CHECK(api.post("/api/referentials", reg.dump()).first == 422);

    auto desc = json{{"artifact_id", "B2002.32.273.44"}, {"referential", "bl2021"}, {"forme", "assiette"},
                     {"type", "A15"}, {"categorie", "PGFINLF"}, {"chronologie", etape1_id.str()}};
    auto [st2, d] = api.post("/api/descriptions", desc.dump());
    CHECK(st2 == 201);
    CHECK(d["concepts"]["referentiel"]["ark"] == referential_root_id.str());
    CHECK(api.get("/api/descriptions/B2002.32.273.44").first == 200);
    CHECK(api.get("/api/descriptions/none").first == 404);
    desc["categorie"] = "CAMPA";
    auto [st3, e] = api.post("/api/descriptions", desc.dump());
    CHECK(st3 == 422);
    CHECK(e["error"]["code"] == "IncompatibleTypeCategory");

    auto [st4, ing] = api.post("/api/descriptions/ingest",
                               "artifact_id,forme,type,categorie,chronologie\nX1,assiette,A15,CAMPA,Étape 1 céramique : 120/110 à 90/80 av. n.è.\n",
                               {{"ref", "bl2021"}});
    CHECK(st4 == 200);
    CHECK(ing["rejects"][0]["error_code"] == "IncompatibleTypeCategory");

    CHECK(api.post("/api/referentials/bl2021/freeze", "").first == 200);
    CHECK(api.post("/api/referentials/bl2021/freeze", "").first == 409);
    CHECK(api.get("/api/referentials/bl2021/diff/bl2021").first == 200);
    CHECK(api.get("/api/referentials/zz").first == 404);
}

TEST_CASE("grouping and import endpoints") {
    Api api;
    auto body = json{{"scheme", "pactols"}, {"label", "céramique fine"},
                     {"members", {"https://example.org/pactols/22d84e7e2758"}}};
    auto [st, g] = api.post("/api/groupings", body.dump());
    CHECK(st == 201);
    CHECK(g["label"] == "[céramique fine]");
    body["members"] = {"ark:/0/none"};
    body["label"] = "autre";
    CHECK(api.post("/api/groupings", body.dump()).first == 422);

    auto [st2, e] = api.post("/api/import", "@prefix x <y> .");
    CHECK(st2 == 422);
    CHECK(e["error"]["code"] == "SyntaxError");
    CHECK(e["error"].contains("line"));
}

TEST_CASE("writes persist to the store file") {
    TempDir dir;
    auto path = dir.path() / "store.json";
    Service service(Store{}, path);
    auto r = service.handle("POST", "/api/import", {{"profile", "research"}}, fixture_text("bibracte.ttl"));
    CHECK(r.status == 200);
    CHECK(store_json::read_store(read_file(path)) == service.snapshot());
    auto bad = service.handle("POST", "/api/import", {}, fixture_text("bibracte.ttl"));
    CHECK(bad.status == 409);
    CHECK(store_json::read_store(read_file(path)) == service.snapshot());
}

TEST_CASE("http server on an ephemeral port") {
    Service service(load_fixtures({"bibracte.ttl", "pactols.ttl"}));
    HttpServer server(service);
    int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread t([&] { server.run(); });
    httplib::Client cli("127.0.0.1", port);
    auto res = cli.Get("/api/concepts/ark:/39676/bibxtjgnrpk5/paths");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["paths"][0].get<std::string>().ends_with("assiette A15 (BARRIER, LUGINBÜHL 2021)"));
    auto post = cli.Post("/api/mappings", R"({"source":"x"})", "application/json");
    REQUIRE(post);
    CHECK(post->status == 400);
    auto del = cli.Delete("/api/schemes");
    REQUIRE(del);
    CHECK(del->status == 405);
    server.stop();
    t.join();
}
