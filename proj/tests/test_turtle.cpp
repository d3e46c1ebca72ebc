#include "pivotheso/turtle.hpp"

#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace pivotheso;
using namespace testsupport;

namespace {

const std::string header = R"(@prefix skos: <http://www.w3.org/2004/02/skos/core#> .
@prefix dcterms: <http://purl.org/dc/terms/> .
@prefix ex: <https://example.org/> .
)";

}  // namespace

TEST_CASE("parse prefixed names, lists and escapes") {
    auto doc = skos::parse_turtle(header + R"(
ex:s a skos:ConceptScheme ; dcterms:title "S" .
# comment
ex:c a skos:Concept ;
    skos:prefLabel "guillemets \"x\"\n"@fr ;
    skos:altLabel "un", "deux"@FR ;
    skos:inScheme ex:s .
)");
    int alts = 0;
    for (const auto& t : doc.triples) {
        if (t.predicate == std::string(skos::ns::skos) + "prefLabel") {
            CHECK(t.object.value == "guillemets \"x\"\n");
            CHECK(t.object.lang == "fr");
        }
        if (t.predicate == std::string(skos::ns::skos) + "altLabel") ++alts;
    }
    CHECK(alts == 2);
    CHECK(doc.prefixes.at("ex") == "https://example.org/");
}

TEST_CASE("syntax errors carry line and column") {
    try {
        skos::parse_turtle(header + "ex:c skos:prefLabel \"open .\n");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.code() == ErrorCode::SyntaxError);
        CHECK(e.line() == 4);
        CHECK(e.column() >= 1);
    }
    CHECK_THROWS_AS(skos::parse_turtle("ex:c a skos:Concept ."), SyntaxError);
    CHECK_THROWS_AS(skos::parse_turtle(header + "[] a skos:Concept ."), SyntaxError);
    CHECK_THROWS_AS(skos::parse_turtle(header + "ex:c skos:notation 12 ."), SyntaxError);
}

TEST_CASE("graph building symmetrizes relations") {
    auto store = skos::to_graph(skos::parse_turtle(header + R"(
ex:s a skos:ConceptScheme ; dcterms:title "S" ; skos:hasTopConcept ex:a .
ex:a a skos:Concept ; skos:prefLabel "a"@fr ; skos:inScheme ex:s ; skos:related ex:c .
ex:b a skos:Concept ; skos:prefLabel "b"@fr ; skos:inScheme ex:s ; skos:broader ex:a .
ex:c a skos:Concept ; skos:prefLabel "c"@fr ; skos:inScheme ex:s .
)"));
    const ConceptId a("https://example.org/a"), b("https://example.org/b"), c("https://example.org/c");
    CHECK(store.concept_at(a).narrower.contains(b));
    CHECK(store.concept_at(c).related.contains(a));
}

TEST_CASE("graph errors") {
    auto build = [](const std::string& body) {
        try {
            skos::to_graph(skos::parse_turtle(header + body));
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    CHECK(build("ex:s a skos:ConceptScheme .\nex:a a skos:Concept ; skos:prefLabel \"a\"@fr ; skos:broader ex:zz .") ==
          ErrorCode::GraphError);
    CHECK(build("ex:s a skos:ConceptScheme .\n"
                "ex:a a skos:Concept ; skos:prefLabel \"a\"@fr ; skos:broader ex:b .\n"
                "ex:b a skos:Concept ; skos:prefLabel \"b\"@fr ; skos:broader ex:a .") == ErrorCode::GraphError);
    CHECK(build("ex:s a skos:ConceptScheme .\n"
                "ex:a a skos:Concept ; skos:prefLabel \"x\"@fr .\n"
                "ex:b a skos:Concept ; skos:prefLabel \"X\"@fr .") == ErrorCode::GraphError);
}

TEST_CASE("fixture round trip is byte identical") {
    auto store = load_fixtures({"bibracte.ttl"});
    auto once = skos::serialize_turtle(store);
    auto back = skos::to_graph(skos::parse_turtle(once), {Profile::Research});
    CHECK(skos::serialize_turtle(back) == once);
    CHECK(once.find("<https://ark.mom.fr/ark:/39676/bibxtjgnrpk5> a skos:Concept") != std::string::npos);
    CHECK(back.scheme(scheme_titled(back, "Bibracte_Thesaurus")).resolver_base == "https://ark.mom.fr/");
    CHECK(back.concepts() == store.concepts());
}

TEST_CASE("random graphs round trip through turtle") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        auto store = random_graph(rng, 1 + rng() % 60);
        auto once = skos::serialize_turtle(store);
        auto back = skos::to_graph(skos::parse_turtle(once), {store.schemes().begin()->second.profile});
        CHECK(skos::serialize_turtle(back) == once);
        CHECK(back.concepts() == store.concepts());
    }
}

TEST_CASE("parser survives mutated input") {
    auto base = skos::serialize_turtle(load_fixtures({"bibracte.ttl"}));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        std::string s = base.substr(0, rng() % base.size());
        for (int k = 0; k < 5; ++k)
            if (!s.empty()) s[rng() % s.size()] = static_cast<char>(rng() % 256);
        try {
            skos::to_graph(skos::parse_turtle(s));
        } catch (const Error&) {
        }
    }
    CHECK(true);
}

TEST_CASE("projection and merge") {
    auto store = load_fixtures({"bibracte.ttl", "pactols.ttl"});
    auto bib = scheme_titled(store, "Bibracte_Thesaurus");
    auto proj = skos::project_scheme(store, bib);
    CHECK(proj.schemes().size() == 1);
    CHECK(proj.concepts().size() == store.concepts_in(bib).size());
    Store again;
    skos::merge_graph(again, proj);
    CHECK(again.concepts() == proj.concepts());
    CHECK_THROWS_AS(skos::merge_graph(again, proj), Error);
}
