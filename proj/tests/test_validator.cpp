#include "pivotheso/validator.hpp"

#include "pivotheso/text.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace pivotheso;
using namespace testsupport;

namespace {

using Pair = std::pair<ConceptId, ConceptId>;

struct Corrupt {
    Store store;
    SchemeId scheme{"s"};
    std::vector<ConceptId> ids;
};

Corrupt corrupt_graph(std::mt19937_64& rng, std::size_t n) {
    Corrupt g;
    g.store.add_scheme(g.scheme, "S", Profile::Research);
    const std::vector<std::string> pool = {"alpha", "Alpha", "béta", "beta", "gamma", "delta", "[groupe]"};
    for (std::size_t i = 0; i < n; ++i) g.ids.emplace_back("c" + std::to_string(i));
    auto pick = [&] { return g.ids[rng() % n]; };
    for (std::size_t i = 0; i < n; ++i) {
        Concept c;
        c.id = g.ids[i];
        c.scheme = g.scheme;
        auto pref = pool[rng() % pool.size()] + (rng() % 2 ? "" : " " + std::to_string(i));
        c.pref_labels["fr"] = Label::make(pref);
        if (rng() % 4 == 0) c.alt_labels.push_back(Label::make(pool[rng() % pool.size()]));
        if (rng() % 3) c.definition = Definition{"def", rng() % 2 ? std::vector<std::string>{"src"} : std::vector<std::string>{}, {}};
        for (int k = rng() % 3; k > 0; --k) c.broader.insert(pick());
        for (int k = rng() % 3; k > 0; --k) c.narrower.insert(pick());
        for (int k = rng() % 2; k > 0; --k) c.related.insert(pick());
        if (rng() % 10 == 0) c.related.insert(ConceptId("dangling"));
        g.store.insert_concept(c);
    }
    for (std::size_t k = 0; k < n / 5 + 1; ++k) g.store.scheme_mut(g.scheme).top_concepts.insert(pick());
    return g;
}

std::set<Pair> pairs_of(const std::vector<Diagnostic>& ds, const std::string& rule) {
    std::set<Pair> out;
    for (const auto& d : ds)
        if (d.rule == rule) out.emplace(d.subjects.at(0), d.subjects.at(1));
    return out;
}

std::set<ConceptId> subjects_of(const std::vector<Diagnostic>& ds, const std::string& rule) {
    std::set<ConceptId> out;
    for (const auto& d : ds)
        if (d.rule == rule) out.insert(d.subjects.begin(), d.subjects.end());
    return out;
}

}  // namespace

TEST_CASE("validator agrees with a brute-force oracle on corrupted graphs") {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 200; ++iter) {
        auto g = corrupt_graph(rng, 2 + rng() % 25);
        const Store& s = g.store;
        auto ds = validator::validate(s, g.scheme);

        std::set<Pair> r4, r8, r5;
        std::set<ConceptId> r3, r6, r7;
        std::set<ConceptId> r1;
        for (const auto& a : g.ids) {
            const Concept& c = s.concept_at(a);
            for (const auto& r : c.related) {
                const Concept* o = s.find(r);
                if (!o || !o->related.contains(a)) r4.emplace(a, r);
            }
            for (const auto& b : c.broader) {
                const Concept* o = s.find(b);
                if (!o || !o->narrower.contains(a)) r8.emplace(a, b);
            }
            for (const auto& nn : c.narrower) {
                const Concept* o = s.find(nn);
                if (!o || !o->broader.contains(a)) r8.emplace(nn, a);
            }
            // cycle membership: a reaches itself through broader links
            std::set<ConceptId> seen;
            std::vector<ConceptId> stack(c.broader.begin(), c.broader.end());
            while (!stack.empty()) {
                auto x = stack.back();
                stack.pop_back();
                if (!seen.insert(x).second) continue;
                if (const Concept* xc = s.find(x)) stack.insert(stack.end(), xc->broader.begin(), xc->broader.end());
            }
            if (seen.contains(a)) r3.insert(a);
            for (const auto& r : c.related)
                if (s.find(r) && a < r && (seen.contains(r) || s.ancestors(r).contains(a))) r5.emplace(a, r);
            bool grouping = c.label().starts_with("[") && c.label().ends_with("]");
            if (!grouping && (!c.definition || c.definition->sources.empty())) r6.insert(a);
            bool reach = s.scheme(g.scheme).top_concepts.contains(a);
            for (const auto& x : seen)
                if (s.scheme(g.scheme).top_concepts.contains(x)) reach = true;
            if (!reach) r7.insert(a);
            for (const auto& b : g.ids)
                if (a != b && text::normalize_label(c.label()) == text::normalize_label(s.concept_at(b).label()))
                    r1.insert(a);
        }
        CHECK(pairs_of(ds, "R4") == r4);
        CHECK(pairs_of(ds, "R8") == r8);
        CHECK(pairs_of(ds, "R5") == r5);
        CHECK(subjects_of(ds, "R3") == r3);
        CHECK(subjects_of(ds, "R6") == r6);
        CHECK(subjects_of(ds, "R7") == r7);
        CHECK(subjects_of(ds, "R1") == r1);
        CHECK(validator::has_errors(ds) == !(r1.empty() && r3.empty() && r4.empty() && r5.empty() && r6.empty() && r8.empty()));
    }
}

TEST_CASE("profiles change R6 severity only") {
    auto store = load_fixtures({"pactols.ttl"}, Profile::Documentary);
    auto pac = scheme_titled(store, "PACTOLS 2");
    auto doc = validator::validate(store, pac, Profile::Documentary);
    auto res = validator::validate(store, pac, Profile::Research);
    REQUIRE(doc.size() == res.size());
    bool saw_r6 = false;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        CHECK(doc[i].rule == res[i].rule);
        if (doc[i].rule == "R6") {
            saw_r6 = true;
            CHECK(doc[i].severity == Severity::Warning);
            CHECK(res[i].severity == Severity::Error);
        }
    }
    CHECK(saw_r6);
}

TEST_CASE("fixture is clean under the research profile") {
    auto store = load_fixtures({"bibracte.ttl"});
    auto ds = validator::validate(store, scheme_titled(store, "Bibracte_Thesaurus"), Profile::Research);
    CHECK_FALSE(validator::has_errors(ds));
}

TEST_CASE("explain") {
    for (int i = 1; i <= 8; ++i) CHECK(validator::explain("R" + std::to_string(i)).rfind("R" + std::to_string(i), 0) == 0);
    CHECK_THROWS_AS(validator::explain("R9"), Error);
}

TEST_CASE("diagnostic rendering") {
    Diagnostic d{"R4", Severity::Error, {ConceptId("a"), ConceptId("b")}, "msg"};
    CHECK(render_json_line(d).find("\"rule\":\"R4\"") != std::string::npos);
    CHECK(render_text(d).find("R4") != std::string::npos);
}
