#include "pivotheso/aligner.hpp"

#include "pivotheso/text.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace pivotheso;
using namespace testsupport;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

struct Fixture {
    Store store = load_fixtures({"bibracte.ttl", "pactols.ttl"});
    SchemeId bib = scheme_titled(store, "Bibracte_Thesaurus");
    SchemeId pac = scheme_titled(store, "PACTOLS 2");
    ConceptId p_assiette = by_label(store, "assiette");
    ConceptId p_campa = by_label(store, "céramique campanienne A");
    ConceptId p_vaisselle = by_label(store, "vaisselle");
};

std::vector<std::set<std::string>> label_token_sets(const Concept& c) {
    std::vector<std::string> labels;
    for (const auto& [lang, l] : c.pref_labels) labels.push_back(l.text);
    for (const auto& l : c.alt_labels) labels.push_back(l.text);
    std::vector<std::set<std::string>> out;
    for (const auto& l : labels) {
        auto toks = text::content_tokens(text::strip_grouping_brackets(text::strip_source_suffix(l)));
        out.emplace_back(toks.begin(), toks.end());
    }
    return out;
}

// Best label-pair Jaccard as a reduced fraction, by explicit set algebra.
std::pair<std::size_t, std::size_t> oracle_jaccard(const Concept& a, const Concept& b) {
    std::pair<std::size_t, std::size_t> best{0, 1};
    for (const auto& x : label_token_sets(a)) {
        for (const auto& y : label_token_sets(b)) {
            std::set<std::string> inter, uni;
            std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::inserter(inter, inter.end()));
            std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::inserter(uni, uni.end()));
            if (uni.empty()) continue;
            if (inter.size() * best.second > best.first * uni.size()) best = {inter.size(), uni.size()};
        }
    }
    return best;
}

}  // namespace

TEST_CASE("jaccard counts") {
    using V = std::vector<std::string>;
    CHECK(aligner::jaccard_counts(V{"a", "b", "c"}, V{"b", "c", "d"}) == std::pair<std::size_t, std::size_t>{2, 4});
    CHECK(aligner::jaccard(V{}, V{}) == 0.0);
    CHECK(aligner::jaccard(V{"a"}, V{"a"}) == 1.0);
}

TEST_CASE("tier 3 scores match the token-set oracle on every pair") {
    Fixture f;
    auto cands = aligner::suggest_mappings(f.store, f.bib, f.pac, 0.0);
    std::map<std::pair<ConceptId, ConceptId>, aligner::SuggestionCandidate> by_pair;
    for (const auto& c : cands) by_pair.emplace(std::make_pair(c.source, c.target), c);
    std::size_t checked = 0;
    for (const auto& s : f.store.concepts_in(f.bib)) {
        for (const auto& t : f.store.concepts_in(f.pac)) {
            if (aligner::is_chronology(f.store, s) != aligner::is_chronology(f.store, t)) {
                CHECK_FALSE(by_pair.contains({s, t}));
                continue;
            }
            auto it = by_pair.find({s, t});
            if (it != by_pair.end() && it->second.tier != aligner::Tier::TokenOverlap) continue;
            auto [num, den] = oracle_jaccard(f.store.concept_at(s), f.store.concept_at(t));
            if (num == 0) {
                CHECK(it == by_pair.end());
                continue;
            }
            REQUIRE(it != by_pair.end());
            CHECK(it->second.overlap * den == num * it->second.union_size);
            ++checked;
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("alignment verdicts on the fixture") {
    Fixture f;
    auto cands = aligner::suggest_mappings(f.store, f.bib, f.pac);
    auto for_source = [&](const ConceptId& s) {
        std::vector<aligner::SuggestionCandidate> v;
        for (const auto& c : cands)
            if (c.source == s) v.push_back(c);
        return v;
    };
    auto assiette = for_source(assiette_id);
    REQUIRE_FALSE(assiette.empty());
    CHECK(assiette[0].target == f.p_assiette);
    CHECK(assiette[0].tier == aligner::Tier::ExactStripped);
    CHECK(assiette[0].recommended == MatchType::Broad);

    auto campa = for_source(campa_id);
    REQUIRE_FALSE(campa.empty());
    CHECK(campa[0].target == f.p_campa);
    CHECK(campa[0].tier == aligner::Tier::TokenOverlap);
    CHECK(campa[0].overlap == 3);
    CHECK(campa[0].union_size == 5);

    for (const auto& c : for_source(a15_id)) CHECK(c.tier == aligner::Tier::TokenOverlap);
    for (const auto& c : cands) CHECK(c.score >= aligner::default_min_score);
}

TEST_CASE("exact recommendation needs similar definitions") {
    Store store;
    store.add_scheme(SchemeId("a"), "A", Profile::Research);
    store.add_scheme(SchemeId("b"), "B", Profile::Research);
    Definition d{"récipient ouvert à parois évasées", {"x"}, {}};
    auto x = store.add_concept(SchemeId("a"), Label::make("Plat"), d);
    auto y = store.add_concept(SchemeId("b"), Label::make("plat"), d);
    auto z = store.add_concept(SchemeId("b"), Label::make("Plat (AUTEUR 1999)"));
    auto cands = aligner::suggest_mappings(store, SchemeId("a"), SchemeId("b"));
    REQUIRE(cands.size() == 2);
    CHECK(cands[0].target == y);
    CHECK(cands[0].tier == aligner::Tier::ExactNormalized);
    CHECK(cands[0].recommended == MatchType::Exact);
    CHECK(cands[1].target == z);
    CHECK(cands[1].recommended == MatchType::Broad);
    CHECK(cands[0].source == x);
}

TEST_CASE("suggestions skip decided pairs and reuse pending ids") {
    Fixture f;
    auto first = aligner::suggest_mappings(f.store, f.bib, f.pac);
    auto ids = aligner::record_suggestions(f.store, first);
    auto again = aligner::record_suggestions(f.store, first);
    CHECK(ids == again);
    CHECK(ids.front().str() == "m000001");

    MappingId reject_me;
    for (std::size_t i = 0; i < first.size(); ++i)
        if (first[i].source == campa_id) reject_me = ids[i];
    aligner::decide(f.store, reject_me, aligner::Decision::Reject);
    for (const auto& c : aligner::suggest_mappings(f.store, f.bib, f.pac))
        CHECK_FALSE((c.source == campa_id && c.target == f.p_campa));
    CHECK(code_of([&] { aligner::decide(f.store, reject_me, aligner::Decision::Accept); }) ==
          ErrorCode::AlreadyDecided);
}

TEST_CASE("accepting a suggestion materializes the inverse") {
    Fixture f;
    auto cands = aligner::suggest_mappings(f.store, f.bib, f.pac);
    auto ids = aligner::record_suggestions(f.store, cands);
    MappingId target;
    for (std::size_t i = 0; i < cands.size(); ++i)
        if (cands[i].source == assiette_id && cands[i].target == f.p_assiette) target = ids[i];
    auto m = aligner::decide(f.store, target, aligner::Decision::Accept);
    CHECK(m.status == MappingStatus::Accepted);
    CHECK(m.match_type == MatchType::Broad);
    bool inverse = false;
    for (const auto& [id, x] : f.store.mappings())
        if (x.source == f.p_assiette && x.target == assiette_id && x.match_type == MatchType::Narrow &&
            x.status == MappingStatus::Accepted)
            inverse = true;
    CHECK(inverse);
    CHECK(aligner::check_mappings(f.store).empty());
    for (const auto& c : aligner::suggest_mappings(f.store, f.bib, f.pac))
        CHECK_FALSE((c.source == assiette_id && c.target == f.p_assiette));
}

TEST_CASE("add_mapping guards") {
    Fixture f;
    CHECK(code_of([&] { aligner::add_mapping(f.store, assiette_id, a15_id, MatchType::Exact); }) == ErrorCode::SameScheme);
    auto [fw, inv] = aligner::add_mapping(f.store, assiette_id, f.p_assiette, MatchType::Broad);
    CHECK(inv.match_type == MatchType::Narrow);
    CHECK(inv.rationale == "inverse of " + fw.id.str());
    CHECK(code_of([&] { aligner::add_mapping(f.store, assiette_id, f.p_assiette, MatchType::Broad); }) ==
          ErrorCode::DuplicateAccepted);
    CHECK(code_of([&] { aligner::add_mapping(f.store, assiette_id, f.p_assiette, MatchType::Exact); }) ==
          ErrorCode::ConflictingType);
    CHECK(code_of([&] { aligner::add_mapping(f.store, f.p_assiette, assiette_id, MatchType::Broad); }) ==
          ErrorCode::ConflictingType);
    auto [r1, r2] = aligner::add_mapping(f.store, a15_id, f.p_assiette, MatchType::Related);
    CHECK(r2.match_type == MatchType::Related);
}

TEST_CASE("mapping checks M1 to M4") {
    Fixture f;
    auto rules = [&] {
        std::set<std::string> out;
        for (const auto& d : aligner::check_mappings(f.store)) out.insert(d.rule);
        return out;
    };
    Mapping m;
    m.id = f.store.next_mapping_id();
    m.source = assiette_id;
    m.target = f.p_assiette;
    m.match_type = MatchType::Broad;
    m.status = MappingStatus::Accepted;
    f.store.put_mapping(m);
    CHECK(rules() == std::set<std::string>{"M2"});

    m.id = f.store.next_mapping_id();
    m.match_type = MatchType::Exact;
    f.store.put_mapping(m);
    CHECK(rules().contains("M1"));

    m.id = f.store.next_mapping_id();
    m.target = f.p_vaisselle;
    f.store.put_mapping(m);
    CHECK(rules().contains("M3"));

    f.store.remove_concept(f.p_vaisselle);
    CHECK(rules().contains("M4"));
}

TEST_CASE("grouping concept creation") {
    Fixture f;
    auto a = by_label(f.store, "céramique campanienne A");
    auto b = by_label(f.store, "céramique à pâte grise");
    auto parent = by_label(f.store, "céramique (matériau)");
    Store before = f.store;
    CHECK(code_of([&] {
              aligner::create_grouping_concept(f.store, f.pac, "céramique tournée", {a, ConceptId("nope")}, parent);
          }) == ErrorCode::UnknownMember);
    CHECK(f.store == before);
    auto g = aligner::create_grouping_concept(f.store, f.pac, "céramique tournée", {a, b}, parent);
    const auto& gc = f.store.concept_at(g);
    CHECK(gc.label() == "[céramique tournée]");
    CHECK(gc.is_grouping());
    CHECK(gc.narrower == std::set<ConceptId>{a, b});
    CHECK(gc.broader == std::set<ConceptId>{parent});
    CHECK(f.store.concept_at(a).broader.contains(g));
    CHECK_FALSE(validator::has_errors(validator::validate(f.store, f.pac, Profile::Documentary)));
}

TEST_CASE("chronology detection") {
    Fixture f;
    CHECK(aligner::is_chronology(f.store, etape1_id));
    CHECK_FALSE(aligner::is_chronology(f.store, a15_id));
}

TEST_CASE("suggestions csv") {
    Fixture f;
    auto csv = aligner::suggestions_csv(f.store, aligner::suggest_mappings(f.store, f.bib, f.pac));
    CHECK(csv.rfind("source_ark,source_label,target_ark,target_label,tier,score,recommended_type\n", 0) == 0);
    CHECK(csv.find("TokenOverlap,0.6,") != std::string::npos);
    CHECK(aligner::format_score(0.95) == "0.95");
}
