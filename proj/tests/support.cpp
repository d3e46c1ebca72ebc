#include "support.hpp"

#include "pivotheso/cli.hpp"
#include "pivotheso/csv.hpp"
#include "pivotheso/referential.hpp"
#include "pivotheso/text.hpp"
#include "pivotheso/workspace.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace testsupport {

std::filesystem::path fixture_path(std::string_view name) {
    return std::filesystem::path(PIVOTHESO_FIXTURE_DIR) / std::string(name);
}

std::string fixture_text(std::string_view name) { return read_file(fixture_path(name)); }

Store load_fixtures(const std::vector<std::string>& names, Profile profile) {
    Store store;
    for (const auto& n : names) import_turtle(store, fixture_text(n), profile);
    return store;
}

SchemeId scheme_titled(const Store& store, std::string_view title) {
    for (const auto& [id, s] : store.schemes())
        if (s.title == title) return id;
    throw std::runtime_error("no scheme titled " + std::string(title));
}

ConceptId by_label(const Store& store, std::string_view pref_label) {
    for (const auto& [id, c] : store.concepts())
        if (c.label() == pref_label) return id;
    throw std::runtime_error("no concept labelled " + std::string(pref_label));
}

ReferentialId register_bibracte(Store& store) {
    referential::RegisterRequest req;
    req.scheme = scheme_titled(store, "Bibracte_Thesaurus");
    req.root = referential_root_id;
    req.biblio_key = "Barrier, Luginbühl 2021";
    req.millesime = 2021;
    req.id = ReferentialId("bl2021");
    return referential::register_referential(store, req).id;
}

namespace {

const std::vector<std::string> words = {
    "céramique", "assiette", "vase", "bobine", "pâte", "grise", "lissée", "tournée", "œuvre", "Étape",
    "noir", "vernis", "campanienne", "\"quoted\"", "back\\slash", "tab\there", "A15", "fumigée", "ÇA", "ﬁne",
};

std::string random_text(std::mt19937_64& rng, std::size_t max_words) {
    std::uniform_int_distribution<std::size_t> count(1, max_words);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::string s;
    for (std::size_t i = 0, n = count(rng); i < n; ++i) {
        if (i) s += ' ';
        s += words[pick(rng)];
    }
    return s;
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace

Store random_graph(std::mt19937_64& rng, std::size_t n) {
    Store store;
    const SchemeId scheme("https://example.org/random/scheme");
    store.add_scheme(scheme, random_text(rng, 3), chance(rng, 0.5) ? Profile::Research : Profile::Documentary);
    std::vector<ConceptId> ids;
    for (std::size_t i = 0; i < n; ++i) {
        std::optional<Definition> def;
        if (chance(rng, 0.7)) {
            Definition d;
            d.text = random_text(rng, 8) + "\nline two";
            if (chance(rng, 0.8)) d.sources.push_back(random_text(rng, 2) + " 2021");
            if (chance(rng, 0.2)) d.external_resources.push_back("https://example.org/res/" + std::to_string(i));
            def = d;
        }
        auto label = random_text(rng, 3) + " " + std::to_string(i);
        auto lang = chance(rng, 0.9) ? std::string("fr") : std::string("en");
        ids.push_back(store.add_concept(scheme, Label::make(label, lang), def));
        if (chance(rng, 0.3)) store.add_alt_label(ids.back(), Label::make(random_text(rng, 2) + " alt " + std::to_string(i)));
        if (i > 0 && chance(rng, 0.85)) {
            std::uniform_int_distribution<std::size_t> parent(0, i - 1);
            store.add_hierarchical_relation(ids[parent(rng)], ids.back());
            if (i > 1 && chance(rng, 0.1)) {
                auto p2 = ids[parent(rng)];
                try {
                    store.add_hierarchical_relation(p2, ids.back());
                } catch (const Error&) {
                }
            }
        } else {
            store.set_top_concept(scheme, ids.back(), true);
        }
    }
    if (n > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t k = 0; k < n / 3; ++k) {
            try {
                store.add_associative_relation(ids[pick(rng)], ids[pick(rng)]);
            } catch (const Error&) {
            }
        }
    }
    return store;
}

void random_edits(Store& store, std::mt19937_64& rng, std::size_t steps) {
    auto live = [&] {
        std::vector<ConceptId> v;
        for (const auto& [id, c] : store.concepts()) v.push_back(id);
        return v;
    };
    const SchemeId scheme = store.schemes().begin()->first;
    std::uniform_int_distribution<int> op(0, 7);
    for (std::size_t s = 0; s < steps; ++s) {
        auto ids = live();
        if (ids.empty()) {
            store.add_concept(scheme, Label::make("seed " + std::to_string(s)));
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
        const auto& a = ids[pick(rng)];
        const auto& b = ids[pick(rng)];
        try {
            switch (op(rng)) {
                case 0: store.add_hierarchical_relation(a, b); break;
                case 1: store.remove_hierarchical_relation(a, b); break;
                case 2: store.add_associative_relation(a, b); break;
                case 3: store.remove_associative_relation(a, b); break;
                case 4:
                    if (ids.size() < 500) store.add_concept(scheme, Label::make(random_text(rng, 3) + " e" + std::to_string(s)));
                    break;
                case 5: store.remove_concept(a); break;
                case 6: store.add_alt_label(a, Label::make(random_text(rng, 2))); break;
                case 7: store.set_top_concept(scheme, a, store.concept_at(a).broader.empty()); break;
            }
        } catch (const Error&) {
        }
    }
}

TempDir::TempDir() {
    std::string templ = (std::filesystem::temp_directory_path() / "pivotheso-test-XXXXXX").string();
    if (!::mkdtemp(templ.data())) throw std::runtime_error("mkdtemp failed");
    path_ = templ;
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliResult r;
    r.code = cli_dispatch(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

}  // namespace testsupport

namespace testsupport {
namespace {

struct RoleSets {
    std::set<ConceptId> forme, type, categorie, periode, type_tree;
};

std::set<ConceptId> under(const Store& store, const ConceptId& root) {
    std::set<ConceptId> seen;
    std::vector<ConceptId> stack{root};
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        if (!seen.insert(x).second) continue;
        for (const auto& n : store.concept_at(x).narrower) stack.push_back(n);
    }
    return seen;
}

std::set<ConceptId> leaves(const Store& store, const std::set<ConceptId>& tree, const ConceptId& root) {
    std::set<ConceptId> out;
    for (const auto& c : tree) {
        const auto& x = store.concept_at(c);
        if (c == root || !x.narrower.empty() || x.label().starts_with("[") || x.label().starts_with("types ")) continue;
        out.insert(c);
    }
    return out;
}

RoleSets role_sets(const Store& store) {
    const std::string bl = " (BARRIER, LUGINBÜHL 2021)";
    RoleSets r;
    auto f = by_label(store, "formes" + bl);
    auto t = by_label(store, "types" + bl);
    auto c = by_label(store, "catégories" + bl);
    auto p = by_label(store, "périodisation BARRIER, LUGINBÜHL 2021");
    r.forme = leaves(store, under(store, f), f);
    r.type_tree = under(store, t);
    r.type = leaves(store, r.type_tree, t);
    r.categorie = leaves(store, under(store, c), c);
    r.periode = leaves(store, under(store, p), p);
    return r;
}

std::optional<ErrorCode> expected_code(const Store& store, const RoleSets& sets, const std::vector<ConceptId>& ids) {
    const std::set<ConceptId>* roles[] = {&sets.forme, &sets.type, &sets.categorie, &sets.periode};
    for (int i = 0; i < 4; ++i)
        if (!roles[i]->contains(ids[i])) return ErrorCode::NotInReferential;
    const auto& forme = store.concept_at(ids[0]);
    bool form_ok = false;
    std::vector<ConceptId> stack(store.concept_at(ids[1]).broader.begin(), store.concept_at(ids[1]).broader.end());
    while (!stack.empty()) {
        auto g = stack.back();
        stack.pop_back();
        if (forme.related.contains(g) && sets.type_tree.contains(g)) form_ok = true;
        for (const auto& b : store.concept_at(g).broader) stack.push_back(b);
    }
    if (!form_ok) return ErrorCode::FormTypeMismatch;
    if (!store.concept_at(ids[1]).related.contains(ids[2])) return ErrorCode::IncompatibleTypeCategory;
    return std::nullopt;
}

}  // namespace

SyntheticInventory synthetic_inventory(const Store& store, std::mt19937_64& rng, std::size_t rows) {
    const RoleSets sets = role_sets(store);
    auto vec = [](const std::set<ConceptId>& s) { return std::vector<ConceptId>(s.begin(), s.end()); };
    const std::vector<std::vector<ConceptId>> pools = {vec(sets.forme), vec(sets.type), vec(sets.categorie),
                                                       vec(sets.periode)};
    std::vector<ConceptId> everything;
    for (const auto& [id, c] : store.concepts()) everything.push_back(id);
    std::string resolver_base = store.scheme(store.concept_at(pools[0][0]).scheme).resolver_base;

    SyntheticInventory inv;
    inv.csv = "artifact_id,forme,type,categorie,chronologie\n";
    for (std::size_t row = 1; row <= rows; ++row) {
        const std::string artifact = "INV-" + std::to_string(100000 + row);
        const auto kind = rng() % 100;
        if (kind < 3) {
            inv.csv += "\n";
            continue;
        }
        if (kind < 7) {
            inv.csv += artifact + ",x,y\n";
            inv.expected_rejects.emplace_back(row, ErrorCode::MalformedRow);
            continue;
        }
        std::vector<ConceptId> ids(4);
        // Valid-looking rows draw a type, then a related categorie and a forme
        // tied to the type's group, so most of them pass.
        ids[1] = pools[1][rng() % pools[1].size()];
        const auto& type = store.concept_at(ids[1]);
        std::vector<ConceptId> cats, formes;
        for (const auto& r : type.related)
            if (sets.categorie.contains(r)) cats.push_back(r);
        for (const auto& f : pools[0])
            if (!expected_code(store, sets, {f, ids[1], cats.empty() ? pools[2][0] : cats[0], pools[3][0]}) ||
                expected_code(store, sets, {f, ids[1], cats.empty() ? pools[2][0] : cats[0], pools[3][0]}) ==
                    ErrorCode::IncompatibleTypeCategory)
                formes.push_back(f);
        ids[0] = formes.empty() || rng() % 10 == 0 ? pools[0][rng() % pools[0].size()] : formes[rng() % formes.size()];
        ids[2] = cats.empty() || rng() % 8 == 0 ? pools[2][rng() % pools[2].size()] : cats[rng() % cats.size()];
        ids[3] = pools[3][rng() % pools[3].size()];
        if (rng() % 15 == 0) ids[rng() % 4] = everything[rng() % everything.size()];

        std::vector<std::string> cells{artifact};
        bool garbage = false, empty_cell = false;
        for (int i = 0; i < 4; ++i) {
            const auto& c = store.concept_at(ids[i]);
            switch (rng() % 6) {
                case 0: cells.push_back(ids[i].str()); break;
                case 1: cells.push_back(resolver_base + ids[i].str()); break;
                case 2: cells.push_back(c.label()); break;
                case 3: {
                    std::string up;
                    for (char ch : c.label()) up += static_cast<char>(ch >= 'a' && ch <= 'z' ? ch - 32 : ch);
                    cells.push_back("  " + up + " ");
                    break;
                }
                case 4: cells.push_back(ids[i].str()); break;
                default:
                    if (rng() % 4 == 0) {
                        cells.push_back("inconnu " + std::to_string(row));
                        if (!empty_cell) garbage = true;
                    } else if (rng() % 3 == 0 && !garbage) {
                        cells.push_back("");
                        empty_cell = true;
                    } else {
                        cells.push_back(ids[i].str());
                    }
            }
            if (garbage || empty_cell) {
                while (cells.size() < 5) cells.push_back(ids[cells.size() - 1].str());
                break;
            }
        }
        bool blank_id = rng() % 50 == 0;
        if (blank_id) cells[0] = " ";

        std::optional<ErrorCode> code;
        if (blank_id) {
            code = ErrorCode::MalformedRow;
        } else {
            // the first failing cell decides, in column order
            for (int i = 0; i < 4 && !code; ++i) {
                const std::string& cell = cells[i + 1];
                if (cell.empty()) {
                    code = ErrorCode::MalformedRow;
                } else if (cell.starts_with("inconnu")) {
                    code = ErrorCode::NotInReferential;
                } else {
                    const std::set<ConceptId>* roles[] = {&sets.forme, &sets.type, &sets.categorie, &sets.periode};
                    if (!roles[i]->contains(ids[i])) code = ErrorCode::NotInReferential;
                }
            }
            if (!code) code = expected_code(store, sets, ids);
        }
        inv.csv += csv::format_row(cells);
        if (code) {
            inv.expected_rejects.emplace_back(row, *code);
        } else {
            inv.expected_stored.push_back(artifact);
        }
    }
    return inv;
}

}  // namespace testsupport
