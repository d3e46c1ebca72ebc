#!/usr/bin/env python3
"""Writes the Turtle fixtures used by the tests and the acceptance run.

bibracte.ttl       the five documented concepts of the Bibracte thesaurus
                   with every neighbour they name and the structural nodes
                   of their access paths
bibracte_full.ttl  the same, padded with synthetic catégories, formes and
                   types up to the published referential sizes
pactols.ttl        a small documentary subject thesaurus for alignment

Output is deterministic. Run from anywhere: python3 fixtures/generate_fixtures.py
"""

import hashlib
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent

ALPHABET = "0123456789abcdefghjkmnpqrstvwxyz"
RESOLVER = "https://ark.mom.fr/"
NAAN = "39676"
SCHEME_ARK = f"ark:/{NAAN}/srvtxcg5zrhv8"
BL = " (BARRIER, LUGINBÜHL 2021)"
SRC = "Barrier, Luginbühl 2021"

N_CATEGORIES = 53
N_FORMES = 25
N_TYPES = 423


def ark_for(label):
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    body = "".join(ALPHABET[b % 32] for b in digest[:10])
    return f"ark:/{NAAN}/bib{body}"


class Thesaurus:
    def __init__(self, iri, title):
        self.iri = iri
        self.title = title
        self.concepts = {}  # label -> dict
        self.order = []

    def add(self, label, parent=None, ark=None, definition=None, sources=(), see_also=(), alt=(), top=False):
        assert label not in self.concepts, label
        self.concepts[label] = {
            "iri": ark if ark and ark.startswith("http") else RESOLVER + (ark or ark_for(label)),
            "alt": list(alt),
            "definition": definition,
            "sources": list(sources),
            "see_also": list(see_also),
            "broader": [],
            "narrower": [],
            "related": [],
            "top": top,
        }
        self.order.append(label)
        if parent is not None:
            self.link(parent, label)
        return label

    def link(self, parent, child):
        self.concepts[child]["broader"].append(parent)
        self.concepts[parent]["narrower"].append(child)

    def relate(self, a, b):
        if b not in self.concepts[a]["related"]:
            self.concepts[a]["related"].append(b)
        if a not in self.concepts[b]["related"]:
            self.concepts[b]["related"].append(a)

    def turtle(self):
        out = [
            "@prefix dcterms: <http://purl.org/dc/terms/> .",
            "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .",
            "@prefix skos: <http://www.w3.org/2004/02/skos/core#> .",
            "",
            f"<{self.iri}> a skos:ConceptScheme ;",
            f"    skos:prefLabel {lit(self.title)} .",
            "",
        ]
        for label in self.order:
            c = self.concepts[label]
            lines = [f"<{c['iri']}> a skos:Concept", f"skos:prefLabel {lit(label, 'fr')}"]
            for a in c["alt"]:
                lines.append(f"skos:altLabel {lit(a, 'fr')}")
            if c["definition"] is not None:
                lines.append(f"skos:definition {lit(c['definition'])}")
            for s in c["sources"]:
                lines.append(f"dcterms:source {lit(s)}")
            for s in c["see_also"]:
                lines.append(f"rdfs:seeAlso <{s}>")
            lines.append(f"skos:inScheme <{self.iri}>")
            if c["top"]:
                lines.append(f"skos:topConceptOf <{self.iri}>")
            for key in ("broader", "narrower", "related"):
                for other in c[key]:
                    lines.append(f"skos:{key} <{self.concepts[other]['iri']}>")
            out.append(" ;\n    ".join(lines) + " .\n")
        return "\n".join(out)


def lit(text, lang=None):
    esc = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{esc}"@{lang}' if lang else f'"{esc}"'


def structural(label):
    return f"Nœud de structure du thésaurus regroupant les concepts « {label} »."


# Definitions quoted in the documentation of the five concepts.
DEF_ASSIETTE = (
    "Forme basse, ouverte, de hauteur inférieure au quart du diamètre. Diamètre compris entre 15 et 25 cm. "
    "Pied annulaire. Catégories : importations, céramiques de tradition méditerranéenne et céramiques fines "
    "régionales. Origine culturelle : méditerranéenne. Fonctions présumées : servir et présenter les aliments."
)
DEF_A15 = (
    "Plat à paroi concave, lèvre arrondie épaissie en bandeau. Imitation de R-Pomp 1 (plat à engobe interne "
    "italien)."
)
DEF_PGFINLF = (
    "Céramique à pâte grise fine et surface lissée fumigée. Surface : Parois lissées, assez ou peu luisantes "
    "(sauf intérieur des formes fermées), gris foncé ou noirs. Types de décors variés (imprimés, imprimés à la "
    "molette, polis). Pâte : Siliceuse, fine, dure, gris moyen. Montage : Tournage et tournassage. Répertoire : "
    "Vaisselle de table et de stockage d'appoint. Assiettes, plats, écuelles, coupes, bols, gobelets, pots, "
    "bouteilles, tonnelets, rares cruches. Origine : Régionale. Chronologie : Production probable dès avant 120 "
    "av. n. è. jusqu'au début du Ier s. de n. è."
)
DEF_ETAPE1 = (
    "Marqueurs de la céramique :\n"
    "- Importations méditerranéennes principalement représentées par des campaniennes A et B, ainsi que des "
    "gobelets italiens à parois fines (Mayet I et II). Rares bols hellénistiques à reliefs.\n"
    "- Productions d'influence méditerranéenne constituées de cruches à col large (Gaule méridionale ou "
    "rhodanienne) et d'imitations de pichets de type ampuritan (Auvergne septentrionale ?).\n"
    "- Faciès des fines régionales caractérisé par des bouteilles peintes à fond blanc et décor de cervidés, des "
    "tonnelets peints à fond lie-de-vin, parfois orné de pastilles en réserve, ainsi que des productions "
    "« grises fines » diversifiées (groupes à surface brune, à cœur rouge, à surface lustrée et à surface lissée "
    "fumigée).\n"
    "- Productions mi-fines encore rares (proportions aux alentours de 10 %), alors que les grossières "
    "constituent entre environ 40 % et 50 % des ensembles."
)
DEF_REFERENTIEL = (
    "Ce référentiel est dérivé de la publication suivante : BARRIER (S.), LUGINBÜHL (T.), BARRAL (P.) coll. — "
    "La vaisselle céramique de Bibracte. De l'identification à l'analyse. Glux-en-Glenne : Bibracte, 2021. "
    "(Bibracte, 31 ; ISSN : 1281-430X ; ISBN : 978-2-490601-07-3), 318 pages, 177 illustrations.\n\n"
    "Premier élément date et référence bibliographique : Barrier, Luginbühl 2021 : Barrier (S.), Luginbühl (T.) "
    "— La vaisselle céramique de Bibracte. De l'identification à l'analyse. Glux-en-Glenne : Bibracte, 2021. "
    "318 p., 177 ill. (Bibracte ; 31).\n\n"
    "Mots-clés de l'ouvrage (termes sélectionnés sur PACTOLS 2, thésaurus accessible en 2022) : Celtes ; "
    "Eduens ; Bibracte ; céramique (matériau) ; vaisselle ; La Tène ; IIe siècle av. J.-C. ; "
    "1er siècle av. J.-C. ; 1er siècle ; récipient ; vie quotidienne ; alimentation ; artisanat"
)
DEF_CAMPA = (
    "Céramique à vernis noir campanienne A. Surface : Vernis noir, luisant (parfois légèrement métallescent), "
    "adhérent bien. Pâte : Calcaire, fine, dure, rose saumon. Montage : Tournage et tournassage. Répertoire : "
    "Vaisselle de table. Assiettes, plats, coupes et bols principalement. Origine : Campanie. Chronologie : "
    "Catégorie surtout caractéristique du IIe s. av. n. è., dont la production chute dès le début du siècle "
    "suivant."
)

NAKALA = "https://api.nakala.fr/data/10.34847/nkl.89b20d19/"

ETAPE1_CATEGORIES = [
    "CAMPA", "CAMPB", "MICACB", "MICACBCN", "MICACFIN", "MICACG", "MICACGCN", "MODGROS", "PARFINA",
    "PARFINC", "PCCRUC", "PCCRUCENG", "PCGROS", "PCGROSCN", "PCLUSTR", "PCMIFIN", "PEINTA", "PEINTB",
    "PEINTC", "PGCAT", "PGFINLF", "PGLUSTR", "PGMIFIN", "PSFINA", "PSFINB", "PSGROS", "VRHELLEN",
]
PGFINLF_TYPES = ["A1", "A10", "A10a", "A10b", "A11", "A11a", "A11b", "A15"]

ETAPE1 = "Étape 1 céramique : 120/110 à 90/80 av. n.è." + BL


def bibracte():
    t = Thesaurus(RESOLVER + SCHEME_ARK, "Bibracte_Thesaurus")
    s = lambda label, parent, top=False: t.add(label, parent, definition=structural(label), sources=["Bibracte_Thesaurus"], top=top)

    root = s("Bibracte_Thesaurus", None, top=True)
    mob = s("3 - mobilier", root)
    art = s("artefacts", mob)
    cer = s("céramique (mobilier)", art)
    rec = s("récipients en céramique", cer)
    cpo = s("céramique période oppidum", rec)
    vpo = s("vaisselle période oppidum", cpo)
    vais = s("vaisselle" + BL, vpo)
    formes = s("formes" + BL, vais)
    types = s("types" + BL, vais)
    cats = s("catégories" + BL, vais)
    ct = s("céramique tournée" + BL, cats)
    ctl = s("céramique tournée lissée" + BL, ct)
    ctlg = s("céramique tournée lissée à pâte sombre/grise" + BL, ctl)
    chrono = s("4 - chronologie", root)
    perio = s("périodisation BARRIER, LUGINBÜHL 2021", chrono)
    refs = s("5 - référentiels", root)

    assiette = t.add("assiette" + BL, formes, ark=f"ark:/{NAAN}/bib25gwqwnprh", definition=DEF_ASSIETTE,
                     sources=[SRC], see_also=[NAKALA + "db80f98eb18efa07e04bc7287de8926fa5e8cca9"])
    types_assiettes = s("types assiettes" + BL, types)
    t.relate(assiette, types_assiettes)
    types_tonnelets = s("types tonnelets" + BL, types)
    types_bobine = s("types vases bobine" + BL, types)

    type_labels = {}
    for code in PGFINLF_TYPES:
        label = f"assiette {code}" + BL
        if code == "A15":
            t.add(label, types_assiettes, ark=f"ark:/{NAAN}/bibxtjgnrpk5", definition=DEF_A15, sources=[SRC],
                  see_also=[NAKALA + "b6f784626ed44f0443a5fa62e78b7759a0b1a4f6"],
                  alt=["A15", "plat A15", "plat à paroi concave et lèvre arrondie épaissie en bandeau"])
        else:
            t.add(label, types_assiettes, definition=f"Type d'assiette {code} du répertoire des formes de Bibracte.",
                  sources=[SRC])
        type_labels[code] = label

    cat_labels = {}
    for code in ETAPE1_CATEGORIES + ["EIRA", "PGFINTN"]:
        label = code + BL
        if code == "PGFINLF":
            t.add(label, ctlg, ark=f"ark:/{NAAN}/bibrbqbp0019d", definition=DEF_PGFINLF, sources=[SRC],
                  see_also=[NAKALA + "07095a124e9f88122f9b4b064a7c728fd580cf45",
                            NAKALA + "1aece1d1e44acbbb6de6d17aebe1cb7131eb0d7e"],
                  alt=["céramique à pâte grise fine et surface lissée fumigée"])
        elif code == "PGFINTN":
            t.add(label, ctlg, definition=f"Catégorie céramique {code} du référentiel de Bibracte.", sources=[SRC])
        elif code == "CAMPA":
            t.add(label, cats, definition=DEF_CAMPA, sources=[SRC], alt=["céramique à vernis noir campanienne A"])
        else:
            t.add(label, cats, definition=f"Catégorie céramique {code} du référentiel de Bibracte.", sources=[SRC])
        cat_labels[code] = label

    grouping = t.add("[céramique à pâte grise]", cats)

    a15 = type_labels["A15"]
    for code in ("EIRA", "PGFINLF", "PGFINTN"):
        t.relate(a15, cat_labels[code])
    pgfinlf = cat_labels["PGFINLF"]
    for code in PGFINLF_TYPES:
        t.relate(pgfinlf, type_labels[code])
    t.relate(pgfinlf, types_tonnelets)
    t.relate(pgfinlf, types_bobine)
    t.relate(pgfinlf, grouping)

    etape1 = t.add(ETAPE1, perio, ark=f"ark:/{NAAN}/bib2q5s0bw54c", definition=DEF_ETAPE1, sources=[SRC])
    for code in ETAPE1_CATEGORIES:
        t.relate(etape1, cat_labels[code])

    referentiel = t.add("vaisselle céramique" + BL, refs, ark=f"ark:/{NAAN}/bibd9q291x45d",
                        definition=DEF_REFERENTIEL, sources=[SRC])
    s("bibliographie" + BL, referentiel)
    for other in (cats, perio, types, vais):
        t.relate(referentiel, other)

    ctx = {
        "t": t, "formes": formes, "types": types, "cats": cats, "etape1": etape1,
        "types_tonnelets": types_tonnelets, "types_bobine": types_bobine, "cat_labels": cat_labels,
        "type_labels": type_labels,
    }
    return ctx


def bibracte_full():
    ctx = bibracte()
    t = ctx["t"]
    rng = random.Random(20210)

    categories = list(ctx["cat_labels"].values())
    for i in range(N_CATEGORIES - len(categories)):
        label = f"SYNCAT{i + 1:02d}" + BL
        t.add(label, ctx["cats"], definition=f"Catégorie céramique synthétique n°{i + 1} (remplissage).",
              sources=[SRC])
        categories.append(label)

    groups = [ctx["types_tonnelets"], ctx["types_bobine"]]
    t.add("tonnelet" + BL, ctx["formes"], definition="Forme fermée en tonneau (remplissage).", sources=[SRC])
    t.relate("tonnelet" + BL, ctx["types_tonnelets"])
    t.add("vase bobine" + BL, ctx["formes"], definition="Forme en bobine (remplissage).", sources=[SRC])
    t.relate("vase bobine" + BL, ctx["types_bobine"])
    for i in range(N_FORMES - 3):
        forme = t.add(f"forme synthétique F{i + 1:02d}" + BL, ctx["formes"],
                      definition=f"Forme synthétique n°{i + 1} (remplissage).", sources=[SRC])
        group = t.add(f"types forme synthétique F{i + 1:02d}" + BL, ctx["types"],
                      definition=structural(f"types forme synthétique F{i + 1:02d}"), sources=[SRC])
        t.relate(forme, group)
        groups.append(group)

    existing = len(ctx["type_labels"])
    for i in range(N_TYPES - existing):
        group = groups[i % len(groups)]
        label = f"type synthétique T{i + 1:03d}" + BL
        t.add(label, group, definition=f"Type synthétique n°{i + 1} (remplissage).", sources=[SRC])
        for cat in rng.sample(categories, rng.randint(1, 3)):
            t.relate(label, cat)
    return t


def pactols():
    base = "https://example.org/pactols/"
    t = Thesaurus(base + "scheme", "PACTOLS 2")
    slug = lambda label: base + hashlib.sha256(label.encode("utf-8")).hexdigest()[:12]
    add = lambda label, parent=None, **kw: t.add(label, parent, ark=slug(label), top=parent is None, **kw)

    sujets = add("Sujets")
    mob = add("mobilier archéologique", sujets)
    cer = add("céramique (matériau)", mob)
    add("céramique campanienne A", cer)
    add("céramique à pâte grise", cer)
    rec = add("récipient", mob)
    add("assiette", rec, definition=(
        "Récipient ouvert à parois fortement évasées dont le diamètre à l'ouverture (inférieur ou égal à 23/24 cm "
        "environ) est égal ou supérieur à cinq fois la hauteur (Balfet et al. 1989, p. 10). Récipient de forme "
        "générale très évasée avec un large marli et une base légèrement marquée, dont le diamètre d'ouverture est "
        "supérieur à 5 fois la hauteur (ICÉRAMM 2021)"), sources=["Balfet et al. 1989", "ICÉRAMM 2021"])
    add("vaisselle", rec)
    chrono = add("Chronologie")
    add("IIe siècle av. J.-C.", chrono)
    add("Ier siècle av. J.-C.", chrono)
    return t


def main():
    (OUT / "bibracte.ttl").write_text(bibracte()["t"].turtle(), encoding="utf-8")
    (OUT / "bibracte_full.ttl").write_text(bibracte_full().turtle(), encoding="utf-8")
    (OUT / "pactols.ttl").write_text(pactols().turtle(), encoding="utf-8")


if __name__ == "__main__":
    main()
