"""Synthetic corpora: the 60-citation golden benchmark, its scripted source
fixtures, and clean citation pools for the benchmark builder.

Everything here is generated deterministically; the committed files under
``data/`` are regenerated by ``python3 -m citegate.synthetic data``.
"""

from __future__ import annotations

import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .models import Label, RawCitation
from .sources.scripted import query_key

# (surnames, year, title, arxiv_id, doi, venue); all invented.
PAPERS = [
    (("Halvorsen", "Mbeki"), 2012, "Spin Wave Damping in Frustrated Kagome Antiferromagnets",
     "1203.04417", "10.1103/PhysRevB.85.144401", "Physical Review B"),
    (("Castellanos", "Ibsen", "Tarkovsky"), 2016, "Phonon Hydrodynamics in Layered Graphite Films",
     "1607.01822", "10.1103/PhysRevLett.117.025901", "Physical Review Letters"),
    (("Nakamura", "Osei"), 2019, "Floquet Engineering of Chiral Edge States in Cold Atom Ladders",
     "1904.11210", "10.1038/s41567-019-0601-3", "Nature Physics"),
    (("Petrescu",), 2008, "Radiative Corrections to Neutron Beta Decay Revisited",
     "0805.02219", "10.1103/PhysRevD.78.013007", "Physical Review D"),
    (("Adeyemi", "Lindholm"), 2021, "Measuring the Hubble Constant with Strongly Lensed Supernovae",
     "2102.06613", "10.1093/mnras/stab1201", "Monthly Notices of the Royal Astronomical Society"),
    (("Brannigan", "Quispe"), 2014, "Thermal Transport Across Metal Dielectric Interfaces",
     None, "10.1063/1.4870174", "Journal of Applied Physics"),
    (("Yilmaz", "Fairbanks", "Ogawa"), 2010, "Cavity Optomechanics with Levitated Silica Nanospheres",
     None, "10.1364/OE.18.021640", "Optics Express"),
    (("Delacroix",), 2017, "Shell Model Description of Neutron Rich Calcium Isotopes",
     None, "10.1016/j.nuclphysa.2017.03.011", "Nuclear Physics A"),
    (("Sørby", "Kaminski"), 2013, "Magnetic Reconnection Rates in Collisionless Plasma Sheets",
     None, "10.1063/1.4811468", "Physics of Plasmas"),
    (("Achebe", "Whitlock"), 2018, "Dust Coagulation in Protoplanetary Disk Vortices",
     None, "10.3847/1538-4357/aad2e1", "The Astrophysical Journal"),
    (("Moreau", "Tanaka"), 2015, "Entanglement Entropy of Excited States in Conformal Field Theory",
     None, None, "Journal of High Energy Physics"),
    (("Grünewald",), 2011, "Glassy Dynamics of Dense Colloidal Suspensions Under Shear",
     None, None, "Soft Matter"),
    (("Ruiz", "Abernathy", "Chen"), 2020, "Bayesian Inference of Equation of State Parameters from Neutron Star Mergers",
     None, None, "Physical Review C"),
    (("Varga", "Oyelaran"), 2009, "Quantum Monte Carlo Study of the Two Dimensional Hubbard Model",
     None, None, "Physical Review B"),
    (("Ferreira", "Lund"), 2016, "Optical Frequency Combs in Silicon Nitride Microresonators",
     None, None, "Optica"),
    (("Kowalczyk",), 2013, "Turbulent Convection in Rotating Spherical Shells",
     None, None, "Journal of Fluid Mechanics"),
    (("Mensah", "Holloway"), 2022, "Machine Learning Surrogates for Lattice QCD Correlators",
     None, None, "Physical Review D"),
    (("Ishikawa", "Bergström"), 2007, "Superfluid Density of Unitary Fermi Gases at Finite Temperature",
     None, None, "Workshop on Ultracold Quantum Gases"),
    (("Ortega", "Nwosu"), 2019, "Cosmic Ray Anisotropy at Tera Electronvolt Energies",
     None, None, "International Cosmic Ray Conference"),
    (("Lebedev",), 2015, "Topological Defects in Nematic Liquid Crystal Shells",
     None, None, "Summer School on Soft Matter"),
    # minor-corruption targets
    (("Ashworth", "Benedetti"), 2011, "Anomalous Hall Effect in Ferromagnetic Semiconductor Nanowires",
     "1109.03321", "10.1103/PhysRevB.84.115203", "Physical Review B"),
    (("Okafor", "Pietersen"), 2017, "Gravitational Wave Signatures of First Order Phase Transitions",
     "1706.08814", "10.1103/PhysRevD.96.063512", "Physical Review D"),
    (("Thorvaldsen", "Mahlaba"), 2014, "Excitonic Insulators in Transition Metal Dichalcogenide Bilayers",
     None, "10.1103/PhysRevB.90.205145", "Physical Review B"),
    (("Esposito", "Karimi"), 2019, "Precision Spectroscopy of Antiprotonic Helium",
     None, "10.1126/science.aaw1234", "Science"),
    (("Hollingsworth",), 2012, "Numerical Relativity Simulations of Boson Star Collisions",
     None, None, "Classical and Quantum Gravity"),
    (("Dubois", "Yamamoto"), 2016, "Quantized Vortex Reconnection in Bose Einstein Condensates",
     None, None, "Physical Review A"),
    (("Senanayake", "Vollmer", "Grant"), 2010, "Electron Beam Driven Plasma Wakefield Acceleration",
     None, "10.1103/PhysRevSTAB.13.101301", "Physical Review Accelerators and Beams"),
    (("Caldwell", "Nguyen"), 2018, "Heavy Flavor Transport in the Quark Gluon Plasma",
     None, "10.1016/j.physletb.2018.04.012", "Physics Letters B"),
    (("Zielinski", "Obi"), 2015, "Ferroelectric Domain Walls as Conducting Channels",
     None, "10.1038/ncomms9001", "Nature Communications"),
    (("Marchetti", "Sundqvist"), 2021, "Dark Photon Searches with Superconducting Radio Frequency Cavities",
     None, None, "Physical Review Letters"),
    (("Adebayo", "Larsen"), 2013, "Spectral Properties of Random Matrix Ensembles with Power Law Tails",
     None, None, "Journal of Physics A"),
    (("Fitzgerald", "Tanimoto"), 2017, "Interfacial Superconductivity in Oxide Heterostructures",
     None, None, "Reports on Progress in Physics"),
    (("Kovalenko", "Ambrose"), 2020, "Inverse Design of Photonic Crystal Waveguides",
     None, None, "ACS Photonics"),
    (("Rahman", "Eklund"), 2009, "Primordial Non Gaussianity from Multi Field Inflation",
     "0907.02291", None, "Journal of Cosmology and Astroparticle Physics"),
    (("Villanueva", "Sato"), 2014, "Strain Tuning of Quantum Dot Single Photon Sources",
     "1411.05530", None, "Applied Physics Letters"),
    (("Morgenstern", "Adu"), 2018, "Chaotic Mixing in Microfluidic Serpentine Channels",
     "1808.00934", None, "Lab on a Chip"),
    (("Papadakis", "Wren"), 2011, "Neutrino Oscillation Parameters from Reactor Baselines",
     None, "10.1103/PhysRevLett.107.041801", "Physical Review Letters"),
    (("Haddad", "Sorensen"), 2016, "Magnetohydrodynamic Instabilities in Tokamak Edge Plasmas",
     None, "10.1088/0029-5515/56/10/106001", "Nuclear Fusion"),
    (("Ødegaard", "Bianchi"), 2019, "Quantum Error Correction with Bosonic Cat Codes",
     None, "10.1038/s41586-019-1111-7", "Nature"),
    (("Lindqvist", "Achterberg"), 2022, "Stellar Streams as Probes of Dark Matter Substructure",
     None, None, "The Astrophysical Journal"),
    # identifier-mismatch targets (real arXiv records, cited with fabricated text)
    (("Strand", "Oyelowo"), 2013, "Nonequilibrium Green Functions for Driven Quantum Dots",
     "1302.07715", None, "Physical Review B"),
    (("Albrecht", "Mukherjee"), 2015, "Casimir Forces Between Corrugated Metallic Plates",
     "1510.03376", None, "Physical Review A"),
    (("Echeverría", "Halloran"), 2018, "Polarization of the Cosmic Microwave Background at Large Scales",
     "1803.09921", None, "Astronomy and Astrophysics"),
    (("Gustafsson", "Ito"), 2020, "Hydrogen Storage in Metal Organic Frameworks",
     "2005.12208", None, "Physical Review Materials"),
    (("Bakshi", "Carrington"), 2010, "Critical Exponents of the Three Dimensional Ising Model",
     "1012.04451", None, "Journal of Statistical Mechanics"),
]

# fabricated references with no record anywhere: (surnames, year, title, url)
FABRICATED = [
    (("Quillfeather", "Dranstead"), 2024, "Holographic Vortex Lattices in the ZephyrNet Graphene Condensate",
     "https://arxiv.org/abs/2407.31415"),
    (("Marrowgate",), 2021, "Stochastic Neutrino Braiding Across the Kestrel Superfluid Boundary",
     "https://doi.org/10.1103/PhysRevD.104.999999"),
    (("Tiberon", "Vasquell"), 2019, "Anisotropic Gluon Foams Observed by the HALCYON Polarimeter",
     "https://arxiv.org/abs/1911.98765"),
    (("Brightwater", "Olumide"), 2023, "Quasi Periodic Dark Flux Tubes in Magnetar QuasarNet Surveys",
     None),
    (("Fenwhistle",), 2018, "Emergent Chiral Phonon Resonances in the Orpheus Tokamak Array",
     "https://arxiv.org/abs/1805.77777"),
    (("Karvonen", "Eastbrook"), 2020, "Entangled Plasmon Cascades in Nebular Photonic Lattices",
     "https://doi.org/10.1364/OE.28.987654"),
    (("Halloway", "Prentiss", "Zhou"), 2022, "Relativistic Spin Ice Filaments Near the Solace Horizon",
     None),
    (("Umberfield",), 2017, "Topological Axion Manifolds in the Corvid Muon Collider Dataset",
     "https://arxiv.org/abs/1709.55555"),
    (("Sandoval", "Wickersham"), 2025, "Nonlinear Baryon Mirages from the AURORA-9 Lensing Catalog",
     "https://proceedings.example.org/2025/aurora9.pdf"),
    (("Ravensworth", "Ndlovu"), 2016, "Chiral Dark Energy Condensates in Helium Nanodroplet Arrays",
     "https://arxiv.org/abs/1604.88888"),
    (("Calloway",), 2024, "Quasi Crystalline Graviton Lattices Probed by the Tessellate Interferometer",
     None),
    (("Everhart", "Oduya"), 2019, "Stochastic Hadron Filaments in the Meridian Plasma Sheath",
     "https://doi.org/10.1016/j.physletb.2019.999999"),
    (("Winterbourne", "Ashgrove"), 2021, "Emergent Magnon Halos Around the PRISM-X Neutron Stars",
     "https://arxiv.org/abs/2109.66666"),
    (("Pemberton", "Kilbride"), 2023, "Holographic Photon Braids in the Lantern Quantum Simulator",
     None),
    (("Stroud",), 2020, "Anisotropic Warp Resonances from the Oberon Cryogenic Detector",
     "https://arxiv.org/abs/2012.44444"),
]

# fabricated text cited under each identifier-mismatch arXiv id
MISMATCH_TEXT = [
    (("Vantongeren", "Prasad"), "Cryogenic Neural Codecs for the HelixScope Gamma Ray Telescope"),
    (("Whitcombe", "Adeola"), "Turbulent Axion Blooms Inside the Marlowe Accretion Torus"),
    (("Harrowgate",), "Entangled Soliton Rafts in the Quillon Fiber Network"),
    (("Delgado-Funes", "Ostrowski"), "Gravitational Lens Choirs of the Petrel Galaxy Survey"),
    (("Ambersley", "Koval"), "Swarm Learning for Spallation Targets at the NOVA-7 Beamline"),
]

LATENCY_MS = {"arxiv": 310.0, "crossref": 180.0, "semantic_scholar": 240.0, "openalex": 150.0,
              "web_search": 2600.0}

# every CrossRef title search that has no specific fixture returns this unrelated record
CROSSREF_DECOY = {"title": "Annual Report of the Physical Society Council",
                  "authors": "Council Secretariat", "year": 2001,
                  "venue": "Bulletin of the Physical Society", "doi": "10.9999/bps.2001.1"}


@dataclass(frozen=True)
class GoldenCase:
    id: str
    text: str
    gold: Label
    stage: str
    kind: str

    def row(self) -> dict:
        return {"id": self.id, "collection": "golden", "text": self.text,
                "gold_label": self.gold.value, "stage": self.stage, "case": self.kind}


def _initials(i: int) -> str:
    return "ABCDEFGHJKLMNPRSTW"[i % 18] + "."


def cite_authors(surnames) -> str:
    return ", ".join(f"{s}, {_initials(i + len(s))}" for i, s in enumerate(surnames))


def source_authors(surnames) -> str:
    return ", ".join(f"{_initials(i + len(s))} {s}" for i, s in enumerate(surnames))


def citation(surnames, year, title, url=None) -> str:
    body = f"{cite_authors(surnames)}, {year}, {title}"
    return f"[{body}]({url})" if url else f"{body}."


def _record(paper, **over) -> dict:
    surnames, year, title, arxiv_id, doi, venue = paper
    rec = {"title": title, "authors": source_authors(surnames), "year": year, "venue": venue,
           "doi": doi, "arxiv_id": arxiv_id}
    if arxiv_id:
        rec["url"] = f"https://arxiv.org/abs/{arxiv_id}"
    elif doi:
        rec["url"] = f"https://doi.org/{doi}"
    rec.update(over)
    return {k: v for k, v in rec.items() if v is not None}


def _plain_url(i: int) -> str:
    return f"https://inspirehep.net/literature/{1200000 + 7919 * i}"


def build_golden():
    """Return ``(cases, fixtures)`` for the golden benchmark."""
    fx = {"arxiv": {}, "crossref": {"*": [CROSSREF_DECOY]}, "semantic_scholar": {},
          "openalex": {}, "web_search": {}, "latency_ms": dict(LATENCY_MS)}
    cases = []

    def add(gold, stage, kind, text):
        cases.append(GoldenCase(f"g{len(cases) + 1:02d}", text, gold, stage, kind))

    def put(source, paper, **over):
        rec = _record(paper, **over)
        if source == "arxiv":
            fx["arxiv"][paper[3]] = rec
        else:
            fx[source].setdefault(query_key(paper[2]), []).append(rec)

    # exact: five per structured stage-shape, three web-only
    for p in PAPERS[0:5]:
        put("arxiv", p)
        add(Label.EXACT, "arxiv", "verbatim", citation(p[0], p[1], p[2], f"https://arxiv.org/abs/{p[3]}"))
    for p in PAPERS[5:10]:
        put("crossref", p)
        add(Label.EXACT, "crossref", "verbatim", citation(p[0], p[1], p[2], f"https://doi.org/{p[4]}"))
    for i, p in enumerate(PAPERS[10:14]):
        put("semantic_scholar", p)
        add(Label.EXACT, "semantic_scholar", "verbatim", citation(p[0], p[1], p[2], _plain_url(i)))
    for i, p in enumerate(PAPERS[14:17]):
        put("openalex", p)
        add(Label.EXACT, "openalex", "verbatim", citation(p[0], p[1], p[2], _plain_url(10 + i)))
    for i, p in enumerate(PAPERS[17:20]):
        fx["web_search"][query_key(p[2])] = [
            {"title": "Unrelated Seminar Listing", "authors": "Staff", "year": p[1]},
            _record(p, url=f"https://proceedings.example.org/{p[1]}/paper{i + 3}.pdf")]
        add(Label.EXACT, "web_search", "verbatim", citation(p[0], p[1], p[2], _plain_url(15 + i)))

    # minor: year shift, author edits, identifier edits
    a, b = PAPERS[20], PAPERS[21]
    for p, dy in ((a, 1), (b, -1)):
        put("arxiv", p)
        add(Label.MINOR, "arxiv", "year", citation(p[0], p[1] + dy, p[2], f"https://arxiv.org/abs/{p[3]}"))
    c, d = PAPERS[22], PAPERS[23]
    for p, dy in ((c, 1), (d, -1)):
        put("crossref", p)
        add(Label.MINOR, "crossref", "year", citation(p[0], p[1] + dy, p[2], f"https://doi.org/{p[4]}"))
    e, f = PAPERS[24], PAPERS[25]
    put("semantic_scholar", e)
    add(Label.MINOR, "semantic_scholar", "year", citation(e[0], e[1] + 1, e[2], _plain_url(20)))
    put("openalex", f)
    add(Label.MINOR, "openalex", "year", citation(f[0], f[1] - 1, f[2], _plain_url(21)))
    # one author swapped (partial overlap)
    for i, p in enumerate(PAPERS[26:29]):
        put("crossref", p)
        names = (p[0][0], "Johansson") + tuple(p[0][2:]) if len(p[0]) > 1 else ("Johansson",)
        add(Label.MINOR, "crossref", "author_partial", citation(names, p[1], p[2], f"https://doi.org/{p[4]}"))
    for i, p in enumerate(PAPERS[29:31]):
        put("semantic_scholar", p)
        names = (p[0][0], "Okonkwo")
        add(Label.MINOR, "semantic_scholar", "author_partial", citation(names, p[1], p[2], _plain_url(30 + i)))
    # all authors replaced, title intact
    for i, p in enumerate(PAPERS[31:33]):
        put("openalex", p)
        add(Label.MINOR, "openalex", "author_disjoint",
            citation(("Fairweather", "Lindgren"), p[1], p[2], _plain_url(40 + i)))
    # arXiv id edited so it no longer resolves; the record surfaces by title
    for p, fake in zip(PAPERS[33:36], ("0907.02919", "1411.05503", "1808.09034")):
        put("semantic_scholar", p)
        add(Label.MINOR, "semantic_scholar", "arxiv_id",
            citation(p[0], p[1], p[2], f"https://arxiv.org/abs/{fake}"))
    # DOI edited
    for p in PAPERS[36:39]:
        put("crossref", p)
        fake = p[4][:-1] + ("7" if p[4][-1] != "7" else "3")
        add(Label.MINOR, "crossref", "doi", citation(p[0], p[1], p[2], f"https://doi.org/{fake}"))
    # year shift combined with a partial author edit
    g = PAPERS[39]
    put("openalex", g)
    add(Label.MINOR, "openalex", "year_author",
        citation((g[0][0], "Marsh"), g[1] + 2, g[2], _plain_url(50)))

    # major: fabricated with nothing retrievable
    for surnames, year, title, url in FABRICATED:
        add(Label.MAJOR, "none", "fabricated", citation(surnames, year, title, url))
    # major: real arXiv id under a fabricated title and authors
    for p, (names, title) in zip(PAPERS[40:45], MISMATCH_TEXT):
        put("arxiv", p)
        add(Label.MAJOR, "arxiv", "identifier_mismatch",
            citation(names, p[1], title, f"https://arxiv.org/abs/{p[3]}"))
    return cases, fx


TOPICS = {
    "condensed-matter": ("Condensed matter physics", "Strongly correlated electrons"),
    "astro-cosmo": ("Astrophysics", "Observational cosmology"),
    "atomic-optical": ("Atomic, molecular and optical physics", "Quantum optics"),
}


def clean_pool() -> list:
    """60 clean citations in three collections of 20, built from the paper records."""
    names = list(TOPICS)
    records = PAPERS + [(s, y, t, None, None, "") for s, y, t, _ in FABRICATED]
    out = []
    for i, (surnames, year, title, arxiv_id, doi, _) in enumerate(records):
        url = (f"https://arxiv.org/abs/{arxiv_id}" if arxiv_id
               else f"https://doi.org/{doi}" if doi else _plain_url(100 + i))
        coll = names[i % 3]
        out.append(RawCitation(f"{coll}-{i // 3 + 1:02d}", coll, citation(surnames, year, title, url)))
    return out


# 42 collection sizes summing to 982
POOL_SIZES = [17, 23, 22, 26, 19, 28, 24, 21, 30, 18, 25, 23, 27, 20,
              29, 22, 16, 24, 24, 21, 26, 19, 28, 23, 25, 20, 30, 22,
              18, 27, 24, 21, 26, 23, 19, 29, 25, 22, 20, 28, 24, 24]

_WORDS = ("Quantum", "Thermal", "Magnetic", "Optical", "Nonlinear", "Collective", "Coherent",
          "Relativistic", "Disordered", "Topological", "Spectral", "Dynamical")
_NOUNS = ("Transport", "Excitations", "Fluctuations", "Instabilities", "Correlations",
          "Scattering", "Relaxation", "Phases", "Resonances", "Oscillations")
_SYSTEMS = ("Thin Films", "Cold Atoms", "Nanowires", "Plasmas", "Neutron Stars", "Superlattices",
            "Quantum Dots", "Spin Chains", "Heavy Nuclei", "Galaxy Clusters", "Liquid Crystals")
_SURNAMES = ("Abara", "Bjork", "Chandra", "Dimitrov", "Eze", "Fonseca", "Gallo", "Horvat",
             "Iwata", "Jensen", "Keller", "Laine", "Mwangi", "Novak", "Ortiz", "Pham", "Quinn",
             "Rossi", "Sato", "Tesfaye", "Ulloa", "Vidal", "Weber", "Xu", "Yadav", "Zorić")


def pool_982(seed: int = 7) -> list:
    if sum(POOL_SIZES) != 982 or len(POOL_SIZES) != 42:
        raise AssertionError("pool sizes drifted")
    rng = random.Random(seed)
    out = []
    for c, size in enumerate(POOL_SIZES):
        coll = f"c{c + 1:02d}"
        for j in range(size):
            authors = tuple(rng.sample(_SURNAMES, rng.randint(1, 3)))
            title = f"{rng.choice(_WORDS)} {rng.choice(_NOUNS)} in {rng.choice(_SYSTEMS)}"
            url = f"https://arxiv.org/abs/{rng.randint(1001, 2412)}.{rng.randint(10000, 99999)}"
            out.append(RawCitation(f"{coll}-{j + 1:03d}", coll,
                                   citation(authors, rng.randint(1995, 2024), title, url)))
    return out


def _jsonl(rows) -> str:
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in rows)


def render_files() -> dict:
    """File name -> exact text of every committed synthetic data file."""
    cases, fixtures = build_golden()
    return {
        "golden_dataset.jsonl": _jsonl(c.row() for c in cases),
        "golden_fixtures.json": json.dumps(fixtures, ensure_ascii=False, indent=1,
                                           sort_keys=True) + "\n",
        "clean_pool.jsonl": _jsonl(c.to_dict() for c in clean_pool()),
        "clean_pool_topics.json": json.dumps(TOPICS, indent=1, sort_keys=True) + "\n",
        "pool_982.jsonl": _jsonl(c.to_dict() for c in pool_982()),
    }


def write_files(root) -> list:
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in render_files().items():
        (root / name).write_text(text, encoding="utf-8")
        written.append(root / name)
    return written


if __name__ == "__main__":
    for path in write_files(sys.argv[1] if len(sys.argv) > 1 else "data"):
        print(path)
