"""Deterministic synthetic test collections for desk-scale experiments.

Each topic gets one planted expert. The expert's homepage subtree carries
topical pages; for "hidden-name" topics (the planted-structure fraction)
those pages never mention the expert, so mention-only evidence cannot find
them and only graph propagation can. Distractor minutes/policy pages on the
intranet name many people while carrying almost no technical vocabulary.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, Document, save_corpus
from .evaluation import Qrels, Topic, write_qrels, write_topics
from .org import OrgModel, Person, Project, Role, Unit, org_to_xml
from .pipeline import Collection
from .urls import AliasMap

_TOPIC_WORDS = (
    "wavelet morphology spectral imaging ontology parsing annotation crystallography "
    "sensing telemetry acoustics photonics robotics kinematics geodesy hydrology "
    "stratigraphy mineralogy petrology genomics proteomics phylogenetics epidemiology "
    "biometrics cryptography steganography compilers virtualization middleware caching "
    "sharding stemming clustering regression kriging interpolation quadrature "
    "tessellation meshing rendering raytracing shading compression watermarking "
    "forensics spectroscopy chromatography titration electrolysis catalysis polymers "
    "composites ceramics alloys magnetism superconductivity plasmonics interferometry "
    "holography lidar sonar radiometry photogrammetry cartography bathymetry seismology "
    "volcanology glaciology permafrost aerosols ozone microclimate salinity turbidity "
    "eutrophication biofilm anodizing sintering extrusion pyrolysis fermentation "
    "distillation"
).split()

_ADMIN_WORDS = (
    "policy minutes meeting agenda budget travel approval committee procurement "
    "timesheet compliance quarterly memo leave office finance"
).split()

_FILLER_WORDS = (
    "overview update notes summary general information internal archive misc "
    "welcome details resources directory guidelines"
).split()

_FIRST_NAMES = (
    "Alice Brian Carla Dmitri Elena Farid Grace Hugo Irene Jonas "
    "Keiko Liam Marta Nabil Olga Pedro"
).split()

_LAST_NAMES = (
    "Ashford Barros Chen Delacroix Eriksen Fontaine Grumman Hollis Ivanov "
    "Jansen Kowalski Lindqvist Moreau Novak Okafor Petrov"
).split()

_PROJECT_IDS = "aurora basalt cirrus dynamo ember flux garnet helix indigo jasper".split()

_ROLE_IDS = ("scientist", "engineer", "developer")

EXTRANET = "http://extranet.example"
INTRANET = "http://intranet.example"


@dataclass(frozen=True)
class SyntheticConfig:
    persons: int = 20
    projects: int = 5
    docs: int = 200
    topics: int = 30
    structured_ratio: float = 0.3  # fraction of topics whose topical pages hide the expert's name


@dataclass
class SyntheticCollection:
    corpus: Corpus
    links: tuple[tuple[str, str], ...]
    alias_pairs: tuple[tuple[str, str], ...]
    org: OrgModel
    topics: list[Topic]
    qrels: Qrels
    experts: dict[str, str]  # topic_id -> planted expert person_id
    structured_topics: tuple[str, ...]  # topics whose topical pages hide the name
    db_reach_topics: tuple[str, ...] = ()  # topics where co-members surface only via db records

    def collection(self) -> Collection:
        links = tuple((src, dst, i) for i, (src, dst) in enumerate(self.links, 1))
        return Collection(self.corpus, links, AliasMap.from_pairs(self.alias_pairs), self.org)

    def write(self, out_dir) -> dict[str, Path]:
        """Write corpus/links/aliases/org/topics/qrels (plus meta.json) files."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "corpus": out / "corpus.jsonl",
            "links": out / "links.tsv",
            "aliases": out / "aliases.tsv",
            "org": out / "org.xml",
            "topics": out / "topics.tsv",
            "qrels": out / "qrels.tsv",
        }
        save_corpus(self.corpus, paths["corpus"])
        with open(paths["links"], "w", encoding="utf-8") as fh:
            fh.write("# src_url<TAB>dst_url\n")
            for src, dst in self.links:
                fh.write(f"{src}\t{dst}\n")
        with open(paths["aliases"], "w", encoding="utf-8") as fh:
            for alias, target in self.alias_pairs:
                fh.write(f"{alias}\t{target}\n")
        paths["org"].write_bytes(org_to_xml(self.org))
        write_topics(self.topics, paths["topics"])
        write_qrels(self.qrels, paths["qrels"])
        meta = {
            "experts": self.experts,
            "structured_topics": list(self.structured_topics),
            "db_reach_topics": list(self.db_reach_topics),
        }
        (out / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True), encoding="utf-8")
        paths["meta"] = out / "meta.json"
        return paths


def _slug(name: str) -> str:
    return name.lower().replace(" ", "-")


def _validate(cfg: SyntheticConfig) -> None:
    if cfg.persons < 1 or cfg.projects < 1 or cfg.topics < 1:
        raise ValueError("persons, projects and topics must all be positive")
    if cfg.persons < cfg.projects:
        raise ValueError(f"need at least one person per project ({cfg.persons} < {cfg.projects})")
    if cfg.persons > len(_FIRST_NAMES) * len(_LAST_NAMES):
        raise ValueError(f"at most {len(_FIRST_NAMES) * len(_LAST_NAMES)} persons supported")
    if cfg.projects > len(_PROJECT_IDS):
        raise ValueError(f"at most {len(_PROJECT_IDS)} projects supported")
    if 2 * cfg.topics > len(_TOPIC_WORDS):
        raise ValueError(f"at most {len(_TOPIC_WORDS) // 2} topics supported")
    if not 0.0 <= cfg.structured_ratio <= 1.0:
        raise ValueError("structured_ratio must lie in [0, 1]")


def gen_synthetic(cfg: SyntheticConfig | None = None, rng_seed: int = 42) -> SyntheticCollection:
    """Generate a deterministic planted collection for the given seed."""
    cfg = cfg or SyntheticConfig()
    _validate(cfg)
    rng = random.Random(rng_seed)

    name_grid = [(f, l) for f in _FIRST_NAMES for l in _LAST_NAMES]
    chosen_names = rng.sample(name_grid, cfg.persons)
    id_width = max(2, len(str(cfg.persons)))
    person_ids = [f"p{i + 1:0{id_width}d}" for i in range(cfg.persons)]
    names = {pid: f"{first} {last}" for pid, (first, last) in zip(person_ids, chosen_names)}
    slugs = {pid: _slug(names[pid]) for pid in person_ids}
    homepages = {pid: f"{EXTRANET}/people/{slugs[pid]}/" for pid in person_ids}
    roles_by_person = {pid: _ROLE_IDS[i % len(_ROLE_IDS)] for i, pid in enumerate(person_ids)}

    # initial-style alias, kept only when unambiguous
    initials = {pid: f"{names[pid].split()[0][0]}. {names[pid].split()[1]}" for pid in person_ids}
    initial_counts: dict[str, int] = {}
    for alias in initials.values():
        initial_counts[alias] = initial_counts.get(alias, 0) + 1

    project_ids = list(_PROJECT_IDS[: cfg.projects])
    project_members: dict[str, list[str]] = {pj: [] for pj in project_ids}
    for i, pid in enumerate(person_ids):
        project_members[project_ids[i % cfg.projects]].append(pid)
    project_urls = {pj: f"{EXTRANET}/projects/{pj}/" for pj in project_ids}

    group_count = max(2, cfg.persons // 5)
    group_ids = [f"g{i + 1}" for i in range(group_count)]
    group_titles = {gid: f"{gid.upper()} Research Group" for gid in group_ids}
    group_members: dict[str, list[str]] = {gid: [] for gid in group_ids}
    group_of: dict[str, str] = {}
    for i, pid in enumerate(person_ids):
        gid = group_ids[i % group_count]
        group_members[gid].append(pid)
        group_of[pid] = gid
    group_urls = {gid: f"{EXTRANET}/groups/{gid}/" for gid in group_ids}

    topic_words = list(_TOPIC_WORDS)
    rng.shuffle(topic_words)
    topic_width = max(2, len(str(cfg.topics)))
    topics: list[Topic] = []
    topic_pair: dict[str, tuple[str, str]] = {}
    for i in range(cfg.topics):
        tid = f"t{i + 1:0{topic_width}d}"
        w1, w2 = topic_words[2 * i], topic_words[2 * i + 1]
        topics.append(Topic(tid, f"{w1} {w2}"))
        topic_pair[tid] = (w1, w2)

    structured_count = max(1, round(cfg.structured_ratio * cfg.topics)) if cfg.structured_ratio > 0 else 0
    structured = tuple(
        topics[i].topic_id for i in sorted(rng.sample(range(cfg.topics), structured_count))
    )
    structured_set = set(structured)
    # a slice of the open topics is reachable for project co-members only via
    # the db project record: the web project pages omit that vocabulary
    open_ids = [t.topic_id for t in topics if t.topic_id not in structured_set]
    db_reach_count = max(1, round(0.2 * len(open_ids))) if len(open_ids) >= 3 else 0
    db_reach = tuple(sorted(rng.sample(open_ids, db_reach_count)))
    db_reach_set = set(db_reach)
    experts = {topics[i].topic_id: person_ids[i % cfg.persons] for i in range(cfg.topics)}
    topics_of: dict[str, list[str]] = {pid: [] for pid in person_ids}
    for tid, pid in experts.items():
        topics_of[pid].append(tid)

    docs: list[Document] = []
    links: list[tuple[str, str]] = []

    root_url = f"{INTRANET}/"
    docs.append(
        Document("intranet-home", root_url, "intranet", "Intranet", "Internal information archive welcome.")
    )

    aliased_persons = set(rng.sample(person_ids, min(3, cfg.persons)))
    alias_pairs = tuple(
        (f"{EXTRANET}/staff/{slugs[pid]}/", homepages[pid]) for pid in sorted(aliased_persons)
    )

    for pid in person_ids:
        name = names[pid]
        interests = [
            topic_pair[tid] for tid in topics_of[pid] if tid not in structured_set
        ]
        sentences = [
            f"{name} personal homepage.",
            f"{roles_by_person[pid].capitalize()} with the {group_titles[group_of[pid]]}.",
        ]
        sentences.extend(f"Research interests include {w1} {w2}." for w1, w2 in interests)
        sentences.append("Welcome overview and general information.")
        docs.append(Document(f"home-{pid}", homepages[pid], "extranet", name, " ".join(sentences)))

        link_src = f"{EXTRANET}/staff/{slugs[pid]}/" if pid in aliased_persons else homepages[pid]
        for tid in topics_of[pid]:
            w1, w2 = topic_pair[tid]
            hidden = tid in structured_set
            signature = "" if hidden else f" Prepared by {name}."
            reps = rng.randint(2, 4)
            notes_url = f"{homepages[pid]}{w1}-notes.html"
            results_url = f"{homepages[pid]}{w1}-results.html"
            details_url = f"{homepages[pid]}{w1}/details.html"
            docs.append(
                Document(
                    f"page-{tid}-notes",
                    notes_url,
                    "extranet",
                    f"{w1} {w2} notes",
                    (f"{w1} {w2} experiments and {w2} analysis. " * reps).strip() + signature,
                )
            )
            docs.append(
                Document(
                    f"page-{tid}-results",
                    results_url,
                    "extranet",
                    f"{w1} {w2} results",
                    (f"Results for {w1} {w2} measurements. " * reps).strip() + signature,
                )
            )
            docs.append(
                Document(
                    f"page-{tid}-details",
                    details_url,
                    "extranet",
                    f"{w1} details",
                    f"Detailed {w1} {w2} records and {w2} notes." + signature,
                )
            )
            links.append((link_src, notes_url))
            links.append((f"{homepages[pid]}index.html", results_url))
            links.append((notes_url, details_url))
        links.append((homepages[pid], group_urls[group_of[pid]]))

    # default-file self-loop fodder; collapses onto the homepage and is dropped
    links.append((f"{homepages[person_ids[0]]}index.html", homepages[person_ids[0]]))

    for pj in project_ids:
        member_names = ", ".join(names[pid] for pid in project_members[pj])
        member_topics = [
            topic_pair[tid]
            for pid in project_members[pj]
            for tid in topics_of[pid]
            if tid not in structured_set and tid not in db_reach_set
        ]
        desc_sentences = [f"Project {pj} description.", f"Members: {member_names}."]
        desc_sentences.extend(f"Work on {w1} {w2}." for w1, w2 in member_topics)
        docs.append(
            Document(
                f"proj-{pj}",
                project_urls[pj],
                "extranet",
                f"Project {pj.capitalize()}",
                " ".join(desc_sentences),
            )
        )
        progress = " ".join(f"Progress on {w1} {w2}." for w1, w2 in member_topics)
        docs.append(
            Document(
                f"proj-{pj}-report",
                f"{project_urls[pj]}report.html",
                "extranet",
                f"Project {pj.capitalize()} report",
                progress or "Quarterly report summary.",
            )
        )
        docs.append(
            Document(
                f"proj-{pj}-plan",
                f"{project_urls[pj]}plan.html",
                "extranet",
                f"Project {pj.capitalize()} plan",
                f"Plan and schedule for project {pj}. " + (progress or ""),
            )
        )
        links.append((project_urls[pj], f"{project_urls[pj]}report.html"))
        links.append((project_urls[pj], f"{project_urls[pj]}plan.html"))
        for pid in project_members[pj]:
            links.append((homepages[pid], project_urls[pj]))

    for gid in group_ids:
        member_names = ", ".join(names[pid] for pid in group_members[gid])
        docs.append(
            Document(
                f"group-{gid}",
                group_urls[gid],
                "extranet",
                group_titles[gid],
                f"{group_titles[gid]}. Members: {member_names}. General information and resources.",
            )
        )
        links.append((group_urls[gid], root_url))

    minutes_count = max(2, cfg.docs // 10)
    for i in range(minutes_count):
        attendees = rng.sample(person_ids, min(len(person_ids), rng.randint(4, 8)))
        attendee_names = ", ".join(names[pid] for pid in attendees)
        admin = " ".join(rng.sample(_ADMIN_WORDS, 5))
        sentences = [f"Meeting minutes. Attendees: {attendee_names}.", f"{admin}."]
        if open_ids and rng.random() < 0.3:
            leak = topic_pair[rng.choice(open_ids)][0]
            sentences.append(f"Discussion of {leak} budget.")
        url = f"{INTRANET}/admin/minutes-{i + 1:03d}.html"
        docs.append(Document(f"minutes-{i + 1:03d}", url, "intranet", f"Minutes {i + 1}", " ".join(sentences)))
        links.append((root_url, url))
    for pid in person_ids:
        if rng.random() < 0.3:
            links.append((homepages[pid], f"{INTRANET}/admin/minutes-{rng.randint(1, minutes_count):03d}.html"))

    for pj in project_ids:
        member_names = ", ".join(names[pid] for pid in project_members[pj])
        member_topics = [
            topic_pair[tid]
            for pid in project_members[pj]
            for tid in topics_of[pid]
            if tid not in structured_set
        ]
        body = [f"Project plan for {pj}.", f"Members: {member_names}."]
        body.extend(f"Scope covers {w1} {w2}." for w1, w2 in member_topics)
        docs.append(
            Document(
                f"db-proj-{pj}",
                f"db://projects/{pj}",
                "db",
                f"Project {pj.capitalize()} plan",
                " ".join(body),
                db_kind="project_description",
                project_id=pj,
            )
        )

    publication_count = min(10, cfg.persons)
    for i in range(publication_count):
        tid = topics[rng.randrange(cfg.topics)].topic_id
        w1, w2 = topic_pair[tid]
        authors = [experts[tid]]
        if rng.random() < 0.5:
            other = rng.choice(person_ids)
            if other not in authors:
                authors.append(other)
        author_names = " and ".join(names[pid] for pid in authors)
        docs.append(
            Document(
                f"db-pub-{i + 1:03d}",
                f"db://publications/pub-{i + 1:03d}",
                "db",
                f"{w1} {w2} study",
                f"A study of {w1} {w2} by {author_names}.",
                db_kind="publication",
                person_ids=tuple(authors),
            )
        )

    contact_count = min(5, cfg.persons)
    for i in range(contact_count):
        pid = rng.choice(person_ids)
        docs.append(
            Document(
                f"db-contact-{i + 1:03d}",
                f"db://contacts/c-{i + 1:03d}",
                "db",
                "Contact record",
                f"Business development contact record for {names[pid]}.",
                db_kind="contact",
                person_ids=(pid,),
            )
        )

    if len(docs) > cfg.docs:
        raise ValueError(
            f"config requires at least {len(docs)} documents, got docs={cfg.docs}"
        )
    filler_needed = cfg.docs - len(docs)
    for i in range(filler_needed):
        words = " ".join(rng.sample(_FILLER_WORDS, 6))
        url = f"{INTRANET}/docs/info-{i + 1:03d}.html"
        docs.append(Document(f"fill-{i + 1:03d}", url, "intranet", "Information", f"{words}."))
        links.append((root_url, url))

    org = OrgModel()
    for role_id in _ROLE_IDS:
        org.roles[role_id] = Role(role_id, role_id.capitalize())
    for pid in person_ids:
        aliases = (initials[pid],) if initial_counts[initials[pid]] == 1 else ()
        org.persons[pid] = Person(pid, names[pid], aliases, (homepages[pid],), (roles_by_person[pid],))
    for pj in project_ids:
        org.projects[pj] = Project(
            pj, f"Project {pj.capitalize()}", (project_urls[pj],), tuple(project_members[pj])
        )
    division_id = "div-research"
    org.units[division_id] = Unit(division_id, "division", "Research Division")
    for gid in group_ids:
        unit_projects = tuple(
            pj for pj in project_ids if any(group_of[pid] == gid for pid in project_members[pj])
        )
        org.units[gid] = Unit(
            gid,
            "group",
            group_titles[gid],
            (group_urls[gid],),
            tuple((pid, roles_by_person[pid]) for pid in group_members[gid]),
            unit_projects,
            division_id,
        )

    qrels: Qrels = {}
    for topic in topics:
        tid = topic.topic_id
        expert = experts[tid]
        pool: dict[str, str] = {expert: "high"}
        project_of_expert = project_ids[person_ids.index(expert) % cfg.projects]
        co_members = [pid for pid in project_members[project_of_expert] if pid != expert]
        if co_members:
            pool[co_members[0]] = "medium"
        if len(co_members) > 1:
            pool[co_members[1]] = "low"
        outsiders = [pid for pid in person_ids if pid not in pool]
        if outsiders:
            pool[rng.choice(outsiders)] = "none"
        qrels[tid] = pool

    return SyntheticCollection(
        Corpus.from_documents(docs),
        tuple(links),
        alias_pairs,
        org,
        topics,
        qrels,
        experts,
        structured,
        db_reach,
    )
