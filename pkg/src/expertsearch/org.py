"""Organizational model: people, units, projects, roles, and seed pages.

The XML schema is a top-level ``<org>`` holding ``<role>``, ``<person>``,
``<project>`` and ``<unit>`` elements. Unit hierarchy is expressed by
nesting ``<unit>`` elements; memberships are ``<member personID="...">``
children (optionally wrapped in ``<details>``) carrying ``<role roleID>``
references.
"""

from __future__ import annotations

import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from functools import cached_property

from .corpus import Corpus
from .urls import AliasMap, normalize_url

logger = logging.getLogger(__name__)

UNIT_TYPES = ("team", "group", "division", "other")

SEED_PERSON = "person_homepage"
SEED_PROJECT = "project_homepage"
SEED_GROUP = "group_homepage"
# one-URL-many-kinds conflicts resolve to the person's own page first
_SEED_PRIORITY = {SEED_PERSON: 0, SEED_PROJECT: 1, SEED_GROUP: 2}


@dataclass(frozen=True)
class Person:
    person_id: str
    display_name: str
    name_aliases: tuple[str, ...] = ()
    homepage_urls: tuple[str, ...] = ()
    roles: tuple[str, ...] = ()


@dataclass(frozen=True)
class Role:
    role_id: str
    title: str = ""


@dataclass(frozen=True)
class Unit:
    unit_id: str
    unit_type: str = "other"
    title: str = ""
    description_urls: tuple[str, ...] = ()
    members: tuple[tuple[str, str | None], ...] = ()
    projects: tuple[str, ...] = ()
    parent_unit: str | None = None

    def member_ids(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for person_id, _ in self.members:
            seen.setdefault(person_id)
        return tuple(seen)


@dataclass(frozen=True)
class Project:
    project_id: str
    title: str = ""
    description_urls: tuple[str, ...] = ()
    members: tuple[str, ...] = ()


@dataclass(frozen=True)
class SeedPoint:
    person_id: str
    url: str
    seed_kind: str


@dataclass
class OrgModel:
    persons: dict[str, Person] = field(default_factory=dict)
    units: dict[str, Unit] = field(default_factory=dict)
    projects: dict[str, Project] = field(default_factory=dict)
    roles: dict[str, Role] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list, compare=False)

    @classmethod
    def empty(cls) -> "OrgModel":
        return cls()

    def units_of(self, person_id: str) -> list[Unit]:
        return [u for _, u in sorted(self.units.items()) if person_id in u.member_ids()]

    def projects_of(self, person_id: str) -> list[Project]:
        return [p for _, p in sorted(self.projects.items()) if person_id in p.members]

    @cached_property
    def url_kinds(self) -> dict[str, frozenset[str]]:
        """Seed-page kinds claimed by each URL (homepage / project / group)."""
        table: dict[str, set[str]] = {}
        for person in self.persons.values():
            for url in person.homepage_urls:
                table.setdefault(url, set()).add(SEED_PERSON)
        for project in self.projects.values():
            for url in project.description_urls:
                table.setdefault(url, set()).add(SEED_PROJECT)
        for unit in self.units.values():
            for url in unit.description_urls:
                table.setdefault(url, set()).add(SEED_GROUP)
        return {url: frozenset(kinds) for url, kinds in table.items()}


def _details(el: ET.Element) -> ET.Element:
    wrapped = el.find("details")
    return wrapped if wrapped is not None else el


def _text(el: ET.Element | None) -> str:
    return (el.text or "").strip() if el is not None else ""


def _urls_of(el: ET.Element, note, where: str, aliases: AliasMap | None) -> tuple[str, ...]:
    urls = []
    holder = el.find("descriptionurls")
    found = holder.findall("url") if holder is not None else []
    for url_el in found:
        raw = _text(url_el)
        if not raw:
            continue
        try:
            urls.append(normalize_url(raw, aliases))
        except ValueError as exc:
            note(f"{where}: {exc}")
    return tuple(urls)


def parse_org(xml_data: bytes | str, aliases: AliasMap | None = None) -> OrgModel:
    """Parse the org-structure XML into an OrgModel.

    Malformed XML is fatal. Dangling person/project/role references are
    collected on ``model.warnings`` (and logged) and the offending binding
    is skipped; everything else is kept.
    """
    try:
        root = ET.fromstring(xml_data)
    except ET.ParseError as exc:
        raise ValueError(f"org XML parse error: {exc}") from None

    model = OrgModel()

    def note(msg: str) -> None:
        model.warnings.append(msg)
        logger.warning("org: %s", msg)

    for el in root.findall("role"):
        role_id = el.get("id")
        if not role_id:
            note("role element without id, skipped")
            continue
        if role_id in model.roles:
            note(f"duplicate role {role_id}, keeping first")
            continue
        model.roles[role_id] = Role(role_id, el.get("title") or _text(el.find("title")))

    person_roles: dict[str, set[str]] = {}
    for el in root.findall("person"):
        person_id = el.get("id")
        if not person_id:
            note("person element without id, skipped")
            continue
        if person_id in model.persons:
            note(f"duplicate person {person_id}, keeping first")
            continue
        display_name = _text(el.find("name")) or (el.get("name") or "").strip()
        if not display_name:
            note(f"person {person_id} has no name, skipped")
            continue
        name_aliases = tuple(t for a in el.findall("alias") if (t := _text(a)))
        homepages = []
        for home_el in el.findall("homepage"):
            raw = _text(home_el)
            if not raw:
                continue
            try:
                homepages.append(normalize_url(raw, aliases))
            except ValueError as exc:
                note(f"person {person_id}: {exc}")
        declared = set()
        for role_el in el.findall("role"):
            role_id = role_el.get("roleID")
            if not role_id:
                continue
            if role_id not in model.roles:
                note(f"person {person_id}: unknown role {role_id}, dropped")
                continue
            declared.add(role_id)
        model.persons[person_id] = Person(
            person_id, display_name, name_aliases, tuple(homepages)
        )
        person_roles[person_id] = declared

    for el in root.findall("project"):
        project_id = el.get("id")
        if not project_id:
            note("project element without id, skipped")
            continue
        if project_id in model.projects:
            note(f"duplicate project {project_id}, keeping first")
            continue
        det = _details(el)
        members = []
        for member_el in det.findall("member"):
            member_id = member_el.get("personID")
            if member_id not in model.persons:
                note(f"project {project_id}: unknown person {member_id}, membership skipped")
                continue
            if member_id not in members:
                members.append(member_id)
        model.projects[project_id] = Project(
            project_id,
            title=el.get("title") or _text(det.find("title")),
            description_urls=_urls_of(det, note, f"project {project_id}", aliases),
            members=tuple(members),
        )

    def parse_unit(el: ET.Element, parent_id: str | None) -> None:
        unit_id = el.get("id")
        if not unit_id:
            note("unit element without id, skipped")
            return
        if unit_id in model.units:
            note(f"duplicate unit {unit_id}, keeping first")
            return
        unit_type = el.get("type", "other")
        if unit_type not in UNIT_TYPES:
            note(f"unit {unit_id}: unknown type {unit_type!r}, treated as other")
            unit_type = "other"
        det = _details(el)
        member_roles: dict[str, list[str]] = {}
        for member_el in det.findall("member"):
            member_id = member_el.get("personID")
            if member_id not in model.persons:
                note(f"unit {unit_id}: unknown person {member_id}, membership skipped")
                continue
            roles_here = member_roles.setdefault(member_id, [])
            for role_el in member_el.findall("role"):
                role_id = role_el.get("roleID")
                if not role_id:
                    continue
                if role_id not in model.roles:
                    note(f"unit {unit_id}: unknown role {role_id} for member {member_id}, dropped")
                    continue
                if role_id not in roles_here:
                    roles_here.append(role_id)
        members: list[tuple[str, str | None]] = []
        for member_id, role_ids in member_roles.items():
            if role_ids:
                members.extend((member_id, rid) for rid in role_ids)
                person_roles[member_id].update(role_ids)
            else:
                members.append((member_id, None))
        project_refs = []
        for project_el in det.findall("project"):
            ref = project_el.get("projectID")
            if ref not in model.projects:
                note(f"unit {unit_id}: unknown project {ref}, reference skipped")
                continue
            if ref not in project_refs:
                project_refs.append(ref)
        model.units[unit_id] = Unit(
            unit_id,
            unit_type=unit_type,
            title=el.get("title") or _text(det.find("title")),
            description_urls=_urls_of(det, note, f"unit {unit_id}", aliases),
            members=tuple(members),
            projects=tuple(project_refs),
            parent_unit=parent_id,
        )
        for child in el.findall("unit"):
            parse_unit(child, unit_id)

    for el in root.findall("unit"):
        parse_unit(el, None)

    for person_id, declared in person_roles.items():
        person = model.persons[person_id]
        model.persons[person_id] = replace(person, roles=tuple(sorted(declared)))
    return model


def org_to_xml(model: OrgModel) -> bytes:
    """Serialize an OrgModel; parse_org(org_to_xml(m)) reproduces m."""
    root = ET.Element("org")
    for role_id in sorted(model.roles):
        role = model.roles[role_id]
        el = ET.SubElement(root, "role", id=role_id)
        if role.title:
            el.set("title", role.title)
    for person_id in sorted(model.persons):
        person = model.persons[person_id]
        el = ET.SubElement(root, "person", id=person_id)
        ET.SubElement(el, "name").text = person.display_name
        for alias in person.name_aliases:
            ET.SubElement(el, "alias").text = alias
        for url in person.homepage_urls:
            ET.SubElement(el, "homepage").text = url
        for role_id in person.roles:
            ET.SubElement(el, "role", roleID=role_id)
    for project_id in sorted(model.projects):
        project = model.projects[project_id]
        el = ET.SubElement(root, "project", id=project_id)
        det = ET.SubElement(el, "details")
        if project.title:
            ET.SubElement(det, "title").text = project.title
        if project.description_urls:
            holder = ET.SubElement(det, "descriptionurls")
            for url in project.description_urls:
                ET.SubElement(holder, "url").text = url
        for member_id in project.members:
            ET.SubElement(det, "member", personID=member_id)

    children: dict[str | None, list[str]] = {}
    for unit_id, unit in sorted(model.units.items()):
        children.setdefault(unit.parent_unit, []).append(unit_id)

    def emit_unit(unit_id: str, into: ET.Element) -> None:
        unit = model.units[unit_id]
        el = ET.SubElement(into, "unit", id=unit_id, type=unit.unit_type)
        det = ET.SubElement(el, "details")
        if unit.title:
            ET.SubElement(det, "title").text = unit.title
        if unit.description_urls:
            holder = ET.SubElement(det, "descriptionurls")
            for url in unit.description_urls:
                ET.SubElement(holder, "url").text = url
        emitted: set[str] = set()
        for member_id, role_id in unit.members:
            if role_id is None:
                ET.SubElement(det, "member", personID=member_id)
            elif member_id not in emitted:
                member_el = ET.SubElement(det, "member", personID=member_id)
                for mid, rid in unit.members:
                    if mid == member_id and rid is not None:
                        ET.SubElement(member_el, "role", roleID=rid)
                emitted.add(member_id)
        for project_id in unit.projects:
            ET.SubElement(det, "project", projectID=project_id)
        for child_id in children.get(unit_id, ()):
            emit_unit(child_id, el)

    for unit_id in children.get(None, ()):
        emit_unit(unit_id, root)
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def extract_seeds(org: OrgModel) -> list[SeedPoint]:
    """Seed pages per person: own homepages, project pages, then unit pages.

    Duplicate (person, url) combinations keep the highest-priority kind.
    Output is canonically ordered, so equal models give equal seed lists.
    """
    best: dict[tuple[str, str], str] = {}

    def offer(person_id: str, url: str, kind: str) -> None:
        key = (person_id, url)
        current = best.get(key)
        if current is None or _SEED_PRIORITY[kind] < _SEED_PRIORITY[current]:
            best[key] = kind

    for person in org.persons.values():
        for url in person.homepage_urls:
            offer(person.person_id, url, SEED_PERSON)
    for project in org.projects.values():
        for person_id in project.members:
            for url in project.description_urls:
                offer(person_id, url, SEED_PROJECT)
    for unit in org.units.values():
        for person_id in unit.member_ids():
            for url in unit.description_urls:
                offer(person_id, url, SEED_GROUP)
    return [SeedPoint(pid, url, kind) for (pid, url), kind in sorted(best.items())]


def attach_db_documents(org: OrgModel, corpus: Corpus) -> list[tuple[str, str]]:
    """Direct (person_id, doc_id) evidence pairs from db records.

    Project descriptions fan out to all project members; publications attach
    to their authors, contacts to the listed persons. Unknown references are
    logged and skipped. Each pair is emitted once, in sorted order.
    """
    pairs: set[tuple[str, str]] = set()
    for doc in corpus:
        if doc.source != "db":
            continue
        if doc.db_kind == "project_description":
            if not doc.project_id or doc.project_id not in org.projects:
                logger.warning("db doc %s: unknown project %r, skipped", doc.doc_id, doc.project_id)
                continue
            for person_id in org.projects[doc.project_id].members:
                pairs.add((person_id, doc.doc_id))
        else:
            if not doc.person_ids:
                logger.warning("db doc %s: no linked persons, skipped", doc.doc_id)
                continue
            for person_id in doc.person_ids:
                if person_id not in org.persons:
                    logger.warning("db doc %s: unknown person %r, skipped", doc.doc_id, person_id)
                    continue
                pairs.add((person_id, doc.doc_id))
    return sorted(pairs)


def org_to_json_dict(model: OrgModel) -> dict:
    return {
        "roles": [
            {"role_id": r.role_id, "title": r.title} for _, r in sorted(model.roles.items())
        ],
        "persons": [
            {
                "person_id": p.person_id,
                "display_name": p.display_name,
                "name_aliases": list(p.name_aliases),
                "homepage_urls": list(p.homepage_urls),
                "roles": list(p.roles),
            }
            for _, p in sorted(model.persons.items())
        ],
        "projects": [
            {
                "project_id": p.project_id,
                "title": p.title,
                "description_urls": list(p.description_urls),
                "members": list(p.members),
            }
            for _, p in sorted(model.projects.items())
        ],
        "units": [
            {
                "unit_id": u.unit_id,
                "unit_type": u.unit_type,
                "title": u.title,
                "description_urls": list(u.description_urls),
                "members": [[pid, rid] for pid, rid in u.members],
                "projects": list(u.projects),
                "parent_unit": u.parent_unit,
            }
            for _, u in sorted(model.units.items())
        ],
    }


def org_from_json_dict(data: dict) -> OrgModel:
    model = OrgModel()
    for rec in data.get("roles", ()):
        model.roles[rec["role_id"]] = Role(rec["role_id"], rec.get("title", ""))
    for rec in data.get("persons", ()):
        model.persons[rec["person_id"]] = Person(
            rec["person_id"],
            rec["display_name"],
            tuple(rec.get("name_aliases", ())),
            tuple(rec.get("homepage_urls", ())),
            tuple(rec.get("roles", ())),
        )
    for rec in data.get("projects", ()):
        model.projects[rec["project_id"]] = Project(
            rec["project_id"],
            rec.get("title", ""),
            tuple(rec.get("description_urls", ())),
            tuple(rec.get("members", ())),
        )
    for rec in data.get("units", ()):
        model.units[rec["unit_id"]] = Unit(
            rec["unit_id"],
            rec.get("unit_type", "other"),
            rec.get("title", ""),
            tuple(rec.get("description_urls", ())),
            tuple((pid, rid) for pid, rid in rec.get("members", ())),
            tuple(rec.get("projects", ())),
            rec.get("parent_unit"),
        )
    return model
