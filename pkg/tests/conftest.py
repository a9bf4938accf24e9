import pytest

from expertsearch.corpus import Corpus, Document
from expertsearch.pipeline import Collection
from expertsearch.synthetic import SyntheticConfig, gen_synthetic
from expertsearch.org import parse_org
from expertsearch.urls import AliasMap

TINY_ORG_XML = b"""<?xml version="1.0" encoding="utf-8"?>
<org>
  <role id="t1" title="Scientist"/>
  <role id="t2" title="Engineer"/>
  <person id="p1">
    <name>Ada Lovelace</name>
    <alias>A. Lovelace</alias>
    <homepage>http://ex.org/people/ada/</homepage>
  </person>
  <person id="p2">
    <name>Carl Gauss</name>
    <homepage>http://ex.org/people/carl/</homepage>
  </person>
  <person id="p3">
    <name>Emmy Noether</name>
  </person>
  <project id="expert">
    <details>
      <title>Expert Finder</title>
      <descriptionurls><url>http://ex.org/projects/expert/</url></descriptionurls>
      <member personID="p1"/>
      <member personID="p2"/>
    </details>
  </project>
  <unit id="ted" type="team">
    <details>
      <title>Number Crunchers</title>
      <descriptionurls><url>http://ex.org/groups/ted/</url></descriptionurls>
      <member personID="p1"><role roleID="t1"/></member>
      <member personID="p2"><role roleID="t2"/></member>
      <member personID="p3"><role roleID="t1"/></member>
      <project projectID="expert"/>
    </details>
  </unit>
</org>
"""

TINY_DOCS = (
    Document("d-home-ada", "http://ex.org/people/ada/", "extranet", "Ada Lovelace",
             "Ada Lovelace personal homepage. Research on lattice algorithms."),
    Document("d-ada-notes", "http://ex.org/people/ada/lattice-notes.html", "extranet",
             "lattice notes", "lattice algorithms experiments and lattice measurements."),
    Document("d-home-carl", "http://ex.org/people/carl/", "extranet", "Carl Gauss",
             "Carl Gauss homepage. Number theory results."),
    Document("d-proj", "http://ex.org/projects/expert/", "extranet", "Expert Finder",
             "Project description. Members: Ada Lovelace, Carl Gauss. Work on ranking."),
    Document("d-group", "http://ex.org/groups/ted/", "extranet", "Number Crunchers",
             "Number Crunchers group. Members: Ada Lovelace, Carl Gauss, Emmy Noether."),
    Document("d-minutes", "http://in.org/admin/minutes-1.html", "intranet", "Minutes 1",
             "Meeting minutes. Attendees: Ada Lovelace, Carl Gauss, Emmy Noether. budget travel."),
    Document("d-news", "http://in.org/news/item1.html", "intranet", "News",
             "General news about the division."),
    Document("db-plan", "db://projects/expert", "db", "Expert plan",
             "Plan for ranking work.", db_kind="project_description", project_id="expert"),
    Document("db-pub", "db://publications/pub-1", "db", "algebra study",
             "A study of abstract algebra by Emmy Noether.", db_kind="publication", person_ids=("p3",)),
    Document("db-contact", "db://contacts/c-1", "db", "Contact record",
             "Business contact record for Carl Gauss.", db_kind="contact", person_ids=("p2",)),
)

TINY_LINKS = (
    ("http://ex.org/people/ada/", "http://ex.org/people/ada/lattice-notes.html", 1),
    ("http://ex.org/people/ada/", "http://ex.org/projects/expert/", 2),
    ("http://ex.org/projects/expert/", "http://ex.org/people/ada/", 3),
    ("http://in.org/admin/minutes-1.html", "http://ex.org/people/ada/", 4),
)


@pytest.fixture
def tiny_org():
    return parse_org(TINY_ORG_XML)


@pytest.fixture
def tiny_corpus():
    return Corpus.from_documents(TINY_DOCS)


@pytest.fixture
def tiny_collection(tiny_corpus, tiny_org):
    return Collection(tiny_corpus, TINY_LINKS, AliasMap(), tiny_org)


@pytest.fixture(scope="session")
def synthetic():
    return gen_synthetic(SyntheticConfig(), 42)
