"""Content-analysis statistics for coded job advertisements.

Two pieces: the yearly topic-proportion matrix ``p(i, j)`` (ads in year
``j`` mentioning topic ``i``, divided by the total number of distinct topic
mentions that year) and Cohen's kappa for two coders.
"""
from __future__ import annotations

import csv
import logging
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import InvalidParameterError, UndefinedKappaError, UnknownTopicError

logger = logging.getLogger(__name__)

OTHER = "other"

DEFAULT_SCHEME = (
    "open",
    "experimental_cs",
    "applied_cs",
    "ai_ml",
    "big_data",
    "bioinformatics",
    "architecture",
    "graphics",
    "vision",
    "data_visualization",
    "databases",
    "games",
    "hpc",
    "hci",
    "mobile",
    "modelling_simulation",
    "networks",
    "operating_systems",
    "parallel_distributed",
    "programming_languages",
    "scientific_computing",
    "security",
    "social_computing",
    "software_engineering",
    "tcs",
    "web",
    OTHER,
)


@dataclass(frozen=True)
class CodedAd:
    """One coded job ad. Repeated topic codes collapse to one mention."""

    year: int
    issue: str
    ad_id: str
    topics: frozenset

    def __post_init__(self):
        topics = frozenset(t.strip() for t in self.topics if t and t.strip())
        if not topics:
            raise InvalidParameterError(f"ad {self.ad_id!r} has no topic codes")
        object.__setattr__(self, "topics", topics)
        object.__setattr__(self, "year", int(self.year))
        object.__setattr__(self, "issue", str(self.issue))
        object.__setattr__(self, "ad_id", str(self.ad_id))


@dataclass(frozen=True, eq=False)
class TrendMatrix:
    """Rows are categories, columns are years; ``proportions[i, j] = p(i, j)``."""

    categories: tuple
    years: tuple
    proportions: np.ndarray
    yearly_totals: tuple
    warnings: tuple = field(default=())

    def proportion(self, category, year):
        return float(self.proportions[self.categories.index(category), self.years.index(year)])

    def long_rows(self):
        for i, cat in enumerate(self.categories):
            for j, year in enumerate(self.years):
                yield cat, year, float(self.proportions[i, j])

    def to_long_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["category", "year", "proportion"])
            for cat, year, p in self.long_rows():
                writer.writerow([cat, year, f"{p:.17g}"])

    def to_series_csvs(self, directory):
        """One ``<category>.csv`` file of ``year,proportion`` per category."""
        os.makedirs(directory, exist_ok=True)
        paths = []
        for i, cat in enumerate(self.categories):
            path = os.path.join(directory, f"{cat}.csv")
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["year", "proportion"])
                for j, year in enumerate(self.years):
                    writer.writerow([year, f"{self.proportions[i, j]:.17g}"])
            paths.append(path)
        return paths


def trend_matrix(ads: Iterable[CodedAd], scheme: Sequence[str] = DEFAULT_SCHEME, years=None):
    """Yearly topic proportions.

    ``N_j`` is the number of distinct (ad, topic) mentions in year ``j``;
    ``p(i, j)`` counts the ads in year ``j`` that mention topic ``i`` and
    divides by ``N_j``. The code ``other`` is always accepted and appended to
    the categories if the scheme lacks it. Years requested through ``years``
    that have no mentions are dropped and noted in ``warnings``.

    Raises
    ------
    UnknownTopicError
        For a topic code outside the scheme.
    """
    categories = list(dict.fromkeys(scheme))
    known = set(categories)
    counts = defaultdict(Counter)
    for ad in ads:
        for topic in ad.topics:
            if topic not in known:
                if topic != OTHER:
                    raise UnknownTopicError(topic, ad.ad_id)
                categories.append(OTHER)
                known.add(OTHER)
            counts[ad.year][topic] += 1

    requested = sorted(set(counts) | set(years or ()))
    kept, notes = [], []
    for year in requested:
        if sum(counts[year].values()) == 0:
            msg = f"year {year} has no topic mentions and is omitted"
            logger.warning(msg)
            notes.append(msg)
        else:
            kept.append(year)

    index = {c: i for i, c in enumerate(categories)}
    props = np.zeros((len(categories), len(kept)))
    totals = []
    for j, year in enumerate(kept):
        n_j = sum(counts[year].values())
        totals.append(n_j)
        for topic, n in counts[year].items():
            props[index[topic], j] = n / n_j
    return TrendMatrix(tuple(categories), tuple(kept), props, tuple(totals), tuple(notes))


def ads_per_issue(ads: Iterable[CodedAd], calendar: Sequence[str] | None = None):
    """Number of ads per issue as ``[(issue, count), ...]``.

    Without a calendar, issues are ordered by year and then by identifier,
    so identifiers should sort chronologically within a year (``1994-01``,
    ``1994-11``). With a calendar, its order is used and issues missing from
    the data are reported with a count of zero.
    """
    counts = Counter()
    first_year = {}
    for ad in ads:
        counts[ad.issue] += 1
        first_year[ad.issue] = min(ad.year, first_year.get(ad.issue, ad.year))
    if calendar is not None:
        extra = sorted(set(counts) - set(calendar), key=lambda s: (first_year[s], s))
        return [(issue, counts.get(issue, 0)) for issue in list(calendar) + extra]
    return [(issue, counts[issue]) for issue in sorted(counts, key=lambda s: (first_year[s], s))]


def read_coded_ads(path):
    """Read ``year,issue,ad_id,topics`` CSV; topics are ``;``-separated."""
    ads = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"year", "issue", "ad_id", "topics"} - set(reader.fieldnames or ())
        if missing:
            raise InvalidParameterError(f"{path}: missing columns {sorted(missing)}")
        for row in reader:
            if not any((v or "").strip() for v in row.values()):
                continue
            ads.append(CodedAd(
                year=int(row["year"]),
                issue=row["issue"].strip(),
                ad_id=row["ad_id"].strip(),
                topics=frozenset(row["topics"].split(";")),
            ))
    return ads


def read_scheme(path):
    """One category code per line; blank lines and ``#`` comments ignored."""
    with open(path, encoding="utf-8") as fh:
        codes = [line.split("#", 1)[0].strip() for line in fh]
    return [c for c in codes if c]


# Cohen's kappa ----------------------------------------------------------


@dataclass(frozen=True)
class CoderTable:
    """Paired nominal codes from two coders: ``(item_id, code1, code2)`` rows."""

    items: tuple

    def __post_init__(self):
        items = tuple((str(i), c1, c2) for i, c1, c2 in self.items)
        if len(items) < 2:
            raise InvalidParameterError("a coder table needs at least two items")
        object.__setattr__(self, "items", items)

    @classmethod
    def from_codes(cls, coder1, coder2):
        if len(coder1) != len(coder2):
            raise InvalidParameterError("coders rated different numbers of items")
        return cls(tuple((str(k), a, b) for k, (a, b) in enumerate(zip(coder1, coder2))))


@dataclass(frozen=True)
class KappaReport:
    kappa: float
    p_o: float
    p_e: float
    n_items: int

    def as_dict(self):
        return {"kappa": self.kappa, "p_o": self.p_o, "p_e": self.p_e, "n_items": self.n_items}


def cohens_kappa(table: CoderTable):
    """Chance-corrected agreement ``(p_o - p_e) / (1 - p_e)`` between two coders."""
    n = len(table.items)
    first = Counter(c1 for _, c1, _ in table.items)
    second = Counter(c2 for _, _, c2 in table.items)
    if len(first) == 1 and first.keys() == second.keys():
        raise UndefinedKappaError(
            "both coders used one identical code for every item; kappa is undefined"
        )
    agree = sum(1 for _, c1, c2 in table.items if c1 == c2)
    p_o = agree / n
    p_e = sum(first[c] * second[c] for c in first) / (n * n)
    return KappaReport((p_o - p_e) / (1.0 - p_e), p_o, p_e, n)


def read_coder_table(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"item_id", "coder1", "coder2"} - set(reader.fieldnames or ())
        if missing:
            raise InvalidParameterError(f"{path}: missing columns {sorted(missing)}")
        rows = [
            (r["item_id"].strip(), r["coder1"].strip(), r["coder2"].strip())
            for r in reader
            if any((v or "").strip() for v in r.values())
        ]
    return CoderTable(tuple(rows))
