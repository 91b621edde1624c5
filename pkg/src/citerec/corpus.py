"""Heterogeneous academic graph: loading, validation, snapshots and keywords.

Papers are addressed by dense integer surrogates ``0..n-1``. All relations are
stored as ``scipy.sparse`` CSR incidence matrices:

* ``cit_out``  paper x paper, row ``u`` holds Ref(u)
* ``cit_in``   transpose of ``cit_out``, row ``v`` holds Cit(v)
* ``pa``, ``pv``, ``pk``  paper x author / venue / keyword
"""
from __future__ import annotations

import csv
import json
import re
import sys
from dataclasses import asdict, dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

UNKNOWN_VENUE = -1

_TOKEN_RE = re.compile(r"[^0-9a-z]+")
_TSV_FIELDS = ("id", "title", "year", "venue", "authors", "keywords", "refs")


class CorpusError(Exception):
    pass


class CorpusParseError(CorpusError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CorpusValidationError(CorpusError):
    pass


@dataclass(frozen=True)
class PaperRecord:
    id: int
    title: str
    year: int
    venue: int
    authors: frozenset[int]
    keywords: frozenset[int]
    refs: frozenset[int]


@dataclass
class LoadReport:
    n_papers: int = 0
    n_citations: int = 0
    dangling: int = 0
    self_citations: int = 0
    duplicate_refs: int = 0
    dangling_examples: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _freeze(m: sp.csr_matrix) -> sp.csr_matrix:
    for arr in (m.data, m.indices, m.indptr):
        arr.setflags(write=False)
    return m


def _binary_csr(rows, cols, shape) -> sp.csr_matrix:
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    m = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=shape)
    m.sum_duplicates()
    m.data[:] = 1.0
    m.sort_indices()
    return m


class CorpusGraph:
    """Immutable citation graph with author, venue and keyword layers."""

    def __init__(
        self,
        years,
        cit_out: sp.spmatrix,
        pa: sp.spmatrix,
        venues,
        pk: sp.spmatrix,
        *,
        ext_ids: Sequence[str] | None = None,
        titles: Sequence[str] | None = None,
        author_names: Sequence[str] | None = None,
        venue_names: Sequence[str] | None = None,
        keyword_names: Sequence[str] | None = None,
        report: LoadReport | None = None,
    ):
        n = len(years)
        self.years = _readonly(np.asarray(years, dtype=np.int64).copy())
        self.venues = _readonly(np.asarray(venues, dtype=np.int64).copy())
        cit_out = sp.csr_matrix(cit_out, dtype=np.float64)
        if cit_out.shape != (n, n):
            raise CorpusValidationError(f"citation matrix shape {cit_out.shape} != ({n}, {n})")
        if n and cit_out.diagonal().any():
            raise CorpusValidationError("self-citation in citation matrix")
        cit_out.sort_indices()
        self.cit_out = _freeze(cit_out)
        self.pa = _freeze(sp.csr_matrix(pa, dtype=np.float64))
        self.pk = _freeze(sp.csr_matrix(pk, dtype=np.float64))
        if self.pa.shape[0] != n or self.pk.shape[0] != n or len(self.venues) != n:
            raise CorpusValidationError("metadata incidence row count differs from paper count")

        self.author_names = list(author_names) if author_names is not None else [f"a{i}" for i in range(self.pa.shape[1])]
        self.keyword_names = list(keyword_names) if keyword_names is not None else [f"k{i}" for i in range(self.pk.shape[1])]
        if venue_names is None:
            nv = int(self.venues.max()) + 1 if n and self.venues.max() >= 0 else 0
            venue_names = [f"v{i}" for i in range(nv)]
        self.venue_names = list(venue_names)
        if n and self.venues.max() >= len(self.venue_names):
            raise CorpusValidationError("venue id out of range")
        self.ext_ids = list(ext_ids) if ext_ids is not None else [str(i) for i in range(n)]
        self.titles = list(titles) if titles is not None else [""] * n
        self.report = report

    # sizes
    @property
    def n_papers(self) -> int:
        return len(self.years)

    def __len__(self) -> int:
        return self.n_papers

    @property
    def n_citations(self) -> int:
        return int(self.cit_out.nnz)

    @property
    def n_authors(self) -> int:
        return self.pa.shape[1]

    @property
    def n_venues(self) -> int:
        return len(self.venue_names)

    @property
    def n_keywords(self) -> int:
        return self.pk.shape[1]

    # derived structure, computed once
    @cached_property
    def cit_in(self) -> sp.csr_matrix:
        m = self.cit_out.T.tocsr()
        m.sort_indices()
        return _freeze(m)

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Undirected Adj = Ref u Cit as a binary symmetric matrix."""
        m = (self.cit_out + self.cit_in).tocsr()
        m.data[:] = 1.0
        m.sort_indices()
        return _freeze(m)

    @cached_property
    def degree(self) -> np.ndarray:
        return _readonly(np.diff(self.adjacency.indptr).astype(np.int64))

    @cached_property
    def pv(self) -> sp.csr_matrix:
        has = np.flatnonzero(self.venues >= 0)
        return _freeze(_binary_csr(has, self.venues[has], (self.n_papers, self.n_venues)))

    @cached_property
    def _ext_index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.ext_ids)}

    def incidence(self, kind: str) -> sp.csr_matrix:
        """Paper x entity incidence for ``kind`` in {author, venue, keyword} (or A/V/K)."""
        k = kind.lower()[:1]
        if k == "a":
            return self.pa
        if k == "v":
            return self.pv
        if k == "k":
            return self.pk
        raise ValueError(f"unknown metadata kind {kind!r}")

    # per-paper accessors
    def refs(self, v: int) -> np.ndarray:
        return self.cit_out.indices[self.cit_out.indptr[v]:self.cit_out.indptr[v + 1]]

    def citers(self, v: int) -> np.ndarray:
        return self.cit_in.indices[self.cit_in.indptr[v]:self.cit_in.indptr[v + 1]]

    def adj(self, v: int) -> np.ndarray:
        a = self.adjacency
        return a.indices[a.indptr[v]:a.indptr[v + 1]]

    def authors(self, v: int) -> np.ndarray:
        return self.pa.indices[self.pa.indptr[v]:self.pa.indptr[v + 1]]

    def keywords(self, v: int) -> np.ndarray:
        return self.pk.indices[self.pk.indptr[v]:self.pk.indptr[v + 1]]

    def index_of(self, ext_id) -> int:
        try:
            return self._ext_index[str(ext_id)]
        except KeyError:
            raise KeyError(f"unknown paper id {ext_id!r}") from None

    def record(self, v: int) -> PaperRecord:
        return PaperRecord(
            id=int(v),
            title=self.titles[v],
            year=int(self.years[v]),
            venue=int(self.venues[v]),
            authors=frozenset(self.authors(v).tolist()),
            keywords=frozenset(self.keywords(v).tolist()),
            refs=frozenset(self.refs(v).tolist()),
        )

    @property
    def papers(self) -> list[PaperRecord]:
        return [self.record(v) for v in range(self.n_papers)]

    def citation_edges(self) -> np.ndarray:
        """(m, 2) array of (citing, cited) pairs in row-major order."""
        coo = self.cit_out.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return np.column_stack([coo.row[order], coo.col[order]]).astype(np.int64)

    def with_keywords(self, assignment: Sequence[Iterable[int]], keyword_names: Sequence[str] | None = None) -> "CorpusGraph":
        """Copy of the graph whose keyword layer is replaced by ``assignment``."""
        rows, cols = [], []
        for v, kws in enumerate(assignment):
            for k in kws:
                rows.append(v)
                cols.append(int(k))
        names = list(keyword_names) if keyword_names is not None else self.keyword_names
        pk = _binary_csr(rows, cols, (self.n_papers, len(names)))
        return CorpusGraph(
            self.years, self.cit_out, self.pa, self.venues, pk,
            ext_ids=self.ext_ids, titles=self.titles, author_names=self.author_names,
            venue_names=self.venue_names, keyword_names=names, report=self.report,
        )

    def _slice(self, keep: np.ndarray) -> dict:
        cit = self.cit_out[keep][:, keep]
        return dict(
            years=self.years[keep],
            cit_out=cit,
            pa=self.pa[keep],
            venues=self.venues[keep],
            pk=self.pk[keep],
            ext_ids=[self.ext_ids[i] for i in keep],
            titles=[self.titles[i] for i in keep],
            author_names=self.author_names,
            venue_names=self.venue_names,
            keyword_names=self.keyword_names,
        )

    def __repr__(self) -> str:
        return (f"{type(self).__name__}(papers={self.n_papers}, citations={self.n_citations}, "
                f"authors={self.n_authors}, venues={self.n_venues}, keywords={self.n_keywords})")


class SubGraph(CorpusGraph):
    """Induced subgraph of ``parent`` on the sorted vertex list ``keep``.

    Entity id spaces (authors, venues, keywords) are shared with the parent;
    only paper ids are remapped.
    """

    def __init__(self, parent: CorpusGraph, keep):
        keep = np.unique(np.asarray(keep, dtype=np.int64))
        if len(keep) and (keep[0] < 0 or keep[-1] >= parent.n_papers):
            raise KeyError("subgraph vertex out of range")
        super().__init__(**parent._slice(keep))
        self.parent = parent
        self.original_ids = _readonly(keep)

    @cached_property
    def _to_local(self) -> np.ndarray:
        inv = np.full(self.parent.n_papers, -1, dtype=np.int64)
        inv[self.original_ids] = np.arange(self.n_papers)
        return _readonly(inv)

    def to_local(self, ids) -> np.ndarray:
        """Map parent ids to local ids; ids outside the subgraph map to -1."""
        return self._to_local[np.asarray(ids, dtype=np.int64)]

    def to_original(self, ids) -> np.ndarray:
        return self.original_ids[np.asarray(ids, dtype=np.int64)]


class Snapshot(SubGraph):
    """The graph as it looked when ``query`` was being written."""

    def __init__(self, parent: CorpusGraph, keep, cutoff_year: int, excluded: Iterable[int] = ()):
        super().__init__(parent, keep)
        self.cutoff_year = int(cutoff_year)
        self.excluded = frozenset(int(e) for e in excluded)


def temporal_snapshot(g: CorpusGraph, query: int, exclude: Iterable[int] = ()) -> Snapshot:
    """Drop ``query`` and every paper published strictly after it.

    Papers from the same year as the query are kept.
    """
    if not 0 <= query < g.n_papers:
        raise KeyError(f"unknown query paper {query}")
    excluded = {int(query), *map(int, exclude)}
    mask = g.years <= g.years[query]
    mask[list(excluded)] = False
    return Snapshot(g, np.flatnonzero(mask), int(g.years[query]), excluded)


# ---------------------------------------------------------------- loading


def _as_list(value, line: int, name: str) -> list[str]:
    if value is None:
        return []
    if not isinstance(value, list):
        raise CorpusParseError(line, f"field {name!r} must be a list")
    return [str(x) for x in value]


def _read_jsonl(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusParseError(lineno, f"invalid JSON ({exc.msg})") from None
            if not isinstance(rec, dict):
                raise CorpusParseError(lineno, "record is not an object")
            yield lineno, rec


def _read_tsv(path: Path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        header = next(reader, None)
        if header is None:
            return
        if tuple(header) != _TSV_FIELDS:
            raise CorpusParseError(1, "expected header " + " ".join(_TSV_FIELDS))
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(_TSV_FIELDS):
                raise CorpusParseError(lineno, f"expected {len(_TSV_FIELDS)} columns, got {len(row)}")
            rec = dict(zip(_TSV_FIELDS, row))
            for key in ("authors", "keywords", "refs"):
                rec[key] = [x for x in rec[key].split(";") if x]
            rec["venue"] = rec["venue"] or None
            yield lineno, rec


def from_records(records: Iterable[tuple[int, dict]]) -> CorpusGraph:
    """Build a graph from ``(line number, record dict)`` pairs.

    Two passes: surrogate keys are assigned first, then references resolved.
    """
    report = LoadReport()
    ext_ids: list[str] = []
    index: dict[str, int] = {}
    titles, years, venues_raw, authors_raw, keywords_raw, refs_raw = [], [], [], [], [], []
    for lineno, rec in records:
        if "id" not in rec or rec["id"] is None or rec["id"] == "":
            raise CorpusParseError(lineno, "missing id")
        pid = str(rec["id"])
        if pid in index:
            raise CorpusValidationError(f"duplicate paper id {pid!r} (line {lineno})")
        try:
            year = int(rec["year"])
        except (KeyError, TypeError, ValueError):
            raise CorpusParseError(lineno, "missing or non-integer year") from None
        index[pid] = len(ext_ids)
        ext_ids.append(pid)
        titles.append(str(rec.get("title") or ""))
        years.append(year)
        venue = rec.get("venue")
        venues_raw.append(None if venue in (None, "") else str(venue))
        authors_raw.append(_as_list(rec.get("authors"), lineno, "authors"))
        keywords_raw.append(_as_list(rec.get("keywords"), lineno, "keywords"))
        refs_raw.append(_as_list(rec.get("refs"), lineno, "refs"))

    n = len(ext_ids)
    author_names = sorted({a for lst in authors_raw for a in lst})
    keyword_names = sorted({k for lst in keywords_raw for k in lst})
    venue_names = sorted({v for v in venues_raw if v is not None})
    aidx = {a: i for i, a in enumerate(author_names)}
    kidx = {k: i for i, k in enumerate(keyword_names)}
    vidx = {v: i for i, v in enumerate(venue_names)}

    rows, cols = [], []
    for u, refs in enumerate(refs_raw):
        seen = set()
        for r in refs:
            v = index.get(r)
            if v is None:
                report.dangling += 1
                if len(report.dangling_examples) < 10:
                    report.dangling_examples.append(r)
            elif v == u:
                report.self_citations += 1
            elif v in seen:
                report.duplicate_refs += 1
            else:
                seen.add(v)
                rows.append(u)
                cols.append(v)
    cit = _binary_csr(rows, cols, (n, n))

    pa = _binary_csr(
        [u for u, lst in enumerate(authors_raw) for _ in lst],
        [aidx[a] for lst in authors_raw for a in lst],
        (n, len(author_names)),
    )
    pk = _binary_csr(
        [u for u, lst in enumerate(keywords_raw) for _ in lst],
        [kidx[k] for lst in keywords_raw for k in lst],
        (n, len(keyword_names)),
    )
    venues = [UNKNOWN_VENUE if v is None else vidx[v] for v in venues_raw]
    report.n_papers = n
    report.n_citations = int(cit.nnz)
    return CorpusGraph(
        years, cit, pa, venues, pk,
        ext_ids=ext_ids, titles=titles, author_names=author_names,
        venue_names=venue_names, keyword_names=keyword_names, report=report,
    )


def load_corpus(path, format: str = "jsonl") -> CorpusGraph:
    """Load a JSON-lines or TSV corpus; dangling references are dropped and counted."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    if format == "jsonl":
        return from_records(_read_jsonl(path))
    if format == "tsv":
        return from_records(_read_tsv(path))
    raise ValueError(f"unknown corpus format {format!r}")


def print_load_report(g: CorpusGraph, stream=None) -> None:
    if g.report is not None:
        print(g.report.to_json(), file=stream or sys.stderr)


def paper_dicts(g: CorpusGraph):
    """Yield each paper as a JSON-ready dict using external ids and names."""
    for v in range(g.n_papers):
        venue = int(g.venues[v])
        yield {
            "id": g.ext_ids[v],
            "title": g.titles[v],
            "year": int(g.years[v]),
            "venue": None if venue == UNKNOWN_VENUE else g.venue_names[venue],
            "authors": [g.author_names[a] for a in g.authors(v)],
            "keywords": [g.keyword_names[k] for k in g.keywords(v)],
            "refs": [g.ext_ids[r] for r in g.refs(v)],
        }


def write_corpus(g: CorpusGraph, path, format: str = "jsonl") -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if format == "jsonl":
            for rec in paper_dicts(g):
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        elif format == "tsv":
            w = csv.writer(fh, delimiter="\t", quoting=csv.QUOTE_NONE, escapechar="\\", lineterminator="\n")
            w.writerow(_TSV_FIELDS)
            for rec in paper_dicts(g):
                w.writerow([
                    rec["id"], rec["title"].replace("\t", " "), rec["year"], rec["venue"] or "",
                    ";".join(rec["authors"]), ";".join(rec["keywords"]), ";".join(rec["refs"]),
                ])
        else:
            raise ValueError(f"unknown corpus format {format!r}")


# ---------------------------------------------------------------- keywords


def load_stopwords(path=None) -> frozenset[str]:
    """The bundled stopword list, or one word per line from ``path``."""
    if path is None:
        text = resources.files("citerec").joinpath("data/stopwords.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip() and not w.startswith("#"))


STOPWORDS = load_stopwords()


def title_keywords(title: str, stopwords: Iterable[str] | None = None) -> set[str]:
    stop = STOPWORDS if stopwords is None else stopwords
    return {t for t in _TOKEN_RE.split(title.lower()) if len(t) >= 2 and t not in stop}


def keywords_from_titles(g: CorpusGraph, stopwords: Iterable[str] | None = None) -> CorpusGraph:
    """Replace every paper's keywords with the non-stopword tokens of its title."""
    stop = STOPWORDS if stopwords is None else frozenset(stopwords)
    per_paper = [title_keywords(t, stop) for t in g.titles]
    names = sorted(set().union(*per_paper)) if per_paper else []
    idx = {w: i for i, w in enumerate(names)}
    return g.with_keywords([[idx[w] for w in kws] for kws in per_paper], names)


def propagate_keywords(
    g: CorpusGraph,
    labeled: Iterable[int],
    m: int = 10,
    iters: int = 10,
    initial: Sequence[Iterable[int]] | None = None,
) -> list[frozenset[int]]:
    """Spread keyword labels from ``labeled`` papers over the undirected citation graph.

    Rounds are synchronous. Each unlabeled paper takes the ``m`` most frequent
    keywords among its neighbours' labels from the previous round, ties going
    to the smaller keyword id. Labeled papers keep their keywords, taken from
    ``initial`` when given and from the graph otherwise.
    """
    n = g.n_papers
    fixed = np.zeros(n, dtype=bool)
    labeled = np.asarray(sorted(set(int(v) for v in labeled)), dtype=np.int64)
    fixed[labeled] = True
    if initial is None:
        src = g.pk
    else:
        src = _binary_csr(
            [v for v, kws in enumerate(initial) for _ in kws],
            [int(k) for kws in initial for k in kws],
            (n, g.n_keywords),
        )
    keep_rows = sp.diags(fixed.astype(np.float64))
    labels = (keep_rows @ src).tocsr()
    labels.eliminate_zeros()
    adj = g.adjacency
    free = np.flatnonzero(~fixed)

    for _ in range(iters):
        counts = (adj @ labels).tocsr()
        nz_r, nz_c = labels.nonzero()
        keep = fixed[nz_r]
        rows, cols = list(nz_r[keep]), list(nz_c[keep])
        for v in free:
            lo, hi = counts.indptr[v], counts.indptr[v + 1]
            if lo == hi:
                continue
            kw = counts.indices[lo:hi]
            c = counts.data[lo:hi]
            order = np.lexsort((kw, -c))[:m]
            rows.extend([v] * len(order))
            cols.extend(kw[order].tolist())
        new = _binary_csr(rows, cols, labels.shape)
        if (new != labels).nnz == 0:
            labels = new
            break
        labels = new

    return [frozenset(labels.indices[labels.indptr[v]:labels.indptr[v + 1]].tolist()) for v in range(n)]
