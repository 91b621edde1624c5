"""Synthetic bibliographic corpora for desk-scale experiments.

Papers arrive year by year and only cite papers from strictly earlier years.
Each paper belongs to a community (its author pool and venues) and to a topic
inside that community (its signature keywords). References mix several
mechanisms:

* preferential attachment inside the community (heavy-tailed in-degree),
* copying a reference of an already chosen reference (dense projection graphs),
* a uniformly drawn older paper of the same topic (related by keywords only),
* an older paper by one of the authors (related by authorship only),
* a paper from anywhere in the corpus.

The topic and author mechanisms plant references that are poorly connected
to the rest of the reference list but share metadata with it.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass

import numpy as np
import scipy.sparse as sp

from ..corpus import CorpusGraph


@dataclass(frozen=True)
class SyntheticParams:
    year_start: int = 1990
    year_end: int = 2012
    growth: float = 0.1            # papers per year grow by exp(growth)
    mean_refs: float = 12.0
    refs_shape: float = 2.0        # gamma shape of the negative binomial reference count
    max_refs: int = 200
    attachment: str = "preferential"  # or "uniform"
    pa_offset: float = 1.0         # attachment weight = in-degree + offset
    n_communities: int = 0         # 0: one per 2000 papers, at least 4
    topics_per_community: int = 8
    keywords_per_topic: int = 6
    keywords_per_community: int = 10
    n_global_keywords: int = 50
    mean_authors: float = 3.0
    new_author_prob: float = 0.25
    venues_per_community: int = 3
    p_copy: float = 0.3
    p_topic: float = 0.2
    p_author: float = 0.1
    p_global: float = 0.05

    def validate(self, n_papers: int):
        if n_papers < 1:
            raise ValueError("n_papers must be >= 1")
        if self.year_end <= self.year_start:
            raise ValueError("year_end must exceed year_start")
        if self.attachment not in ("preferential", "uniform"):
            raise ValueError(f"unknown attachment {self.attachment!r}")
        probs = (self.p_copy, self.p_topic, self.p_author, self.p_global)
        if min(probs) < 0 or sum(probs) > 1:
            raise ValueError("reference mechanism probabilities must be >= 0 and sum to <= 1")
        if self.mean_refs <= 0 or self.refs_shape <= 0 or self.max_refs < 1:
            raise ValueError("reference count parameters must be positive")
        if self.mean_authors < 1 or not 0 <= self.new_author_prob <= 1:
            raise ValueError("author parameters out of range")
        if min(self.topics_per_community, self.keywords_per_topic, self.venues_per_community) < 1:
            raise ValueError("community structure parameters must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


def _papers_per_year(n: int, p: SyntheticParams) -> np.ndarray:
    years = np.arange(p.year_start, p.year_end + 1)
    w = np.exp(p.growth * (years - p.year_start))
    counts = np.floor(n * w / w.sum()).astype(np.int64)
    counts[-1] += n - counts.sum()
    return counts


class _Pool:
    """Papers available for citation plus the endpoint list used for preferential draws."""

    __slots__ = ("papers", "endpoints")

    def __init__(self):
        self.papers: list[int] = []
        self.endpoints: list[int] = []

    def draw(self, rnd: random.Random, preferential: bool, offset: float) -> int:
        if not preferential or not self.endpoints:
            return self.papers[rnd.randrange(len(self.papers))]
        np_, ne = len(self.papers), len(self.endpoints)
        if rnd.random() * (ne + offset * np_) < offset * np_:
            return self.papers[rnd.randrange(np_)]
        return self.endpoints[rnd.randrange(ne)]


def generate_synthetic_corpus(n_papers: int, params: SyntheticParams | None = None, rng_seed: int = 0) -> CorpusGraph:
    p = params or SyntheticParams()
    p.validate(n_papers)
    rng = np.random.default_rng(rng_seed)
    rnd = random.Random(rng_seed)
    preferential = p.attachment == "preferential"

    n_comm = p.n_communities or max(4, n_papers // 2000)
    n_topics = n_comm * p.topics_per_community
    # keyword ids: topic blocks, then community blocks, then global words
    topic_kw0 = 0
    comm_kw0 = n_topics * p.keywords_per_topic
    glob_kw0 = comm_kw0 + n_comm * p.keywords_per_community
    n_keywords = glob_kw0 + p.n_global_keywords
    n_venues = n_comm * p.venues_per_community
    venue_weights = 1.0 / np.arange(1, p.venues_per_community + 1)
    venue_weights = np.cumsum(venue_weights / venue_weights.sum()).tolist()

    per_year = _papers_per_year(n_papers, p)
    years = np.repeat(np.arange(p.year_start, p.year_end + 1), per_year)
    community = rng.integers(0, n_comm, size=n_papers)
    topic = community * p.topics_per_community + rng.integers(0, p.topics_per_community, size=n_papers)
    n_refs_target = np.minimum(rng.negative_binomial(p.refs_shape, p.refs_shape / (p.refs_shape + p.mean_refs), size=n_papers), p.max_refs)
    n_auth = 1 + rng.poisson(p.mean_authors - 1, size=n_papers)

    comm_pool = [_Pool() for _ in range(n_comm)]
    topic_pool = [_Pool() for _ in range(n_topics)]
    global_pool = _Pool()
    comm_authors: list[list[int]] = [[] for _ in range(n_comm)]  # one entry per authorship
    author_papers: list[list[int]] = []  # older papers of each author
    refs: list[list[int]] = [[] for _ in range(n_papers)]
    authors: list[list[int]] = [[] for _ in range(n_papers)]
    keywords: list[list[int]] = [[] for _ in range(n_papers)]
    venues = np.empty(n_papers, dtype=np.int64)

    cum = np.cumsum([p.p_copy, p.p_topic, p.p_author, p.p_global]).tolist()
    start = 0
    for count in per_year.tolist():
        batch = range(start, start + count)
        for v in batch:
            c, t = int(community[v]), int(topic[v])
            # metadata
            auth = set()
            for _ in range(int(n_auth[v])):
                pool = comm_authors[c]
                if not pool or rnd.random() < p.new_author_prob:
                    a = len(author_papers)
                    author_papers.append([])
                else:
                    a = pool[rnd.randrange(len(pool))]
                auth.add(a)
            authors[v] = sorted(auth)
            r = rnd.random()
            venues[v] = c * p.venues_per_community + next(i for i, w in enumerate(venue_weights) if r <= w or i == len(venue_weights) - 1)
            kws = {topic_kw0 + t * p.keywords_per_topic + i for i in rnd.sample(range(p.keywords_per_topic), min(3, p.keywords_per_topic))}
            kws.add(comm_kw0 + c * p.keywords_per_community + rnd.randrange(p.keywords_per_community))
            if p.n_global_keywords:
                kws.add(glob_kw0 + rnd.randrange(p.n_global_keywords))
            keywords[v] = sorted(kws)

            # references, strictly older years only
            available = len(global_pool.papers)
            want = min(int(n_refs_target[v]), available)
            chosen: set[int] = set()
            own_older = [a for a in authors[v] if author_papers[a]]
            attempts = 0
            while len(chosen) < want and attempts < 6 * want + 10:
                attempts += 1
                r = rnd.random()
                cand = -1
                if r < cum[0]:
                    if chosen:
                        base = list(chosen)[rnd.randrange(len(chosen))]
                        if refs[base]:
                            cand = refs[base][rnd.randrange(len(refs[base]))]
                elif r < cum[1]:
                    if topic_pool[t].papers:
                        cand = topic_pool[t].draw(rnd, False, 0.0)
                elif r < cum[2]:
                    if own_older:
                        lst = author_papers[own_older[rnd.randrange(len(own_older))]]
                        cand = lst[rnd.randrange(len(lst))]
                elif r < cum[3]:
                    cand = global_pool.draw(rnd, preferential, p.pa_offset)
                if cand < 0:
                    pool = comm_pool[c] if comm_pool[c].papers else global_pool
                    cand = pool.draw(rnd, preferential, p.pa_offset)
                chosen.add(cand)
            refs[v] = sorted(chosen)
            for u in refs[v]:
                comm_pool[int(community[u])].endpoints.append(u)
                global_pool.endpoints.append(u)
        # the year is over: its papers become citable and its authors' records grow
        for v in batch:
            c, t = int(community[v]), int(topic[v])
            comm_pool[c].papers.append(v)
            topic_pool[t].papers.append(v)
            global_pool.papers.append(v)
            for a in authors[v]:
                author_papers[a].append(v)
                comm_authors[c].append(a)
        start += count

    n_authors = len(author_papers)
    rows = np.repeat(np.arange(n_papers), [len(x) for x in refs])
    cit = sp.csr_matrix((np.ones(len(rows)), (rows, np.fromiter((u for x in refs for u in x), dtype=np.int64, count=len(rows)))),
                        shape=(n_papers, n_papers))
    arows = np.repeat(np.arange(n_papers), [len(x) for x in authors])
    pa = sp.csr_matrix((np.ones(len(arows)), (arows, np.fromiter((a for x in authors for a in x), dtype=np.int64, count=len(arows)))),
                       shape=(n_papers, n_authors))
    krows = np.repeat(np.arange(n_papers), [len(x) for x in keywords])
    pk = sp.csr_matrix((np.ones(len(krows)), (krows, np.fromiter((k for x in keywords for k in x), dtype=np.int64, count=len(krows)))),
                       shape=(n_papers, n_keywords))

    width = len(str(max(n_papers, n_authors, n_keywords, n_venues)))
    keyword_names = [f"kw{i:0{width}d}" for i in range(n_keywords)]
    titles = [_title(keyword_names, keywords[v]) for v in range(n_papers)]
    return CorpusGraph(
        years, cit, pa, venues, pk,
        ext_ids=[f"p{i:0{width}d}" for i in range(n_papers)],
        titles=titles,
        author_names=[f"au{i:0{width}d}" for i in range(n_authors)],
        venue_names=[f"ve{i:0{width}d}" for i in range(n_venues)],
        keyword_names=keyword_names,
    )


_JOINERS = ("for", "of", "with", "in", "and", "on")


def _title(names: list[str], kws: list[int]) -> str:
    words = [names[k] for k in kws]
    parts = [words[0].capitalize()] if words else []
    for i, w in enumerate(words[1:]):
        parts.append(_JOINERS[i % len(_JOINERS)])
        parts.append(w)
    return " ".join(parts)
