"""Versioned binary cache of a CorpusGraph (numpy ``.npz``, no pickles)."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .corpus import CorpusError, CorpusGraph, LoadReport

CACHE_VERSION = 1
_MAGIC = "citerec-graph"


class CacheVersionError(CorpusError):
    pass


def _pack(prefix: str, m: sp.csr_matrix, out: dict):
    out[f"{prefix}_indptr"] = m.indptr.astype(np.int64)
    out[f"{prefix}_indices"] = m.indices.astype(np.int64)
    out[f"{prefix}_shape"] = np.asarray(m.shape, dtype=np.int64)


def _unpack(prefix: str, z) -> sp.csr_matrix:
    indices = z[f"{prefix}_indices"]
    return sp.csr_matrix((np.ones(len(indices)), indices, z[f"{prefix}_indptr"]), shape=tuple(z[f"{prefix}_shape"]))


def save_cache(g: CorpusGraph, path) -> Path:
    path = Path(path)
    meta = {
        "magic": _MAGIC,
        "version": CACHE_VERSION,
        "ext_ids": g.ext_ids,
        "titles": g.titles,
        "author_names": g.author_names,
        "venue_names": g.venue_names,
        "keyword_names": g.keyword_names,
        "report": None if g.report is None else json.loads(g.report.to_json()),
    }
    arrays = {
        "meta": np.frombuffer(json.dumps(meta).encode("utf-8"), dtype=np.uint8),
        "years": g.years,
        "venues": g.venues,
    }
    _pack("cit", g.cit_out, arrays)
    _pack("pa", g.pa, arrays)
    _pack("pk", g.pk, arrays)
    with open(path, "wb") as fh:
        np.savez_compressed(fh, **arrays)
    return path


def load_cache(path) -> CorpusGraph:
    try:
        z = np.load(Path(path), allow_pickle=False)
    except (OSError, ValueError) as exc:
        raise CorpusError(f"{path}: not a graph cache ({exc})") from None
    with z:
        if "meta" not in z.files:
            raise CorpusError(f"{path}: not a graph cache")
        meta = json.loads(z["meta"].tobytes().decode("utf-8"))
        if meta.get("magic") != _MAGIC:
            raise CorpusError(f"{path}: not a graph cache")
        if meta.get("version") != CACHE_VERSION:
            raise CacheVersionError(f"{path}: cache version {meta.get('version')} but this build reads version {CACHE_VERSION}")
        report = LoadReport(**meta["report"]) if meta.get("report") else None
        return CorpusGraph(
            z["years"], _unpack("cit", z), _unpack("pa", z), z["venues"], _unpack("pk", z),
            ext_ids=meta["ext_ids"], titles=meta["titles"], author_names=meta["author_names"],
            venue_names=meta["venue_names"], keyword_names=meta["keyword_names"], report=report,
        )
