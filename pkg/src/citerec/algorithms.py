"""Name -> ranker registry and ``name:param=value,...`` parsing."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .citation import cocitation, cocoupling, collaborative_filtering, paperrank
from .metadata import c_plus_x, local_c_plus_x, log_avk
from .metapath import MetaPath, PathMeasure, rank_by_metapath
from .ranking import ScoreVector, WalkParams

_WALK_KEYS = ("tolerance", "max_iters")


def _walk(kw: dict, **extra) -> WalkParams:
    return WalkParams(**{k: kw[k] for k in _WALK_KEYS if k in kw}, **extra)


def _paperrank(g, seeds, d=0.85, **kw):
    return paperrank(g, seeds, _walk(kw, damping=d))


def _cf(g, seeds, k_neighbors=50):
    return collaborative_filtering(g, seeds, int(k_neighbors))


def _cx(kind, local):
    fn = local_c_plus_x if local else c_plus_x

    def run(g, seeds, alpha=0.65, beta=0.2, **kw):
        return fn(g, kind, seeds, alpha, beta, _walk(kw))
    return run


def _logavk(g, seeds, alpha=0.5, eps=1e-12, **kw):
    return log_avk(g, seeds, alpha, eps, _walk(kw))


def _metapath(path, measure):
    def run(g, seeds):
        return rank_by_metapath(g, path, measure, seeds)
    return run


ALGORITHMS: dict[str, Callable[..., ScoreVector]] = {
    "cocitation": lambda g, seeds: cocitation(g, seeds),
    "cocoupling": lambda g, seeds: cocoupling(g, seeds),
    "paperrank": _paperrank,
    "cf": _cf,
    "logavk": _logavk,
}
for _k in ("a", "v", "k"):
    ALGORITHMS[f"c+{_k}"] = _cx(_k, False)
    ALGORITHMS[f"c+{_k}_local"] = _cx(_k, True)
for _m in PathMeasure:
    for _p in MetaPath:
        ALGORITHMS[f"{_m.value.lower()}_{_p.value.lower()}"] = _metapath(_p, _m)

# the thirteen rankings of the global comparison table, in its order
DEFAULT_ALGORITHMS = (
    "paperrank", "cf", "c+a", "c+v", "c+k", "logavk",
    "pathcount_pap", "pathcount_pkp",
    "pathsim_pap", "pathsim_pvp", "pathsim_pkp", "pathsim_pcip", "pathsim_pcop",
)


def _value(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


@dataclass(frozen=True)
class AlgoSpec:
    name: str
    params: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))

    def __call__(self, g, seeds) -> ScoreVector:
        return ALGORITHMS[self.name](g, seeds, **self.params)


def parse_algo(text: str) -> AlgoSpec:
    """``"paperrank:d=0.8,max_iters=300"`` -> AlgoSpec; names are case-insensitive."""
    name, _, rest = text.strip().partition(":")
    name = name.strip().lower()
    if name not in ALGORITHMS:
        raise KeyError(f"unknown algorithm {name!r}; known: {', '.join(sorted(ALGORITHMS))}")
    params = {}
    for item in filter(None, (x.strip() for x in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad parameter {item!r} in {text!r}")
        params[key.strip()] = _value(val.strip())
    return AlgoSpec(name, params)
