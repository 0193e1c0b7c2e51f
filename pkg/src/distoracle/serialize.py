"""Deterministic binary serialization for oracles.

Layout: magic "ADOX", a format version byte, a type byte (1 = bunch-family
oracle, 2 = layered oracle, 3 = composite construction), then the payload.
All integers are little-endian; distances are raw IEEE doubles so infinities
round-trip exactly. Collections are written in sorted order, which makes the
encoding a pure function of the oracle contents: two builds from the same
seed serialize to identical bytes.

Runtime statistics (phase timings, relaxation counts) are deliberately not
stored; a loaded oracle answers queries identically but reports zero cost.
"""

from __future__ import annotations

import struct
from pathlib import Path

from .bunches import BunchOracle, Levels
from .constructions import BuildPlan, CompositeOracle, ExactTable
from .graphs import Graph, NearestInfo
from .hierarchy import Hado, HadoParams, x_sequence
from .parameterized import ParamOracle, RestrictedParamOracle
from .spanners import SpannerResult

MAGIC = b"ADOX"
VERSION = 1

_TYPE_BUNCH, _TYPE_HADO, _TYPE_COMPOSITE = 1, 2, 3
_MODES = {"classic": 0, "parameterized": 1, "restricted": 2}
_MODE_NAMES = {v: k for k, v in _MODES.items()}
_FAR_KINDS = {"param": 0, "table": 1, "pprime": 2}
_FAR_NAMES = {v: k for k, v in _FAR_KINDS.items()}


class SerializeError(ValueError):
    """Raised for unrecognized or truncated oracle blobs."""


class _Writer:
    __slots__ = ("buf",)

    def __init__(self):
        self.buf = bytearray()

    def u8(self, x):
        self.buf += struct.pack("<B", x)

    def u32(self, x):
        self.buf += struct.pack("<I", x)

    def i32(self, x):
        self.buf += struct.pack("<i", x)

    def i64(self, x):
        self.buf += struct.pack("<q", x)

    def f64(self, x):
        self.buf += struct.pack("<d", x)

    def u32s(self, xs):
        self.u32(len(xs))
        self.buf += struct.pack(f"<{len(xs)}I", *xs)

    def i32s(self, xs):
        self.u32(len(xs))
        self.buf += struct.pack(f"<{len(xs)}i", *xs)

    def f64s(self, xs):
        self.u32(len(xs))
        self.buf += struct.pack(f"<{len(xs)}d", *xs)

    def text(self, s):
        raw = s.encode("utf-8")
        self.u32(len(raw))
        self.buf += raw


class _Reader:
    __slots__ = ("data", "pos")

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _take(self, fmt):
        try:
            out = struct.unpack_from(fmt, self.data, self.pos)
        except struct.error as exc:
            raise SerializeError(f"truncated oracle blob: {exc}") from exc
        self.pos += struct.calcsize(fmt)
        return out

    def u8(self):
        return self._take("<B")[0]

    def u32(self):
        return self._take("<I")[0]

    def i32(self):
        return self._take("<i")[0]

    def i64(self):
        return self._take("<q")[0]

    def f64(self):
        return self._take("<d")[0]

    def u32s(self):
        return list(self._take(f"<{self.u32()}I"))

    def i32s(self):
        return list(self._take(f"<{self.u32()}i"))

    def f64s(self):
        return list(self._take(f"<{self.u32()}d"))

    def text(self):
        n = self.u32()
        if self.pos + n > len(self.data):
            raise SerializeError("truncated oracle blob: string runs past end")
        raw = self.data[self.pos:self.pos + n]
        self.pos += n
        return raw.decode("utf-8")

    def expect_end(self):
        if self.pos != len(self.data):
            raise SerializeError(f"{len(self.data) - self.pos} trailing bytes")


# ---------------------------------------------------------------------------
# bunch-family oracles


def _write_bunch(w: _Writer, o: BunchOracle) -> None:
    w.u8(_MODES[o.mode])
    w.u32(o.k)
    w.u32(o.n)
    w.i64(o.seed)
    w.u32(o.levels.k)
    w.u32(len(o.levels.sets))
    for s in o.levels.sets:
        w.u32s(s)
    w.u8(0 if o.s_set is None else 1)
    if o.s_set is not None:
        w.u32s(o.s_set)
    for row in o.pivots:
        w.i32s(row)
    for row in o.hs:
        w.f64s(row)
    for u in range(o.n):
        items = sorted(o.bunch[u].items())
        w.u32(len(items))
        for key, dist in items:
            w.u32(key)
            w.f64(dist)


def _read_bunch(r: _Reader) -> BunchOracle:
    mode = r.u8()
    if mode not in _MODE_NAMES:
        raise SerializeError(f"unknown bunch mode {mode}")
    k = r.u32()
    n = r.u32()
    seed = r.i64()
    levels_k = r.u32()
    sets = [r.u32s() for _ in range(r.u32())]
    s_set = r.u32s() if r.u8() else None
    num = len(sets)
    pivots = [r.i32s() for _ in range(num)]
    hs = [r.f64s() for _ in range(num)]
    bunch = []
    for _ in range(n):
        row = {}
        for _ in range(r.u32()):
            key = r.u32()
            row[key] = r.f64()
        bunch.append(row)
    return BunchOracle(
        mode=_MODE_NAMES[mode],
        k=k,
        n=n,
        levels=Levels(k=levels_k, sets=sets),
        pivots=pivots,
        hs=hs,
        bunch=bunch,
        s_set=s_set,
        seed=seed,
    )


def _wrap_bunch(inner: BunchOracle):
    """Re-attach the thin wrapper objects around a loaded bunch oracle."""
    if inner.mode == "classic":
        return inner
    if inner.s_set is None:
        raise SerializeError(f"{inner.mode} oracle blob lacks its set S")
    if inner.mode == "parameterized":
        nearest = NearestInfo(
            set_members=inner.levels.sets[1], h=inner.hs[1], p=inner.pivots[1]
        )
        return ParamOracle(k=inner.k, s=inner.s_set, oracle=inner, nearest=nearest)
    return RestrictedParamOracle(
        k=inner.k, s=inner.s_set, oracle=inner, _s_index=frozenset(inner.s_set)
    )


# ---------------------------------------------------------------------------
# layered oracle


def _write_hado(w: _Writer, h: Hado) -> None:
    w.u32(h.params.k)
    w.f64(h.params.x0)
    w.u32(h.params.t)
    w.i64(h.seed)
    w.u32(len(h.warnings))
    for s in h.warnings:
        w.text(s)
    w.u32(len(h.s_sets))
    for s in h.s_sets:
        w.u32s(s)
    w.f64s(h.nearest_t.h)
    w.i32s(h.nearest_t.p)
    _write_bunch(w, h.base)
    w.u32(len(h.levels))
    for lvl in h.levels:
        _write_bunch(w, lvl.oracle)


def _read_hado(r: _Reader) -> Hado:
    k = r.u32()
    x0 = r.f64()
    t = r.u32()
    seed = r.i64()
    warnings = [r.text() for _ in range(r.u32())]
    s_sets = [r.u32s() for _ in range(r.u32())]
    h_vals = r.f64s()
    p_vals = r.i32s()
    base = _read_bunch(r)
    levels = []
    for _ in range(r.u32()):
        lvl = _wrap_bunch(_read_bunch(r))
        if not isinstance(lvl, ParamOracle):
            raise SerializeError("layered oracle level is not parameterized")
        levels.append(lvl)
    nearest = NearestInfo(set_members=s_sets[-1], h=h_vals, p=p_vals)
    params = HadoParams(k=k, x0=x0, t=t, xs=x_sequence(k, x0, t))
    return Hado(
        params=params,
        base=base,
        levels=levels,
        s_sets=s_sets,
        nearest_t=nearest,
        warnings=warnings,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# composite constructions


def _write_composite(w: _Writer, o: CompositeOracle) -> None:
    w.text(o.plan.algo)
    w.u32(o.plan.k)
    w.f64(o.plan.x0)
    w.i32(-1 if o.plan.k_prime is None else o.plan.k_prime)
    w.i32(-1 if o.plan.k_dprime is None else o.plan.k_dprime)
    w.i64(o.plan.seed)
    w.u32(len(o.plan.notes))
    for s in o.plan.notes:
        w.text(s)
    w.u32(o.guarantee[0])
    w.u32(o.guarantee[1])
    _write_hado(w, o.hado)
    w.u8(_FAR_KINDS[o.far_kind])
    if o.far_kind == "param":
        _write_bunch(w, o.far_param.oracle)
    elif o.far_kind == "table":
        w.u32s(o.far_table.ids)
        for row in o.far_table.dist:
            w.f64s(row)
    else:
        _write_bunch(w, o.far_ado.oracle)
    w.u8(0 if o.spanner is None else 1)
    if o.spanner is not None:
        sp = o.spanner
        w.u32(sp.k_spanner)
        w.u32(sp.additive)
        w.f64(sp.edge_budget)
        w.u32(sp.retries)
        w.u8(1 if sp.over_budget else 0)
        w.u8(1 if sp.augmented else 0)
        w.u32(sp.h.n)
        w.u32(len(sp.h.edges))
        for u, v, wt in sp.h.edges:
            w.u32(u)
            w.u32(v)
            w.f64(wt)


def _read_composite(r: _Reader) -> CompositeOracle:
    algo = r.text()
    k = r.u32()
    x0 = r.f64()
    k_prime = r.i32()
    k_dprime = r.i32()
    seed = r.i64()
    notes = [r.text() for _ in range(r.u32())]
    guarantee = (r.u32(), r.u32())
    hado = _read_hado(r)
    far_byte = r.u8()
    if far_byte not in _FAR_NAMES:
        raise SerializeError(f"unknown far-component kind {far_byte}")
    far_kind = _FAR_NAMES[far_byte]
    far_param = far_table = far_ado = None
    if far_kind == "param":
        far_param = _wrap_bunch(_read_bunch(r))
        if not isinstance(far_param, ParamOracle):
            raise SerializeError("far component is not a parameterized oracle")
    elif far_kind == "table":
        ids = r.u32s()
        dist = [r.f64s() for _ in range(len(ids))]
        far_table = ExactTable(ids=ids, index={s: i for i, s in enumerate(ids)}, dist=dist)
    else:
        far_ado = _wrap_bunch(_read_bunch(r))
        if not isinstance(far_ado, RestrictedParamOracle):
            raise SerializeError("far component is not a restricted oracle")
    spanner = None
    if r.u8():
        k_spanner = r.u32()
        additive = r.u32()
        edge_budget = r.f64()
        retries = r.u32()
        over_budget = bool(r.u8())
        augmented = bool(r.u8())
        n = r.u32()
        edges = []
        for _ in range(r.u32()):
            u = r.u32()
            v = r.u32()
            edges.append((u, v, r.f64()))
        spanner = SpannerResult(
            h=Graph.from_edges(n, edges),
            k_spanner=k_spanner,
            additive=additive,
            edge_budget=edge_budget,
            retries=retries,
            over_budget=over_budget,
            augmented=augmented,
        )
    plan = BuildPlan(
        algo=algo,
        k=k,
        x0=x0,
        k_prime=None if k_prime < 0 else k_prime,
        k_dprime=None if k_dprime < 0 else k_dprime,
        seed=seed,
        notes=notes,
    )
    return CompositeOracle(
        plan=plan,
        guarantee=guarantee,
        hado=hado,
        far_kind=far_kind,
        far_param=far_param,
        far_table=far_table,
        far_ado=far_ado,
        spanner=spanner,
    )


# ---------------------------------------------------------------------------
# public entry points


def dumps_oracle(oracle) -> bytes:
    """Serialize any supported oracle to bytes."""
    w = _Writer()
    w.buf += MAGIC
    w.u8(VERSION)
    if isinstance(oracle, CompositeOracle):
        w.u8(_TYPE_COMPOSITE)
        _write_composite(w, oracle)
    elif isinstance(oracle, Hado):
        w.u8(_TYPE_HADO)
        _write_hado(w, oracle)
    elif isinstance(oracle, (ParamOracle, RestrictedParamOracle)):
        w.u8(_TYPE_BUNCH)
        _write_bunch(w, oracle.oracle)
    elif isinstance(oracle, BunchOracle):
        w.u8(_TYPE_BUNCH)
        _write_bunch(w, oracle)
    else:
        raise TypeError(f"cannot serialize {type(oracle).__name__}")
    return bytes(w.buf)


def loads_oracle(data: bytes):
    """Inverse of dumps_oracle."""
    if data[:4] != MAGIC:
        raise SerializeError("not an oracle blob (bad magic)")
    r = _Reader(data)
    r.pos = 4
    version = r.u8()
    if version != VERSION:
        raise SerializeError(f"unsupported format version {version}")
    type_byte = r.u8()
    if type_byte == _TYPE_BUNCH:
        out = _wrap_bunch(_read_bunch(r))
    elif type_byte == _TYPE_HADO:
        out = _read_hado(r)
    elif type_byte == _TYPE_COMPOSITE:
        out = _read_composite(r)
    else:
        raise SerializeError(f"unknown oracle type byte {type_byte}")
    r.expect_end()
    return out


def save_oracle(path, oracle) -> None:
    Path(path).write_bytes(dumps_oracle(oracle))


def load_oracle(path):
    return loads_oracle(Path(path).read_bytes())
