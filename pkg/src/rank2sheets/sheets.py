"""Sheet data and the simple-reflection action on them.

A :class:`SheetSet` lists B-stable subvarieties of maximal complexity of a
homogeneous space ``X`` (one of them ``X`` itself) with their dimension,
rank and complexity, and for each simple root the partition into blocks
``{Z : P_s Z = Y}``.  Each block has one of four types and ``s`` acts on it
by a fixed involution:

=====  =====================  ===============================
type   members                action of s
=====  =====================  ===============================
G      Y                      Y -> Y
U      Y, Z (same rank)       Y <-> Z
N      Y, Z (Z smaller rank)  Y -> Y, Z -> Z
T      Y, Z0, Zinf            Y -> Y, Z0 <-> Zinf
=====  =====================  ===============================

The elements of maximal rank form the sub-view on which the two involutions
should satisfy the braid relation of the Weyl group.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .flagfq import (
    BoundExceeded,
    InconsistentDimension,
    estimate_dimension,
    flag_space,
    orbits,
    subgroup_gens,
)
from .rootsys2 import KINDS, build_root_system

SCHEMA_VERSION = 1
ROOTS = ("alpha", "beta")
ROLES = {"G": ("Y",), "U": ("Y", "Z"), "N": ("Y", "Z"), "T": ("Y", "Z0", "Zinf")}


class SheetError(ValueError):
    pass


class RankContradiction(SheetError):
    pass


@dataclass(frozen=True)
class SheetDatum:
    id: str
    dim: int
    rank: int | None = None
    complexity: int = 0
    is_top: bool = False
    # inclusive bounds on the rank while it is not determined
    rank_lo: int | None = None
    rank_hi: int | None = None

    def interval(self, top_rank: int | None = None) -> tuple[int, int | None]:
        if self.rank is not None:
            return self.rank, self.rank
        lo = self.rank_lo if self.rank_lo is not None else 0
        hi = self.rank_hi if self.rank_hi is not None else top_rank
        return lo, hi


@dataclass(frozen=True)
class Block:
    simple_root: str
    btype: str
    members: dict  # role -> id

    def ids(self) -> list[str]:
        return [self.members[r] for r in ROLES[self.btype] if r in self.members]

    def act(self, x: str) -> str:
        m = self.members
        if self.btype == "U":
            return m["Z"] if x == m["Y"] else m["Y"]
        if self.btype == "T" and x in (m["Z0"], m["Zinf"]):
            return m["Zinf"] if x == m["Z0"] else m["Z0"]
        return x


@dataclass
class SheetSet:
    kind: str
    elements: dict  # id -> SheetDatum, in file order
    blocks: dict  # 'alpha'/'beta' -> list[Block]
    provenance: dict = field(default_factory=dict)
    heuristic: bool = False

    @property
    def top(self) -> SheetDatum:
        tops = [e for e in self.elements.values() if e.is_top]
        if len(tops) != 1:
            raise SheetError(f"expected exactly one top element, found {len(tops)}")
        return tops[0]

    def block_of(self, s: str, x: str) -> Block:
        for b in self.blocks[_root_name(s)]:
            if x in b.ids():
                return b
        raise KeyError(f"{x!r} is in no {s}-block")

    def signature(self) -> tuple:
        """Comparable content, ignoring provenance."""
        els = tuple(sorted((e.id, e.dim, e.rank, e.complexity, e.is_top, e.rank_lo, e.rank_hi) for e in self.elements.values()))
        bl = tuple(
            (s, tuple(sorted((b.btype, tuple(sorted(b.members.items()))) for b in self.blocks[s])))
            for s in ROOTS
        )
        return (self.kind, els, bl)

    # serialisation --------------------------------------------------------
    def to_dict(self) -> dict:
        els = []
        for e in self.elements.values():
            d = {"id": e.id, "dim": e.dim, "rank": e.rank, "complexity": e.complexity}
            if e.is_top:
                d["is_top"] = True
            if e.rank is None and (e.rank_lo is not None or e.rank_hi is not None):
                d["rank_interval"] = [e.rank_lo, e.rank_hi]
            els.append(d)
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "elements": els,
            "blocks": {
                s: [{"type": b.btype, "members": dict(b.members)} for b in self.blocks[s]] for s in ROOTS
            },
            "provenance": self.provenance,
            "heuristic": self.heuristic,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SheetSet":
        try:
            kind = data["kind"]
            if kind not in KINDS:
                raise SheetError(f"unknown kind {kind!r}")
            raw = data["elements"]
            tops = [e for e in raw if e.get("is_top")]
            if not tops and raw:
                # default: the unique element of largest dimension
                dmax = max(e["dim"] for e in raw)
                cands = [e["id"] for e in raw if e["dim"] == dmax]
                top_id = cands[0] if len(cands) == 1 else None
            else:
                top_id = None
            elements = {}
            for e in raw:
                lo, hi = (e.get("rank_interval") or [None, None])
                d = SheetDatum(
                    id=str(e["id"]),
                    dim=int(e["dim"]),
                    rank=e.get("rank"),
                    complexity=int(e.get("complexity", 0)),
                    is_top=bool(e.get("is_top", False)) or e["id"] == top_id,
                    rank_lo=lo,
                    rank_hi=hi,
                )
                if d.id in elements:
                    raise SheetError(f"duplicate id {d.id!r}")
                elements[d.id] = d
            blocks = {}
            for s in ROOTS:
                blocks[s] = [
                    Block(s, b["type"], {k: str(v) for k, v in b["members"].items()})
                    for b in data["blocks"].get(s, [])
                ]
        except (KeyError, TypeError) as exc:
            raise SheetError(f"malformed dataset: {exc}") from exc
        return cls(kind, elements, blocks, data.get("provenance", {}), bool(data.get("heuristic", False)))


def _root_name(s: str) -> str:
    if s in ("alpha", "a"):
        return "alpha"
    if s in ("beta", "b"):
        return "beta"
    raise ValueError(f"unknown simple root {s!r}")


FIXTURES = Path(__file__).parent / "fixtures"


def resolve_path(path: str | Path) -> Path:
    """Paths starting with 'fixtures/' fall back to the bundled fixtures."""
    p = Path(path)
    if not p.exists() and p.parts and p.parts[0] == "fixtures":
        return FIXTURES.joinpath(*p.parts[1:])
    return p


def load(path: str | Path) -> SheetSet:
    p = resolve_path(path)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise SheetError(f"{p}: {exc}") from exc
    return SheetSet.from_dict(data)


def save(ss: SheetSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(ss.to_dict(), indent=2) + "\n")


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    where: str = ""

    def to_dict(self):
        return {"code": self.code, "message": self.message, "where": self.where}


def validate(ss: SheetSet) -> list[Violation]:
    out: list[Violation] = []
    els = ss.elements
    tops = [e.id for e in els.values() if e.is_top]
    if len(tops) != 1:
        out.append(Violation("top", f"expected exactly one top element, found {tops}"))
    for e in els.values():
        if e.dim < 0 or e.complexity < 0 or (e.rank is not None and e.rank < 0):
            out.append(Violation("range", "negative dim, rank or complexity", e.id))
    for s in ROOTS:
        seen: dict = {}
        for i, b in enumerate(ss.blocks[s]):
            where = f"{s} block {i} ({b.btype})"
            if b.btype not in ROLES:
                out.append(Violation("type", f"unknown block type {b.btype!r}", where))
                continue
            if set(b.members) != set(ROLES[b.btype]):
                out.append(Violation("roles", f"roles {sorted(b.members)} do not fit type {b.btype}", where))
                continue
            for x in b.ids():
                if x not in els:
                    out.append(Violation("missing", f"unknown id {x!r}", where))
                elif x in seen:
                    out.append(Violation("partition", f"{x!r} is in two {s}-blocks", where))
                seen[x] = i
            if any(x not in els for x in b.ids()):
                continue
            out.extend(_block_violations(b, els, where))
        for x in els:
            if x not in seen:
                out.append(Violation("partition", f"{x!r} is in no {s}-block", s))
    if not out and len(tops) == 1 and els[tops[0]].rank is not None:
        try:
            propagate_ranks(ss, els[tops[0]].rank)
        except RankContradiction as exc:
            out.append(Violation("rank-propagation", str(exc)))
    return out


def _block_violations(b: Block, els: dict, where: str) -> list[Violation]:
    out = []
    m = {role: els[x] for role, x in b.members.items()}
    y = m["Y"]
    if any(e.dim > y.dim for e in m.values()):
        out.append(Violation("dim", "Y must have the largest dimension in its block", where))
    if any(e.complexity != y.complexity for e in m.values()):
        out.append(Violation("complexity", "complexity differs inside a block", where))

    def known(*es):
        return all(e.rank is not None for e in es)

    if b.btype == "U":
        z = m["Z"]
        if z.dim != y.dim - 1:
            out.append(Violation("dim", f"U-block needs dim Z = dim Y - 1 ({z.dim} vs {y.dim})", where))
        if known(y, z) and z.rank != y.rank:
            out.append(Violation("rank", f"U-block needs rank Z = rank Y ({z.rank} vs {y.rank})", where))
    elif b.btype == "N":
        z = m["Z"]
        if z.dim != y.dim - 1:
            out.append(Violation("dim", f"N-block needs dim Z = dim Y - 1 ({z.dim} vs {y.dim})", where))
        if known(y, z) and not z.rank < y.rank:
            out.append(Violation("rank", f"N-block needs rank Z < rank Y ({z.rank} vs {y.rank})", where))
    elif b.btype == "T":
        z0, zi = m["Z0"], m["Zinf"]
        if not (z0.dim == zi.dim == y.dim - 1):
            out.append(Violation("dim", "T-block needs dim Z0 = dim Zinf = dim Y - 1", where))
        if known(z0, zi) and z0.rank != zi.rank:
            out.append(Violation("rank", "T-block needs rank Z0 = rank Zinf", where))
        if known(y, z0) and not z0.rank < y.rank:
            out.append(Violation("rank", "T-block needs rank Z0 < rank Y", where))
    return out


def require_valid(ss: SheetSet) -> None:
    v = validate(ss)
    if v:
        raise SheetError("; ".join(f"{x.where}: {x.message}" for x in v))


# ---------------------------------------------------------------------------
# the action


def s_action(ss: SheetSet, s: str, x: str) -> str:
    if x not in ss.elements:
        raise KeyError(f"unknown id {x!r}")
    return ss.block_of(s, x).act(x)


def propagate_ranks(ss: SheetSet, top_rank: int | None = None) -> SheetSet:
    """Rank intervals forced by the block types, starting from the top rank.

    U-blocks equate ranks, N- and T-blocks force a strict drop, and no rank
    exceeds the top rank.  Ranks are fixed once the interval is a point;
    otherwise the element keeps ``rank_lo``/``rank_hi``.  Raises
    RankContradiction on an empty interval.
    """
    top = ss.top
    if top_rank is None:
        top_rank = top.rank
    if top_rank is None:
        raise SheetError("the rank of the top element is needed")
    if top.rank is not None and top.rank != top_rank:
        raise RankContradiction(f"top has rank {top.rank}, not {top_rank}")
    lo, hi = {}, {}
    for e in ss.elements.values():
        a, b = e.interval(top_rank)
        lo[e.id], hi[e.id] = a, min(b, top_rank) if b is not None else top_rank
    lo[top.id] = max(lo[top.id], top_rank)
    hi[top.id] = min(hi[top.id], top_rank)

    def check(where):
        for x in lo:
            if lo[x] > hi[x]:
                raise RankContradiction(f"no rank possible for {x!r} (after {where})")

    changed = True
    while changed:
        changed = False
        for s in ROOTS:
            for b in ss.blocks[s]:
                m = b.members
                eq, less = [], []
                if b.btype == "U":
                    eq = [(m["Y"], m["Z"])]
                elif b.btype == "N":
                    less = [(m["Z"], m["Y"])]
                elif b.btype == "T":
                    eq = [(m["Z0"], m["Zinf"])]
                    less = [(m["Z0"], m["Y"]), (m["Zinf"], m["Y"])]
                for x, y in eq:
                    a, c = max(lo[x], lo[y]), min(hi[x], hi[y])
                    if (a, c) != (lo[x], hi[x]) or (a, c) != (lo[y], hi[y]):
                        lo[x] = lo[y] = a
                        hi[x] = hi[y] = c
                        changed = True
                for z, y in less:
                    if hi[z] > hi[y] - 1:
                        hi[z] = hi[y] - 1
                        changed = True
                    if lo[y] < lo[z] + 1:
                        lo[y] = lo[z] + 1
                        changed = True
                check(f"{s} {b.btype}-block {b.ids()}")
    new = {}
    for x, e in ss.elements.items():
        if lo[x] == hi[x]:
            new[x] = replace(e, rank=lo[x], rank_lo=None, rank_hi=None)
        else:
            new[x] = replace(e, rank=None, rank_lo=lo[x], rank_hi=hi[x])
    return SheetSet(ss.kind, new, ss.blocks, ss.provenance, ss.heuristic)


def restrict_to_b00(ss: SheetSet) -> SheetSet:
    """Elements of maximal rank and complexity, with the induced blocks.

    Lower members of N- and T-blocks drop out; the remaining Y is then fixed.
    """
    top = ss.top
    if top.rank is None:
        raise SheetError("ranks unresolvable: top rank unknown (use propagate_ranks)")
    keep = []
    for e in ss.elements.values():
        if e.complexity != top.complexity:
            continue
        lo, hi = e.interval(top.rank)
        if e.rank == top.rank:
            keep.append(e.id)
        elif hi is not None and hi < top.rank:
            continue
        else:
            raise SheetError(f"ranks unresolvable: rank of {e.id!r} may or may not be maximal")
    keep_set = set(keep)
    blocks = {}
    for s in ROOTS:
        out = []
        for b in ss.blocks[s]:
            inside = [x for x in b.ids() if x in keep_set]
            if not inside:
                continue
            if b.btype == "U" and len(inside) == 2:
                out.append(b)
            elif b.btype == "T" and set(inside) == {b.members["Z0"], b.members["Zinf"]}:
                out.append(Block(s, "T", dict(b.members)))  # unreachable for valid data
            else:
                for x in inside:
                    out.append(Block(s, "G", {"Y": x}))
        blocks[s] = out
    view = SheetSet(ss.kind, {x: ss.elements[x] for x in keep}, blocks, ss.provenance, ss.heuristic)
    for s in ROOTS:
        for x in keep:
            if s_action(ss, s, x) != s_action(view, s, x):
                raise SheetError(f"s_{s} does not restrict to the maximal-rank view at {x!r}")
    return view


def permutation(ss: SheetSet, s: str) -> dict:
    return {x: s_action(ss, s, x) for x in ss.elements}


@dataclass
class RelationReport:
    view: str
    order: int  # braid order m
    perm_alpha: dict
    perm_beta: dict
    involutions: bool
    braid: bool
    violating_orbit: list | None = None

    @property
    def passed(self) -> bool:
        return self.involutions and self.braid

    def to_dict(self):
        return {
            "view": self.view,
            "m": self.order,
            "perm_alpha": self.perm_alpha,
            "perm_beta": self.perm_beta,
            "involutions": self.involutions,
            "braid": self.braid,
            "violating_orbit": self.violating_orbit,
            "status": "pass" if self.passed else "fail",
        }


def _view(ss: SheetSet, on_b00: bool) -> SheetSet:
    if not on_b00:
        return ss
    top = ss.top
    if top.rank is None:
        raise SheetError("the maximal-rank view needs the top rank")
    return restrict_to_b00(propagate_ranks(ss, top.rank))


def check_relations(ss: SheetSet, on_b00: bool = True) -> RelationReport:
    view = _view(ss, on_b00)
    m = build_root_system(ss.kind).braid_order
    pa, pb = permutation(view, "alpha"), permutation(view, "beta")
    inv = all(pa[pa[x]] == x and pb[pb[x]] == x for x in view.elements)
    bad = None
    for x in view.elements:
        y = x
        for _ in range(m):
            y = pa[pb[y]]
        if y != x:
            bad = _orbit(x, pa, pb)
            break
    return RelationReport("B00" if on_b00 else "B0", m, pa, pb, inv, bad is None, bad)


def _orbit(x, pa, pb) -> list:
    seen, todo = [x], [x]
    while todo:
        y = todo.pop()
        for z in (pa[y], pb[y]):
            if z not in seen:
                seen.append(z)
                todo.append(z)
    return seen


@dataclass
class TransitivityReport:
    size: int
    transitive: bool
    codim1: bool | None
    unreached: list

    @property
    def passed(self) -> bool:
        return self.transitive and self.codim1 is not False

    def to_dict(self):
        return {
            "size": self.size,
            "transitive": self.transitive,
            "codim1_exists": self.codim1,
            "unreached": self.unreached,
            "status": "pass" if self.passed else "fail",
        }


def check_transitivity_and_codim1(ss: SheetSet, on_b00: bool = True) -> TransitivityReport:
    view = _view(ss, on_b00)
    pa, pb = permutation(view, "alpha"), permutation(view, "beta")
    top = view.top
    reached = set(_orbit(top.id, pa, pb))
    unreached = [x for x in view.elements if x not in reached]
    codim1 = None
    if len(view.elements) > 1:
        codim1 = any(e.dim == top.dim - 1 for e in view.elements.values())
    return TransitivityReport(len(view.elements), not unreached, codim1, unreached)


# ---------------------------------------------------------------------------
# inference from orbit data


class PatternError(SheetError):
    pass


def _classify(counts: list[int], q: int) -> str:
    c = sorted(counts)
    if c == [q + 1]:
        return "G"
    if c == [1, q]:
        return "U"
    if c == [2, q - 1]:
        return "N"
    if c == [1, 1, q - 1]:
        return "T"
    raise PatternError(f"fiber pattern {c} at q={q} is none of G, U, N, T")


def _infer_one(kind: str, subgroup: str, q: int):
    space = flag_space(kind, "B", q)
    part = orbits(subgroup_gens(kind, subgroup, q), kind, "B", q)
    labels = part.labels
    # canonical names: the Bruhat cells an orbit meets
    cells_of = {}
    for c_idx, cell in enumerate(space.cells):
        for lab in np.unique(labels[cell.start: cell.stop]):
            cells_of.setdefault(int(lab), []).append(cell.weyl.name)
    names = {}
    by_sig: dict = {}
    for lab in range(part.count):
        by_sig.setdefault(tuple(cells_of[lab]), []).append(lab)
    for sig, labs in by_sig.items():
        labs.sort(key=lambda l: -part.sizes[l])
        for k, lab in enumerate(labs):
            base = "+".join(sig)
            names[lab] = base if len(labs) == 1 else f"{base}#{k}"
    blocks = {}
    for s, par in (("alpha", "P_a"), ("beta", "P_b")):
        keys = space.projection_keys(par)
        fibers: dict = {}
        for i, k in enumerate(keys):
            fibers.setdefault(k, []).append(i)
        # blocks are indexed by the set of orbits meeting a fiber
        seen_blocks: dict = {}
        for pts in fibers.values():
            cnt: dict = {}
            for i in pts:
                lab = int(labels[i])
                cnt[lab] = cnt.get(lab, 0) + 1
            key = tuple(sorted(cnt))
            pattern = tuple(sorted(cnt.items()))
            if key in seen_blocks and seen_blocks[key] != pattern:
                raise PatternError(f"orbits {key} have different fiber patterns over one H-orbit")
            seen_blocks[key] = pattern
        out = []
        member_seen: set = set()
        for key, pattern in sorted(seen_blocks.items()):
            cnt = dict(pattern)
            btype = _classify(list(cnt.values()), q)
            by_size = sorted(cnt, key=lambda lab: (-cnt[lab], names[lab]))
            if btype == "G":
                members = {"Y": by_size[0]}
            elif btype in ("U", "N"):
                members = {"Y": by_size[0], "Z": by_size[1]}
            else:
                z0, zi = sorted(by_size[1:], key=lambda lab: names[lab])
                members = {"Y": by_size[0], "Z0": z0, "Zinf": zi}
            for lab in members.values():
                if lab in member_seen:
                    raise PatternError(f"orbit {names[lab]} lies in two {s}-blocks")
                member_seen.add(lab)
            out.append((btype, {r: names[lab] for r, lab in members.items()}))
        blocks[s] = sorted(out, key=lambda b: (b[1]["Y"], b[0]))
    sizes = {names[lab]: part.sizes[lab] for lab in range(part.count)}
    return sizes, blocks


def infer_types_from_orbits(kind: str, subgroup: str, primes=(3, 5), top_rank: int | None = None) -> SheetSet:
    """Sheet data of G/H read off H-orbits on G/B over several primes.

    Heuristic: F_q-orbits stand in for geometric orbits, every orbit is
    assumed to have complexity 0 (the orbit count must not depend on q),
    and dimensions are exponent fits of orbit sizes.  The blocks must come
    out identical for every prime.
    """
    if len(primes) < 2:
        raise SheetError("need at least two primes")
    results = {}
    for q in primes:
        try:
            results[q] = _infer_one(kind, subgroup, q)
        except BoundExceeded as exc:
            raise SheetError(str(exc)) from exc
    ref_q = primes[0]
    sizes0, blocks0 = results[ref_q]
    for q in primes[1:]:
        sizes, blocks = results[q]
        if set(sizes) != set(sizes0):
            raise PatternError(f"orbit sets differ between q={ref_q} and q={q}")
        if blocks != blocks0:
            raise PatternError(f"block structure differs between q={ref_q} and q={q}")
    elements = {}
    dims = {}
    for name in sizes0:
        try:
            d = estimate_dimension({q: results[q][0][name] for q in primes})
        except InconsistentDimension as exc:
            raise PatternError(f"orbit {name}: {exc}") from exc
        dims[name] = d
    top = max(dims, key=lambda n: (dims[n], n))
    for name in sorted(sizes0, key=lambda n: (-dims[n], n)):
        elements[name] = SheetDatum(name, dims[name], top_rank if name == top else None, 0, name == top)
    blocks = {s: [Block(s, t, m) for t, m in blocks0[s]] for s in ROOTS}
    prov = {
        "generator": "infer_types_from_orbits",
        "kind": kind,
        "subgroup": subgroup,
        "primes": list(primes),
        "orbit_sizes": {str(q): results[q][0] for q in primes},
        "dims": "exponent fits of H-orbit sizes on G/B",
    }
    return SheetSet(kind, elements, blocks, prov, heuristic=True)
