"""The colored Heegaard moves as rewrites of (diagram, labeling) pairs.

Each move is a pydantic descriptor tagged by ``kind``; :func:`apply_move`
checks the move's side conditions, rewrites the circle lists, the taut
identities and the labels, and validates the result.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Annotated, ClassVar, Literal, Optional, Sequence, Union

from loguru import logger
from pydantic import BaseModel, Field, TypeAdapter

from crossed_kuperberg.diagram import (
    HeegaardDiagram,
    IntersectionPoint,
    LowerCircle,
    TautFactor,
    TautIdentity,
    UpperCircle,
    Word,
    all_ids,
    path_word,
    rename,
    validate,
)
from crossed_kuperberg.errors import PostconditionViolated, PreconditionViolated, UnknownCircle
from crossed_kuperberg.labeling import ChiLabeling, check_labeling
from crossed_kuperberg.xmod import CrossedModule

WordSpec = list[tuple[str, int]]


class Diffeomorphism(BaseModel):
    numeral: ClassVar[str] = "i"
    kind: Literal["diffeomorphism"] = "diffeomorphism"
    components: dict[str, str] = {}
    uppers: dict[str, str] = {}
    lowers: dict[str, str] = {}
    points: dict[str, str] = {}
    regions: dict[str, str] = {}


class MoveBasepoint(BaseModel):
    """Move the basepoint of a lower circle forward past ``steps`` points (backward if negative)."""

    numeral: ClassVar[str] = "ii"
    kind: Literal["basepoint"] = "basepoint"
    lower: str
    steps: int = 1


class ReverseCircle(BaseModel):
    numeral: ClassVar[str] = "iii"
    kind: Literal["reverse"] = "reverse"
    circle: str
    which: Literal["upper", "lower"] = "upper"


class TwoPoint(BaseModel):
    """Isotope ``lower`` across ``upper``, creating two adjacent points of opposite sign."""

    numeral: ClassVar[str] = "iv"
    kind: Literal["two_point"] = "two_point"
    upper: str
    lower: str
    lower_pos: int
    upper_pos: int
    sign: Literal[1, -1] = 1
    ids: Optional[tuple[str, str]] = None


class Stabilize(BaseModel):
    numeral: ClassVar[str] = "v"
    kind: Literal["stabilize"] = "stabilize"
    region: str
    color: int = 0
    component: Optional[str] = None
    r: Optional[WordSpec] = None
    position: Optional[int] = None
    upper_id: Optional[str] = None
    lower_id: Optional[str] = None
    point_id: Optional[str] = None


class Destabilize(BaseModel):
    numeral: ClassVar[str] = "v"
    kind: Literal["destabilize"] = "destabilize"
    upper: str
    lower: str


class SlideUpper(BaseModel):
    """Slide ``moving`` over ``over``; the copy of ``over`` enters ``moving`` at index ``foot``."""

    numeral: ClassVar[str] = "vi"
    kind: Literal["slide_upper"] = "slide_upper"
    moving: str
    over: str
    foot: int = 0
    start: int = 0


class SlideLower(BaseModel):
    """Slide ``moving`` over ``over`` along a band just before both basepoints."""

    numeral: ClassVar[str] = "vii"
    kind: Literal["slide_lower"] = "slide_lower"
    moving: str
    over: str


class AddTrivialUpper(BaseModel):
    numeral: ClassVar[str] = "viii"
    kind: Literal["add_trivial_upper"] = "add_trivial_upper"
    host: str
    label: int = 0
    upper_id: Optional[str] = None
    component_id: Optional[str] = None
    outward: bool = True


class RemoveTrivialUpper(BaseModel):
    numeral: ClassVar[str] = "viii"
    kind: Literal["remove_trivial_upper"] = "remove_trivial_upper"
    upper: str


class AddTrivialLower(BaseModel):
    numeral: ClassVar[str] = "viii"
    kind: Literal["add_trivial_lower"] = "add_trivial_lower"
    region: str
    component: Optional[str] = None
    eps: Literal[1, -1] = 1
    r: Optional[WordSpec] = None
    position: Optional[int] = None
    lower_id: Optional[str] = None
    region_id: Optional[str] = None


class RemoveTrivialLower(BaseModel):
    numeral: ClassVar[str] = "viii"
    kind: Literal["remove_trivial_lower"] = "remove_trivial_lower"
    lower: str


MoveDescriptor = Annotated[
    Union[
        Diffeomorphism,
        MoveBasepoint,
        ReverseCircle,
        TwoPoint,
        Stabilize,
        Destabilize,
        SlideUpper,
        SlideLower,
        AddTrivialUpper,
        RemoveTrivialUpper,
        AddTrivialLower,
        RemoveTrivialLower,
    ],
    Field(discriminator="kind"),
]
move_adapter = TypeAdapter(MoveDescriptor)
moves_adapter = TypeAdapter(list[MoveDescriptor])


def parse_move(data: dict) -> MoveDescriptor:
    return move_adapter.validate_python(data)


# helpers


def _fresh(base: str, taken: set[str]) -> str:
    out = base
    while out in taken:
        out += "'"
    taken.add(out)
    return out


def _require(cond: bool, move: str, reason: str) -> None:
    if not cond:
        raise PreconditionViolated(move, reason)


def _upper(D: HeegaardDiagram, u: str, move: str) -> UpperCircle:
    try:
        return D.upper(u)
    except UnknownCircle as exc:
        raise PreconditionViolated(move, str(exc)) from None


def _lower(D: HeegaardDiagram, l: str, move: str) -> LowerCircle:
    try:
        return D.lower(l)
    except UnknownCircle as exc:
        raise PreconditionViolated(move, str(exc)) from None


def _taut(D: HeegaardDiagram, region: str, move: str) -> TautIdentity:
    try:
        return D.taut(region)
    except UnknownCircle as exc:
        raise PreconditionViolated(move, str(exc)) from None


def _word(D: HeegaardDiagram, spec: WordSpec | None, source: str, target: str, move: str) -> Word:
    if spec is None:
        try:
            return path_word(D, source, target)
        except Exception as exc:
            raise PreconditionViolated(move, f"no path from {source} to {target}: {exc}") from None
    w = Word(source, target, tuple(spec))
    err = w.typing_error(D.ends)
    _require(err is None, move, f"r is ill-typed: {err}")
    return w


def _letter_start(D: HeegaardDiagram, u: str, sign: int) -> str:
    cminus, cplus = D.ends[u]
    return cminus if sign == 1 else cplus


def _letter_end(D: HeegaardDiagram, u: str, sign: int) -> str:
    cminus, cplus = D.ends[u]
    return cplus if sign == 1 else cminus


def _component_at(D: HeegaardDiagram, l: LowerCircle, index: int) -> str:
    cur = l.base_component
    for s in l.points[:index]:
        pt = D.point(s)
        cur = _letter_end(D, pt.upper, pt.sign)
    return cur


def _with(D: HeegaardDiagram, **changes) -> HeegaardDiagram:
    return replace(D, **changes)


def _swap_upper(D: HeegaardDiagram, new: UpperCircle) -> tuple[UpperCircle, ...]:
    return tuple(new if u.id == new.id else u for u in D.uppers)


def _swap_lower(D: HeegaardDiagram, new: LowerCircle) -> tuple[LowerCircle, ...]:
    return tuple(new if l.id == new.id else l for l in D.lowers)


def _map_words(D: HeegaardDiagram, fn) -> tuple[TautIdentity, ...]:
    return tuple(
        TautIdentity(t.region, t.base_component, tuple(TautFactor(fn(x.r), x.lower, x.eps) for x in t.factors))
        for t in D.tauts
    )


def _insert(items: Sequence, position: int | None, new: Sequence) -> tuple:
    items = list(items)
    at = len(items) if position is None else position
    return tuple(items[:at] + list(new) + items[at:])


# moves


def _diffeomorphism(D, lab, mv: Diffeomorphism, cm):
    name = "diffeomorphism"
    for kind, mapping, ids in (
        ("component", mv.components, D.components),
        ("upper", mv.uppers, D.upper_ids),
        ("lower", mv.lowers, D.lower_ids),
        ("point", mv.points, [s.id for s in D.points]),
        ("region", mv.regions, [t.region for t in D.tauts]),
    ):
        unknown = sorted(set(mapping) - set(ids))
        _require(not unknown, name, f"unknown {kind} ids {unknown}")
        images = [mapping.get(i, i) for i in ids]
        _require(len(set(images)) == len(images), name, f"{kind} renaming is not injective")

    def by(mapping):
        return lambda i: mapping.get(i, i)

    out = rename(D, lambda i: i, components=by(mv.components), uppers=by(mv.uppers), lowers=by(mv.lowers),
                 points=by(mv.points), regions=by(mv.regions))
    new_lab = ChiLabeling(
        {mv.uppers.get(u, u): x for u, x in lab.alpha.items()},
        {mv.lowers.get(l, l): e for l, e in lab.beta.items()},
    )
    return out, new_lab


def _basepoint_step(D: HeegaardDiagram, lab: ChiLabeling, l_id: str, forward: bool, cm: CrossedModule):
    l = _lower(D, l_id, "basepoint")
    _require(len(l.points) >= 1, "basepoint", f"lower {l_id} has no points")
    H = cm.H
    s = D.point(l.points[0] if forward else l.points[-1])
    u, nu = s.upper, s.sign
    x = lab.alpha[u]
    if forward:
        points = l.points[1:] + l.points[:1]
        base = _letter_end(D, u, nu)
        shift = Word(l.base_component, base, ((u, nu),))
        beta = cm.act(H.power(x, -nu), lab.beta[l_id])
    else:
        points = l.points[-1:] + l.points[:-1]
        base = _letter_start(D, u, nu)
        shift = Word(l.base_component, base, ((u, -nu),))
        beta = cm.act(H.power(x, nu), lab.beta[l_id])
    tauts = tuple(
        TautIdentity(
            t.region,
            t.base_component,
            tuple(TautFactor(x_.r * shift if x_.lower == l_id else x_.r, x_.lower, x_.eps) for x_ in t.factors),
        )
        for t in D.tauts
    )
    out = _with(D, lowers=_swap_lower(D, LowerCircle(l_id, base, points)), tauts=tauts)
    return out, lab.with_updates(beta={l_id: beta})


def _basepoint(D, lab, mv: MoveBasepoint, cm):
    for _ in range(abs(mv.steps)):
        D, lab = _basepoint_step(D, lab, mv.lower, mv.steps > 0, cm)
    return D, lab


def _reverse(D, lab, mv: ReverseCircle, cm):
    if mv.which == "upper":
        u = _upper(D, mv.circle, "reverse")
        flipped = {s for s in u.points}
        images = {u.id: Word(u.cplus, u.cminus, ((u.id, -1),))}
        out = _with(
            D,
            uppers=_swap_upper(D, UpperCircle(u.id, u.cplus, u.cminus, tuple(reversed(u.points)))),
            points=tuple(replace(s, sign=-s.sign) if s.id in flipped else s for s in D.points),
            tauts=_map_words(D, lambda w: w.substitute(images)),
        )
        return out, lab.with_updates(alpha={u.id: cm.H.inv(lab.alpha[u.id])})
    l = _lower(D, mv.circle, "reverse")
    flipped = set(l.points)
    tauts = tuple(
        TautIdentity(t.region, t.base_component,
                     tuple(TautFactor(x.r, x.lower, -x.eps if x.lower == l.id else x.eps) for x in t.factors))
        for t in D.tauts
    )
    out = _with(
        D,
        lowers=_swap_lower(D, LowerCircle(l.id, l.base_component, tuple(reversed(l.points)))),
        points=tuple(replace(s, sign=-s.sign) if s.id in flipped else s for s in D.points),
        tauts=tauts,
    )
    return out, lab.with_updates(beta={l.id: cm.E.inv(lab.beta[l.id])})


def _two_point(D, lab, mv: TwoPoint, cm):
    name = "two_point"
    u = _upper(D, mv.upper, name)
    l = _lower(D, mv.lower, name)
    _require(0 <= mv.lower_pos <= len(l.points), name, f"lower position {mv.lower_pos} out of range")
    _require(0 <= mv.upper_pos <= len(u.points), name, f"upper position {mv.upper_pos} out of range")
    here = _component_at(D, l, mv.lower_pos)
    _require(
        _letter_start(D, u.id, mv.sign) == here,
        name,
        f"{u.id}^{mv.sign} does not start at component {here} where the lower circle is",
    )
    taken = all_ids(D)
    if mv.ids:
        _require(not (set(mv.ids) & taken) and mv.ids[0] != mv.ids[1], name, "point ids already in use")
        s1, s2 = mv.ids
    else:
        s1, s2 = _fresh(f"{u.id}.{l.id}.a", taken), _fresh(f"{u.id}.{l.id}.b", taken)
    new_points = (IntersectionPoint(s1, u.id, l.id, mv.sign), IntersectionPoint(s2, u.id, l.id, -mv.sign))
    out = _with(
        D,
        uppers=_swap_upper(D, replace(u, points=_insert(u.points, mv.upper_pos, (s1, s2)))),
        lowers=_swap_lower(D, replace(l, points=_insert(l.points, mv.lower_pos, (s1, s2)))),
        points=D.points + new_points,
    )
    return out, lab


def _stabilize(D, lab, mv: Stabilize, cm):
    name = "stabilize"
    t = _taut(D, mv.region, name)
    _require(0 <= mv.color < cm.E.order, name, f"color {mv.color} out of range")
    c = mv.component or t.base_component
    _require(c in D.components, name, f"unknown component {c}")
    _require(mv.position is None or 0 <= mv.position <= len(t.factors), name, "position out of range")
    r = _word(D, mv.r, t.base_component, c, name)
    taken = all_ids(D)
    for given in (mv.upper_id, mv.lower_id, mv.point_id):
        _require(given is None or given not in taken, name, f"id {given} already in use")
    u_id = mv.upper_id or _fresh("u.stab", taken)
    l_id = mv.lower_id or _fresh("l.stab", taken)
    s_id = mv.point_id or _fresh("s.stab", taken)
    pair = (TautFactor(r, l_id, 1), TautFactor(r, l_id, -1))
    tauts = tuple(
        TautIdentity(x.region, x.base_component, _insert(x.factors, mv.position, pair)) if x.region == t.region else x
        for x in D.tauts
    )
    out = HeegaardDiagram(
        genus=D.genus + 1,
        components=D.components,
        uppers=D.uppers + (UpperCircle(u_id, c, c, (s_id,)),),
        lowers=D.lowers + (LowerCircle(l_id, c, (s_id,)),),
        points=D.points + (IntersectionPoint(s_id, u_id, l_id, 1),),
        tauts=tauts,
    )
    return out, lab.with_updates(alpha={u_id: cm.chi[mv.color]}, beta={l_id: mv.color})


def _destabilize(D, lab, mv: Destabilize, cm):
    name = "destabilize"
    u = _upper(D, mv.upper, name)
    l = _lower(D, mv.lower, name)
    _require(len(u.points) == 1 and u.points == l.points, name, "upper and lower must meet in exactly one point")
    _require(u.cminus == u.cplus == l.base_component, name, "upper must be a loop at the lower basepoint")
    _require(D.genus >= 1, name, "genus is zero")
    uses = [(t.region, k) for t in D.tauts for k, x in enumerate(t.factors) if x.lower == l.id]
    _require(len(uses) == 2 and uses[0][0] == uses[1][0] and uses[1][1] == uses[0][1] + 1, name,
             "lower must appear in exactly one adjacent pair of taut factors")
    region, k = uses[0]
    t = D.taut(region)
    first, second = t.factors[k], t.factors[k + 1]
    _require(first.eps == -second.eps and first.r.reduced() == second.r.reduced(), name, "taut pair does not cancel")
    for x in D.tauts:
        for f in x.factors:
            _require(all(a != u.id for a, _ in f.r.letters), name, f"taut words still cross {u.id}")
    s = u.points[0]
    tauts = tuple(
        TautIdentity(x.region, x.base_component, x.factors[:k] + x.factors[k + 2:]) if x.region == region else x
        for x in D.tauts
    )
    out = HeegaardDiagram(
        genus=D.genus - 1,
        components=D.components,
        uppers=tuple(x for x in D.uppers if x.id != u.id),
        lowers=tuple(x for x in D.lowers if x.id != l.id),
        points=tuple(p for p in D.points if p.id != s),
        tauts=tauts,
    )
    return out, lab.with_updates(drop=(u.id, l.id))


def _slide_upper(D, lab, mv: SlideUpper, cm):
    name = "slide_upper"
    u1 = _upper(D, mv.moving, name)
    u2 = _upper(D, mv.over, name)
    _require(u1.id != u2.id, name, "cannot slide a circle over itself")
    _require(u1.cminus == u2.cminus, name, f"{u1.id} and {u2.id} do not share their minus side")
    _require(0 <= mv.foot <= len(u1.points), name, "foot index out of range")
    _require(not u2.points or 0 <= mv.start < len(u2.points), name, "start index out of range")
    taken = all_ids(D)
    copy = {t: _fresh(f"{t}'", taken) for t in u2.points}
    block = [copy[t] for t in u2.points[mv.start:] + u2.points[:mv.start]]
    new_u1 = replace(u1, points=_insert(u1.points, mv.foot, block))
    new_u2 = UpperCircle(u2.id, u1.cplus, u2.cplus, u2.points)

    lowers = []
    for l in D.lowers:
        pts: list[str] = []
        for s in l.points:
            if s in copy:
                pts.extend([copy[s], s] if D.point(s).sign == 1 else [s, copy[s]])
            else:
                pts.append(s)
        lowers.append(replace(l, points=tuple(pts)))
    new_points = tuple(IntersectionPoint(copy[t], u1.id, D.point(t).lower, D.point(t).sign) for t in u2.points)
    images = {u2.id: Word(u2.cminus, u2.cplus, ((u1.id, 1), (u2.id, 1)))}
    uppers = tuple(new_u1 if u.id == u1.id else new_u2 if u.id == u2.id else u for u in D.uppers)
    out = _with(
        D,
        uppers=uppers,
        lowers=tuple(lowers),
        points=D.points + new_points,
        tauts=_map_words(D, lambda w: w.substitute(images)),
    )
    H = cm.H
    x1, x2 = lab.alpha[u1.id], lab.alpha[u2.id]
    return out, lab.with_updates(alpha={u2.id: H.mul(H.inv(x1), x2)})


def _slide_lower(D, lab, mv: SlideLower, cm):
    name = "slide_lower"
    l1 = _lower(D, mv.moving, name)
    l2 = _lower(D, mv.over, name)
    _require(l1.id != l2.id, name, "cannot slide a circle over itself")
    _require(l1.base_component == l2.base_component, name, "basepoints lie in different components")
    taken = all_ids(D)
    copy = {t: _fresh(f"{t}'", taken) for t in l2.points}
    uppers = []
    for u in D.uppers:
        pts: list[str] = []
        for s in u.points:
            if s in copy:
                pts.extend([copy[s], s] if D.point(s).sign == 1 else [s, copy[s]])
            else:
                pts.append(s)
        uppers.append(replace(u, points=tuple(pts)))
    new_points = tuple(IntersectionPoint(copy[t], D.point(t).upper, l1.id, D.point(t).sign) for t in l2.points)
    tauts = []
    for t in D.tauts:
        factors: list[TautFactor] = []
        for x in t.factors:
            if x.lower != l1.id:
                factors.append(x)
            elif x.eps == 1:
                factors.extend([x, TautFactor(x.r, l2.id, -1)])
            else:
                factors.extend([TautFactor(x.r, l2.id, 1), x])
        tauts.append(TautIdentity(t.region, t.base_component, tuple(factors)))
    out = _with(
        D,
        uppers=tuple(uppers),
        lowers=_swap_lower(D, replace(l1, points=l1.points + tuple(copy[t] for t in l2.points))),
        points=D.points + new_points,
        tauts=tuple(tauts),
    )
    beta = cm.E.mul(lab.beta[l1.id], lab.beta[l2.id])
    return out, lab.with_updates(beta={l1.id: beta})


def _add_trivial_upper(D, lab, mv: AddTrivialUpper, cm):
    name = "add_trivial_upper"
    _require(mv.host in D.components, name, f"unknown component {mv.host}")
    _require(0 <= mv.label < cm.H.order, name, f"label {mv.label} out of range")
    taken = all_ids(D)
    for given in (mv.upper_id, mv.component_id):
        _require(given is None or given not in taken, name, f"id {given} already in use")
    u_id = mv.upper_id or _fresh("u.disk", taken)
    c_id = mv.component_id or _fresh("c.disk", taken)
    ends = (mv.host, c_id) if mv.outward else (c_id, mv.host)
    out = _with(D, components=D.components + (c_id,), uppers=D.uppers + (UpperCircle(u_id, *ends, ()),))
    return out, lab.with_updates(alpha={u_id: mv.label})


def _remove_trivial_upper(D, lab, mv: RemoveTrivialUpper, cm):
    name = "remove_trivial_upper"
    u = _upper(D, mv.upper, name)
    _require(not u.points, name, f"upper {u.id} has points")
    _require(u.cminus != u.cplus, name, f"upper {u.id} is a loop")

    def only_here(c: str) -> bool:
        return (
            all(x.id == u.id or c not in (x.cminus, x.cplus) for x in D.uppers)
            and all(l.base_component != c for l in D.lowers)
            and all(t.base_component != c for t in D.tauts)
            and all(c not in (f.r.source, f.r.target) for t in D.tauts for f in t.factors)
        )

    disk = next((c for c in (u.cplus, u.cminus) if only_here(c)), None)
    _require(disk is not None, name, f"neither side of {u.id} is an unused disk")
    _require(all(a != u.id for t in D.tauts for f in t.factors for a, _ in f.r.letters), name,
             f"taut words still cross {u.id}")
    out = _with(D, components=tuple(c for c in D.components if c != disk), uppers=tuple(x for x in D.uppers if x.id != u.id))
    return out, lab.with_updates(drop=(u.id,))


def _add_trivial_lower(D, lab, mv: AddTrivialLower, cm):
    name = "add_trivial_lower"
    host = _taut(D, mv.region, name)
    c = mv.component or host.base_component
    _require(c in D.components, name, f"unknown component {c}")
    _require(mv.position is None or 0 <= mv.position <= len(host.factors), name, "position out of range")
    r = _word(D, mv.r, host.base_component, c, name)
    taken = all_ids(D)
    for given in (mv.lower_id, mv.region_id):
        _require(given is None or given not in taken, name, f"id {given} already in use")
    l_id = mv.lower_id or _fresh("l.disk", taken)
    region = mv.region_id or _fresh("r.disk", taken)
    disk = TautIdentity(region, c, (TautFactor(Word.identity(c), l_id, mv.eps),))
    tauts = tuple(
        TautIdentity(t.region, t.base_component, _insert(t.factors, mv.position, (TautFactor(r, l_id, -mv.eps),)))
        if t.region == host.region
        else t
        for t in D.tauts
    )
    out = _with(D, lowers=D.lowers + (LowerCircle(l_id, c, ()),), tauts=tauts + (disk,))
    return out, lab.with_updates(beta={l_id: 0})


def _remove_trivial_lower(D, lab, mv: RemoveTrivialLower, cm):
    name = "remove_trivial_lower"
    l = _lower(D, mv.lower, name)
    _require(not l.points, name, f"lower {l.id} has points")
    _require(lab.beta.get(l.id) == 0, name, f"lower {l.id} is not labeled by the identity")
    disks = [t for t in D.tauts if len(t.factors) == 1 and t.factors[0].lower == l.id]
    uses = [(t.region, k) for t in D.tauts for k, x in enumerate(t.factors) if x.lower == l.id]
    _require(len(disks) >= 1 and len(uses) == 2, name, f"lower {l.id} does not bound a disk region")
    disk = disks[0]
    region, k = next((r, k) for r, k in uses if r != disk.region)
    tauts = tuple(
        TautIdentity(t.region, t.base_component, t.factors[:k] + t.factors[k + 1:]) if t.region == region else t
        for t in D.tauts
        if t.region != disk.region
    )
    out = _with(D, lowers=tuple(x for x in D.lowers if x.id != l.id), tauts=tauts)
    return out, lab.with_updates(drop=(l.id,))


_HANDLERS = {
    "diffeomorphism": _diffeomorphism,
    "basepoint": _basepoint,
    "reverse": _reverse,
    "two_point": _two_point,
    "stabilize": _stabilize,
    "destabilize": _destabilize,
    "slide_upper": _slide_upper,
    "slide_lower": _slide_lower,
    "add_trivial_upper": _add_trivial_upper,
    "remove_trivial_upper": _remove_trivial_upper,
    "add_trivial_lower": _add_trivial_lower,
    "remove_trivial_lower": _remove_trivial_lower,
}


def apply_move(
    D: HeegaardDiagram, lab: ChiLabeling, mv: MoveDescriptor, cm: CrossedModule
) -> tuple[HeegaardDiagram, ChiLabeling]:
    if isinstance(mv, dict):
        mv = parse_move(mv)
    out, new_lab = _HANDLERS[mv.kind](D, lab, mv, cm)
    report = validate(out)
    if report:
        raise PostconditionViolated("diagram", f"{mv.kind} produced an invalid diagram: {report}")
    report = check_labeling(out, cm, new_lab)
    if report:
        raise PostconditionViolated("labeling", f"{mv.kind} produced an invalid labeling: {report}")
    logger.debug(f"move ({mv.numeral}) {mv.kind}: {out.summary()}")
    return out, new_lab


def apply_moves(
    D: HeegaardDiagram, lab: ChiLabeling, moves: Sequence[MoveDescriptor], cm: CrossedModule
) -> tuple[HeegaardDiagram, ChiLabeling]:
    for mv in moves:
        D, lab = apply_move(D, lab, mv, cm)
    return D, lab
