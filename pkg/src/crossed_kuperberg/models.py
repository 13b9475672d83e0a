"""JSON documents read and written by the command line, as pydantic models."""

import json
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from crossed_kuperberg.diagram import (
    HeegaardDiagram,
    IntersectionPoint,
    LowerCircle,
    TautFactor,
    TautIdentity,
    UpperCircle,
    Word,
)
from crossed_kuperberg.errors import InvalidInput
from crossed_kuperberg.hopfxc import GradedComponent, HopfChiCoalgebra, Integrals
from crossed_kuperberg.labeling import ChiLabeling, OrbitClass
from crossed_kuperberg.moves import MoveDescriptor
from crossed_kuperberg.scalar import FieldDescriptor
from crossed_kuperberg.xmod import CrossedModule, FiniteGroup

FieldSpec = Union[Literal["Q"], Dict[str, int]]
Entry = Union[str, int]


class GroupModel(BaseModel):
    order: int
    table: List[List[int]]
    names: Optional[List[str]] = None

    def to_core(self) -> FiniteGroup:
        if len(self.table) != self.order:
            raise InvalidInput(f"group of order {self.order} with {len(self.table)} table rows")
        return FiniteGroup(tuple(tuple(r) for r in self.table), tuple(self.names) if self.names else None)

    @classmethod
    def from_core(cls, G: FiniteGroup) -> "GroupModel":
        return cls(order=G.order, table=[list(r) for r in G.table], names=list(G.names) if G.names else None)


class CrossedModuleModel(BaseModel):
    format: Literal[1] = 1
    name: str = ""
    E: GroupModel
    H: GroupModel
    chi: List[int]
    action: List[List[int]]

    def to_core(self) -> CrossedModule:
        return CrossedModule(self.E.to_core(), self.H.to_core(), tuple(self.chi), tuple(tuple(r) for r in self.action), self.name)

    @classmethod
    def from_core(cls, cm: CrossedModule) -> "CrossedModuleModel":
        return cls(
            name=cm.name,
            E=GroupModel.from_core(cm.E),
            H=GroupModel.from_core(cm.H),
            chi=list(cm.chi),
            action=[list(r) for r in cm.action],
        )


class PointModel(BaseModel):
    id: str
    lower: str
    sign: Literal[1, -1]


class UpperModel(BaseModel):
    id: str
    cminus: str
    cplus: str
    points: List[PointModel] = []


class LowerModel(BaseModel):
    id: str
    base_component: str
    points: List[str] = []


class FactorModel(BaseModel):
    r: List[Tuple[str, Literal[1, -1]]] = []
    lower: str
    eps: Literal[1, -1]


class TautModel(BaseModel):
    region: str
    base_component: str
    factors: List[FactorModel] = []


class DiagramModel(BaseModel):
    format: Literal[1] = 1
    genus: int
    components: List[str]
    uppers: List[UpperModel] = []
    lowers: List[LowerModel] = []
    tauts: List[TautModel] = []

    def to_core(self) -> HeegaardDiagram:
        lower_base = {l.id: l.base_component for l in self.lowers}
        points = tuple(IntersectionPoint(p.id, u.id, p.lower, p.sign) for u in self.uppers for p in u.points)
        tauts = []
        for t in self.tauts:
            factors = []
            for f in t.factors:
                if f.lower not in lower_base:
                    raise InvalidInput(f"region {t.region} refers to unknown lower circle {f.lower}")
                factors.append(TautFactor(Word(t.base_component, lower_base[f.lower], tuple(f.r)), f.lower, f.eps))
            tauts.append(TautIdentity(t.region, t.base_component, tuple(factors)))
        return HeegaardDiagram(
            genus=self.genus,
            components=tuple(self.components),
            uppers=tuple(UpperCircle(u.id, u.cminus, u.cplus, tuple(p.id for p in u.points)) for u in self.uppers),
            lowers=tuple(LowerCircle(l.id, l.base_component, tuple(l.points)) for l in self.lowers),
            points=points,
            tauts=tuple(tauts),
        )

    @classmethod
    def from_core(cls, D: HeegaardDiagram) -> "DiagramModel":
        return cls(
            genus=D.genus,
            components=list(D.components),
            uppers=[
                UpperModel(
                    id=u.id,
                    cminus=u.cminus,
                    cplus=u.cplus,
                    points=[PointModel(id=s, lower=D.point(s).lower, sign=D.point(s).sign) for s in u.points],
                )
                for u in D.uppers
            ],
            lowers=[LowerModel(id=l.id, base_component=l.base_component, points=list(l.points)) for l in D.lowers],
            tauts=[
                TautModel(
                    region=t.region,
                    base_component=t.base_component,
                    factors=[FactorModel(r=list(f.r.letters), lower=f.lower, eps=f.eps) for f in t.factors],
                )
                for t in D.tauts
            ],
        )


class LabelingModel(BaseModel):
    format: Literal[1] = 1
    alpha: Dict[str, int]
    beta: Dict[str, int]

    def to_core(self) -> ChiLabeling:
        return ChiLabeling(self.alpha, self.beta)

    @classmethod
    def from_core(cls, lab: ChiLabeling) -> "LabelingModel":
        return cls(alpha=dict(lab.alpha), beta=dict(lab.beta))


class OrbitModel(BaseModel):
    size: int
    representative: LabelingModel
    invariant: Optional[str] = None

    @classmethod
    def from_core(cls, orbit: OrbitClass, invariant: Optional[str] = None) -> "OrbitModel":
        return cls(size=orbit.size, representative=LabelingModel.from_core(orbit.representative), invariant=invariant)


class MoveScriptModel(BaseModel):
    format: Literal[1] = 1
    moves: List[MoveDescriptor] = Field(default_factory=list)


def _render(field: FieldDescriptor, arr: np.ndarray) -> Any:
    arr = np.asarray(arr, dtype=object)
    if arr.ndim == 0:
        return field.render_native(arr.item())
    return [_render(field, a) for a in arr]


def _parse(field: FieldDescriptor, data: Any) -> np.ndarray:
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for i, v in enumerate(flat):
        flat[i] = field.native(v)
    return flat.reshape(arr.shape)


class ComponentModel(BaseModel):
    grading: int
    dim: int
    mu: List[List[List[Entry]]] = []
    unit: List[Entry] = []


class HopfModel(BaseModel):
    """Matrices are row-major; the basis of ``A_x (x) A_y`` runs with the ``A_y`` index fastest."""

    format: Literal[1] = 1
    name: str = ""
    field: FieldSpec = "Q"
    xmod: Optional[CrossedModuleModel] = None
    components: List[ComponentModel]
    coproduct: Dict[str, List[List[Entry]]] = {}
    counit: List[Entry]
    antipode: Dict[str, List[List[Entry]]] = {}
    action: Dict[str, List[List[Entry]]] = {}

    def field_descriptor(self) -> FieldDescriptor:
        return FieldDescriptor.from_json(self.field)

    def to_core(self, cm: Optional[CrossedModule] = None) -> HopfChiCoalgebra:
        if cm is None:
            if self.xmod is None:
                raise InvalidInput("Hopf data needs a crossed module (embedded or given separately)")
            cm = self.xmod.to_core()
        f = self.field_descriptor()
        comps = {}
        for c in self.components:
            if c.grading in comps:
                raise InvalidInput(f"grading {c.grading} given twice")
            mu = _parse(f, c.mu) if c.dim else np.empty((0, 0, 0), dtype=object)
            unit = _parse(f, c.unit) if c.dim else np.empty((0,), dtype=object)
            comps[c.grading] = GradedComponent(c.grading, c.dim, mu, unit)

        def pairs(d: Dict[str, Any]) -> dict:
            out = {}
            for key, value in d.items():
                try:
                    a, b = (int(v) for v in key.split(","))
                except ValueError:
                    raise InvalidInput(f"bad key {key!r}, expected 'x,y'") from None
                out[(a, b)] = _parse(f, value)
            return out

        try:
            antipode = {int(k): _parse(f, v) for k, v in self.antipode.items()}
        except ValueError:
            raise InvalidInput("antipode keys must be element indices") from None
        return HopfChiCoalgebra(f, cm, comps, pairs(self.coproduct), _parse(f, self.counit), antipode,
                                pairs(self.action), self.name)

    @classmethod
    def from_core(cls, A: HopfChiCoalgebra, embed_xmod: bool = True) -> "HopfModel":
        f, H = A.field, A.cm.H
        comps = [
            ComponentModel(grading=x, dim=A.dim(x), mu=_render(f, A.mu(x)) if A.dim(x) else [],
                           unit=_render(f, A.unit(x)) if A.dim(x) else [])
            for x in H.elements()
        ]

        def matrix(arr: np.ndarray, rows: int) -> list:
            if arr.size == 0:
                return []
            return _render(f, arr.reshape((rows, -1)))

        coproduct = {
            f"{x},{y}": matrix(D, A.dim(x) * A.dim(y)) for (x, y), D in A.coproduct.items() if D.size
        }
        return cls(
            name=A.name,
            field=f.to_json(),
            xmod=CrossedModuleModel.from_core(A.cm) if embed_xmod else None,
            components=comps,
            coproduct=coproduct,
            counit=_render(f, A.counit),
            antipode={str(x): matrix(S, S.shape[0]) for x, S in A.antipode.items() if S.size},
            action={f"{x},{e}": matrix(P, P.shape[0]) for (x, e), P in A.action.items() if P.size},
        )


class IntegralsModel(BaseModel):
    format: Literal[1] = 1
    field: FieldSpec
    Lambda: List[str]
    lam: Dict[str, List[str]]

    @classmethod
    def from_core(cls, A: HopfChiCoalgebra, ints: Integrals) -> "IntegralsModel":
        f = A.field
        return cls(
            field=f.to_json(),
            Lambda=_render(f, ints.Lambda),
            lam={str(x): _render(f, v) for x, v in ints.lam.items() if v.size},
        )


def dump(model: BaseModel) -> str:
    """Canonical JSON: sorted keys, fixed indent."""
    return json.dumps(model.model_dump(mode="json"), indent=2, sort_keys=True)
