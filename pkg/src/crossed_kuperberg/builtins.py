"""Named builtin diagrams, crossed modules and Hopf chi-coalgebras."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from pydantic import BaseModel

from crossed_kuperberg.diagram import build_lens, build_poincare, build_s3
from crossed_kuperberg.errors import BadParameters
from crossed_kuperberg.hopfxc import builtin_group_algebra, builtin_kp4
from crossed_kuperberg.models import CrossedModuleModel, DiagramModel, HopfModel
from crossed_kuperberg.scalar import FieldDescriptor
from crossed_kuperberg.xmod import abelian_to_trivial, cyclic, trivial_group, trivial_to, trivial_xmod, z4_to_z2


@dataclass(frozen=True)
class Builtin:
    name: str
    params: tuple[str, ...]
    help: str
    build: Callable[[Sequence[int], FieldDescriptor], BaseModel]


def _lens(args, field):
    return DiagramModel.from_core(build_lens(*args))


def _group_algebra(args, field):
    (n,) = args
    A = builtin_group_algebra(cyclic(n), trivial_group(), field=field)
    return HopfModel.from_core(A)


REGISTRY: dict[str, Builtin] = {
    b.name: b
    for b in (
        Builtin("lens", ("P", "Q"), "genus-one diagram of L(P, Q)", _lens),
        Builtin("poincare", (), "genus-two diagram of the Poincaré sphere",
                lambda a, f: DiagramModel.from_core(build_poincare())),
        Builtin("s3", (), "genus-zero diagram of the three-sphere", lambda a, f: DiagramModel.from_core(build_s3())),
        Builtin("z4z2", (), "trivial map Z/4 -> Z/2 with the sign action",
                lambda a, f: CrossedModuleModel.from_core(z4_to_z2())),
        Builtin("kp4", (), "the eight-dimensional Hopf chi-coalgebra over Z/4 -> Z/2",
                lambda a, f: HopfModel.from_core(builtin_kp4(f))),
        Builtin("cyclic", ("N",), "crossed module 1 -> Z/N",
                lambda a, f: CrossedModuleModel.from_core(trivial_to(cyclic(a[0])))),
        Builtin("abelian-trivial", ("N",), "crossed module Z/N -> 1",
                lambda a, f: CrossedModuleModel.from_core(abelian_to_trivial(cyclic(a[0])))),
        Builtin("group-algebra", ("N",), "group algebra of Z/N over the trivial crossed module", _group_algebra),
        Builtin("trivial-xmod", (), "crossed module 1 -> 1", lambda a, f: CrossedModuleModel.from_core(trivial_xmod())),
    )
}


def build(name: str, args: Sequence[int] = (), field: Optional[FieldDescriptor] = None) -> BaseModel:
    """Build a registered object as its JSON model."""
    entry = REGISTRY.get(name)
    if entry is None:
        raise BadParameters(f"unknown builtin {name!r}; choose from {', '.join(sorted(REGISTRY))}")
    if len(args) != len(entry.params):
        usage = " ".join([name, *entry.params])
        raise BadParameters(f"builtin {name} takes {len(entry.params)} argument(s): {usage}")
    if any(a < 1 for a in args):
        raise BadParameters(f"builtin {name} needs positive arguments")
    return entry.build(tuple(args), field or FieldDescriptor.rationals())
