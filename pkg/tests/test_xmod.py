import random

import pytest

from crossed_kuperberg.errors import DimensionMismatch, InvalidCrossedModule, InvalidInput
from crossed_kuperberg.xmod import (
    CrossedModule,
    FiniteGroup,
    abelian_to_trivial,
    check_crossed_module,
    check_group,
    conjugation,
    cyclic,
    direct_product,
    normal_inclusion,
    pi1_pi2,
    quotient,
    subgroup,
    symmetric,
    trivial_to,
    trivial_xmod,
    two_group,
    z4_to_z2,
)

S3 = symmetric(3)
A3 = (0, 3, 4)

BUILTINS = [
    z4_to_z2(),
    trivial_xmod(),
    trivial_to(S3),
    abelian_to_trivial(cyclic(6)),
    normal_inclusion(S3, A3),
    conjugation(S3),
    conjugation(cyclic(4)),
]

# identity 0, every element its own inverse, not associative
LOOP5 = (
    (0, 1, 2, 3, 4),
    (1, 0, 3, 4, 2),
    (2, 4, 0, 1, 3),
    (3, 2, 4, 0, 1),
    (4, 3, 1, 2, 0),
)


def test_groups():
    assert S3.order == 6
    assert not S3.is_abelian()
    assert S3.center() == (0,)
    assert S3.is_normal(A3)
    assert not S3.is_normal((0, 1))
    assert direct_product(cyclic(2), cyclic(3)).order == 6
    assert cyclic(5).power(2, 3) == 1
    assert cyclic(6).element_order(2) == 3
    assert cyclic(6).inv(1) == 5
    for G in (S3, cyclic(7), direct_product(cyclic(2), cyclic(2))):
        assert not check_group(G)


def test_subgroup_and_quotient():
    A, embed = subgroup(S3, A3)
    assert A.order == 3 and A.is_abelian()
    assert embed == A3
    Q, qmap = quotient(S3, A3)
    assert Q.order == 2
    assert qmap[0] == qmap[3] == qmap[4] == 0
    with pytest.raises(InvalidInput):
        subgroup(S3, (0, 1, 3))


def test_check_group_finds_each_failure():
    assert check_group(FiniteGroup(LOOP5)).codes == {"associativity"}
    codes = check_group(FiniteGroup(((0, 1), (1, 1)))).codes
    assert {"latin", "inverse"} <= codes
    assert "identity" in check_group(FiniteGroup(((1, 0), (0, 1)))).codes


def test_bad_tables_rejected():
    with pytest.raises(DimensionMismatch):
        FiniteGroup(((0, 1), (1,)))
    with pytest.raises(InvalidInput):
        FiniteGroup(((0, 2), (2, 0)))
    with pytest.raises(InvalidInput):
        FiniteGroup(())


@pytest.mark.parametrize("cm", BUILTINS, ids=lambda cm: cm.name)
def test_builtins_are_crossed_modules(cm):
    assert not check_crossed_module(cm)


def test_builtin_constraints():
    with pytest.raises(InvalidCrossedModule):
        abelian_to_trivial(S3)
    with pytest.raises(InvalidCrossedModule):
        normal_inclusion(S3, (0, 1))


def test_named_violations():
    E, H = cyclic(4), cyclic(2)
    identity_action = (tuple(range(4)), tuple(range(4)))
    bad_chi = CrossedModule(E, H, (0, 1, 1, 0), identity_action)
    assert "chi-homomorphism" in check_crossed_module(bad_chi).codes
    bad_unit = CrossedModule(E, H, (0, 0, 0, 0), (tuple((-n) % 4 for n in range(4)), tuple(range(4))))
    assert "action-unit" in check_crossed_module(bad_unit).codes
    not_auto = CrossedModule(E, H, (0, 0, 0, 0), (tuple(range(4)), (0, 2, 2, 0)))
    assert "action-automorphism" in check_crossed_module(not_auto).codes
    # chi onto Z/2 with the sign action: ^chi(1) 1 = 3, but 1 1 1^-1 = 1
    peiffer = CrossedModule(E, H, (0, 1, 0, 1), (tuple(range(4)), (0, 3, 2, 1)))
    assert "peiffer" in check_crossed_module(peiffer).codes
    # A3 inside S3 with trivial action: chi(^x e) = e but x e x^-1 moves e
    inclusion = normal_inclusion(S3, A3)
    trivial_action = CrossedModule(inclusion.E, S3, inclusion.chi, tuple(tuple(range(3)) for _ in range(6)))
    assert "equivariance" in check_crossed_module(trivial_action).codes


@pytest.mark.parametrize("seed", range(25))
def test_single_entry_mutations_detected(seed):
    rng = random.Random(seed)
    cm = rng.choice([z4_to_z2(), normal_inclusion(S3, A3), conjugation(S3)])
    chi = list(cm.chi)
    action = [list(r) for r in cm.action]
    if rng.random() < 0.5:
        e = rng.randrange(cm.E.order)
        chi[e] = rng.choice([v for v in cm.H.elements() if v != chi[e]])
    else:
        x, e = rng.randrange(cm.H.order), rng.randrange(cm.E.order)
        action[x][e] = rng.choice([v for v in cm.E.elements() if v != action[x][e]])
    mutated = CrossedModule(cm.E, cm.H, tuple(chi), tuple(tuple(r) for r in action))
    assert check_crossed_module(mutated)


def test_two_group_round_trip_and_laws():
    cm = normal_inclusion(S3, A3)
    G = two_group(cm)
    assert G.crossed_module() == cm
    m = (1, 1)
    assert G.source(m) == 1
    assert G.target(m) == S3.mul(cm.chi[1], 1)
    n = (G.target(m), 2)
    assert G.compose(m, n) == (1, cm.E.mul(2, 1))
    with pytest.raises(InvalidInput):
        G.compose(m, ((G.target(m) + 1) % 6, 0))
    assert G.product((1, 1), (2, 2)) == (S3.mul(1, 2), cm.E.mul(1, cm.act(1, 2)))


def test_homotopy_groups():
    pi = pi1_pi2(z4_to_z2())
    assert pi.pi1.order == 2 and pi.pi2_order == 4
    pi = pi1_pi2(normal_inclusion(S3, A3))
    assert pi.pi1.order == 2 and pi.pi2_order == 1
    pi = pi1_pi2(conjugation(S3))
    assert pi.pi1.order == 1 and pi.pi2_order == 1
    pi = pi1_pi2(conjugation(cyclic(4)))
    assert pi.pi1.order == 1 and pi.pi2_order == 4
