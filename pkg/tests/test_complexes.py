"""CE chains: boundary, coboundary duality, grading, basis enumeration."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from goldman.complexes import (
    Cochain,
    Wedge,
    WedgeChain,
    boundary,
    box_support,
    coboundary,
    enumerate_basis,
    grading,
    project_derived,
    wedge_chain,
)
from goldman.groups import GroupSpec, surface_presentation

from conftest import random_element, spec_pool

POOL = spec_pool()


def random_wedge(rng, spec, p, radius=3, pool=None):
    """A degree-p wedge with distinct random factors, or None if unlucky."""
    labels = set()
    for _ in range(40):
        if pool is None:
            labels.add(random_element(rng, spec, radius))
        else:
            labels.add(pool[rng.randrange(len(pool))])
        if len(labels) == p:
            return wedge_chain(spec, sorted(labels))
    return None


# ---------------------------------------------------------------------------
# Boundary values


def test_boundary_degree2_hand_values():
    z2 = POOL[0]
    u, v = z2.canonical([1, 0]), z2.canonical([0, 1])
    assert boundary(wedge_chain(z2, [u, v])).to_pairs() == [(Fraction(-1), ((1, 1),))]
    # Swapping the factor order flips the input sign, hence the output.
    assert boundary(wedge_chain(z2, [v, u])).to_pairs() == [(Fraction(1), ((1, 1),))]
    # Pairing zero: boundary dies.
    assert boundary(wedge_chain(z2, [u, 3 * u])).is_zero()


def test_boundary_kernel_grading_dies():
    s = surface_presentation(1, 2)
    z = s.element([0, 0, 1, 0])
    a = s.element([1, 0, 0, 0])
    assert z.in_kernel_mu()
    assert boundary(wedge_chain(s, [a, z - a])).is_zero()


def test_boundary_degree3_expansion():
    # d3([a]^[b]^[c]) = -<a,b>[a+b]^[c] + <a,c>[a+c]^[b] - <b,c>[b+c]^[a].
    z2 = POOL[0]
    a, b, c = z2.canonical([1, 0]), z2.canonical([0, 1]), z2.canonical([1, 1])
    got = boundary(wedge_chain(z2, [a, b, c]))
    want = (wedge_chain(z2, [a + b, c], -z2.pairing(a, b))
            + wedge_chain(z2, [a + c, b], z2.pairing(a, c))
            + wedge_chain(z2, [b + c, a], -z2.pairing(b, c)))
    assert got == want
    # [a+b] = [c] here, so the first term collapsed on a repeated factor.
    assert len(got.terms) == 2


def test_boundary_degree3_kernel_grading_identity():
    # For z in ker mu: d3([u]^[v]^[z-u-v])
    #   = -<u,v>([u+v]^[z-u-v] - [u]^[z-u] - [v]^[z-v]).
    s = surface_presentation(1, 2)
    z = s.element([0, 0, 1, 0])
    u = s.element([1, 0, 0, 0])
    v = s.element([0, 1, 0, 0])
    got = boundary(wedge_chain(s, [u, v, z - u - v]))
    lam = s.pairing(u, v)
    want = (wedge_chain(s, [u + v, z - u - v], -lam)
            + wedge_chain(s, [u, z - u], lam)
            + wedge_chain(s, [v, z - v], lam))
    assert got == want


def test_boundary_of_degree1_is_zero():
    z2 = POOL[0]
    c = wedge_chain(z2, [z2.canonical([1, 0])])
    out = boundary(c)
    assert out.degree == 0 and out.is_zero()
    with pytest.raises(ValueError):
        boundary(out)


# ---------------------------------------------------------------------------
# d o d = 0, grading, kernel chains


@given(st.data())
@settings(max_examples=80, deadline=None)
def test_boundary_squares_to_zero(data):
    spec = data.draw(st.sampled_from(POOL))
    p = data.draw(st.integers(2, 5))
    n = spec.n_generators
    labels = set()
    for _ in range(p):
        coords = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
        labels.add(spec.canonical(coords))
    c = wedge_chain(spec, sorted(labels)) if len(labels) == p else None
    if c is None:
        return
    assert boundary(boundary(c)).is_zero()


def test_boundary_squares_to_zero_seeded_bulk():
    rng = random.Random(99)
    checked = 0
    for _ in range(250):
        spec = POOL[rng.randrange(len(POOL))]
        c = random_wedge(rng, spec, rng.randint(2, 5))
        if c is None or c.is_zero():
            continue
        assert boundary(boundary(c)).is_zero()
        checked += 1
    assert checked >= 200


def test_boundary_preserves_grading():
    rng = random.Random(3)
    for _ in range(60):
        spec = POOL[rng.randrange(len(POOL))]
        c = random_wedge(rng, spec, rng.randint(2, 4))
        if c is None or c.is_zero():
            continue
        z = c.common_grading()
        for w in boundary(c).terms:
            assert w.grading() == z


def test_kernel_only_chains_have_zero_boundary():
    # Radical labels pair to zero with everything; Q[ker mu] is abelian.
    rng = random.Random(4)
    for spec in POOL:
        pool = [x for x in box_support(spec, 2) if x.in_kernel_mu()]
        if len(pool) < 3:
            continue
        for _ in range(10):
            c = random_wedge(rng, spec, 3, pool=pool)
            if c is None or c.is_zero():
                continue
            assert boundary(c).is_zero()


def test_mixed_grading_chain_is_rejected_by_common_grading():
    z2 = POOL[0]
    c = (wedge_chain(z2, [z2.canonical([1, 0]), z2.canonical([0, 1])])
         + wedge_chain(z2, [z2.canonical([1, 0]), z2.canonical([1, 1])]))
    with pytest.raises(ValueError):
        c.common_grading()
    part = c.graded_part(z2.canonical([1, 1]))
    assert len(part.terms) == 1


# ---------------------------------------------------------------------------
# Cochains and duality


def _full_cochain(rng, spec, support, p):
    wedges = []
    for combo in itertools.combinations(sorted(support), p):
        wedges.append(Wedge(list(combo)))
    return Cochain(spec, p, {w: Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                             for w in wedges})


def test_duality_of_boundary_and_coboundary():
    rng = random.Random(12)
    z2 = POOL[0]
    eta = _full_cochain(rng, z2, box_support(z2, 2), 2)
    deta = coboundary(eta, 2)
    inner = box_support(z2, 1)
    for _ in range(40):
        c = random_wedge(rng, z2, 3, pool=inner)
        if c is None or c.is_zero():
            continue
        assert deta.evaluate(c) == eta.evaluate(boundary(c))
    assert eta.truncation_hits == 0


def test_coboundary_squares_to_zero():
    rng = random.Random(13)
    z2 = POOL[0]
    eta = _full_cochain(rng, z2, box_support(z2, 3), 1)
    dd_eta = coboundary(coboundary(eta, 1), 2)
    for _ in range(30):
        c = random_wedge(rng, z2, 3, pool=box_support(z2, 1))
        if c is None or c.is_zero():
            continue
        assert dd_eta.evaluate(c) == 0
    assert eta.truncation_hits == 0


def test_coboundary_hand_value():
    # (d eta)([u]^[v]) = eta(d([u]^[v])) = -<u,v> eta([u+v]).
    z2 = POOL[0]
    u, v = z2.canonical([1, 0]), z2.canonical([0, 1])
    eta = Cochain(z2, 1, {Wedge([u + v]): Fraction(7)})
    deta = coboundary(eta, 1)
    assert deta.evaluate(wedge_chain(z2, [u, v])) == -7


def test_truncation_edge_is_counted():
    z2 = POOL[0]
    u, v = z2.canonical([1, 0]), z2.canonical([0, 1])
    eta = Cochain(z2, 1, {Wedge([u]): Fraction(1)})
    deta = coboundary(eta, 1)
    # d([u]^[v]) hits [u+v], which eta does not enumerate.
    deta.evaluate(wedge_chain(z2, [u, v]))
    assert eta.truncation_hits == 1
    with pytest.raises(ValueError):
        Cochain(z2, 2, {Wedge([u]): Fraction(1)})
    with pytest.raises(ValueError):
        coboundary(eta, 2)


# ---------------------------------------------------------------------------
# Basis enumeration and supports


def test_box_support_sizes():
    assert len(box_support(POOL[0], 1)) == 9
    assert len(box_support(POOL[2], 1)) == 18
    z1 = GroupSpec(1)
    assert len(box_support(z1, 2)) == 5
    assert len(box_support(POOL[4], 1)) == 24  # torsion only: 4 * 6
    assert box_support(POOL[0], 0) == [POOL[0].zero]


def test_enumerate_basis_hand_oracles():
    z2 = POOL[0]
    zero = z2.zero
    derived_pairs = enumerate_basis(box_support(z2, 1), 2, zero, "derived-only")
    assert len(derived_pairs) == 4
    for w in derived_pairs:
        assert w.grading() == zero
        assert w.factors[1] == -w.factors[0]
    u = z2.canonical([1, 1])
    assert enumerate_basis(box_support(z2, 1), 1, u) == [Wedge([u])]
    kernel_only = enumerate_basis(box_support(z2, 1), 1, zero, "kernel-only")
    assert kernel_only == [Wedge([zero])]
    assert enumerate_basis(box_support(z2, 1), 2, zero, "kernel-only") == []


def test_enumerate_basis_matches_bruteforce():
    rng = random.Random(21)
    for spec in POOL[:5]:
        support = box_support(spec, 1)
        for p in (2, 3):
            for _ in range(4):
                z = random_element(rng, spec, 2)
                fast = enumerate_basis(support, p, z)
                slow = [Wedge(list(combo))
                        for combo in itertools.combinations(sorted(support), p)
                        if sum(combo[1:], combo[0]) == z]
                assert fast == sorted(slow, key=lambda w: w.sort_key())


def test_enumerate_basis_is_deterministic():
    z2 = POOL[0]
    support = box_support(z2, 2)
    a = enumerate_basis(support, 3, z2.zero, "derived-only")
    b = enumerate_basis(list(reversed(support)), 3, z2.zero, "derived-only")
    assert a == b
    with pytest.raises(ValueError):
        enumerate_basis(support, 2, z2.zero, "everything")


# ---------------------------------------------------------------------------
# Projection to derived-only chains


def test_project_derived_kills_radical_factors():
    spec = POOL[1]  # Z^3 with rank-2 form: e3 spans the radical free part.
    e1, e2, e3 = spec.generators()
    mixed = wedge_chain(spec, [e1, e3]) + wedge_chain(spec, [e1, e2])
    out = project_derived(mixed)
    assert out == wedge_chain(spec, [e1, e2])
    assert project_derived(out) == out


def test_project_derived_is_identity_on_derived_chains():
    rng = random.Random(31)
    for spec in POOL:
        pool = [x for x in box_support(spec, 2) if x.is_derived_element()]
        if len(pool) < 3:
            continue
        for _ in range(10):
            c = random_wedge(rng, spec, 3, pool=pool)
            if c is None or c.is_zero():
                continue
            assert project_derived(c) == c


# ---------------------------------------------------------------------------
# Wedge normalization


def test_wedge_make_sign_matches_permutation_parity():
    z2 = POOL[0]
    labels = sorted({z2.canonical([1, 0]), z2.canonical([0, 1]),
                     z2.canonical([1, 1]), z2.canonical([-1, 2])})
    for perm in itertools.permutations(range(4)):
        sign, w = Wedge.make([labels[i] for i in perm])
        # Parity by counting inversions.
        inv = sum(1 for a in range(4) for b in range(a + 1, 4)
                  if perm[a] > perm[b])
        assert sign == (1 if inv % 2 == 0 else -1)
        assert w.factors == tuple(labels)


def test_wedge_repeat_gives_zero():
    z2 = POOL[0]
    u, v = z2.canonical([1, 0]), z2.canonical([0, 1])
    sign, w = Wedge.make([u, v, u])
    assert sign == 0 and w is None
    assert wedge_chain(z2, [u, v, u]).is_zero()


def test_chain_arithmetic_and_serialization():
    z2 = POOL[0]
    u, v, s = z2.canonical([1, 0]), z2.canonical([0, 1]), z2.canonical([1, 1])
    c = wedge_chain(z2, [u, v], Fraction(1, 2)) + wedge_chain(z2, [u, s], 3)
    # Sorting [u, v] into canonical order swaps once, so the stored
    # coefficient carries the sign.
    assert c.coefficient(Wedge([v, u])) == Fraction(-1, 2)
    assert (c - c).is_zero()
    assert (2 * c).to_pairs() == [(Fraction(-1), ((0, 1), (1, 0))),
                                  (Fraction(6), ((1, 0), (1, 1)))]
    with pytest.raises(ValueError):
        WedgeChain(z2, 2, [(Wedge([u]), 1)])