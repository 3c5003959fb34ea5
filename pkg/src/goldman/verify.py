"""Certified homology computations for Q[H] on truncated supports.

The graded pieces of the CE complex of Q[H] are infinite dimensional,
so every statement here is certified on a finite box with exact
witnesses.  The certification patterns are:

* Inner gradings (z in ker mu).  Every degree-2 wedge [u] ^ [z-u] is a
  cycle, and the quotient map

      f([u_1] ^ ... ^ [u_p]) = 1 (x) (u_1 ^ ... ^ u_{p-1})

  into Q (x) wedge^{p-1}(H / Zz) kills all boundaries.  Boundaries are
  produced explicitly: for <u, v> != 0,

      d((-1/<u,v>) [u] ^ [v] ^ [z-u-v])
          = [u+v]^[z-u-v] - [u]^[z-u] - [v]^[z-v],

  and for <u, v> = 0 the same combination is reached through a probe x
  pairing nonzero with u, v and u + v.  Enough such columns drive the
  boundary rank up to dim ker(f), which pins the homology of the slice
  to Q (x) (H / Zz) exactly.

* Outer gradings (z not in ker mu).  A contracting homotopy (Phi_1,
  Phi_2) built from any y with <y, z> != 0 satisfies
  Phi_1 d_2 + d_3 Phi_2 = id on the whole graded slice, verified wedge
  by wedge, so every cycle c bounds via d_3 Phi_2(c) = c.

* The degree-3 cocycle omega([u],[v],[z-u-v]) = <u, v>.  For torsion z
  the existence of a primitive eta is an affine system over box wedges;
  an infeasibility certificate for the box system refutes a global
  primitive outright.  For non-torsion z a primitive is written down
  from a linear functional with f(z) = 1 and checked on every box
  triple.

Verdicts are "certified", "refuted", or "inconclusive-at-truncation";
a too-small box can hide boundaries but never fabricate them, so a
missing witness is reported as inconclusive rather than as a
refutation.  Every certified verdict carries witnesses that have been
re-verified by direct expansion before the result is returned.
"""

import itertools
import random
from fractions import Fraction

from goldman.algebra import AlgebraVector, in_gk
from goldman.complexes import (
    Cochain,
    Wedge,
    WedgeChain,
    boundary,
    box_support,
    coboundary,
    enumerate_basis,
    project_derived,
    wedge_chain,
)
from goldman.groups import smith_normal_form, surface_presentation, _int_inverse
from goldman.linalg import SparseRationalMatrix

__all__ = [
    "CERTIFIED",
    "REFUTED",
    "INCONCLUSIVE",
    "NOT_APPLICABLE",
    "CheckResult",
    "QuotientTensorSpace",
    "QuotientWedgeVector",
    "f_map",
    "f_on_ordered",
    "g_map",
    "ideal_membership",
    "ContractingHomotopy",
    "contracting_homotopy",
    "solve_homotopy_coefficients",
    "InnerCertification",
    "inner_h2_certify",
    "outer_h2_certify",
    "main_theorem_check",
    "gk_cycle_check",
    "surface_generator_check",
    "linear_extension_check",
    "omega_cocycle",
    "omega_check",
    "h1_check",
]

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive-at-truncation"
NOT_APPLICABLE = "not-applicable"


def _box_size(spec, radius):
    """|box_support(spec, radius)| without constructing it."""
    size = 1
    for d in spec.divisors:
        if d == 0:
            size *= 2 * radius + 1
        elif d > 1:
            size *= d
    return size


def _capped_radius(spec, radius, cap):
    """The largest r <= radius with |box(r)| <= cap (at least 1)."""
    r = radius
    while r > 1 and _box_size(spec, r) > cap:
        r -= 1
    return r


def frac_str(q):
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator) if q.denominator != 1 else str(q.numerator)


def serialize_chain(c):
    """A chain as [coefficient, [factor coordinates...]] pairs."""
    return [[frac_str(coeff), [list(f) for f in key]]
            for coeff, key in c.to_pairs()]


class CheckResult:
    """One verification entry: id, instance parameters, verdict, details.

    ``details`` is a JSON-ready dict (Fractions serialized as strings)
    holding counts, dimensions, and the witnesses backing the verdict.
    """

    __slots__ = ("check", "params", "verdict", "details")

    def __init__(self, check, params, verdict, details):
        self.check = check
        self.params = params
        self.verdict = verdict
        self.details = details

    def to_dict(self):
        return {
            "check": self.check,
            "params": self.params,
            "verdict": self.verdict,
            "details": self.details,
        }

    def __repr__(self):
        return "CheckResult(%s: %s)" % (self.check, self.verdict)


# ---------------------------------------------------------------------------
# The quotient space Q (x) (H / Zz) and the maps f, g


def _dense_det(rows):
    """Determinant of a small dense Fraction matrix (Gaussian elimination)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(v) for v in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for i in range(col + 1, n):
            if a[i][col] != 0:
                factor = a[i][col] * inv
                a[i] = [x - factor * y for x, y in zip(a[i], a[col])]
    return det


class QuotientTensorSpace:
    """Coordinates on Q (x) (H / Zz) for a fixed grading z.

    Built from the Smith normal form of the relation matrix of H
    augmented with (a lift of) z: the free canonical coordinates of the
    augmented presentation are exactly Q (x) (H / Zz).  The projection
    kills z and all torsion, and ``basis_lifts`` are elements of H
    mapping to the standard basis.
    """

    __slots__ = ("spec", "z", "dim", "_proj_cols", "basis_lifts")

    def __init__(self, spec, z):
        if z.spec is not spec:
            raise ValueError("grading belongs to a different group")
        self.spec = spec
        self.z = z
        n = spec.n_generators
        rows = [list(r) for r in spec.relations]
        rows.append(list(z.lift()))
        snf = smith_normal_form(rows, n_cols=n)
        free = [j for j, d in enumerate(snf.diagonal) if d == 0]
        self.dim = len(free)
        # proj(x) = (lift(x) V')_free; relation-lattice vectors have zero
        # free coordinates, so this is well defined on H.
        self._proj_cols = [[snf.V[i][j] for i in range(n)] for j in free]
        vinv = _int_inverse(snf.V)
        self.basis_lifts = [spec.element(vinv[j]) for j in free]
        assert all(v == 0 for v in self.proj(z)), "z survived its own quotient"
        for t, E in zip(range(self.dim), self.basis_lifts):
            image = self.proj(E)
            assert all(image[s] == (1 if s == t else 0) for s in range(self.dim))

    def proj(self, x):
        """The image of x in Q (x) (H / Zz), a tuple of Fractions."""
        lift = x.lift()
        return tuple(
            Fraction(sum(lift[i] * col[i] for i in range(len(lift)) if lift[i]))
            for col in self._proj_cols)

    def wedge_image(self, elements):
        """The image of u_1 ^ ... ^ u_m in wedge^m of the quotient.

        Returned as a map from strictly increasing index tuples to the
        corresponding minor of the coordinate matrix.
        """
        vectors = [self.proj(u) for u in elements]
        m = len(vectors)
        out = {}
        for combo in itertools.combinations(range(self.dim), m):
            minor = _dense_det([[vec[j] for j in combo] for vec in vectors])
            if minor:
                out[combo] = minor
        return out


class QuotientWedgeVector:
    """An element of Q (x) wedge^m (H / Zz), coordinates on index tuples."""

    __slots__ = ("dim", "degree", "terms")

    def __init__(self, dim, degree, terms=()):
        self.dim = dim
        self.degree = degree
        clean = {}
        for key, coeff in (terms.items() if hasattr(terms, "items") else terms):
            coeff = Fraction(coeff)
            if coeff:
                acc = clean.get(key, 0) + coeff
                if acc:
                    clean[key] = acc
                else:
                    del clean[key]
        self.terms = clean

    def is_zero(self):
        return not self.terms

    def items(self):
        return sorted(self.terms.items())

    def to_pairs(self):
        return [(coeff, key) for key, coeff in self.items()]

    def __add__(self, other):
        if other.dim != self.dim or other.degree != self.degree:
            raise ValueError("vectors live in different spaces")
        merged = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = merged.get(key, 0) + coeff
            if acc:
                merged[key] = acc
            else:
                del merged[key]
        out = QuotientWedgeVector(self.dim, self.degree)
        out.terms = merged
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        out = QuotientWedgeVector(self.dim, self.degree)
        out.terms = {k: -v for k, v in self.terms.items()}
        return out

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        scalar = Fraction(scalar)
        out = QuotientWedgeVector(self.dim, self.degree)
        if scalar:
            out.terms = {k: scalar * v for k, v in self.terms.items()}
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, QuotientWedgeVector)
                and other.dim == self.dim
                and other.degree == self.degree
                and other.terms == self.terms)

    def __repr__(self):
        return "<%s>" % ", ".join(
            "%s:%s" % (key, coeff) for key, coeff in self.items())


def f_on_ordered(qspace, elements):
    """1 (x) (image of e_1 ^ ... ^ e_{p-1}) for an ordered factor list."""
    return QuotientWedgeVector(qspace.dim, len(elements) - 1,
                               qspace.wedge_image(list(elements)[:-1]))


def f_map(c, qspace):
    """The quotient map on a grading-z chain: drop the last factor,
    project the rest into Q (x) wedge^{p-1}(H / Zz).

    Well defined on wedges because the factor sum z dies in H / Zz.
    """
    z = qspace.z
    out = QuotientWedgeVector(qspace.dim, c.degree - 1)
    for w, coeff in c.terms.items():
        if w.grading() != z:
            raise ValueError("chain term graded at %r, expected %r"
                             % (w.grading(), z))
        out = out + coeff * f_on_ordered(qspace, w.factors)
    return out


def g_map(qspace, terms):
    """The section of f: (coeff, (u_1, ..., u_{p-1})) terms map to

        coeff [u_1] ^ ... ^ [u_{p-1}] ^ [z - u_1 - ... - u_{p-1}],

    with wedges containing a radical factor projected away (the target
    complex has derived labels only).  f_map(g_map(t)) = t when the
    lifts are derived.
    """
    spec = qspace.spec
    z = qspace.z
    out = None
    for coeff, lifts in terms:
        lifts = list(lifts)
        total = spec.zero
        for u in lifts:
            total = total + u
        factors = lifts + [z - total]
        piece = project_derived(wedge_chain(spec, factors, coeff))
        out = piece if out is None else out + piece
    if out is None:
        raise ValueError("empty tensor expression; pass at least one term")
    return out


# ---------------------------------------------------------------------------
# Ideal membership

# Generator of the relation ideal: for labels u, v in grading z,
#   G(u, v) = [u+v] ^ [z-u-v] - [u] ^ [z-u] - [v] ^ [z-v].


def _ideal_generator(spec, z, u, v):
    return (wedge_chain(spec, [u + v, z - u - v])
            - wedge_chain(spec, [u, z - u])
            - wedge_chain(spec, [v, z - v]))


def ideal_membership(c, box_elements, enlarge=3):
    """Is the grading-z chain c a combination of relation generators?

    Candidate generator labels are drawn from the factors of c, their
    pairwise differences, and the small elements of ``box_elements``,
    restricted so generator terms stay inside the box enlarged by the
    given factor.  Returns (True, witness), (False, obstruction) when
    the quotient map already separates c from the ideal, or
    (None, note) when the truncated generator pool does not decide.
    """
    spec = c.spec
    if c.degree != 2:
        raise ValueError("ideal membership is implemented for degree 2")
    z = c.common_grading()
    if z is None:
        return True, {"witness": [], "note": "zero chain"}
    qspace = QuotientTensorSpace(spec, z)
    image = f_map(c, qspace)
    if not image.is_zero():
        return False, {
            "reason": "quotient map separates the chain from the ideal",
            "f_image": [[frac_str(v), list(k)] for k, v in image.items()],
        }

    limit = enlarge * max(
        (max(abs(cc) for cc in x.coords) for x in box_elements), default=1)

    def inside(x):
        return all(abs(x.coords[j]) <= limit for j in spec.free_indices)

    factors = sorted({f for w in c.terms for f in w.factors},
                     key=lambda e: e.sort_key())
    small = [x for x in box_elements
             if x.weight() <= 2 and x != spec.zero]
    candidates = list(factors)
    for a, b in itertools.combinations(factors, 2):
        candidates.append(a - b)
        candidates.append(b - a)
    candidates.extend(small)
    candidates = sorted(set(candidates), key=lambda e: e.sort_key())[:120]

    generators = []
    seen = set()
    for u, v in itertools.combinations_with_replacement(candidates, 2):
        pieces = (u, v, u + v, z - u, z - v, z - u - v)
        if not all(inside(x) for x in pieces):
            continue
        gen = _ideal_generator(spec, z, u, v)
        if gen.is_zero():
            continue
        if gen == c:
            # The chain is literally one generator; no solve needed.
            return True, {"witness": [["1", list(u.coords), list(v.coords)]],
                          "generators_tried": len(generators) + 1}
        key = tuple(sorted(w.sort_key() for w in gen.terms))
        if key in seen:
            continue
        seen.add(key)
        generators.append(((u, v), gen))

    wedges = sorted({w for _, gen in generators for w in gen.terms}
                    | set(c.terms), key=lambda w: w.sort_key())
    index = {w: i for i, w in enumerate(wedges)}
    matrix = SparseRationalMatrix(len(wedges), len(generators))
    for col, (_, gen) in enumerate(generators):
        for w, coeff in gen.terms.items():
            matrix[index[w], col] = coeff
    target = [Fraction(0)] * len(wedges)
    for w, coeff in c.terms.items():
        target[index[w]] = coeff
    ok, combo = matrix.in_span(tuple(target))
    if not ok:
        return None, {
            "note": "generator pool at this truncation does not reach the chain",
            "generators_tried": len(generators),
        }
    witness = []
    recon = WedgeChain(spec, 2)
    for col, coeff in enumerate(combo):
        if coeff:
            (u, v), gen = generators[col]
            witness.append([frac_str(coeff), list(u.coords), list(v.coords)])
            recon = recon + coeff * gen
    assert recon == c, "ideal witness failed re-expansion"
    return True, {"witness": witness, "generators_tried": len(generators)}


# ---------------------------------------------------------------------------
# Contracting homotopy for outer gradings

_HOMOTOPY_SHAPES = ("phi1", "shift_first", "shift_second", "shift_both", "tail")

_DEFAULT_HOMOTOPY = {
    "phi1": Fraction(-1),
    "shift_first": Fraction(-1),
    "shift_second": Fraction(-1),
    "shift_both": Fraction(1),
    "tail": Fraction(1),
}


class ContractingHomotopy:
    """Operators Phi_1: C_1 -> C_2 and Phi_2: C_2 -> C_3 in grading z.

    For y with lam = <y, z> != 0:

        Phi_1([z])      = (phi1/lam) [y] ^ [z-y]
        Phi_2([u]^[v])  = (shift_first/lam)  [y] ^ [u-y] ^ [v]
                        + (shift_second/lam) [y] ^ [u]   ^ [v-y]
                        + (shift_both/2lam)  [2y] ^ [u-y] ^ [v-y]
                        + (tail <u-y, v-y> / 2 lam^2) [y] ^ [2y] ^ [z-3y]

    With the default coefficients Phi_1 d_2 + d_3 Phi_2 = id holds on
    every basis wedge of the slice; ``identity_defect`` measures the
    failure for any coefficient choice.
    """

    __slots__ = ("spec", "z", "y", "lam", "coefficients")

    def __init__(self, spec, z, y, coefficients=None):
        if z.in_kernel_mu():
            raise ValueError("grading lies in ker mu; the homotopy needs <y, z> != 0")
        lam = spec.pairing(y, z)
        if lam == 0:
            raise ValueError("y pairs to zero with the grading")
        self.spec = spec
        self.z = z
        self.y = y
        self.lam = Fraction(lam)
        self.coefficients = dict(_DEFAULT_HOMOTOPY)
        if coefficients:
            self.coefficients.update(coefficients)

    def phi1(self, c):
        out = WedgeChain(self.spec, 2)
        if c.degree != 1:
            raise ValueError("Phi_1 consumes degree-1 chains")
        for w, coeff in c.terms.items():
            if w.factors[0] != self.z:
                raise ValueError("chain is not graded at z")
            out = out + wedge_chain(
                self.spec, [self.y, self.z - self.y],
                coeff * self.coefficients["phi1"] / self.lam)
        return out

    def _phi2_wedge(self, u, v):
        spec, y, z, lam = self.spec, self.y, self.z, self.lam
        co = self.coefficients
        out = wedge_chain(spec, [y, u - y, v], co["shift_first"] / lam)
        out = out + wedge_chain(spec, [y, u, v - y], co["shift_second"] / lam)
        out = out + wedge_chain(spec, [2 * y, u - y, v - y],
                                co["shift_both"] / (2 * lam))
        tail = Fraction(spec.pairing(u - y, v - y))
        if tail:
            out = out + wedge_chain(spec, [y, 2 * y, z - 3 * y],
                                    co["tail"] * tail / (2 * lam * lam))
        return out

    def phi2(self, c):
        if c.degree != 2:
            raise ValueError("Phi_2 consumes degree-2 chains")
        out = WedgeChain(self.spec, 3)
        for w, coeff in c.terms.items():
            u, v = w.factors
            if u + v != self.z:
                raise ValueError("chain is not graded at z")
            out = out + coeff * self._phi2_wedge(u, v)
        return out

    def identity_defect(self, w):
        """(Phi_1 d_2 + d_3 Phi_2 - id) of a basis wedge, exactly."""
        c = WedgeChain(self.spec, 2, [(w, 1)])
        return self.phi1(boundary(c)) + boundary(self.phi2(c)) - c


def contracting_homotopy(spec, z, y=None, coefficients=None, search_radius=2):
    """A ContractingHomotopy for grading z; y defaults to the smallest
    box element pairing nonzero with z."""
    if y is None:
        for cand in box_support(spec, search_radius):
            if spec.pairing(cand, z) != 0:
                y = cand
                break
        else:
            raise ValueError("no element pairing nonzero with z in the search box")
    return ContractingHomotopy(spec, z, y, coefficients)


def solve_homotopy_coefficients(spec, z, y, wedges):
    """Fit the five homotopy coefficients so the identity holds on the
    sample wedges; returns (coefficients, residual_is_zero).

    The identity is affine in the coefficients, so the fit is an exact
    linear solve.  With a correct operator the solution reproduces the
    default coefficients.
    """
    pieces = {}
    for name in _HOMOTOPY_SHAPES:
        coeffs = {k: Fraction(0) for k in _HOMOTOPY_SHAPES}
        coeffs[name] = Fraction(1)
        pieces[name] = ContractingHomotopy(spec, z, y, coeffs)

    row_keys = {}
    contributions = {}
    for w in wedges:
        c = WedgeChain(spec, 2, [(w, 1)])
        for name, hom in pieces.items():
            chain = hom.phi1(boundary(c)) + boundary(hom.phi2(c))
            for term, coeff in chain.terms.items():
                key = (w, term)
                row_keys.setdefault(key, len(row_keys))
                bucket = contributions.setdefault(key, {})
                bucket[name] = bucket.get(name, 0) + coeff
        row_keys.setdefault((w, w), len(row_keys))

    n_rows = len(row_keys)
    matrix = SparseRationalMatrix(n_rows, len(_HOMOTOPY_SHAPES))
    rhs = [Fraction(0)] * n_rows
    for key, idx in row_keys.items():
        w, term = key
        for col, name in enumerate(_HOMOTOPY_SHAPES):
            coeff = contributions.get(key, {}).get(name, 0)
            if coeff:
                matrix[idx, col] = Fraction(coeff)
        if term == w:
            rhs[idx] = Fraction(1)
    solution, certificate = matrix.solve_affine(tuple(rhs))
    if solution is None:
        return None, certificate
    return dict(zip(_HOMOTOPY_SHAPES, solution)), None


# ---------------------------------------------------------------------------
# Inner gradings: explicit boundary columns up to the quotient dimension


class _IncrementalSpan:
    """Column echelon that accepts one sparse column at a time."""

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots = {}

    def insert(self, vec):
        """Reduce vec (dict row -> Fraction) and keep it if independent."""
        vec = dict(vec)
        while vec:
            r = min(vec)
            if r not in self.pivots:
                inv = 1 / vec[r]
                self.pivots[r] = {k: v * inv for k, v in vec.items()}
                return True
            factor = vec[r]
            for k, v in self.pivots[r].items():
                acc = vec.get(k, 0) - factor * v
                if acc:
                    vec[k] = acc
                else:
                    vec.pop(k, None)
        return False

    @property
    def rank(self):
        return len(self.pivots)


class InnerCertification:
    """Certified data for one inner grading z in ker mu.

    Holds the derived wedge basis W on the cycle box, the quotient
    space Q (x) (H / Zz), and an explicit list of boundary columns
    (each the verified d_3 of a chain on the boundary box) whose span
    reaches dim ker(f) inside span(W) when the verdict is certified.
    """

    __slots__ = ("spec", "z", "box_radius", "boundary_radius",
                 "effective_radius", "support", "wedges", "index",
                 "qspace", "columns", "matrix", "rank", "target_rank",
                 "f_rank", "box_image_rank", "result")

    def __init__(self, spec, z, box_radius, boundary_radius, support_cap):
        if not z.in_kernel_mu():
            raise ValueError("inner certification needs z in ker mu")
        if boundary_radius is None:
            boundary_radius = 3 * box_radius
        if boundary_radius < 3 * box_radius:
            raise ValueError("boundary box must be at least three times the cycle box")
        self.spec = spec
        self.z = z
        self.box_radius = box_radius
        self.boundary_radius = boundary_radius

        self.effective_radius = _capped_radius(spec, box_radius, support_cap)
        self.support = box_support(spec, self.effective_radius)

        self.wedges = enumerate_basis(self.support, 2, z, "derived-only")
        # Index heavy wedges first: a column [u+v]-[u]-[v] then pivots on
        # its heaviest row and the echelon stays near triangular.
        order = sorted(self.wedges,
                       key=lambda w: tuple(f.sort_key() for f in w.factors),
                       reverse=True)
        self.index = {w: i for i, w in enumerate(order)}
        self.wedges = order
        self.qspace = QuotientTensorSpace(spec, z)
        self._certify()

    # -- construction -----------------------------------------------------

    def _direct_witness(self, u, v):
        """d-preimage of G(u, v) when <u, v> != 0 and the wedge survives."""
        pair = self.spec.pairing(u, v)
        if pair == 0:
            return None
        chain = wedge_chain(self.spec, [u, v, self.z - u - v], Fraction(-1, pair))
        return None if chain.is_zero() else chain

    def _witness_for(self, u, v, probes):
        """A chain X on the boundary box with d(X) = G(u, v), or None."""
        target = _ideal_generator(self.spec, self.z, u, v)
        direct = self._direct_witness(u, v)
        if direct is not None and boundary(direct) == target:
            return direct
        # <u, v> = 0 (or a collapsed wedge): route through a probe x
        # pairing nonzero with u, v and u + v; the three direct pieces
        # telescope to G(u, v).
        s = u + v
        for x in probes:
            pieces = (self._direct_witness(s, x),
                      self._direct_witness(u, v + x),
                      self._direct_witness(v, x))
            if any(p is None for p in pieces):
                continue
            combo = -1 * pieces[0] + pieces[1] + pieces[2]
            if boundary(combo) == target:
                return combo
        return None

    def _inside_boundary_box(self, chain):
        limit = self.boundary_radius
        free = self.spec.free_indices
        for w in chain.terms:
            for f in w.factors:
                if any(abs(f.coords[j]) > limit for j in free):
                    return False
        return True

    def _certify(self):
        spec, z = self.spec, self.z
        wset = set(self.wedges)
        elements = sorted({f for w in self.wedges for f in w.factors},
                          key=lambda e: e.sort_key())
        probes = sorted(self.support, key=lambda e: e.sort_key())
        probes = [x for x in probes if x != spec.zero][:80]

        image_rows = {}
        fspan = _IncrementalSpan()
        for w in self.wedges:
            vec = f_on_ordered(self.qspace, w.factors)
            for key in vec.terms:
                image_rows.setdefault(key, len(image_rows))
            fspan.insert({image_rows[k]: c for k, c in vec.terms.items()})
        self.f_rank = fspan.rank

        box_span = _IncrementalSpan()
        for x in self.support:
            if not x.is_derived_element():
                continue
            vec = {j: Fraction(v) for j, v in enumerate(self.qspace.proj(x)) if v}
            box_span.insert(vec)
        self.box_image_rank = box_span.rank

        self.target_rank = len(self.wedges) - self.f_rank
        weights = {x: x.weight() for x in elements}
        keys = {x: x.sort_key() for x in elements}
        pair_order = sorted(
            ((i, j) for j in range(len(elements)) for i in range(j + 1)),
            key=lambda ij: (weights[elements[ij[0]]] + weights[elements[ij[1]]],
                            keys[elements[ij[0]]], keys[elements[ij[1]]]))

        self.columns = []
        span = _IncrementalSpan()
        for i, j in pair_order:
            if span.rank >= self.target_rank:
                break
            u, v = elements[i], elements[j]
            gen = _ideal_generator(spec, z, u, v)
            if gen.is_zero():
                continue
            # Every term of the column must stay inside span(W); a
            # degenerate [u+v] ^ [z-u-v] simply contributes nothing.
            if any(w not in wset for w in gen.terms):
                continue
            vec = {self.index[w]: coeff for w, coeff in gen.terms.items()}
            if not span.insert(vec):
                continue
            witness = self._witness_for(u, v, probes)
            if witness is None:
                # The pair is independent but has no boundary witness in
                # the box; drop it and rebuild the span without it.
                span = _IncrementalSpan()
                for g, _ in self.columns:
                    span.insert({self.index[w]: c for w, c in g.terms.items()})
                continue
            assert boundary(witness) == gen, "witness failed re-expansion"
            assert self._inside_boundary_box(witness), \
                "witness leaves the boundary box"
            assert f_map(gen, self.qspace).is_zero(), \
                "boundary column survives the quotient map"
            self.columns.append((gen, witness))
        self.rank = span.rank

        self.matrix = SparseRationalMatrix(len(self.wedges), len(self.columns))
        for col, (gen, _) in enumerate(self.columns):
            for w, coeff in gen.terms.items():
                self.matrix[self.index[w], col] = coeff

        verdict = CERTIFIED if self.rank == self.target_rank else INCONCLUSIVE
        quotient_dim = len(self.wedges) - self.rank
        details = {
            "cycle_wedges": len(self.wedges),
            "boundary_rank": self.rank,
            "kernel_of_f_dim": self.target_rank,
            "f_image_rank": self.f_rank,
            "box_generator_image_rank": self.box_image_rank,
            "f_surjective_on_box": self.f_rank == self.box_image_rank,
            "quotient_dim": quotient_dim,
            "space_dim": self.qspace.dim,
            "boundary_columns": len(self.columns),
            "effective_radius": self.effective_radius,
        }
        if verdict == CERTIFIED and self.f_rank != self.box_image_rank:
            verdict = INCONCLUSIVE
            details["note"] = "f image does not reach every box generator"
        if verdict == INCONCLUSIVE and "note" not in details:
            details["note"] = ("boundary columns reach rank %d of %d; "
                               "enlarge the box" % (self.rank, self.target_rank))
        self.result = CheckResult(
            "inner-isomorphism",
            {"spec": spec.describe()["group"], "z": list(z.coords),
             "box": self.box_radius, "boundary_box": self.boundary_radius},
            verdict, details)

    # -- queries -----------------------------------------------------------

    def chain_vector(self, c):
        """Coordinates of a chain over W, or None if it leaves the box."""
        vec = [Fraction(0)] * len(self.wedges)
        for w, coeff in c.terms.items():
            if w not in self.index:
                return None
            vec[self.index[w]] = coeff
        return tuple(vec)

    def boundary_witness(self, c):
        """An explicit X with d(X) = c, or None; c must lie in span(W)."""
        vec = self.chain_vector(c)
        if vec is None:
            return None
        ok, combo = self.matrix.in_span(vec)
        if not ok:
            return None
        out = WedgeChain(self.spec, 3)
        for col, coeff in enumerate(combo):
            if coeff:
                out = out + coeff * self.columns[col][1]
        assert boundary(out) == c, "assembled witness failed re-expansion"
        return out

    def scan_f_kills_boundaries(self, sample_cap=2000):
        """Check f(d(w)) = 0 for degree-3 derived wedges on the boundary
        box: exhaustive when the box is small, else a deterministic
        leading sample.  Returns (checked, exhaustive)."""
        radius = _capped_radius(self.spec, self.boundary_radius, 20000)
        support = [x for x in box_support(self.spec, radius)
                   if x.is_derived_element()]
        exhaustive = len(support) ** 2 <= 400000
        checked = 0
        if exhaustive:
            pool = support
        else:
            pool = sorted(support, key=lambda e: e.sort_key())[:63]
        members = set(support)
        seen = set()
        for u, v in itertools.combinations(pool, 2):
            w = self.z - u - v
            if w not in members or w == u or w == v:
                continue
            sign, wedge = Wedge.make([u, v, w])
            if not sign or wedge in seen:
                continue
            seen.add(wedge)
            chain = boundary(WedgeChain(self.spec, 3, [(wedge, 1)]))
            if not chain.is_zero():
                assert f_map(chain, self.qspace).is_zero(), \
                    "boundary escaped the kernel of f"
            checked += 1
            if not exhaustive and checked >= sample_cap:
                break
        return checked, exhaustive


def inner_h2_certify(spec, z, box_radius, boundary_radius=None, support_cap=1200):
    """Certify the inner grading z: boundaries exhaust ker(f) on the box
    and the homology slice has the quotient dimension.  Returns an
    InnerCertification; its ``result`` is the report entry."""
    return InnerCertification(spec, z, box_radius, boundary_radius, support_cap)


# ---------------------------------------------------------------------------
# Outer gradings


def outer_h2_certify(spec, z, box_radius, y_count=2, max_cycle_witnesses=5):
    """Certify H_2 = 0 in the outer grading z: the homotopy identity per
    basis wedge for ``y_count`` choices of y.  The identity bounds every
    cycle at once (d Phi2 c = c - Phi1 d c = c when d c = 0), so only a
    sample of cycle basis vectors gets an explicit serialized witness."""
    if z.in_kernel_mu():
        raise ValueError("outer certification needs z outside ker mu")
    support = box_support(spec, box_radius)
    wedges = enumerate_basis(support, 2, z, "full")

    ys = []
    for cand in sorted(box_support(spec, max(box_radius, 1)),
                       key=lambda e: e.sort_key()):
        if spec.pairing(cand, z) != 0:
            ys.append(cand)
        if len(ys) >= y_count:
            break
    if not ys:
        raise ValueError("no y with <y, z> != 0 in the box")

    corrections = {}
    per_y = []
    for y in ys:
        hom = ContractingHomotopy(spec, z, y)
        defects = [w for w in wedges if not hom.identity_defect(w).is_zero()]
        entry = {"y": list(y.coords), "wedges_checked": len(wedges),
                 "identity_holds": not defects}
        if defects:
            solved, _ = solve_homotopy_coefficients(spec, z, y, wedges)
            if solved is not None:
                hom = ContractingHomotopy(spec, z, y, solved)
                still = [w for w in wedges if not hom.identity_defect(w).is_zero()]
                if not still:
                    corrections[str(list(y.coords))] = {
                        k: frac_str(v) for k, v in sorted(solved.items())}
                    entry["identity_holds"] = True
                    entry["corrected"] = True
        per_y.append((hom, entry))

    if not all(entry["identity_holds"] for _, entry in per_y):
        return CheckResult(
            "outer-exactness",
            {"spec": spec.describe()["group"], "z": list(z.coords),
             "box": box_radius},
            REFUTED,
            {"per_y": [e for _, e in per_y],
             "note": "homotopy identity failed and no coefficient fix exists"})

    # d_2 to C_1 is one coordinate (the [z] coefficient), so the cycle
    # space misses one dimension whenever some wedge hits it.  A dense
    # kernel basis would be quadratic in the wedge count; sparse pair
    # vectors against the pivot column are enough for the samples.
    coeffs = []
    pivot = None
    for col, w in enumerate(wedges):
        coeff = boundary(WedgeChain(spec, 2, [(w, 1)])).coefficient(Wedge([z]))
        coeffs.append(coeff)
        if coeff and pivot is None:
            pivot = col
    cycle_dim = len(wedges) - (1 if pivot is not None else 0)

    hom = per_y[0][0]
    witnesses = []
    for col in range(len(wedges)):
        if len(witnesses) >= max_cycle_witnesses:
            break
        if col == pivot:
            continue
        c = WedgeChain(spec, 2, [(wedges[col], 1)])
        if coeffs[col]:
            c = c - Fraction(coeffs[col], coeffs[pivot]) * WedgeChain(
                spec, 2, [(wedges[pivot], 1)])
        x = hom.phi2(c)
        assert boundary(x) == c, "outer cycle witness failed re-expansion"
        witnesses.append({"cycle": serialize_chain(c),
                          "preimage": serialize_chain(x)})

    details = {
        "wedges": len(wedges),
        "cycle_dim": cycle_dim,
        "bounded_cycles": cycle_dim,
        "h2_dim": 0,
        "y_choices": [list(y.coords) for y in ys],
        "per_y": [e for _, e in per_y],
        "corrections": corrections,
        "witnesses": witnesses,
    }
    return CheckResult(
        "outer-exactness",
        {"spec": spec.describe()["group"], "z": list(z.coords), "box": box_radius},
        CERTIFIED, details)


# ---------------------------------------------------------------------------
# The main decomposition per grading


def main_theorem_check(spec, gradings, box_radius, boundary_radius=None,
                       support_cap=1200):
    """Per grading: the truncated H_2 dimension against the predicted
    kernel-pair count plus the quotient dimension.  Returns one
    CheckResult per grading."""
    if boundary_radius is None:
        boundary_radius = 3 * box_radius
    results = []
    if spec.mu_is_zero():
        for z in gradings:
            support = box_support(spec, box_radius)
            wedges = enumerate_basis(support, 2, z, "full")
            results.append(CheckResult(
                "main-theorem",
                {"spec": spec.describe()["group"], "z": list(z.coords),
                 "box": box_radius},
                NOT_APPLICABLE,
                {"note": "the form vanishes identically; the decomposition "
                         "hypothesis fails and the differential is zero",
                 "h2_dim": len(wedges)}))
        return results

    support = box_support(spec, box_radius)
    for z in gradings:
        params = {"spec": spec.describe()["group"], "z": list(z.coords),
                  "box": box_radius, "boundary_box": boundary_radius}
        if z.is_derived_element():
            outer = outer_h2_certify(spec, z, box_radius)
            results.append(CheckResult(
                "main-theorem", params, outer.verdict,
                {"component": "outer", "h2_dim": 0,
                 "predicted": 0,
                 "cycle_dim": outer.details.get("cycle_dim")}))
            continue

        wedges = enumerate_basis(support, 2, z, "full")
        kk = [w for w in wedges
              if all(f.in_kernel_mu() for f in w.factors)]
        # The radical is a subgroup, so z - a lies in it exactly when a
        # does: every wedge is all-radical or all-derived, never mixed.
        assert all(all(f.in_kernel_mu() for f in w.factors)
                   or all(f.is_derived_element() for f in w.factors)
                   for w in wedges), "mixed wedge in a radical grading"

        # All grading-z wedges are cycles; verify rather than assume.
        for w in wedges:
            assert boundary(WedgeChain(spec, 2, [(w, 1)])).is_zero(), \
                "wedge in a radical grading failed to be a cycle"

        kernel_pairs = len(enumerate_basis(support, 2, z, "kernel-only"))
        assert kernel_pairs == len(kk)

        inner = inner_h2_certify(spec, z, box_radius, boundary_radius,
                                 support_cap)
        inner_res = inner.result
        checked, exhaustive = inner.scan_f_kills_boundaries()

        certified = inner_res.verdict == CERTIFIED
        h2 = len(kk) + (len(inner.wedges) - inner.rank)
        predicted = kernel_pairs + inner.qspace.dim
        if certified and h2 != predicted:
            certified = False
        details = {
            "component": "inner",
            "wedges_full": len(wedges),
            "kernel_pairs": kernel_pairs,
            "derived_wedges": len(inner.wedges),
            "inner_dim": len(inner.wedges) - inner.rank,
            "quotient_dim": inner.qspace.dim,
            "h2_dim": h2,
            "predicted": predicted,
            "f_boundary_scan": {"wedges": checked, "exhaustive": exhaustive},
            "inner": inner_res.details,
        }
        results.append(CheckResult(
            "main-theorem", params,
            CERTIFIED if certified else INCONCLUSIVE, details))
    return results


# ---------------------------------------------------------------------------
# The g_K cycle


def _vector_wedge(a, b):
    """The chain expansion of (vector a) ^ (vector b) in C_2."""
    spec = a.spec
    out = WedgeChain(spec, 2)
    for x, cx in a.terms.items():
        for y, cy in b.terms.items():
            out = out + wedge_chain(spec, [x, y], cx * cy)
    return out


def _double_generator_witness(spec, z, u):
    """A chain X with d(X) = G(u, u) = [2u]^[z-2u] - 2 [u]^[z-u].

    <u, u> = 0 bars the direct wedge preimage, so route through a probe
    x with <u, x> != 0: the direct pieces for G(2u, x), G(u, u+x) and
    G(u, x) telescope.  Returns None when no probe in the generator box
    produces a verified combination.
    """
    gen = _ideal_generator(spec, z, u, u)
    for x in sorted(box_support(spec, 1), key=lambda e: e.sort_key()):
        if spec.pairing(u, x) == 0:
            continue
        pieces = []
        for a, b in ((2 * u, x), (u, u + x), (u, x)):
            pair = spec.pairing(a, b)
            piece = (wedge_chain(spec, [a, b, z - a - b], Fraction(-1, pair))
                     if pair else None)
            if piece is None or piece.is_zero():
                pieces = None
                break
            pieces.append(piece)
        if pieces is None:
            continue
        combo = -1 * pieces[0] + pieces[1] + pieces[2]
        if boundary(combo) == gen:
            return combo
    return None


def gk_cycle_check(spec, u, z, box_radius=3):
    """The cycle ([2u]-2[u]) ^ ([z-2u]-2[z-u]+[z]) in C_2(g_K): both
    factors die under K, the chain is a cycle, and its derived
    projection differs from 6 [u] ^ [z-u] by an explicit boundary."""
    if u.in_kernel_mu():
        raise ValueError("u must pair nonzero with something")
    if not z.in_kernel_mu():
        raise ValueError("z must lie in ker mu")
    left = AlgebraVector.basis(2 * u) - 2 * AlgebraVector.basis(u)
    right = (AlgebraVector.basis(z - 2 * u)
             - 2 * AlgebraVector.basis(z - u)
             + AlgebraVector.basis(z))
    factors_in_gk = in_gk(left) and in_gk(right)

    chain = _vector_wedge(left, right)
    is_cycle = boundary(chain).is_zero()

    projected = project_derived(chain)
    target = projected - 6 * wedge_chain(spec, [u, z - u])

    # The difference splits over gradings z, z + u, z - u; the z part is
    # an ideal column and the shifted parts bound through the homotopy.
    radius = max(box_radius, 2 * max((abs(c) for c in u.coords), default=1))
    witness = WedgeChain(spec, 3)
    grading_notes = []
    remaining = target
    part_z = target.graded_part(z)
    if not part_z.is_zero():
        # The z part collapses to the ideal generator G(u, u), whose
        # probe witness needs no truncated span; fall back to the
        # general span search only if that shape ever fails to match.
        piece = None
        if part_z == _ideal_generator(spec, z, u, u):
            piece = _double_generator_witness(spec, z, u)
        if piece is None:
            inner = inner_h2_certify(spec, z, radius)
            piece = inner.boundary_witness(part_z)
        if piece is None:
            return CheckResult(
                "gk-cycle",
                {"u": list(u.coords), "z": list(z.coords), "box": box_radius},
                INCONCLUSIVE,
                {"note": "no boundary witness for the radical-grading part",
                 "factors_in_gk": factors_in_gk, "is_cycle": is_cycle})
        assert boundary(piece) == part_z
        witness = witness + piece
        remaining = remaining - part_z
        grading_notes.append({"grading": list(z.coords),
                              "part": serialize_chain(part_z)})
    while not remaining.is_zero():
        some = next(iter(remaining.terms))
        g = some.grading()
        part = remaining.graded_part(g)
        hom = contracting_homotopy(spec, g, search_radius=radius)
        assert boundary(part).is_zero(), "shifted part is not a cycle"
        piece = hom.phi2(part)
        assert boundary(piece) == part
        witness = witness + piece
        remaining = remaining - part
        grading_notes.append({"grading": list(g.coords),
                              "part": serialize_chain(part)})

    total_ok = boundary(witness) == target
    verdict = CERTIFIED if (factors_in_gk and is_cycle and total_ok) else REFUTED
    return CheckResult(
        "gk-cycle",
        {"u": list(u.coords), "z": list(z.coords), "box": box_radius},
        verdict,
        {"factors_in_gk": factors_in_gk,
         "is_cycle": is_cycle,
         "projected_chain": serialize_chain(projected),
         "difference_parts": grading_notes,
         "boundary_witness": serialize_chain(witness),
         "witness_verified": total_ok})


# ---------------------------------------------------------------------------
# Surface generator classes


def surface_generator_check(g, r, z=None, box_radius=2):
    """The generator wedges [x] ^ [z-x] of a surface group span the
    inner homology slice, and each boundary-class decomposition

        [C_j] ^ [z-C_j] - [C_j - A_g] ^ [z-C_j+A_g] - [A_g] ^ [z-A_g]

    is exactly one relation generator, with the homology-level equality
    witnessed by an explicit boundary between the two derived
    decompositions (through A_g and through B_g)."""
    if g < 1:
        raise ValueError("the decomposition uses A_g; need genus >= 1")
    spec = surface_presentation(g, r)
    gens = spec.generators()
    names = spec.names
    if z is None:
        z = spec.zero
    if not z.in_kernel_mu():
        raise ValueError("z must lie in ker mu")

    qspace = QuotientTensorSpace(spec, z)
    span = _IncrementalSpan()
    images = []
    for x, name in zip(gens, names):
        vec = qspace.proj(x)
        images.append({"class": name,
                       "image": [frac_str(v) for v in vec]})
        span.insert({j: Fraction(v) for j, v in enumerate(vec) if v})
    span_ok = span.rank == qspace.dim

    a_g = gens[2 * (g - 1)]
    b_g = gens[2 * (g - 1) + 1]
    box = box_support(spec, box_radius)
    decompositions = []
    all_ok = True
    inner = None
    for j in range(r):
        c_j = gens[2 * g + j]
        diff = (wedge_chain(spec, [c_j, z - c_j])
                - wedge_chain(spec, [c_j - a_g, z - c_j + a_g])
                - wedge_chain(spec, [a_g, z - a_g]))
        status, evidence = ideal_membership(diff, box)
        entry = {"class": names[2 * g + j],
                 "ideal_member": bool(status),
                 "ideal_witness": evidence.get("witness")}

        # The two derived decompositions of the same quotient image
        # differ by a genuine boundary.
        delta = ((wedge_chain(spec, [c_j - a_g, z - c_j + a_g])
                  + wedge_chain(spec, [a_g, z - a_g]))
                 - (wedge_chain(spec, [c_j - b_g, z - c_j + b_g])
                    + wedge_chain(spec, [b_g, z - b_g])))
        assert f_map(delta, qspace).is_zero(), \
            "derived decompositions differ in the quotient"
        if inner is None:
            inner = inner_h2_certify(spec, z, max(box_radius, 2))
        witness = inner.boundary_witness(delta)
        entry["derived_difference_bounds"] = witness is not None
        if witness is not None:
            entry["boundary_witness"] = serialize_chain(witness)
        all_ok = all_ok and status is True and witness is not None
        decompositions.append(entry)

    verdict = CERTIFIED if (span_ok and all_ok) else (
        INCONCLUSIVE if span_ok else REFUTED)
    return CheckResult(
        "surface-generators",
        {"genus": g, "boundary_components": r, "z": list(z.coords),
         "box": box_radius},
        verdict,
        {"generator_images": images,
         "image_rank": span.rank,
         "space_dim": qspace.dim,
         "spans": span_ok,
         "decompositions": decompositions})


# ---------------------------------------------------------------------------
# The linear extension lemma


def linear_extension_check(spec, box_radius=2, trials=100, seed=0):
    """Additivity on nonzero-pairing pairs extends linearly: sampled
    integer functionals pass the hypothesis, the conclusions, and the
    constructive re-derivation chains; one deliberately perturbed
    functional fails the hypothesis (negative control)."""
    if box_radius < 1:
        raise ValueError("the box must contain the generators")
    rng = random.Random(seed)
    box = box_support(spec, box_radius)
    derived = [x for x in box if x.is_derived_element()]
    if not derived:
        return CheckResult(
            "linear-extension",
            {"spec": spec.describe()["group"], "box": box_radius},
            NOT_APPLICABLE, {"note": "no derived elements: the form is zero"})

    # Pairs come from the smallest derived elements: squaring the whole
    # derived box reaches hundreds of millions of pairs on rank-6 groups.
    pool = sorted(derived, key=lambda e: e.sort_key())[:60]
    probe_box = sorted(box, key=lambda e: e.sort_key())[:200]
    hot_pairs = []
    for u in pool:
        for v in pool:
            if spec.pairing(u, v) != 0:
                hot_pairs.append((u, v))
    zero_pairs = [(u, v) for u in pool for v in pool
                  if spec.pairing(u, v) == 0 and (u + v).is_derived_element()]

    def functional(coeffs):
        free = spec.free_indices
        def f(x):
            return sum(c * x.coords[j] for c, j in zip(coeffs, free))
        return f

    def probe_for(u, v):
        s = u + v
        for x in probe_box:
            if (spec.pairing(u, x) != 0 and spec.pairing(v, x) != 0
                    and spec.pairing(s, x) != 0):
                return x
        return None

    checked = {"hypothesis": 0, "additive": 0, "scaling": 0,
               "chain_sum": 0, "chain_negation": 0}
    for _ in range(trials):
        coeffs = [rng.randint(-5, 5) for _ in spec.free_indices]
        f = functional(coeffs)
        for u, v in rng.sample(hot_pairs, min(40, len(hot_pairs))):
            assert f(u + v) == f(u) + f(v)
            checked["hypothesis"] += 1
        for u, v in rng.sample(zero_pairs, min(20, len(zero_pairs))):
            assert f(u + v) == f(u) + f(v)
            checked["additive"] += 1
            x = probe_for(u, v)
            if x is not None:
                # Re-derive f(u+v) using only nonzero-pairing additivity:
                # f(u+v) = f(u+v+x) - f(x), f(u+v+x) = f(u) + f(v+x),
                # f(v+x) = f(v) + f(x).
                derived_value = (f(u) + (f(v) + f(x))) - f(x)
                assert derived_value == f(u + v)
                checked["chain_sum"] += 1
        for _ in range(10):
            u = pool[rng.randrange(len(pool))]
            n = rng.choice([-3, -2, -1, 2, 3])
            assert f(n * u) == n * f(u)
            checked["scaling"] += 1
        u = pool[rng.randrange(len(pool))]
        x = next((x for x in probe_box if spec.pairing(u, x) != 0), None)
        if x is not None:
            # f(-u) = f(x) - f(u+x): valid since <-u, u+x> = -<u, x> != 0.
            assert f(x) - f(u + x) == f(-u)
            checked["chain_negation"] += 1

    # Negative control: bump one value on a nonzero-pairing pair.
    u0, v0 = hot_pairs[0]
    base = functional([1] + [0] * (len(spec.free_indices) - 1))
    def bumped(x):
        return base(x) + (1 if x == u0 else 0)
    control_fails = bumped(u0 + v0) != bumped(u0) + bumped(v0)

    verdict = CERTIFIED if control_fails else REFUTED
    return CheckResult(
        "linear-extension",
        {"spec": spec.describe()["group"], "box": box_radius,
         "trials": trials, "seed": seed},
        verdict,
        {"checks": checked,
         "functionals": trials,
         "pair_pool": len(pool),
         "negative_control_detected": control_fails})


# ---------------------------------------------------------------------------
# The degree-3 cocycle


def omega_cocycle(spec, z):
    """The cocycle omega([u],[v],[w]) = <u, v> on grading-z 3-wedges.

    Alternating consistency of the value needs z in ker mu: swapping v
    and w changes <u, v> to <u, w> = -<u, v> exactly because
    <u, v + w> = <u, z - u> = 0.
    """
    if not z.in_kernel_mu():
        raise ValueError("omega needs z in ker mu")

    def rule(w):
        if w.grading() != z:
            raise ValueError("wedge is not graded at z")
        return Fraction(spec.pairing(w.factors[0], w.factors[1]))

    return Cochain(spec, 3, rule=rule)


def _extended_gcd_vector(values):
    """Integers a with sum(a_i values_i) = gcd(values) > 0."""
    coeffs = [0] * len(values)
    g = 0
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g = abs(v)
            coeffs = [0] * len(values)
            coeffs[i] = 1 if v > 0 else -1
            continue
        a, b = g, v
        # Extended Euclid for (g, v).
        old_r, r = a, b
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [c * old_s for c in coeffs]
        coeffs[i] = old_t
        g = old_r
    return coeffs, g


def _omega_cocycle_scan(spec, z, support, omega, budget=10 ** 6):
    """Exhaustively verify d(omega) = 0 on 4-wedges from a prefix of the
    support sized to the budget; returns (checked, pool size)."""
    pool = sorted(support, key=lambda e: e.sort_key())
    while len(pool) ** 3 > budget and len(pool) > 8:
        pool = pool[: len(pool) * 9 // 10]
    members = set(support)
    domega = coboundary(omega, 3)
    checked = 0
    for u, v, w in itertools.combinations(pool, 3):
        t = z - u - v - w
        # Count each 4-set once: only when the computed factor is the
        # largest of the four in canonical order.
        if t not in members or any(t <= f for f in (u, v, w)):
            continue
        sign, wedge = Wedge.make([u, v, w, t])
        if not sign:
            continue
        assert domega.value(wedge) == 0, "omega failed the cocycle condition"
        checked += 1
    return checked, len(pool)


def omega_check(spec, z, box_radius=3, case1_cap=120, case2_cap=350):
    """The cohomology class of omega in grading z: torsion z yields an
    exact infeasibility certificate for any primitive (the class is
    nonzero); non-torsion z yields an explicit primitive eta verified on
    every box triple (the class dies on the derived part)."""
    if not z.in_kernel_mu():
        raise ValueError("omega lives in radical gradings only")
    support = box_support(spec, box_radius)
    omega = omega_cocycle(spec, z)
    cocycle_checked, cocycle_pool = _omega_cocycle_scan(spec, z, support, omega)
    params = {"spec": spec.describe()["group"], "z": list(z.coords),
              "box": box_radius}

    if z.is_torsion():
        # A primitive eta restricted to box wedges satisfies, for each
        # 3-wedge [u]^[v]^[z-u-v] with <u, v> != 0,
        #   eta(V(u+v)) - eta(V(u)) - eta(V(v)) = -1,
        # one affine row per wedge.  Box infeasibility refutes a global
        # primitive outright.
        pool = sorted(support, key=lambda e: e.sort_key())[:case1_cap]
        variables = {}
        rows = []
        row_pairs = []

        def var_coeffs(x):
            """eta(V(x)) as (variable index, sign), or None when V(x) = 0."""
            chain = wedge_chain(spec, [x, z - x])
            if chain.is_zero():
                return None
            ((wedge, sign),) = chain.terms.items()
            if wedge not in variables:
                variables[wedge] = len(variables)
            return variables[wedge], sign

        pair_list = sorted(
            itertools.combinations(pool, 2),
            key=lambda uv: (uv[0].weight() + uv[1].weight(),
                            uv[0].sort_key(), uv[1].sort_key()))
        for u, v in pair_list:
            if spec.pairing(u, v) == 0:
                continue
            w = z - u - v
            if w == u or w == v:
                continue
            row = {}
            for x, outer_sign in ((u + v, 1), (u, -1), (v, -1)):
                vc = var_coeffs(x)
                if vc is None:
                    continue
                idx, sign = vc
                row[idx] = row.get(idx, 0) + outer_sign * sign
            rows.append({k: Fraction(v) for k, v in row.items() if v})
            row_pairs.append((u, v))

        matrix = SparseRationalMatrix(len(rows), len(variables))
        for i, row in enumerate(rows):
            for j, coeff in row.items():
                matrix[i, j] = coeff
        rhs = tuple(Fraction(-1) for _ in rows)
        solution, certificate = matrix.solve_affine(rhs)
        if certificate is not None:
            combo = [[frac_str(coeff),
                      list(row_pairs[i][0].coords), list(row_pairs[i][1].coords)]
                     for i, coeff in sorted(certificate.items())]
            return CheckResult(
                "omega-class", params, CERTIFIED,
                {"conclusion": "class is nonzero (no primitive exists)",
                 "z_is_torsion": True,
                 "cocycle_scan": {"wedges": cocycle_checked,
                                  "pool": cocycle_pool},
                 "system": {"rows": len(rows), "variables": len(variables)},
                 "certificate": combo})
        return CheckResult(
            "omega-class", params, INCONCLUSIVE,
            {"note": "the box system is solvable; a larger box is needed "
                     "to obstruct a primitive",
             "z_is_torsion": True,
             "system": {"rows": len(rows), "variables": len(variables)}})

    # Non-torsion z: take an integer functional with f(z) = 1 (allowing
    # denominators) and set eta([u] ^ [z-u]) = -2 f(u) + 1; then
    # d(eta) = omega on every grading-z triple.
    zfree = [z.coords[j] for j in spec.free_indices]
    coeffs, g = _extended_gcd_vector(zfree)
    assert g > 0

    def f_of(x):
        return Fraction(sum(c * x.coords[j]
                            for c, j in zip(coeffs, spec.free_indices)), g)

    assert f_of(z) == 1

    def eta_rule(w):
        if w.grading() != z:
            raise ValueError("wedge is not graded at z")
        return -2 * f_of(w.factors[0]) + 1

    eta = Cochain(spec, 2, rule=eta_rule)
    deta = coboundary(eta, 2)
    pool = sorted(support, key=lambda e: e.sort_key())[:case2_cap]
    members = set(support)
    checked = 0
    for u, v in itertools.combinations(pool, 2):
        w = z - u - v
        # Count each 3-set once: only when the computed factor is largest.
        if w not in members or any(w <= f for f in (u, v)):
            continue
        sign, wedge = Wedge.make([u, v, w])
        if not sign:
            continue
        assert deta.value(wedge) == omega.value(wedge), \
            "primitive failed d(eta) = omega"
        checked += 1
    return CheckResult(
        "omega-class", params, CERTIFIED,
        {"conclusion": "class vanishes on the derived part (explicit primitive)",
         "z_is_torsion": False,
         "cocycle_scan": {"wedges": cocycle_checked, "pool": cocycle_pool},
         "primitive": {"formula": "eta([u]^[z-u]) = -2 f(u) + 1",
                       "f_numerators": coeffs, "f_denominator": g},
         "triples_checked": checked,
         "scan_pool": len(pool)})


# ---------------------------------------------------------------------------
# First homology


def h1_check(spec, box_radius=2, gradings=None, enlarge=3, scan_cap=500):
    """Grading-wise H_1 at truncation: dimension 1 exactly on radical
    gradings (all incoming differentials vanish), 0 on derived ones
    (with an explicit preimage of [z])."""
    if gradings is None:
        gradings = box_support(spec, box_radius)
    big_radius = _capped_radius(spec, enlarge * box_radius, 20000)
    big = sorted(box_support(spec, big_radius), key=lambda e: e.sort_key())
    entries = []
    all_ok = True
    for z in gradings:
        if z.in_kernel_mu():
            scanned = 0
            for u in big[:scan_cap]:
                assert spec.pairing(u, z - u) == 0
                scanned += 1
            entries.append({"z": list(z.coords), "dim": 1, "expected": 1,
                            "incoming_coefficients_scanned": scanned})
        else:
            u = next((u for u in big if spec.pairing(u, z - u) != 0), None)
            if u is None:
                entries.append({"z": list(z.coords), "dim": None,
                                "expected": 0, "note": "no preimage in box"})
                all_ok = False
                continue
            pre = wedge_chain(spec, [u, z - u],
                              Fraction(-1, spec.pairing(u, z - u)))
            assert boundary(pre) == wedge_chain(spec, [z]), \
                "preimage failed re-expansion"
            entries.append({"z": list(z.coords), "dim": 0, "expected": 0,
                            "preimage": serialize_chain(pre)})
    return CheckResult(
        "h1-center",
        {"spec": spec.describe()["group"], "box": box_radius,
         "gradings": len(entries)},
        CERTIFIED if all_ok else INCONCLUSIVE,
        {"per_grading": entries})
