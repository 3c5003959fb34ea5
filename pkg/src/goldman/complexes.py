"""Graded Chevalley-Eilenberg chains over the basis of Q[H].

C_p is spanned by wedges [u_1] ^ ... ^ [u_p] of p distinct basis labels.
Because brackets of basis labels are again (multiples of) basis labels,
the CE differential stays inside the span:

    d_p([u_1] ^ ... ^ [u_p]) =
        sum over i < j of (-1)^(i+j) <u_i, u_j> [u_i + u_j] ^ (rest),

with "rest" the remaining factors in their original order and the new
factor prepended (indices are 1-based).  In low degree:

    d_2([u] ^ [v]) = -<u, v> [u + v]
    d_3([a] ^ [b] ^ [c]) = -<a,b>[a+b]^[c] + <a,c>[a+c]^[b] - <b,c>[b+c]^[a]

The label sum u_1 + ... + u_p is the grading of a wedge; every term of
d(w) has the grading of w because each summand replaces u_i, u_j by
u_i + u_j.  The complex therefore splits over the group, one summand
per grading, and all rank computations happen grading by grading.

Supports are truncated to finite boxes.  The boundary of a truncated
chain may leave the enumerated support; terms are kept rather than
dropped, so a rank computation never silently loses boundary mass.
Cochains are partial assignments on an enumerated basis, extended by
zero; evaluations that fall outside the assignment are counted so
truncation edges surface in reports instead of hiding.

>>> from goldman.groups import GroupSpec
>>> z2 = GroupSpec(2, form=[[0, 1], [-1, 0]])
>>> u, v = z2.canonical([1, 0]), z2.canonical([0, 1])
>>> c = wedge_chain(z2, [u, v])
>>> boundary(c).to_pairs()
[(Fraction(-1, 1), ((1, 1),))]
>>> w = wedge_chain(z2, [u, v, -(u + v)])
>>> sorted_terms = boundary(w).to_pairs()
>>> len(sorted_terms)
3
>>> boundary(boundary(w)).is_zero()
True
>>> grading(c.wedges()[0]).coords
(1, 1)
"""

from fractions import Fraction

__all__ = [
    "Wedge",
    "WedgeChain",
    "Cochain",
    "wedge_chain",
    "boundary",
    "coboundary",
    "grading",
    "enumerate_basis",
    "box_support",
    "project_derived",
]


class Wedge:
    """A basis wedge: strictly increasing distinct labels, length >= 1.

    Use Wedge.make to normalize an arbitrarily ordered factor list; the
    constructor trusts its input.
    """

    __slots__ = ("factors",)

    def __init__(self, factors):
        self.factors = tuple(factors)

    @classmethod
    def make(cls, factors):
        """Sort factors, returning (sign, wedge); repeats give (0, None)."""
        factors = list(factors)
        sign = 1
        # Insertion sort; factor lists have length <= 5 throughout.
        for i in range(1, len(factors)):
            j = i
            while j > 0 and factors[j] < factors[j - 1]:
                factors[j], factors[j - 1] = factors[j - 1], factors[j]
                sign = -sign
                j -= 1
        for a, b in zip(factors, factors[1:]):
            if a == b:
                return 0, None
        return sign, cls(factors)

    @property
    def degree(self):
        return len(self.factors)

    def grading(self):
        total = self.factors[0]
        for f in self.factors[1:]:
            total = total + f
        return total

    def sort_key(self):
        return tuple(f.coords for f in self.factors)

    def __eq__(self, other):
        return isinstance(other, Wedge) and other.factors == self.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return " ^ ".join("[%r]" % f for f in self.factors)


def grading(w):
    """The label sum of a wedge, an element of the group."""
    return w.grading()


class WedgeChain:
    """A finite rational combination of wedges of one common degree."""

    __slots__ = ("spec", "degree", "terms")

    def __init__(self, spec, degree, terms=()):
        self.spec = spec
        self.degree = degree
        clean = {}
        for w, coeff in (terms.items() if hasattr(terms, "items") else terms):
            if w.degree != degree:
                raise ValueError("wedge of degree %d in a degree-%d chain"
                                 % (w.degree, degree))
            coeff = Fraction(coeff)
            if coeff:
                acc = clean.get(w, 0) + coeff
                if acc:
                    clean[w] = acc
                else:
                    del clean[w]
        self.terms = clean

    @classmethod
    def zero(cls, spec, degree):
        return cls(spec, degree)

    def is_zero(self):
        return not self.terms

    def coefficient(self, w):
        return self.terms.get(w, Fraction(0))

    def items(self):
        """Deterministic (wedge, coefficient) pairs."""
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def wedges(self):
        return [w for w, _ in self.items()]

    def to_pairs(self):
        """Serialization: (coefficient, tuple of factor coordinate tuples)."""
        return [(coeff, w.sort_key()) for w, coeff in self.items()]

    def common_grading(self):
        """The shared grading of all terms; None for the zero chain.

        Raises ValueError when terms have mixed gradings, which signals
        a bookkeeping bug in the caller.
        """
        z = None
        for w in self.terms:
            g = w.grading()
            if z is None:
                z = g
            elif g != z:
                raise ValueError("chain mixes gradings %r and %r" % (z, g))
        return z

    def graded_part(self, z):
        """The sub-chain of terms with grading z."""
        out = WedgeChain(self.spec, self.degree)
        out.terms = {w: c for w, c in self.terms.items() if w.grading() == z}
        return out

    def __add__(self, other):
        if not isinstance(other, WedgeChain):
            return NotImplemented
        if other.spec is not self.spec or other.degree != self.degree:
            raise ValueError("chains live in different spaces")
        merged = dict(self.terms)
        for w, coeff in other.terms.items():
            acc = merged.get(w, 0) + coeff
            if acc:
                merged[w] = acc
            else:
                del merged[w]
        out = WedgeChain(self.spec, self.degree)
        out.terms = merged
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        out = WedgeChain(self.spec, self.degree)
        out.terms = {w: -c for w, c in self.terms.items()}
        return out

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        scalar = Fraction(scalar)
        out = WedgeChain(self.spec, self.degree)
        if scalar:
            out.terms = {w: scalar * c for w, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, WedgeChain)
                and other.spec is self.spec
                and other.degree == self.degree
                and other.terms == self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join("%s*(%r)" % (c, w) for w, c in self.items())


def wedge_chain(spec, elements, coeff=1):
    """The chain coeff * [e_1] ^ ... ^ [e_p], normalized.

    Factors may arrive in any order; sorting contributes the permutation
    sign, and a repeated factor gives the zero chain.
    """
    elements = list(elements)
    sign, w = Wedge.make(elements)
    out = WedgeChain(spec, len(elements))
    if sign:
        out.terms = {w: Fraction(coeff * sign)} if coeff else {}
    return out


def _boundary_terms(spec, w):
    """(coefficient, wedge) pairs of d(w) for a single wedge, unmerged."""
    factors = w.factors
    p = len(factors)
    out = []
    for i in range(p - 1):
        for j in range(i + 1, p):
            pair = spec.pairing(factors[i], factors[j])
            if not pair:
                continue
            # (-1)^(i+j) for 1-based indices; the parity of the 0-based
            # sum is the same, so even i+j means +1.
            sign = 1 if (i + j) % 2 == 0 else -1
            rest = [factors[i] + factors[j]]
            rest.extend(f for k, f in enumerate(factors) if k != i and k != j)
            s, nw = Wedge.make(rest)
            if s:
                out.append((Fraction(sign * s * pair), nw))
    return out


def boundary(c):
    """The CE differential; degree p chains map to degree p - 1.

    Degree-1 chains die (C_0 carries no differential target), and every
    output term keeps the grading of the term it came from.
    """
    if c.degree < 1:
        raise ValueError("boundary needs degree >= 1")
    out = WedgeChain(c.spec, c.degree - 1)
    if c.degree == 1:
        return out
    acc = {}
    for w, coeff in c.terms.items():
        for bc, bw in _boundary_terms(c.spec, w):
            total = acc.get(bw, 0) + coeff * bc
            if total:
                acc[bw] = total
            else:
                del acc[bw]
    out.terms = acc
    return out


class Cochain:
    """A partial assignment wedge -> rational, extended by zero.

    ``assignments`` keys are the enumerated support (a value of zero is
    still "defined").  Evaluations of wedges outside the support return
    zero and bump ``truncation_hits``, so reports can surface that a
    computation touched the truncation edge.  ``rule`` makes the cochain
    lazy: unseen wedges are computed, cached, and never counted as
    truncation hits (coboundaries use this).
    """

    __slots__ = ("spec", "degree", "assignments", "rule", "truncation_hits")

    def __init__(self, spec, degree, assignments=(), rule=None):
        self.spec = spec
        self.degree = degree
        pairs = assignments.items() if hasattr(assignments, "items") else assignments
        self.assignments = {}
        for w, value in pairs:
            if w.degree != degree:
                raise ValueError("wedge of degree %d in a degree-%d cochain"
                                 % (w.degree, degree))
            self.assignments[w] = Fraction(value)
        self.rule = rule
        self.truncation_hits = 0

    def value(self, w):
        if w in self.assignments:
            return self.assignments[w]
        if self.rule is not None:
            v = Fraction(self.rule(w))
            self.assignments[w] = v
            return v
        self.truncation_hits += 1
        return Fraction(0)

    def evaluate(self, chain):
        """The pairing <cochain, chain>, a rational."""
        if chain.degree != self.degree:
            raise ValueError("degree mismatch")
        total = Fraction(0)
        for w, coeff in chain.terms.items():
            total += coeff * self.value(w)
        return total


def coboundary(eta, p):
    """The dual differential: (d eta)(w) = eta(d w) on degree p + 1 wedges.

    Truncation hits of eta propagate: evaluating d(eta) on a wedge whose
    boundary leaves eta's support bumps eta.truncation_hits.
    """
    if p != eta.degree:
        raise ValueError("cochain has degree %d, not %d" % (eta.degree, p))

    def rule(w):
        total = Fraction(0)
        for coeff, bw in _boundary_terms(eta.spec, w):
            total += coeff * eta.value(bw)
        return total

    return Cochain(eta.spec, p + 1, rule=rule)


def enumerate_basis(support, p, z, restrict="full"):
    """All degree-p wedges with factors in ``support`` and grading z.

    ``restrict`` filters the support first: "full" keeps everything,
    "derived-only" keeps labels pairing nonzero with something, and
    "kernel-only" keeps the radical.  The last factor of each wedge is
    determined by the grading, so enumeration walks (p-1)-subsets.
    Output is sorted by factor coordinates.
    """
    if restrict == "full":
        pool = list(support)
    elif restrict == "derived-only":
        pool = [x for x in support if x.is_derived_element()]
    elif restrict == "kernel-only":
        pool = [x for x in support if x.in_kernel_mu()]
    else:
        raise ValueError("unknown restriction %r" % (restrict,))
    pool.sort()
    members = set(pool)
    index = {x: i for i, x in enumerate(pool)}
    out = []

    if p < 1:
        raise ValueError("need degree >= 1")
    if p == 1:
        if z in members:
            out.append(Wedge([z]))
        return out

    prefix = []

    def walk(start, remaining_sum):
        if len(prefix) == p - 1:
            last = remaining_sum
            if last in members and index[last] > index[prefix[-1]]:
                out.append(Wedge(prefix + [last]))
            return
        for i in range(start, len(pool)):
            x = pool[i]
            prefix.append(x)
            walk(i + 1, remaining_sum - x)
            prefix.pop()

    walk(0, z)
    out.sort(key=lambda w: w.sort_key())
    return out


def box_support(spec, radius):
    """All canonical elements with free coordinates in [-radius, radius].

    Torsion coordinates run over their full cyclic range; the box is the
    standard truncation everywhere in the package.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    ranges = []
    for j in range(spec.n_generators):
        d = spec.divisors[j]
        if d == 0:
            ranges.append(range(-radius, radius + 1))
        elif d == 1:
            ranges.append(range(1))
        else:
            ranges.append(range(d))
    out = []
    stack = [0] * spec.n_generators

    def fill(j):
        if j == spec.n_generators:
            out.append(spec.canonical(stack))
            return
        for v in ranges[j]:
            stack[j] = v
            fill(j + 1)

    fill(0)
    out.sort()
    return out


def project_derived(c):
    """Term-wise projection killing every wedge with a radical factor.

    This is the chain-level projection onto wedges of derived labels;
    composed with the inclusion of derived-only chains it is the
    identity.
    """
    out = WedgeChain(c.spec, c.degree)
    out.terms = {
        w: coeff for w, coeff in c.terms.items()
        if all(f.is_derived_element() for f in w.factors)
    }
    return out
