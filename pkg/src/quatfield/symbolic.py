"""Parenthesization-explicit expression engine for the associator identity.

Expressions live in a free algebra whose atomic symbols are field
operators, conjugate momenta, ladder operators, the quaternion units, and
central scalars (Kronecker/Dirac deltas, rationals).  Products are binary
trees, so x(yz) and (xy)z stay distinct until a rule identifies them.

Ordered rewrite rules:

  R0  bridge axiom   (x, y, j) = [xy, j] for operator symbols x, y.  This
      is *not* a theorem of alternative algebras; it enters the derivation
      as an explicit named axiom so the trace shows exactly where.
  R1  canonical commutator   F_a(x) P_b+(y) -> P_b+(y) F_a(x)
      + i d^{ab} d3(x-y); ladder version a b+ -> b+ a + d^{ab} d(p-p')
      with no imaginary unit (both directions).
  R2  alternation    permuting associator arguments multiplies by the
      permutation sign.
  R3  linearity      commutators split over sums; central scalars pull out.
  R4  unit table     ij = k and cyclic, i^2 = j^2 = k^2 = -1.
  R5  scalars commute and associate with everything (folded during
      canonicalization).

Every application is logged into a proof trace.  The derivation chain ends
by collecting the associator across the equation; the factor 2 from
[i, j] = 2k cancels against the collected 2x, landing exactly on
k d^{ab} d3(x-y).
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

DELTA_AB = "δ^{ab}"
DELTA3 = "δ³(x−y)"
DELTA_P = "δ(p−p′)"


class ChainBroken(RuntimeError):
    """A scripted derivation step failed to match its expected shape."""


# ---------------------------------------------------------------------------
# nodes


@dataclass(frozen=True)
class Gen:
    kind: str        # "Phi", "Pi", "a", "b"
    index: str       # component label: "a", "b", ...
    point: str       # "x", "y", "p", ...
    daggered: bool = False

    def render(self):
        hat = {"Phi": "Φ", "Pi": "Π", "a": "â", "b": "b̂"}[self.kind]
        dag = "†" if self.daggered else ""
        if self.kind in ("a", "b"):
            return "%s^(%s)%s" % (hat, self.index, dag)
        return "%s^(%s)%s(%s)" % (hat, self.index, dag, self.point)


@dataclass(frozen=True)
class Unit:
    name: str        # "1", "i", "j", "k"

    def render(self):
        return self.name


@dataclass(frozen=True)
class Mul:
    left: object
    right: object

    def render(self):
        return "%s·%s" % (_paren(self.left), _paren(self.right))


@dataclass(frozen=True)
class Assoc:
    x: object
    y: object
    z: object

    def render(self):
        return "(%s, %s, %s)" % (self.x.render(), self.y.render(),
                                 self.z.render())


@dataclass(frozen=True)
class Comm:
    lhs: tuple       # an Expr (tuple of Terms)
    rhs: object      # a node

    def render(self):
        return "[%s, %s]" % (render(self.lhs), self.rhs.render())


def _paren(node):
    text = node.render()
    return "(%s)" % text if isinstance(node, Mul) else text


# ---------------------------------------------------------------------------
# terms and canonical sums


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    scalars: tuple   # sorted scalar symbols
    factor: object   # node or None (pure scalar term)

    def render(self):
        parts = []
        if self.coeff == -1:
            prefix = "−"
        elif self.coeff == 1:
            prefix = ""
        else:
            prefix = "%s·" % self.coeff
            if self.coeff < 0:
                prefix = "−%s·" % (-self.coeff)
        if self.factor is not None:
            parts.append(self.factor.render())
        parts.extend(self.scalars)
        if not parts:
            parts.append("1")
        return prefix + "·".join(parts)

    def key(self):
        return (self.scalars, repr(self.factor))


def term(factor=None, coeff=1, scalars=()):
    return (Term(Fraction(coeff), tuple(sorted(scalars)), factor),)


def add(*exprs):
    acc = {}
    for expr in exprs:
        for t in expr:
            k = t.key()
            if k in acc:
                acc[k] = Term(acc[k].coeff + t.coeff, t.scalars, t.factor)
            else:
                acc[k] = t
    out = [t for t in acc.values() if t.coeff != 0]
    out.sort(key=lambda t: (t.render()))
    return tuple(out)


def scale(expr, c):
    c = Fraction(c)
    if c == 0:
        return ()
    return tuple(Term(t.coeff * c, t.scalars, t.factor) for t in expr)


ZERO = ()


def render(expr):
    if not expr:
        return "0"
    chunks = []
    for i, t in enumerate(expr):
        text = t.render()
        if i == 0:
            chunks.append(text)
        elif text.startswith("−"):
            chunks.append(" − " + text[1:])
        else:
            chunks.append(" + " + text)
    return "".join(chunks)


# ---------------------------------------------------------------------------
# R4/R5: unit folding

UNIT_MUL = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"),
    ("1", "k"): (1, "k"), ("i", "1"): (1, "i"), ("j", "1"): (1, "j"),
    ("k", "1"): (1, "k"),
    ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
    ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
    ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
}


def _fold(node):
    # returns (sign, node-or-None); identity units dissolve, pure unit
    # products fold through the table, other structure is rebuilt in place
    if node is None:
        return 1, None
    if isinstance(node, Unit):
        return (1, None) if node.name == "1" else (1, node)
    if isinstance(node, Mul):
        sl, nl = _fold(node.left)
        sr, nr = _fold(node.right)
        s = sl * sr
        if nl is None:
            return s, nr
        if nr is None:
            return s, nl
        if isinstance(nl, Unit) and isinstance(nr, Unit):
            sign, name = UNIT_MUL[(nl.name, nr.name)]
            return (s * sign, None) if name == "1" else (s * sign, Unit(name))
        return s, Mul(nl, nr)
    return 1, node


def reduce_expr(expr):
    """Fold unit products and identity factors (R4 + R5); terminates in one
    structural pass and is idempotent."""
    out = []
    for t in expr:
        sign, node = _fold(t.factor)
        out.append(Term(t.coeff * sign, t.scalars, node))
    return add(tuple(out))


def sym_associator(x, y, z):
    """The unreduced two-term tree x(yz) - (xy)z."""
    return add(term(Mul(x, Mul(y, z))), scale(term(Mul(Mul(x, y), z)), -1))


# ---------------------------------------------------------------------------
# proof traces


@dataclass
class TraceStep:
    rule: str
    before: str
    after: str
    note: str = ""

    def to_dict(self):
        d = {"rule": self.rule, "before": self.before, "after": self.after}
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class ProofTrace:
    goal: str
    steps: list = field(default_factory=list)
    final: str = ""
    final_expr: tuple = ZERO

    def log(self, rule, before, after, note=""):
        self.steps.append(TraceStep(rule, render(before), render(after), note))

    def render_text(self):
        lines = ["goal: %s" % self.goal]
        for i, s in enumerate(self.steps, start=1):
            lines.append("  %d. [%s]" % (i, s.rule))
            lines.append("     %s" % s.before)
            lines.append("       → %s" % s.after)
            if s.note:
                lines.append("     note: %s" % s.note)
        lines.append("final: %s" % self.final)
        return "\n".join(lines)

    def to_json(self):
        return {
            "goal": self.goal,
            "steps": [s.to_dict() for s in self.steps],
            "final": self.final,
        }


# ---------------------------------------------------------------------------
# scripted rules (each verifies the shape it rewrites)


def _single_comm(expr):
    if len(expr) != 1 or not isinstance(expr[0].factor, Comm):
        raise ChainBroken("expected a single commutator term, got %s"
                          % render(expr))
    return expr[0]


def _apply_bridge(x, y, z):
    # R0 forward: (x, y, z) -> [x·y, z]
    return term(Comm(term(Mul(x, y)), z))


def _apply_bridge_reverse(expr):
    # R0 backward: [g1·g2, z] -> (g1, g2, z)
    t = _single_comm(expr)
    comm = t.factor
    inner = comm.lhs
    if (len(inner) != 1 or inner[0].coeff != 1 or inner[0].scalars
            or not isinstance(inner[0].factor, Mul)):
        raise ChainBroken("bridge reverse needs a bare two-factor product")
    m = inner[0].factor
    if not isinstance(m.left, Gen) or not isinstance(m.right, Gen):
        raise ChainBroken("bridge reverse needs generator factors")
    return scale(term(Assoc(m.left, m.right, comm.rhs)), t.coeff)


def _apply_ccr(expr, same_index, ladder=False):
    # R1 inside the first argument of a commutator
    t = _single_comm(expr)
    comm = t.factor
    inner = comm.lhs
    if len(inner) != 1 or not isinstance(inner[0].factor, Mul):
        raise ChainBroken("commutator argument is not a product")
    m = inner[0].factor
    left, right = m.left, m.right
    if not (isinstance(left, Gen) and isinstance(right, Gen)):
        raise ChainBroken("commutator argument is not a generator pair")
    swapped = term(Mul(right, left))
    if ladder:
        if left.kind == right.kind and left.daggered == right.daggered:
            raise ChainBroken("ladder pair must mix dagger or species")
        if left.kind != right.kind:
            delta = ZERO                      # species commute outright
        elif left.daggered and not right.daggered:
            # reverse direction: a+ a = a a+ - delta
            delta = scale(term(None, scalars=(DELTA_AB, DELTA_P)), -1) \
                if same_index else ZERO
        else:
            delta = term(None, scalars=(DELTA_AB, DELTA_P)) \
                if same_index else ZERO
    else:
        if left.kind != "Phi" or right.kind != "Pi" or not right.daggered:
            raise ChainBroken("field pair must be Phi · Pi†")
        delta = term(Unit("i"), scalars=(DELTA_AB, DELTA3)) \
            if same_index else ZERO
    rewritten = add(swapped, delta)
    return scale(term(Comm(rewritten, comm.rhs)), t.coeff)


def _apply_linearity(expr):
    # R3: split a commutator over its sum and pull central scalars out
    t = _single_comm(expr)
    comm = t.factor
    out = []
    for inner in comm.lhs:
        if inner.factor is None:
            # pure scalar: commutes with everything (R5)
            continue
        out.append(scale(term(Comm(term(inner.factor), comm.rhs),
                              scalars=inner.scalars), t.coeff * inner.coeff))
    return add(*out) if out else ZERO


def _apply_alternation(expr):
    # R2: transpose the first two associator arguments, sign flips
    out = []
    for t in expr:
        if isinstance(t.factor, Assoc):
            a = t.factor
            out.append(scale(term(Assoc(a.y, a.x, a.z), scalars=t.scalars),
                             -t.coeff))
        else:
            out.append((t,))
    return add(*[o if isinstance(o, tuple) else (o,) for o in out])


def _apply_unit_comm(expr):
    # R4: expand [u, v] for quaternion units and fold through the table
    out = []
    changed = False
    for t in expr:
        if isinstance(t.factor, Comm) and isinstance(t.factor.rhs, Unit):
            inner = t.factor.lhs
            if len(inner) == 1 and isinstance(inner[0].factor, Unit):
                u = inner[0].factor
                v = t.factor.rhs
                expanded = add(term(Mul(u, v)), scale(term(Mul(v, u)), -1))
                folded = reduce_expr(expanded)
                out.append(scale(
                    tuple(Term(x.coeff, tuple(sorted(x.scalars + t.scalars)),
                               x.factor) for x in folded),
                    t.coeff * inner[0].coeff))
                changed = True
                continue
        out.append((t,))
    if not changed:
        raise ChainBroken("no unit commutator to expand")
    return add(*out)


def _collect(unknown, rhs):
    # solve X = rhs when rhs = c·X + rest with c != 1
    if len(unknown) != 1:
        raise ChainBroken("unknown must be a single term")
    target = unknown[0]
    c = Fraction(0)
    rest = []
    for t in rhs:
        if t.key() == target.key():
            c += t.coeff
        else:
            rest.append(t)
    if c == 1:
        raise ChainBroken("collection is degenerate (coefficient 1)")
    return scale(add(*[(t,) for t in rest]), Fraction(1, 1) / (1 - c))


# ---------------------------------------------------------------------------
# the derivations


def verify_associator_chain(same_index=True):
    """Mechanize the associator-commutator derivation step by step.

    Returns the proof trace; the final normal form is k δ^{ab} δ³(x−y)
    for equal indices and 0 otherwise.  Raises ChainBroken if any step
    fails to match.
    """
    phi = Gen("Phi", "a", "x", False)
    pi_d = Gen("Pi", "b", "y", True)
    j = Unit("j")
    unknown = term(Assoc(phi, pi_d, j))
    trace = ProofTrace(goal="%s = ?" % render(unknown))

    cur = _apply_bridge(phi, pi_d, j)
    trace.log("R0 bridge axiom", unknown, cur,
              note="assumed identity between associator and commutator; "
                   "not derivable from alternativity alone")

    nxt = _apply_ccr(cur, same_index)
    trace.log("R1 canonical commutator", cur, nxt,
              note="" if same_index else "δ^{ab} = 0 for a ≠ b drops the "
                                         "scalar term")
    cur = nxt

    nxt = _apply_linearity(cur)
    trace.log("R3 linearity + R5 scalars", cur, nxt)
    cur = nxt

    # split: the generator-pair commutator becomes an associator again,
    # the unit commutator folds through the table
    pieces = []
    for t in cur:
        single = (t,)
        if isinstance(t.factor, Comm):
            inner = t.factor.lhs
            if len(inner) == 1 and isinstance(inner[0].factor, Mul):
                nxt = _apply_bridge_reverse(single)
                trace.log("R0 bridge axiom (reverse)", single, nxt)
                alt = _apply_alternation(nxt)
                trace.log("R2 alternation", nxt, alt,
                          note="transposition carries the permutation sign")
                pieces.append(alt)
                continue
            if len(inner) == 1 and isinstance(inner[0].factor, Unit):
                nxt = _apply_unit_comm(single)
                trace.log("R4 unit table", single, nxt,
                          note="[i, j] = ij − ji = 2k")
                pieces.append(nxt)
                continue
        pieces.append(single)
    cur = add(*pieces)

    final = _collect(unknown, cur)
    trace.log("collect", add(scale(unknown, 1)), final,
              note="X = −X + rest ⇒ 2X = rest; the factor 2 from [i, j] "
                   "cancels here")
    trace.final = render(final)
    trace.final_expr = final

    expected = add(term(Unit("k"), scalars=(DELTA_AB, DELTA3))) \
        if same_index else ZERO
    if final != expected:
        raise ChainBroken("chain ended in %s, expected %s"
                          % (render(final), render(expected)))
    return trace


def ladder_associator_check(which="a_adag", same_index=True,
                            with_trace=False):
    """(ladder, ladder, j) associators; all reduce to zero.

    which: "a_adag" for (â, â†, j), "a_bdag" for (â, b̂†, j),
    "adag_a" for (â†, â, j).  The ladder commutator is a pure scalar with
    no imaginary unit, so the alternation step cancels everything.
    """
    if which == "a_adag":
        left = Gen("a", "a", "p", False)
        right = Gen("a", "b", "p", True)
    elif which == "a_bdag":
        left = Gen("a", "a", "p", False)
        right = Gen("b", "b", "p", True)
    elif which == "adag_a":
        left = Gen("a", "a", "p", True)
        right = Gen("a", "b", "p", False)
    else:
        raise ValueError("unknown variant %r" % which)
    j = Unit("j")
    unknown = term(Assoc(left, right, j))
    trace = ProofTrace(goal="%s = ?" % render(unknown))

    cur = _apply_bridge(left, right, j)
    trace.log("R0 bridge axiom", unknown, cur)
    nxt = _apply_ccr(cur, same_index, ladder=True)
    trace.log("R1 canonical commutator (ladder)", cur, nxt,
              note="the ladder commutator carries no imaginary unit")
    cur = nxt
    nxt = _apply_linearity(cur)
    trace.log("R3 linearity + R5 scalars", cur, nxt,
              note="the scalar delta commutes with j and drops")
    cur = nxt
    nxt = _apply_bridge_reverse(cur)
    trace.log("R0 bridge axiom (reverse)", cur, nxt)
    cur = nxt
    nxt = _apply_alternation(cur)
    trace.log("R2 alternation", cur, nxt)
    cur = nxt
    final = _collect(unknown, cur)
    trace.log("collect", unknown, final)
    trace.final = render(final)
    trace.final_expr = final
    if final != ZERO:
        raise ChainBroken("ladder associator did not vanish: %s"
                          % render(final))
    return (final, trace) if with_trace else final


# ---------------------------------------------------------------------------
# numeric cross-check with quaternion-coefficient matrices


class QuaternionMatrix:
    """Matrix over the quaternions stored as four real blocks."""

    def __init__(self, w, x=None, y=None, z=None):
        self.w = np.asarray(w, dtype=float)
        shape = self.w.shape
        self.x = np.zeros(shape) if x is None else np.asarray(x, dtype=float)
        self.y = np.zeros(shape) if y is None else np.asarray(y, dtype=float)
        self.z = np.zeros(shape) if z is None else np.asarray(z, dtype=float)

    @classmethod
    def unit_j(cls, n):
        zero = np.zeros((n, n))
        return cls(zero, zero, np.eye(n), zero)

    def __matmul__(self, other):
        a, b = self, other
        return QuaternionMatrix(
            a.w @ b.w - a.x @ b.x - a.y @ b.y - a.z @ b.z,
            a.w @ b.x + a.x @ b.w + a.y @ b.z - a.z @ b.y,
            a.w @ b.y - a.x @ b.z + a.y @ b.w + a.z @ b.x,
            a.w @ b.z + a.x @ b.y - a.y @ b.x + a.z @ b.w,
        )

    def __sub__(self, other):
        return QuaternionMatrix(self.w - other.w, self.x - other.x,
                                self.y - other.y, self.z - other.z)

    def transpose(self):
        # quaternionic conjugate transpose
        return QuaternionMatrix(self.w.T, -self.x.T, -self.y.T, -self.z.T)

    def max_abs(self):
        return float(max(np.max(np.abs(b))
                         for b in (self.w, self.x, self.y, self.z)))


def matrix_associator(a, b, c):
    return a @ (b @ c) - (a @ b) @ c


def ladder_matrix_associator(n_max=4):
    """Max |(A, A†, jI)| for a single-mode ladder matrix; exactly zero.

    Matrices with quaternion coefficients inherit associativity from the
    quaternions, and for this triple the two parenthesizations run the
    identical float products, so the cancellation is bitwise.
    """
    from .fock import FockSpace, Mode, ModeTable, PARTICLE, annihilation
    from .minkowski import FourVector

    table = ModeTable("four", 1.0, (Mode(1, PARTICLE,
                                         FourVector(1.0, 0, 0, 0)),))
    fs = FockSpace(table, n_max=n_max)
    a_real = annihilation(fs, 0).toarray().real
    a_mat = QuaternionMatrix(a_real)
    a_dag = QuaternionMatrix(a_real.T)
    j_mat = QuaternionMatrix.unit_j(fs.dim)
    return matrix_associator(a_mat, a_dag, j_mat).max_abs()
