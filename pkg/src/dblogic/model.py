"""Conditional-model abstraction: partially defined conditional operators on
finite powerset algebras, homomorphic assignments, formula evaluation and
semantic entailment.

A model is a powerset algebra over an ordered atom list (elements are int
bitmasks) plus a partial binary operator f.  Undefinedness is a value, not an
error: the free model defines f progressively, so evaluation reports the
offending condition element and entailment counts skipped assignments instead
of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random
from typing import Iterable, Mapping, Sequence

from .construction import Stage
from .syntax import Atom, Cond, Formula, Implies, Not, Sequent, atoms as formula_atoms

__all__ = [
    "ConditionalModel", "StageModel", "TableModel", "ConditionalAssignment",
    "extend_assignment", "evaluate", "BetaReport", "check_beta_axioms",
    "EntailmentResult", "entails", "check_soundness", "SoundnessRow",
]


class ConditionalModel:
    """Finite powerset algebra plus a partial conditional operator."""

    size: int
    full: int

    def f(self, b: int, a: int) -> int | None:
        raise NotImplementedError

    def complement(self, mask: int) -> int:
        return self.full ^ mask

    def known_conditions(self) -> Sequence[int]:
        """Nontrivial condition elements with at least one defined row."""
        raise NotImplementedError

    def defined_rows(self, cond: int, cap: int = 12) -> Sequence[int] | None:
        """Elements B for which f(B, cond) may be defined; None when that set
        is too large to enumerate."""
        raise NotImplementedError


class StageModel(ConditionalModel):
    """Adapter over one constructed stage."""

    def __init__(self, stage: Stage):
        self.stage = stage
        self.size = stage.size
        self.full = stage.full

    def f(self, b: int, a: int) -> int | None:
        return self.stage.apply_f(b, a)

    def known_conditions(self) -> Sequence[int]:
        return self.stage.defined_conditions()

    def defined_rows(self, cond: int, cap: int = 12) -> Sequence[int] | None:
        found = self.stage.chain_for(cond)
        if found is None:
            return []
        return self.stage.embeddable_elements(found[0].processed_at, cap)


class TableModel(ConditionalModel):
    """Explicit (possibly tampered) operator table for small algebras.

    Rows on trivial conditions follow f(B, empty) = f(B, full) = B unless the
    table overrides them.
    """

    def __init__(self, n_atoms: int, table: Mapping[tuple[int, int], int]):
        self.size = n_atoms
        self.full = (1 << n_atoms) - 1
        self.table = dict(table)

    @classmethod
    def from_model(cls, m: ConditionalModel) -> "TableModel":
        if m.size > 12:
            raise ValueError("model too large to tabulate")
        table = {}
        for a in range(1 << m.size):
            for b in range(1 << m.size):
                v = m.f(b, a)
                if v is not None:
                    table[(b, a)] = v
        return cls(m.size, table)

    def f(self, b: int, a: int) -> int | None:
        if (b, a) in self.table:
            return self.table[(b, a)]
        if a == 0 or a == self.full:
            return b
        return None

    def known_conditions(self) -> Sequence[int]:
        return sorted({a for (_, a) in self.table if a not in (0, self.full)})

    def defined_rows(self, cond: int, cap: int = 12) -> Sequence[int] | None:
        return sorted({b for (b, a) in self.table if a == cond})

    def override(self, b: int, a: int, value: int) -> "TableModel":
        table = dict(self.table)
        table[(b, a)] = value
        return TableModel(self.size, table)


# ---------------------------------------------------------------------------
# Assignments and evaluation
# ---------------------------------------------------------------------------

class ConditionalAssignment:
    """Unique homomorphic extension of an atom map; memoized per subformula."""

    def __init__(self, model: ConditionalModel, atom_map: Mapping[str, int]):
        self.model = model
        self.atom_map = dict(atom_map)
        self._memo: dict[Formula, int | None] = {}
        self._blocking: dict[Formula, int | None] = {}

    def value(self, f: Formula) -> int | None:
        """Homomorphic value, or None when some required f row is missing."""
        if f in self._memo:
            return self._memo[f]
        blocking: int | None = None
        if isinstance(f, Atom):
            if f.name not in self.atom_map:
                raise KeyError(f"atom {f.name!r} outside the assignment's domain")
            out = self.atom_map[f.name]
        elif isinstance(f, Not):
            v = self.value(f.body)
            out = None if v is None else self.model.complement(v)
            blocking = self._blocking.get(f.body)
        elif isinstance(f, Implies):
            l, r = self.value(f.left), self.value(f.right)
            out = None if l is None or r is None else (self.model.complement(l) | r)
            blocking = self._blocking.get(f.left) or self._blocking.get(f.right)
        elif isinstance(f, Cond):
            t, g = self.value(f.then), self.value(f.given)
            if t is None or g is None:
                out = None
                blocking = self._blocking.get(f.then) or self._blocking.get(f.given)
            else:
                out = self.model.f(t, g)
                if out is None:
                    blocking = g
        else:
            raise TypeError(f)
        self._memo[f] = out
        self._blocking[f] = blocking
        return out

    def blocking_condition(self, f: Formula) -> int | None:
        """The innermost condition element whose f row was missing."""
        self.value(f)
        return self._blocking.get(f)


def extend_assignment(model: ConditionalModel, atom_map: Mapping[str, int]) -> ConditionalAssignment:
    return ConditionalAssignment(model, atom_map)


def evaluate(model: ConditionalModel, assignment: ConditionalAssignment,
             f: Formula) -> int | None:
    return assignment.value(f)


# ---------------------------------------------------------------------------
# Axiom verification on models
# ---------------------------------------------------------------------------

@dataclass
class BetaReport:
    checks: dict[str, tuple[int, int, tuple | None]] = field(default_factory=dict)
    seed: int | None = None

    def record(self, name: str, passed: int, skipped: int = 0,
               counterexample: tuple | None = None) -> None:
        p, s, c = self.checks.get(name, (0, 0, None))
        self.checks[name] = (p + passed, s + skipped, c or counterexample)

    def failures(self) -> dict[str, tuple]:
        return {k: v[2] for k, v in self.checks.items() if v[2] is not None}

    def ok(self, include_extra: bool = False) -> bool:
        bad = self.failures()
        if not include_extra:
            bad = {k: v for k, v in bad.items() if k not in ("beta5", "beta6")}
        return not bad


def check_beta_axioms(m: ConditionalModel, samples: int | None = None,
                      seed: int = 0) -> BetaReport:
    """Per-axiom pass/fail/skip counts with first counterexamples.

    Conditions range over the rows f actually defines; pairs are exhausted on
    small models and sampled (seeded) beyond.  The full symmetry law beta5 is
    reported separately as an extra, never required.
    """
    rng = Random(seed)
    rep = BetaReport(seed=seed)
    exhaustive = samples is None and m.size <= 12
    conditions = list(m.known_conditions())

    def rows(cond: int) -> list[int]:
        if exhaustive:
            r = m.defined_rows(cond)
            if r is not None:
                return list(r)
            return list(range(1 << m.size))
        return [rng.getrandbits(m.size) for _ in range(samples or 1000)]

    for a in conditions + [0, m.full]:
        pool = rows(a)
        for b in pool:
            fb = m.f(b, a)
            if fb is None:
                rep.record("beta1", 0, 1)
                continue
            if a != 0 and (a & b) == a and fb != m.full:
                rep.record("beta1", 0, 0, ("beta1", a, b))
            else:
                rep.record("beta1", 1)
            if (a & fb) | (a & b) != (a & b):  # A & f(B,A) subset of B
                rep.record("beta3", 0, 0, ("beta3", a, b))
            else:
                rep.record("beta3", 1)
            fnb = m.f(m.complement(b), a)
            if fnb is None:
                rep.record("beta4", 0, 1)
            elif fnb != m.complement(fb):
                rep.record("beta4", 0, 0, ("beta4", a, b))
            else:
                rep.record("beta4", 1)
            if fb == b:
                fw = m.f(b, m.complement(a))
                if fw is None:
                    rep.record("beta5w", 0, 1)
                elif fw != b:
                    rep.record("beta5w", 0, 0, ("beta5w", a, b))
                else:
                    rep.record("beta5w", 1)
                # extra: full symmetry
                fba = m.f(a, b)
                if fba is None:
                    rep.record("beta5", 0, 1)
                elif fba != a:
                    rep.record("beta5", 0, 0, ("beta5", a, b))
                else:
                    rep.record("beta5", 1)
        if len(pool) ** 2 <= 8192 ** 1:
            pair_iter = ((b, c) for b in pool for c in pool)
        else:
            pair_iter = ((rng.choice(pool), rng.choice(pool))
                         for _ in range(samples or 4096))
        for b, c in pair_iter:
            fb, fc = m.f(b, a), m.f(c, a)
            fu = m.f(b | c, a)
            fi = m.f(b & c, a)
            if fb is None or fc is None or fu is None:
                rep.record("beta2", 0, 1)
            elif fu | (fb | fc) != (fb | fc):  # f(B u C, A) subset f(B,A) u f(C,A)
                rep.record("beta2", 0, 0, ("beta2", a, b, c))
            else:
                rep.record("beta2", 1)
            if fb is None or fc is None or fi is None:
                rep.record("beta6", 0, 1)
            elif fi != fb & fc:
                rep.record("beta6", 0, 0, ("beta6", a, b, c))
            else:
                rep.record("beta6", 1)
    return rep


# ---------------------------------------------------------------------------
# Entailment
# ---------------------------------------------------------------------------

@dataclass
class EntailmentResult:
    verdict: str                      # "holds" | "fails" | "undecided"
    checked: int
    skipped: int
    witness: dict[str, int] | None
    seed: int | None = None

    def is_sound(self) -> bool:
        return self.verdict != "fails"


def entails(m: ConditionalModel, s: Sequent, samples: int | None = None,
            seed: int = 0) -> EntailmentResult:
    """Truth of a sequent in the model: whenever every antecedent formula
    denotes the full element, some succedent formula must.  Exhaustive over
    all atom assignments when feasible, else seeded sampling; assignments
    whose evaluation is undefined count as skips."""
    names = sorted(set().union(*[formula_atoms(f) for f in s.antecedent + s.succedent])
                   ) if (s.antecedent or s.succedent) else []
    n_elems = 1 << m.size
    exhaustive = samples is None and len(names) * m.size <= 18
    rng = Random(seed)
    skipped = checked = 0

    def assignments():
        if exhaustive:
            total = n_elems ** len(names)
            for code in range(total):
                c, vals = code, []
                for _ in names:
                    vals.append(c % n_elems)
                    c //= n_elems
                yield dict(zip(names, vals))
        else:
            for _ in range(samples or 1000):
                yield {n: rng.getrandbits(m.size) for n in names}

    for amap in assignments():
        asg = ConditionalAssignment(m, amap)
        ok = None
        skip = False
        for g in s.antecedent:
            v = asg.value(g)
            if v is None:
                skip = True
                break
            if v != m.full:
                ok = True
                break
        if skip:
            skipped += 1
            continue
        if ok is None:
            saw_undef = False
            for d in s.succedent:
                v = asg.value(d)
                if v == m.full:
                    ok = True
                    break
                if v is None:
                    saw_undef = True
            if ok is None:
                if saw_undef:
                    skipped += 1
                    continue
                return EntailmentResult("fails", checked, skipped, dict(amap),
                                        None if exhaustive else seed)
        checked += 1
    verdict = "holds" if skipped == 0 else "undecided"
    return EntailmentResult(verdict, checked, skipped, None,
                            None if exhaustive else seed)


@dataclass
class SoundnessRow:
    label: str
    result: EntailmentResult


def check_soundness(m: ConditionalModel, sequents: Iterable[tuple[str, Sequent]],
                    samples: int | None = None, seed: int = 0) -> list[SoundnessRow]:
    """Entailment sweep over proof-checked sequents; any failure is a
    soundness violation for the caller to treat as fatal."""
    return [SoundnessRow(label, entails(m, s, samples=samples, seed=seed))
            for label, s in sequents]
