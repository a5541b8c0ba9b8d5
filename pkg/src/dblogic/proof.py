"""Derivation representation and checking for the three deduction systems.

A derivation is a tree (shared subtrees allowed) whose nodes are axiom-schema
instances, CUT applications, STRUCT applications, classical leaves and
derived-rule macros.  Checking computes every node's conclusion and validates
it bottom-up; the axiom schemas admissible at a node depend on the system tag
of the enclosing derivation:

* ``classical`` -- c1..c3 and modus ponens only,
* ``dbl``       -- adds b1..b4 and the symmetric-independence axiom b5,
* ``dbl*``      -- adds b1..b4 and the weakenings b5.weak.A / b5.weak.B.

The collapse axiom ``star`` (merging iterated conditionals into a conjunctive
condition) is never admissible in the three systems; it can be enabled on a
single derivation for the purpose of exhibiting the triviality it causes.

CUT position convention: the cut formula must be the last succedent element of
the left premise and may be any antecedent element of the right premise; a
STRUCT node reorders as needed.  Formula identity is structural equality of
core trees throughout.

Derivation file format (line oriented, ``#`` comments):

    theta: x, y, z
    system: dbl*
    n1: ax[b1; phi = x; psi = y]
    n2: taut[|- x -> x]
    n3: cut[x -> x] n2 n1
    n4: struct[|- !x, (y | x), T] n3
    n5: I[x]
    n6: andR n3 n5
    qed: n6

The ``qed`` line names the root node.  ``system: dbl+star`` enables the
quarantined collapse axiom.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .syntax import (
    Atom, Cond, Formula, Implies, Language, Meta, Not, Sequent,
    conj, indep, iff, substitute,
)

__all__ = [
    "System", "Derivation", "DerivationError", "CheckResult",
    "AxiomNode", "TautNode", "CutNode", "StructNode", "RuleNode",
    "AXIOM_SCHEMAS", "DERIVED_RULES", "REJECTED_RULES",
    "instantiate_axiom", "apply_cut", "apply_struct",
    "classical_leaf_check", "is_tautology", "apply_derived_rule",
    "check_derivation", "parse_derivation_file", "format_derivation",
]


class System(str, Enum):
    CLASSICAL = "classical"
    DBL = "dbl"
    DBL_STAR = "dbl*"


class DerivationError(ValueError):
    """Checking failure; carries the path of the first invalid node."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


# ---------------------------------------------------------------------------
# Axiom schemas
# ---------------------------------------------------------------------------

_PHI, _PSI, _ETA = Meta("phi"), Meta("psi"), Meta("eta")
_ALL = frozenset({System.CLASSICAL, System.DBL, System.DBL_STAR})
_BAYES = frozenset({System.DBL, System.DBL_STAR})


@dataclass(frozen=True)
class AxiomSchema:
    sid: str
    antecedent: tuple[Formula, ...]
    succedent: tuple[Formula, ...]
    systems: frozenset[System]
    family: str | None = None  # reporting family for b5-style side conditions


AXIOM_SCHEMAS: dict[str, AxiomSchema] = {
    s.sid: s for s in [
        AxiomSchema("mp", (_PHI, Implies(_PHI, _PSI)), (_PSI,), _ALL),
        AxiomSchema("c1", (), (Implies(_PHI, Implies(_PSI, _PHI)),), _ALL),
        AxiomSchema("c2", (), (Implies(
            Implies(_ETA, Implies(_PHI, _PSI)),
            Implies(Implies(_ETA, _PHI), Implies(_ETA, _PSI))),), _ALL),
        AxiomSchema("c3", (), (Implies(
            Implies(Not(_PHI), Not(_PSI)),
            Implies(Implies(Not(_PHI), _PSI), _PHI)),), _ALL),
        AxiomSchema("b1", (Implies(_PHI, _PSI),), (Not(_PHI), Cond(_PSI, _PHI)), _BAYES),
        AxiomSchema("b2", (), (Implies(
            Cond(Implies(_PSI, _ETA), _PHI),
            Implies(Cond(_PSI, _PHI), Cond(_ETA, _PHI))),), _BAYES),
        AxiomSchema("b3", (), (Implies(Cond(_PSI, _PHI), Implies(_PHI, _PSI)),), _BAYES),
        AxiomSchema("b4", (), (iff(Not(Cond(Not(_PSI), _PHI)), Cond(_PSI, _PHI)),), _BAYES),
        AxiomSchema("b5", (indep(_PSI, _PHI),), (indep(_PHI, _PSI),),
                    frozenset({System.DBL}), "b5"),
        AxiomSchema("b5.weak.A.1", (indep(_PSI, Not(_PHI)),), (indep(_PSI, _PHI),),
                    frozenset({System.DBL_STAR}), "b5.weak.A"),
        AxiomSchema("b5.weak.A.2", (indep(_PSI, _PHI),), (indep(_PSI, Not(_PHI)),),
                    frozenset({System.DBL_STAR}), "b5.weak.A"),
        AxiomSchema("b5.weak.B", (iff(_PSI, _ETA),),
                    (iff(Cond(_PHI, _PSI), Cond(_PHI, _ETA)),),
                    frozenset({System.DBL_STAR}), "b5.weak.B"),
        # quarantined collapse axiom ((eta|psi)|phi) == (eta|phi/\psi)
        AxiomSchema("star", (), (iff(Cond(Cond(_ETA, _PSI), _PHI),
                                     Cond(_ETA, conj(_PHI, _PSI))),),
                    frozenset(), "star"),
    ]
}


def instantiate_axiom(schema_id: str, binding: Mapping[str, Formula],
                      system: System, allow_star: bool = False) -> Sequent:
    """Instantiate an axiom schema, enforcing system admissibility."""
    try:
        schema = AXIOM_SCHEMAS[schema_id]
    except KeyError:
        raise DerivationError("axiom", f"unknown schema {schema_id!r}") from None
    admissible = system in schema.systems or (schema_id == "star" and allow_star)
    if not admissible:
        raise DerivationError("axiom", f"schema {schema_id!r} not admissible in system {system.value!r}")
    ant = tuple(substitute(f, binding) for f in schema.antecedent)
    suc = tuple(substitute(f, binding) for f in schema.succedent)
    return Sequent(ant, suc)


# ---------------------------------------------------------------------------
# Base rules
# ---------------------------------------------------------------------------

def apply_cut(left: Sequent, right: Sequent, cut: Formula) -> Sequent:
    """Merge two sequents along `cut` (last succedent of `left`, any
    antecedent element of `right`)."""
    if not left.succedent or left.succedent[-1] != cut:
        raise DerivationError("cut", "cut formula is not the last succedent element of the left premise")
    if cut not in right.antecedent:
        raise DerivationError("cut", "cut formula is not an antecedent element of the right premise")
    idx = right.antecedent.index(cut)
    lam = right.antecedent[:idx] + right.antecedent[idx + 1:]
    return Sequent(left.antecedent + lam, left.succedent[:-1] + right.succedent)


def apply_struct(premise: Sequent, target: Sequent, lang: Language) -> Sequent:
    """Weakening + contraction + permutation, with {T} removable on the left
    and {F} on the right (comparing core trees)."""
    if not premise.antecedent_set() <= (target.antecedent_set() | {lang.top}):
        raise DerivationError("struct", "antecedent inclusion violated")
    if not premise.succedent_set() <= (target.succedent_set() | {lang.bot}):
        raise DerivationError("struct", "succedent inclusion violated")
    return target


# ---------------------------------------------------------------------------
# Classical leaf: truth-table check under conditional abstraction
# ---------------------------------------------------------------------------

_MAX_TABLE_VARS = 18


def _abstract(f: Formula, table: dict[Formula, int], names: list[Formula]) -> Formula:
    """Replace every maximal conditional subformula by a fresh placeholder
    atom; structurally identical conditionals share one placeholder."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Meta):
        raise DerivationError("taut", "metavariable in a concrete leaf")
    if isinstance(f, Cond):
        if f not in table:
            table[f] = len(names)
            names.append(f)
        return Atom(f"\x00c{table[f]}")
    if isinstance(f, Not):
        return Not(_abstract(f.body, table, names))
    if isinstance(f, Implies):
        return Implies(_abstract(f.left, table, names), _abstract(f.right, table, names))
    raise TypeError(f)


def _table_eval(f: Formula, cols: dict[str, int], full: int) -> int:
    if isinstance(f, Atom):
        return cols[f.name]
    if isinstance(f, Not):
        return full ^ _table_eval(f.body, cols, full)
    if isinstance(f, Implies):
        return (full ^ _table_eval(f.left, cols, full)) | _table_eval(f.right, cols, full)
    raise TypeError(f)


def is_tautology(f: Formula) -> bool:
    """Truth-table tautology after abstracting maximal conditionals."""
    table: dict[Formula, int] = {}
    names: list[Formula] = []
    g = _abstract(f, table, names)
    vars_ = sorted({a.name for a in _iter_atoms(g)})
    if len(vars_) > _MAX_TABLE_VARS:
        raise DerivationError("taut", f"too many variables for a truth table ({len(vars_)})")
    rows = 1 << len(vars_)
    full = (1 << rows) - 1
    cols: dict[str, int] = {}
    for i, v in enumerate(vars_):
        pattern = 0
        for r in range(rows):
            if (r >> i) & 1:
                pattern |= 1 << r
        cols[v] = pattern
    return _table_eval(g, cols, full) == full


def _iter_atoms(f: Formula):
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            yield g
        elif isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, Implies):
            stack.extend((g.left, g.right))


def _conj_all(fs: Sequence[Formula]) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = conj(out, f)
    return out


def classical_leaf_check(target: Sequent) -> bool:
    """Accept single-succedent sequents whose material reading is a classical
    tautology under conditional abstraction.

    Multi-succedent targets are an error, never silently accepted: sequents
    like ``|- a, !a`` are not derivable, so admitting them here would make the
    checker unsound.
    """
    if len(target.succedent) > 1:
        raise DerivationError("taut", "classical leaf requires at most one succedent formula")
    if target.antecedent and target.succedent:
        f = Implies(_conj_all(target.antecedent), target.succedent[0])
    elif target.succedent:
        f = target.succedent[0]
    elif target.antecedent:
        f = Not(_conj_all(target.antecedent))
    else:
        return False
    return is_tautology(f)


# ---------------------------------------------------------------------------
# Derived-rule macros (the LK rules that stay admissible)
# ---------------------------------------------------------------------------

REJECTED_RULES = ("orL", "impR", "negR")


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise DerivationError("rule", msg)


def apply_derived_rule(name: str, premises: Sequence[Sequent],
                       args: Sequence[Formula] = ()) -> Sequent:
    """Conclusion of a derived-rule macro.

    Conventions: the principal formula of a premise is its first succedent
    element (``orR``, ``andR``, ``impL``, ``negL``) or its last antecedent
    element (``andL``, ``impL`` right premise).  ``I`` takes the formula as
    its argument; ``andL``/``orR`` take the added conjunct/disjunct.
    """
    if name in REJECTED_RULES:
        raise DerivationError("rule", f"rule {name!r} is not derivable here (rejected by construction)")
    if name == "I":
        _need(len(premises) == 0 and len(args) == 1, "I expects no premises and one formula argument")
        (phi,) = args
        return Sequent((phi,), (phi,))
    if name == "andL":
        _need(len(premises) == 1 and len(args) == 1, "andL expects one premise and one formula argument")
        (p,) = premises
        (psi,) = args
        _need(bool(p.antecedent), "andL premise needs a principal antecedent formula")
        phi = p.antecedent[-1]
        return Sequent(p.antecedent[:-1] + (conj(phi, psi),), p.succedent)
    if name == "orR":
        _need(len(premises) == 1 and len(args) == 1, "orR expects one premise and one formula argument")
        (p,) = premises
        (psi,) = args
        _need(bool(p.succedent), "orR premise needs a principal succedent formula")
        phi = p.succedent[0]
        from .syntax import disj
        return Sequent(p.antecedent, (disj(phi, psi),) + p.succedent[1:])
    if name == "andR":
        _need(len(premises) == 2 and len(args) == 0, "andR expects two premises")
        p1, p2 = premises
        _need(bool(p1.succedent) and bool(p2.succedent), "andR premises need principal succedent formulas")
        phi, psi = p1.succedent[0], p2.succedent[0]
        return Sequent(p1.antecedent + p2.antecedent,
                       (conj(phi, psi),) + p1.succedent[1:] + p2.succedent[1:])
    if name == "impL":
        _need(len(premises) == 2 and len(args) == 0, "impL expects two premises")
        p1, p2 = premises
        _need(bool(p1.succedent), "impL left premise needs a principal succedent formula")
        _need(bool(p2.antecedent), "impL right premise needs a principal antecedent formula")
        phi, psi = p1.succedent[0], p2.antecedent[-1]
        return Sequent(p1.antecedent + p2.antecedent[:-1] + (Implies(phi, psi),),
                       p1.succedent[1:] + p2.succedent)
    if name == "negL":
        _need(len(premises) == 1 and len(args) == 0, "negL expects one premise")
        (p,) = premises
        _need(bool(p.succedent), "negL premise needs a principal succedent formula")
        phi = p.succedent[0]
        return Sequent(p.antecedent + (Not(phi),), p.succedent[1:])
    raise DerivationError("rule", f"unknown derived rule {name!r}")


DERIVED_RULES = ("I", "andL", "orR", "andR", "impL", "negL")


# ---------------------------------------------------------------------------
# Derivation nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Node:
    pass


@dataclass(frozen=True)
class AxiomNode(Node):
    schema_id: str
    binding: tuple[tuple[str, Formula], ...]  # sorted items

    @staticmethod
    def make(schema_id: str, **binding: Formula) -> "AxiomNode":
        return AxiomNode(schema_id, tuple(sorted(binding.items())))


@dataclass(frozen=True)
class TautNode(Node):
    target: Sequent


@dataclass(frozen=True)
class CutNode(Node):
    left: Node
    right: Node
    cut: Formula


@dataclass(frozen=True)
class StructNode(Node):
    premise: Node
    target: Sequent


@dataclass(frozen=True)
class RuleNode(Node):
    name: str
    args: tuple[Formula, ...]
    premises: tuple[Node, ...]


@dataclass(frozen=True)
class Derivation:
    root: Node
    system: System
    allow_star: bool = False


@dataclass
class CheckResult:
    conclusion: Sequent
    axioms_used: frozenset[str]
    flags: frozenset[str]
    nodes: int


def _expand_rule(node: RuleNode, premise_concls: Sequence[Sequent]) -> Node:
    """Expansion of a derived-rule macro into CUT/STRUCT/leaf nodes, so that
    accepting the macro never exceeds the base system."""
    name, args, ps = node.name, node.args, node.premises

    def to_succ_last(p_node: Node, concl: Sequent, f: Formula) -> tuple[Node, Sequent]:
        rest = tuple(x for x in concl.succedent if x != f)
        tgt = Sequent(concl.antecedent, rest + (f,))
        return StructNode(p_node, tgt), tgt

    if name == "I":
        (phi,) = args
        return TautNode(Sequent((phi,), (phi,)))
    if name == "andL":
        (p,) = ps
        (pc,) = premise_concls
        phi, psi = pc.antecedent[-1], args[0]
        leaf = TautNode(Sequent((conj(phi, psi),), (phi,)))
        cut = CutNode(leaf, p, phi)
        return StructNode(cut, apply_derived_rule(name, premise_concls, args))
    if name == "orR":
        (p,) = ps
        (pc,) = premise_concls
        phi, psi = pc.succedent[0], args[0]
        from .syntax import disj
        moved, mc = to_succ_last(p, pc, phi)
        leaf = TautNode(Sequent((phi,), (disj(phi, psi),)))
        cut = CutNode(moved, leaf, phi)
        return StructNode(cut, apply_derived_rule(name, premise_concls, args))
    if name == "andR":
        p1, p2 = ps
        c1, c2 = premise_concls
        phi, psi = c1.succedent[0], c2.succedent[0]
        leaf = TautNode(Sequent((phi, psi), (conj(phi, psi),)))
        m1, _ = to_succ_last(p1, c1, phi)
        k1 = CutNode(m1, leaf, phi)
        m2, _ = to_succ_last(p2, c2, psi)
        k2 = CutNode(m2, k1, psi)
        return StructNode(k2, apply_derived_rule(name, premise_concls, args))
    if name == "impL":
        p1, p2 = ps
        c1, c2 = premise_concls
        phi, psi = c1.succedent[0], c2.antecedent[-1]
        mp = AxiomNode.make("mp", phi=phi, psi=psi)
        m1, _ = to_succ_last(p1, c1, phi)
        k1 = CutNode(m1, mp, phi)      # G, phi->psi |- D, psi
        k2 = CutNode(k1, p2, psi)
        return StructNode(k2, apply_derived_rule(name, premise_concls, args))
    if name == "negL":
        (p,) = ps
        (pc,) = premise_concls
        phi = pc.succedent[0]
        leaf = TautNode(Sequent((phi, Not(phi)), ()))
        m, _ = to_succ_last(p, pc, phi)
        cut = CutNode(m, leaf, phi)
        return StructNode(cut, apply_derived_rule(name, premise_concls, args))
    raise DerivationError("rule", f"unknown derived rule {name!r}")


def check_derivation(d: Derivation, lang: Language) -> CheckResult:
    """Validate every node and return the root conclusion plus the set of
    axiom schemas used (with their b5-family flags)."""
    memo: dict[int, Sequent] = {}
    used: set[str] = set()
    count = 0

    def walk(node: Node, path: str) -> Sequent:
        nonlocal count
        key = id(node)
        if key in memo:
            return memo[key]
        count += 1
        try:
            if isinstance(node, AxiomNode):
                concl = instantiate_axiom(node.schema_id, dict(node.binding),
                                          d.system, d.allow_star)
                used.add(node.schema_id)
            elif isinstance(node, TautNode):
                if not classical_leaf_check(node.target):
                    raise DerivationError("taut", "not a classical tautology under abstraction")
                concl = node.target
            elif isinstance(node, CutNode):
                lc = walk(node.left, path + ".left")
                rc = walk(node.right, path + ".right")
                concl = apply_cut(lc, rc, node.cut)
            elif isinstance(node, StructNode):
                pc = walk(node.premise, path + ".premise")
                concl = apply_struct(pc, node.target, lang)
            elif isinstance(node, RuleNode):
                if node.name in REJECTED_RULES:
                    raise DerivationError("rule", f"rule {node.name!r} is rejected by construction")
                pcs = [walk(p, f"{path}.premise{i}") for i, p in enumerate(node.premises)]
                expansion = _expand_rule(node, pcs)
                concl = walk(expansion, path + ".expansion")
                macro = apply_derived_rule(node.name, pcs, node.args)
                if concl != macro:
                    raise DerivationError("rule", "macro conclusion differs from its expansion")
            else:
                raise DerivationError("node", f"unknown node type {type(node).__name__}")
        except DerivationError as e:
            # prefix the location once; inner nodes already carry theirs
            if not e.path.startswith("root"):
                raise DerivationError(path, e.message) from None
            raise
        memo[key] = concl
        return concl

    conclusion = walk(d.root, "root")
    flags = frozenset(
        AXIOM_SCHEMAS[sid].family for sid in used
        if AXIOM_SCHEMAS[sid].family is not None
    )
    return CheckResult(conclusion, frozenset(used), flags, count)


# ---------------------------------------------------------------------------
# Derivation file format
# ---------------------------------------------------------------------------

_SYSTEM_NAMES = {
    "classical": (System.CLASSICAL, False),
    "dbl": (System.DBL, False),
    "dbl*": (System.DBL_STAR, False),
    "dblstar": (System.DBL_STAR, False),
    "dbl+star": (System.DBL, True),
}


def parse_system(text: str) -> tuple[System, bool]:
    try:
        return _SYSTEM_NAMES[text.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown system {text!r}") from None


def _split_head(line: str) -> tuple[str, str, str]:
    """Split ``id: op[bracket] rest`` -> (id, op, remainder-after-op)."""
    name, sep, body = line.partition(":")
    if not sep:
        raise ValueError(f"missing ':' in line {line!r}")
    return name.strip(), body.strip(), ""


def parse_derivation_file(text: str) -> tuple[Language, dict[str, Derivation]]:
    """Parse a derivation file; returns its language and the named roots.

    Every ``qed`` line publishes the most recent node as a named derivation;
    a file may contain several, e.g. one per theorem.
    """
    lang: Language | None = None
    system = System.DBL_STAR
    allow_star = False
    nodes: dict[str, Node] = {}
    results: dict[str, Derivation] = {}
    qed_count = 0
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, body, _ = _split_head(line)
        if name == "theta":
            lang = Language([t.strip() for t in body.split(",")])
            continue
        if name == "system":
            system, allow_star = parse_system(body)
            continue
        if lang is None:
            raise ValueError("theta must be declared before any node")
        if name == "qed":
            label = body.strip()
            node_name, _, label_rest = label.partition(" ")
            node = nodes[node_name]
            qed_count += 1
            results[label_rest.strip() or f"derivation{qed_count}"] = \
                Derivation(node, system, allow_star)
            continue
        nodes[name] = _parse_node(body, nodes, lang)
    if lang is None:
        raise ValueError("derivation file declares no theta")
    return lang, results


def _parse_node(body: str, nodes: Mapping[str, Node], lang: Language) -> Node:
    op, bracket, rest = _split_op(body)
    refs = [nodes[r] for r in rest.split()] if rest else []
    if op == "ax":
        parts = [p.strip() for p in bracket.split(";")]
        sid = parts[0]
        binding: dict[str, Formula] = {}
        for p in parts[1:]:
            k, _, v = p.partition("=")
            binding[k.strip()] = lang.parse(v)
        return AxiomNode(sid, tuple(sorted(binding.items())))
    if op == "taut":
        return TautNode(lang.parse_sequent(bracket))
    if op == "cut":
        if len(refs) != 2:
            raise ValueError("cut expects two premise references")
        return CutNode(refs[0], refs[1], lang.parse(bracket))
    if op == "struct":
        if len(refs) != 1:
            raise ValueError("struct expects one premise reference")
        return StructNode(refs[0], lang.parse_sequent(bracket))
    if op in DERIVED_RULES or op in REJECTED_RULES:
        args = tuple(lang.parse(a) for a in bracket.split(";")) if bracket else ()
        return RuleNode(op, args, tuple(refs))
    raise ValueError(f"unknown node operator {op!r}")


def _split_op(body: str) -> tuple[str, str, str]:
    """``op[bracket] rest`` -> (op, bracket, rest); bracket optional."""
    if "[" in body:
        op, _, tail = body.partition("[")
        depth = 1
        for i, ch in enumerate(tail):
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
                if depth == 0:
                    return op.strip(), tail[:i], tail[i + 1:].strip()
        raise ValueError(f"unbalanced '[' in {body!r}")
    op, _, rest = body.partition(" ")
    return op.strip(), "", rest.strip()


def format_derivation(d: Derivation, lang: Language, label: str = "main") -> str:
    """Serialize a derivation (DAG-aware) in the line-oriented file format."""
    order: list[Node] = []
    seen: set[int] = set()

    def visit(node: Node) -> None:
        if id(node) in seen:
            return
        seen.add(id(node))
        if isinstance(node, CutNode):
            visit(node.left)
            visit(node.right)
        elif isinstance(node, StructNode):
            visit(node.premise)
        elif isinstance(node, RuleNode):
            for p in node.premises:
                visit(p)
        order.append(node)

    visit(d.root)
    ids = {id(node): f"n{i + 1}" for i, node in enumerate(order)}
    sysname = "dbl+star" if d.allow_star else d.system.value
    lines = [f"theta: {', '.join(lang.theta)}", f"system: {sysname}"]
    for node in order:
        nid = ids[id(node)]
        if isinstance(node, AxiomNode):
            binding = "; ".join(f"{k} = {lang.format(v)}" for k, v in node.binding)
            inner = f"{node.schema_id}; {binding}" if binding else node.schema_id
            lines.append(f"{nid}: ax[{inner}]")
        elif isinstance(node, TautNode):
            lines.append(f"{nid}: taut[{lang.format_sequent(node.target)}]")
        elif isinstance(node, CutNode):
            lines.append(f"{nid}: cut[{lang.format(node.cut)}] "
                         f"{ids[id(node.left)]} {ids[id(node.right)]}")
        elif isinstance(node, StructNode):
            lines.append(f"{nid}: struct[{lang.format_sequent(node.target)}] "
                         f"{ids[id(node.premise)]}")
        elif isinstance(node, RuleNode):
            argtext = f"[{'; '.join(lang.format(a) for a in node.args)}]" if node.args else ""
            prems = " ".join(ids[id(p)] for p in node.premises)
            lines.append(f"{nid}: {node.name}{argtext} {prems}".rstrip())
    lines.append(f"qed: {ids[id(d.root)]} {label}")
    return "\n".join(lines) + "\n"
