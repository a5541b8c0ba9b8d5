"""Staged free-model construction.

Stage 0 is the powerset algebra over bit-vector valuations of the declared
atoms.  Each advance picks a nontrivial condition element b, splits the stage
into partition blocks, replaces every point by ordered pairs and extends the
conditional operator f so that conditioning on the (image of the) chosen
element becomes total: f(C, mu(b)) = (id u T)(C & mu(b)), where T swaps pair
components.  Previously defined rows of f are carried along the embedding.

Elements are int bitmasks over the stage's atom list (atom i <-> bit i).
f is never tabulated: it is recomputed on demand from the pair structure and
the selection history, by un-embedding both arguments to the stage where the
condition chain was last processed, applying the (id u T) formula there and
re-embedding the result.

Two selection modes exist.  Faithful mode scores candidate conditions by
lambda(B) = r(B) + min rank of an element A with f(A, B) undefined, picks the
minimum (ties broken by smallest bitmask under the stage's atom ordering) and
keeps orientation coherent with earlier selections of the same chain.
Targeted mode processes a caller-supplied condition, which is sound because
every stage property holds for an arbitrary admissible choice; only the
totality-in-the-limit argument needs the faithful ranking.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Mapping, Sequence

from .syntax import Atom, Cond, Formula, Implies, Not

__all__ = [
    "AtomPoint", "BasePoint", "PairPoint", "Chain", "Transition", "Stage",
    "ConstructionError", "BudgetExceeded", "new_stage0", "select_condition",
    "classify_case", "partition_data", "embed_element", "advance", "apply_f",
    "verify_stage", "canonical_assignment", "build_for_formulas",
    "build_faithful", "dump_stage", "load_stage", "StageReport",
]

MAX_THETA = 3
_ENUM_LIMIT = 12  # enumerate whole powersets only up to 2**_ENUM_LIMIT elements


class ConstructionError(RuntimeError):
    """Internal consistency failure during an advance; aborts the build."""


class BudgetExceeded(RuntimeError):
    def __init__(self, condition_text: str, size: int, needed: int):
        super().__init__(
            f"stage budget exceeded: resolving condition {condition_text} "
            f"needs {needed} points (current universe has {size})")
        self.condition_text = condition_text
        self.size = size
        self.needed = needed


class BasePoint:
    """Stage-0 point: one truth-value bit per declared atom."""

    __slots__ = ("bits",)

    def __init__(self, bits: int):
        self.bits = bits

    def __eq__(self, other):
        return isinstance(other, BasePoint) and self.bits == other.bits

    def __hash__(self):
        return hash(("w", self.bits))

    def __repr__(self):
        return f"w{self.bits}"


class PairPoint:
    """Point of a later stage: an ordered pair of previous-stage points."""

    __slots__ = ("first", "second")

    def __init__(self, first: "AtomPoint", second: "AtomPoint"):
        self.first = first
        self.second = second

    def __eq__(self, other):
        return (isinstance(other, PairPoint)
                and self.first == other.first and self.second == other.second)

    def __hash__(self):
        return hash((self.first, self.second))

    def __repr__(self):
        return f"({self.first!r}.{self.second!r})"


AtomPoint = BasePoint | PairPoint


@dataclass(frozen=True)
class Chain:
    """One condition lineage: where it was first/last selected and its
    current-stage image (in the orientation of the original selection)."""

    first_selected: int
    last_selected: int
    processed_at: int
    mask: int


@dataclass(frozen=True)
class Transition:
    """Partition data of the advance that created a stage, expressed at the
    parent stage."""

    case: int                      # 0 = re-processing, 1 = first time
    nu: int | None                 # previous selection stage for case 0
    b_mask: int                    # chosen condition, parent-stage mask
    pi: tuple[int, ...]            # partition blocks covering b
    gamma: tuple[int, ...]         # partition blocks covering ~b


class Stage:
    """One finite partial conditional model plus its embedding history."""

    def __init__(self, theta: Sequence[str], index: int,
                 atoms: Sequence[AtomPoint], parent: "Stage | None",
                 blocks: Sequence[int] | None, transition: Transition | None,
                 chains: Sequence[Chain]):
        self.theta = tuple(theta)
        self.index = index
        self.atoms = tuple(atoms)
        self.parent = parent
        self.blocks = tuple(blocks) if blocks is not None else None
        self.transition = transition
        self.chains = tuple(chains)
        self.size = len(self.atoms)
        self.full = (1 << self.size) - 1
        self.atom_index = {a: i for i, a in enumerate(self.atoms)}
        if index > 0:
            self._swap = tuple(self.atom_index[PairPoint(a.second, a.first)]
                               for a in self.atoms)
        else:
            self._swap = None

    # -- boolean algebra ----------------------------------------------------

    def complement(self, mask: int) -> int:
        return self.full ^ mask

    def swap_pairs(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            out |= 1 << self._swap[i]
        return out

    # -- embeddings -----------------------------------------------------------

    def stage_at(self, level: int) -> "Stage":
        s: Stage = self
        while s.index > level:
            assert s.parent is not None
            s = s.parent
        if s.index != level:
            raise ValueError(f"no stage {level} below stage {self.index}")
        return s

    def embed(self, parent_mask: int) -> int:
        """Image of a parent-stage element in this stage."""
        out = 0
        for i in _bits(parent_mask):
            out |= self.blocks[i]
        return out

    def unembed(self, mask: int) -> int | None:
        """Pre-image under the last embedding, or None if `mask` is not an
        exact union of blocks."""
        out = 0
        rest = mask
        for i, block in enumerate(self.blocks):
            if block & mask and (block & mask) == block:
                out |= 1 << i
                rest &= ~block
        return out if rest == 0 else None

    def embed_from(self, level: int, mask: int) -> int:
        stages = []
        s: Stage = self
        while s.index > level:
            stages.append(s)
            s = s.parent
        for st in reversed(stages):
            mask = st.embed(mask)
        return mask

    def unembed_to(self, level: int, mask: int) -> int | None:
        s: Stage = self
        while s.index > level:
            mask = s.unembed(mask)
            if mask is None:
                return None
            s = s.parent
        return mask

    def rank(self, mask: int) -> int:
        """Stage at which the element first occurred."""
        s: Stage = self
        while s.index > 0:
            prev = s.unembed(mask)
            if prev is None:
                return s.index
            mask = prev
            s = s.parent
        return 0

    # -- conditional operator --------------------------------------------------

    def chain_for(self, mask: int) -> tuple[Chain, bool] | None:
        """Chain whose current image (or its complement) equals `mask`; the
        boolean says whether `mask` is the complement side."""
        for c in self.chains:
            if mask == c.mask:
                return c, False
            if mask == self.complement(c.mask):
                return c, True
        return None

    def apply_f(self, b_mask: int, a_mask: int) -> int | None:
        """f(B, A): defined for trivial conditions, and for condition chains
        when B embeds back to the stage where the chain was last processed."""
        if a_mask == 0 or a_mask == self.full:
            return b_mask
        found = self.chain_for(a_mask)
        if found is None:
            return None
        chain, _ = found
        level = chain.processed_at
        b_low = self.unembed_to(level, b_mask)
        if b_low is None:
            return None
        a_low = self.unembed_to(level, a_mask)
        stage_low = self.stage_at(level)
        inter = b_low & a_low
        res_low = inter | stage_low.swap_pairs(inter)
        return self.embed_from(level, res_low)

    def defined_conditions(self) -> list[int]:
        """Nontrivial condition elements for which f has any defined row."""
        out = []
        for c in self.chains:
            out.append(c.mask)
            out.append(self.complement(c.mask))
        return out

    def embeddable_elements(self, level: int, cap: int = _ENUM_LIMIT) -> list[int] | None:
        """All current-stage images of level-`level` elements, or None when
        that powerset is too large to enumerate."""
        low = self.stage_at(level)
        if low.size > cap:
            return None
        return [self.embed_from(level, m) for m in range(1 << low.size)]

    def random_embeddable(self, level: int, rng: Random) -> int:
        low = self.stage_at(level)
        return self.embed_from(level, rng.getrandbits(low.size))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _atoms_of(mask: int) -> list[int]:
    return list(_bits(mask))


# ---------------------------------------------------------------------------
# Construction steps
# ---------------------------------------------------------------------------

def new_stage0(theta: Sequence[str], max_theta: int = MAX_THETA) -> Stage:
    """Initial stage: all bit-vectors over the atoms; f defined only on the
    trivial conditions; all ranks 0."""
    names = tuple(theta)
    if not names:
        raise ValueError("atom set must be nonempty")
    if len(names) > max_theta:
        raise ValueError(f"too many atoms for the stage budget ({len(names)} > {max_theta})")
    atoms = [BasePoint(bits) for bits in range(1 << len(names))]
    return Stage(names, 0, atoms, None, None, None, ())


def apply_f(stage: Stage, b_mask: int, a_mask: int) -> int | None:
    """Module-level alias for :meth:`Stage.apply_f`."""
    return stage.apply_f(b_mask, a_mask)


def classify_case(stage: Stage, b_mask: int) -> tuple[int, int | None]:
    """Case 0 when {b, ~b} matches an earlier chain (nu = latest selection
    stage of that chain); case 1 otherwise."""
    if b_mask in (0, stage.full):
        raise ValueError("condition must be nontrivial")
    found = stage.chain_for(b_mask)
    if found is None:
        return 1, None
    chain, _ = found
    return 0, chain.last_selected


def partition_data(stage: Stage, b_mask: int) -> Transition:
    """Partition blocks for an advance on `b_mask`, verified against the
    covering/disjointness identities before use."""
    case, nu = classify_case(stage, b_mask)
    comp = stage.complement(b_mask)
    if case == 1:
        pi, gamma = [b_mask], [comp]
    else:
        found = stage.chain_for(b_mask)
        chain, flipped = found
        if flipped:
            # the coherence rule keeps the original orientation
            raise ConstructionError("case-0 condition must use the chain orientation")
        level = chain.processed_at
        b_low = stage.unembed_to(level, b_mask)
        stage_low = stage.stage_at(level)
        comp_low = stage_low.complement(b_low)
        pi, gamma = [], []
        for wi in _atoms_of(b_low):
            for wj in _atoms_of(comp_low):
                w_n = stage.embed_from(level, 1 << wi)
                w2_n = stage.embed_from(level, 1 << wj)
                f1 = stage.apply_f(w2_n, comp)
                f2 = stage.apply_f(w_n, b_mask)
                if f1 is None or f2 is None:
                    raise ConstructionError("case-0 partition needs f on the previous images")
                pi.append(f1 & w_n)
                gamma.append(f2 & w2_n)
    _check_partition(stage, b_mask, pi, gamma)
    return Transition(case, nu, b_mask, tuple(pi), tuple(gamma))


def _check_partition(stage: Stage, b_mask: int, pi: Sequence[int], gamma: Sequence[int]) -> None:
    union_pi = 0
    union_gamma = 0
    for i, p in enumerate(pi):
        if union_pi & p:
            raise ConstructionError("partition blocks over b overlap")
        union_pi |= p
    for g in gamma:
        if union_gamma & g:
            raise ConstructionError("partition blocks over ~b overlap")
        union_gamma |= g
    if union_pi != b_mask:
        raise ConstructionError("partition blocks do not cover b")
    if union_gamma != stage.complement(b_mask):
        raise ConstructionError("partition blocks do not cover ~b")


def embed_element(stage: Stage, tdata: Transition, mask: int) -> int:
    """mu(A) = union over blocks of (A&Pi_i) x Gamma_i  u  (A&Gamma_i) x Pi_i,
    expressed at the parent stage and returning the next-stage mask.  Exposed
    for testing; `advance` computes the same map via the per-point blocks."""
    next_atoms, point_block = _next_atoms(stage, tdata)
    out = 0
    for i in _bits(mask):
        out |= point_block[i]
    return out


def _next_atoms(stage: Stage, tdata: Transition) -> tuple[list[AtomPoint], list[int]]:
    """Ordered next-stage points (the mu(b) half first), plus the per-point
    image blocks."""
    pairs_pos: list[PairPoint] = []
    pairs_neg: list[PairPoint] = []
    for p_mask, g_mask in zip(tdata.pi, tdata.gamma):
        p_atoms = _atoms_of(p_mask)
        g_atoms = _atoms_of(g_mask)
        for x in p_atoms:
            for y in g_atoms:
                pairs_pos.append(PairPoint(stage.atoms[x], stage.atoms[y]))
        for x in g_atoms:
            for y in p_atoms:
                pairs_neg.append(PairPoint(stage.atoms[x], stage.atoms[y]))
    atoms = pairs_pos + pairs_neg
    index = {a: i for i, a in enumerate(atoms)}
    blocks = [0] * stage.size
    for p_mask, g_mask in zip(tdata.pi, tdata.gamma):
        for x in _atoms_of(p_mask):
            blk = 0
            for y in _atoms_of(g_mask):
                blk |= 1 << index[PairPoint(stage.atoms[x], stage.atoms[y])]
            blocks[x] = blk
        for x in _atoms_of(g_mask):
            blk = 0
            for y in _atoms_of(p_mask):
                blk |= 1 << index[PairPoint(stage.atoms[x], stage.atoms[y])]
            blocks[x] = blk
    return atoms, blocks


def advance(stage: Stage, b_mask: int, verify: bool = True,
            rng: Random | None = None) -> Stage:
    """One construction step on the (already coherence-normalized) condition."""
    tdata = partition_data(stage, b_mask)
    atoms, blocks = _next_atoms(stage, tdata)
    expected = 2 * sum(bin(p).count("1") * bin(g).count("1")
                       for p, g in zip(tdata.pi, tdata.gamma))
    if len(atoms) != expected:
        raise ConstructionError("cardinality formula violated")
    n_pos = expected // 2
    mu_b = (1 << n_pos) - 1

    new_chains: list[Chain] = []
    replaced = False
    for c in stage.chains:
        img = 0
        for i in _bits(c.mask):
            img |= blocks[i]
        if tdata.case == 0 and c.mask == b_mask:
            new_chains.append(Chain(c.first_selected, stage.index, stage.index + 1, mu_b))
            replaced = True
        else:
            new_chains.append(Chain(c.first_selected, c.last_selected, c.processed_at, img))
    if not replaced:
        new_chains.append(Chain(stage.index, stage.index, stage.index + 1, mu_b))

    nxt = Stage(stage.theta, stage.index + 1, atoms, stage, blocks, tdata, new_chains)
    if nxt.embed(b_mask) != mu_b:
        raise ConstructionError("mu(b) is not the positive pair half")
    if verify:
        report = verify_stage(nxt, rng=rng)
        if report.violations:
            raise ConstructionError("stage verification failed: "
                                    + "; ".join(report.violations[:5]))
    return nxt


# ---------------------------------------------------------------------------
# Condition selection
# ---------------------------------------------------------------------------

_INF = float("inf")


def _partner_min_rank(stage: Stage, mask: int) -> float:
    found = stage.chain_for(mask)
    if found is None:
        return 0
    chain, _ = found
    if chain.processed_at == stage.index:
        return _INF
    return chain.processed_at + 1


def _coherent(stage: Stage, mask: int) -> int:
    found = stage.chain_for(mask)
    if found is None:
        return mask
    chain, _ = found
    return chain.mask


def select_condition(stage: Stage, target: int | None = None) -> int | None:
    """Faithful mode (target None): argmin of the age ranking with the
    smallest-bitmask tie-break, normalized to the coherent orientation;
    None signals that f is total.  Targeted mode: normalize the given
    element."""
    if target is not None:
        if target in (0, stage.full):
            raise ValueError("targeted condition must be nontrivial")
        return _coherent(stage, target)

    # totality: every element trivial or a currently-processed chain
    if all(c.processed_at == stage.index for c in stage.chains):
        if 2 + 2 * len(stage.chains) == 1 << stage.size and stage.size <= _ENUM_LIMIT:
            return None
    best: tuple[float, int] | None = None
    for level in range(stage.index + 1):
        low = stage.stage_at(level)
        if low.size > _ENUM_LIMIT:
            break
        if best is not None and level >= best[0]:
            break
        for m in range(1, (1 << low.size) - 1):
            if level > 0 and low.unembed(m) is not None:
                continue  # counted at its own rank
            mask = stage.embed_from(level, m)
            partner = _partner_min_rank(stage, mask)
            if partner is _INF:
                continue
            lam = level + partner
            key = (lam, mask)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    return _coherent(stage, best[1])


# ---------------------------------------------------------------------------
# Stage verification
# ---------------------------------------------------------------------------

@dataclass
class StageReport:
    stage: int
    checks: dict[str, tuple[int, int]]   # name -> (passed, skipped)
    violations: list[str]
    seed: int | None = None

    def ok(self) -> bool:
        return not self.violations


def _sample_element(stage: Stage, rng: Random) -> int:
    return rng.getrandbits(stage.size)


def verify_stage(stage: Stage, rng: Random | None = None,
                 exhaustive_limit: int = 8, samples: int = 10_000) -> StageReport:
    """Check the embedding/commutation properties and the conditional-operator
    laws on the defined domain: exhaustively for small stages, with seeded
    sampling beyond.  All identities are exact; any violation is fatal to the
    caller."""
    seed = None
    if rng is None:
        seed = 0
        rng = Random(seed)
    rep = StageReport(stage.index, {}, [], seed)

    def record(name: str, passed: int, skipped: int = 0) -> None:
        p, s = rep.checks.get(name, (0, 0))
        rep.checks[name] = (p + passed, s + skipped)

    def violate(name: str, detail: str) -> None:
        rep.violations.append(f"{name}: {detail}")

    if stage.index == 0:
        record("trivial-conditions", 1 << min(stage.size, exhaustive_limit))
        return rep

    parent = stage.parent
    tdata = stage.transition

    # cardinality and partition identities (exact, always)
    expected = 2 * sum(bin(p).count("1") * bin(g).count("1")
                       for p, g in zip(tdata.pi, tdata.gamma))
    if stage.size != expected:
        violate("cardinality", f"|atoms|={stage.size} expected {expected}")
    record("cardinality", 1)
    try:
        _check_partition(parent, tdata.b_mask, tdata.pi, tdata.gamma)
        record("partition-identities", 1)
    except ConstructionError as e:
        violate("partition-identities", str(e))

    mu_b = stage.embed(tdata.b_mask)
    if mu_b != (1 << (stage.size // 2)) - 1:
        violate("mu-b", "mu(b) is not the positive half")
    if stage.complement(mu_b) != stage.swap_pairs(mu_b):
        violate("mu-b-swap", "~mu(b) differs from T(mu(b))")
    record("mu-b-corollaries", 2)

    # alpha1: blocks nonempty, disjoint, covering -- this makes mu an
    # injective Boolean morphism exactly; spot identities are sampled on top
    union = 0
    ok = True
    for i, blk in enumerate(stage.blocks):
        if blk == 0:
            violate("alpha1", f"empty block for parent atom {i}")
            ok = False
        if blk & union:
            violate("alpha1", f"block {i} overlaps earlier blocks")
            ok = False
        union |= blk
    if union != stage.full:
        violate("alpha1", "blocks do not cover the new universe")
        ok = False
    record("alpha1-block-partition", len(stage.blocks) if ok else 0)

    if parent.size <= exhaustive_limit:
        pairs = [(a, b) for a in range(1 << parent.size) for b in range(1 << parent.size)]
    else:
        pairs = [(_sample_element(parent, rng), _sample_element(parent, rng))
                 for _ in range(samples)]
    good = 0
    for a, b in pairs:
        if (stage.embed(a & b) != stage.embed(a) & stage.embed(b)
                or stage.embed(a | b) != stage.embed(a) | stage.embed(b)
                or stage.embed(parent.complement(a)) != stage.complement(stage.embed(a))):
            violate("alpha1", f"morphism identity fails at A={a:#x} B={b:#x}")
            break
        good += 1
    record("alpha1-morphism", good)

    # alpha2: f commutes with the embedding on the inherited domain (exact)
    good = skipped = 0
    for cond in parent.defined_conditions() + [0, parent.full]:
        chain_info = parent.chain_for(cond)
        level = chain_info[0].processed_at if chain_info else parent.index
        elems = parent.embeddable_elements(level)
        if elems is None:
            elems = [parent.random_embeddable(level, rng) for _ in range(samples // 10)]
        for b in elems:
            fv = parent.apply_f(b, cond)
            if fv is None:
                skipped += 1
                continue
            lhs = stage.apply_f(stage.embed(b), stage.embed(cond))
            if lhs != stage.embed(fv):
                violate("alpha2", f"f does not commute with mu at B={b:#x} A={cond:#x}")
                break
            good += 1
    record("alpha2", good, skipped)

    # beta laws on the defined domain of the new stage
    conditions = stage.defined_conditions()

    def defined_pool(cond: int) -> list[int]:
        chain, _ = stage.chain_for(cond)
        elems = stage.embeddable_elements(chain.processed_at)
        if elems is not None and len(elems) <= (1 << exhaustive_limit):
            return elems
        return [stage.random_embeddable(chain.processed_at, rng) for _ in range(samples)]

    for cond in conditions:
        pool = defined_pool(cond)
        counts = {k: 0 for k in ("beta1", "beta2", "beta3", "beta4", "beta5w",
                                 "beta6", "idempotence")}
        skips = 0
        for b in pool:
            fb = stage.apply_f(b, cond)
            if fb is None:
                skips += 1
                continue
            if cond != 0 and (cond & b) == cond and fb != stage.full:
                violate("beta1", f"A subset B but f(B,A) != full at A={cond:#x} B={b:#x}")
                break
            counts["beta1"] += 1
            if cond & fb != cond & b:
                violate("beta3", f"A & f(B,A) != A & B at A={cond:#x} B={b:#x}")
                break
            counts["beta3"] += 1
            fnb = stage.apply_f(stage.complement(b), cond)
            if fnb is not None:
                if fnb != stage.complement(fb):
                    violate("beta4", f"f(~B,A) != ~f(B,A) at A={cond:#x} B={b:#x}")
                    break
                counts["beta4"] += 1
            if fb == b:
                fcomp = stage.apply_f(b, stage.complement(cond))
                if fcomp is not None and fcomp != b:
                    violate("beta5w", f"f(B,A)=B but f(B,~A) != B at A={cond:#x} B={b:#x}")
                    break
                counts["beta5w"] += 1
            bad = False
            for c2 in (cond, stage.complement(cond)):
                ff = stage.apply_f(fb, c2)
                if ff is not None and ff != fb:
                    violate("idempotence", f"f(f(B,A),A') != f(B,A) at A={cond:#x} B={b:#x}")
                    bad = True
                    break
                counts["idempotence"] += 1
            if bad:
                break
        else:
            # beta2/beta6 need pairs: exhaust small pools, sample otherwise
            if len(pool) ** 2 <= samples * 8:
                pair_iter = ((b, c) for b in pool for c in pool)
            else:
                pair_iter = ((rng.choice(pool), rng.choice(pool)) for _ in range(samples))
            for b, c in pair_iter:
                fb, fc = stage.apply_f(b, cond), stage.apply_f(c, cond)
                fu = stage.apply_f(b | c, cond)
                fi = stage.apply_f(b & c, cond)
                if None in (fb, fc, fu, fi):
                    skips += 1
                    continue
                if fu != fb | fc:
                    violate("beta2", f"f(B|C,A) != f(B,A)|f(C,A) at A={cond:#x}")
                    break
                counts["beta2"] += 1
                if fi != fb & fc:
                    violate("beta6", f"f(B&C,A) != f(B,A)&f(C,A) at A={cond:#x}")
                    break
                counts["beta6"] += 1
        for k, v in counts.items():
            record(k, v)
        record("beta-skip", 0, skips)

    # trivial conditions
    probe = [rng.getrandbits(stage.size) for _ in range(64)]
    for b in probe:
        if stage.apply_f(b, 0) != b or stage.apply_f(b, stage.full) != b:
            violate("trivial-conditions", f"f(B, empty/full) != B at B={b:#x}")
            break
    record("trivial-conditions", len(probe))

    # rank consistency: images keep their rank, genuinely new points get n
    good = 0
    for i, blk in enumerate(stage.blocks):
        if bin(blk).count("1") == 1:
            if stage.rank(blk) != parent.rank(1 << i):
                violate("ranks", f"embedded singleton changed rank at atom {i}")
                break
        good += 1
    sample_elems = parent.embeddable_elements(parent.index) or [
        _sample_element(parent, rng) for _ in range(256)]
    for m in sample_elems[: 1 << exhaustive_limit]:
        if stage.rank(stage.embed(m)) != parent.rank(m):
            violate("ranks", f"embedding changed rank of {m:#x}")
            break
        good += 1
    record("ranks", good)

    return rep


# ---------------------------------------------------------------------------
# Canonical assignment and drivers
# ---------------------------------------------------------------------------

def canonical_assignment(stage: Stage) -> dict[str, int]:
    """theta |-> current-stage image of the stage-0 element 'theta holds'."""
    out = {}
    for i, name in enumerate(stage.theta):
        xi = 0
        for bits in range(1 << len(stage.theta)):
            if (bits >> i) & 1:
                xi |= 1 << bits
        out[name] = stage.embed_from(0, xi)
    return out


class _Eval:
    """Bottom-up evaluator under the canonical assignment that reports the
    first (innermost) condition element whose f-row is missing."""

    def __init__(self, stage: Stage, atom_map: Mapping[str, int]):
        self.stage = stage
        self.atom_map = atom_map
        self.blocking: int | None = None
        self.memo: dict[Formula, int | None] = {}

    def value(self, f: Formula) -> int | None:
        if f in self.memo:
            return self.memo[f]
        out: int | None
        if isinstance(f, Atom):
            out = self.atom_map[f.name]
        elif isinstance(f, Not):
            v = self.value(f.body)
            out = None if v is None else self.stage.complement(v)
        elif isinstance(f, Implies):
            l, r = self.value(f.left), self.value(f.right)
            out = None if l is None or r is None else (self.stage.complement(l) | r)
        elif isinstance(f, Cond):
            t, g = self.value(f.then), self.value(f.given)
            if t is None or g is None:
                out = None
            else:
                out = self.stage.apply_f(t, g)
                if out is None and self.blocking is None:
                    self.blocking = g
        else:
            raise TypeError(f)
        self.memo[f] = out
        return out


def build_for_formulas(theta: Sequence[str], formulas: Sequence[Formula],
                       max_atoms: int = 32, verify: bool = True,
                       rng: Random | None = None,
                       skip_unaffordable: bool = False,
                       ) -> tuple[Stage, list[StageReport]]:
    """Targeted driver: advance on the innermost blocking condition of each
    formula until everything evaluates or the budget is hit.  With
    `skip_unaffordable` the formulas whose conditions would blow the budget
    are left undefined instead of aborting the build."""
    stage = new_stage0(theta)
    reports: list[StageReport] = []
    pending = list(formulas)
    while True:
        ev = _Eval(stage, canonical_assignment(stage))
        blocking = None
        blocked_formula = None
        for f in pending:
            if ev.value(f) is None:
                blocking = ev.blocking
                blocked_formula = f
                break
        if blocking is None:
            return stage, reports
        b = select_condition(stage, target=blocking)
        tdata = partition_data(stage, b)
        needed = 2 * sum(bin(p).count("1") * bin(g).count("1")
                         for p, g in zip(tdata.pi, tdata.gamma))
        if needed > max_atoms:
            if skip_unaffordable:
                pending.remove(blocked_formula)
                continue
            raise BudgetExceeded(f"element {b:#x} at stage {stage.index}",
                                 stage.size, needed)
        nxt = advance(stage, b, verify=verify, rng=rng)
        if verify:
            reports.append(verify_stage(nxt, rng=rng))
        stage = nxt


def build_faithful(theta: Sequence[str], max_atoms: int = 32, verify: bool = True,
                   rng: Random | None = None) -> tuple[list[Stage], bool]:
    """Faithful driver: ranked selection until the operator is total or the
    next stage would exceed the budget.  Returns all stages plus a halt flag
    (True when f became total)."""
    stage = new_stage0(theta)
    stages = [stage]
    while True:
        b = select_condition(stage)
        if b is None:
            return stages, True
        tdata = partition_data(stage, b)
        needed = 2 * sum(bin(p).count("1") * bin(g).count("1")
                         for p, g in zip(tdata.pi, tdata.gamma))
        if needed > max_atoms:
            return stages, False
        stage = advance(stage, b, verify=verify, rng=rng)
        stages.append(stage)


# ---------------------------------------------------------------------------
# Dump / load
# ---------------------------------------------------------------------------

def _point_text(p: AtomPoint, parent: Stage | None) -> str:
    if isinstance(p, BasePoint):
        return str(p.bits)
    return f"{parent.atom_index[p.first]}.{parent.atom_index[p.second]}"


def dump_stage(stage: Stage) -> str:
    """Structured-text dump of the whole stage tower: atoms with pair
    provenance, per-level blocks, selection history and chains.  The loader
    reconstructs f exactly."""
    levels: list[Stage] = []
    s: Stage | None = stage
    while s is not None:
        levels.append(s)
        s = s.parent
    levels.reverse()
    lines = [f"theta: {', '.join(stage.theta)}", f"stages: {len(levels)}"]
    for st in levels:
        lines.append(f"stage {st.index}: atoms {st.size}")
        lines.append("  points: " + " ".join(_point_text(p, st.parent) for p in st.atoms))
        if st.index > 0:
            t = st.transition
            lines.append(f"  case: {t.case} nu: {'-' if t.nu is None else t.nu}")
            lines.append(f"  b: {t.b_mask:#x}")
            lines.append("  pi: " + " ".join(f"{m:#x}" for m in t.pi))
            lines.append("  gamma: " + " ".join(f"{m:#x}" for m in t.gamma))
            lines.append("  blocks: " + " ".join(f"{m:#x}" for m in st.blocks))
        lines.append("  ranks: " + " ".join(str(st.rank(1 << i)) for i in range(st.size)))
    lines.append("chains:")
    for c in stage.chains:
        lines.append(f"  chain: first {c.first_selected} last {c.last_selected} "
                     f"processed {c.processed_at} mask {c.mask:#x}")
    return "\n".join(lines) + "\n"


def load_stage(text: str) -> Stage:
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()]
    pos = 0

    def take(prefix: str) -> str:
        nonlocal pos
        ln = lines[pos].strip()
        if not ln.startswith(prefix):
            raise ValueError(f"expected {prefix!r}, got {ln!r}")
        pos += 1
        return ln[len(prefix):].strip()

    theta = tuple(t.strip() for t in take("theta:").split(","))
    n_stages = int(take("stages:"))
    stage: Stage | None = None
    for _ in range(n_stages):
        head = take("stage")
        idx = int(head.split(":")[0])
        points_text = take("points:").split()
        if idx == 0:
            atoms: list[AtomPoint] = [BasePoint(int(t)) for t in points_text]
            stage = Stage(theta, 0, atoms, None, None, None, ())
        else:
            case_line = take("case:").split()
            case = int(case_line[0])
            nu = None if case_line[2] == "-" else int(case_line[2])
            b_mask = int(take("b:"), 16)
            pi = tuple(int(t, 16) for t in take("pi:").split())
            gamma = tuple(int(t, 16) for t in take("gamma:").split())
            blocks = tuple(int(t, 16) for t in take("blocks:").split())
            atoms = []
            for t in points_text:
                i, j = t.split(".")
                atoms.append(PairPoint(stage.atoms[int(i)], stage.atoms[int(j)]))
            stage = Stage(theta, idx, atoms, stage, blocks,
                          Transition(case, nu, b_mask, pi, gamma), ())
        take("ranks:")
    take("chains:")
    chains = []
    while pos < len(lines):
        parts = take("chain:").split()
        chains.append(Chain(int(parts[1]), int(parts[3]), int(parts[5]),
                            int(parts[7], 16)))
    final = Stage(stage.theta, stage.index, stage.atoms, stage.parent,
                  stage.blocks, stage.transition, chains)
    return final
