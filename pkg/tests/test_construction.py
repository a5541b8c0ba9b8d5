import pytest

from dblogic.construction import (
    BasePoint, BudgetExceeded, ConstructionError, PairPoint, advance,
    build_faithful, build_for_formulas, canonical_assignment, classify_case,
    dump_stage, embed_element, load_stage, new_stage0, partition_data,
    select_condition, verify_stage,
)
from dblogic.syntax import Language

L1 = Language(["a"])
L2 = Language(["a", "b"])


def stage1_single_atom():
    s0 = new_stage0(["a"])
    return advance(s0, select_condition(s0))


# frozen by hand from the pair construction: points u=(0), v=(1); b0={u};
# stage 1 = {(u,v),(v,u)} with (u,v) first; f follows (id u T)(B & A)
HAND_F1 = {
    0: [0, 1, 2, 3],
    1: [0, 3, 0, 3],
    2: [0, 0, 3, 3],
    3: [0, 1, 2, 3],
}


def test_stage0_shapes():
    s0 = new_stage0(["a"])
    assert [a.bits for a in s0.atoms] == [0, 1]
    assert 1 << s0.size == 4
    s0b = new_stage0(["a", "b"])
    assert s0b.size == 4 and 1 << s0b.size == 16
    with pytest.raises(ValueError):
        new_stage0([])


def test_faithful_b0_tiebreak_single_atom():
    s0 = new_stage0(["a"])
    assert select_condition(s0) == 1  # the {u} side


def test_stage1_f_table_matches_hand_enumeration():
    s1 = stage1_single_atom()
    assert s1.atoms == (PairPoint(BasePoint(0), BasePoint(1)),
                        PairPoint(BasePoint(1), BasePoint(0)))
    for a in range(4):
        assert [s1.apply_f(b, a) for b in range(4)] == HAND_F1[a]


def test_single_atom_halts_after_one_stage():
    s1 = stage1_single_atom()
    assert select_condition(s1) is None
    stages, halted = build_faithful(["a"])
    assert halted and [s.size for s in stages] == [2, 2]


def test_case_classification():
    s0 = new_stage0(["a"])
    assert classify_case(s0, 1) == (1, None)
    s1 = advance(s0, 1)
    mu_b = s1.embed(1)
    assert classify_case(s1, mu_b) == (0, 0)
    assert classify_case(s1, s1.complement(mu_b)) == (0, 0)


def test_partition_case1_single_atom():
    s0 = new_stage0(["a"])
    t = partition_data(s0, 1)
    assert t.case == 1 and t.pi == (1,) and t.gamma == (2,)


def test_partition_cardinality_two_atoms():
    s0 = new_stage0(["a", "b"])
    xi_a = 0b1010  # points with the a-bit set (bits index the point code)
    t = partition_data(s0, xi_a)
    total = 2 * sum(bin(p).count("1") * bin(g).count("1")
                    for p, g in zip(t.pi, t.gamma))
    assert total == 8
    s1 = advance(s0, xi_a)
    assert s1.size == 8


def test_mu_is_boolean_morphism_single_atom():
    s0 = new_stage0(["a"])
    t = partition_data(s0, 1)
    assert embed_element(s0, t, 1) == 0b01   # mu({u}) = {(u,v)}
    assert embed_element(s0, t, 2) == 0b10   # mu({v}) = {(v,u)}
    assert embed_element(s0, t, 0) == 0
    assert embed_element(s0, t, 3) == 0b11
    s1 = advance(s0, 1)
    for a in range(4):
        for b in range(4):
            assert s1.embed(a & b) == s1.embed(a) & s1.embed(b)
            assert s1.embed(a | b) == s1.embed(a) | s1.embed(b)


def test_mu_b_corollaries():
    s0 = new_stage0(["a", "b"])
    s1 = advance(s0, 0b1010)
    mu_b = s1.embed(0b1010)
    assert mu_b == (1 << (s1.size // 2)) - 1
    assert s1.complement(mu_b) == s1.swap_pairs(mu_b)


def test_trivial_conditions():
    s1 = stage1_single_atom()
    for b in range(4):
        assert s1.apply_f(b, 0) == b
        assert s1.apply_f(b, s1.full) == b


def test_idempotence_instances():
    s1 = stage1_single_atom()
    for a in (1, 2):
        for b in range(4):
            fb = s1.apply_f(b, a)
            assert s1.apply_f(fb, a) == fb
            assert s1.apply_f(fb, s1.complement(a)) == fb


def test_verify_stage_clean_and_fault_injection():
    s0 = new_stage0(["a", "b"])
    s1 = advance(s0, 0b1010)
    assert verify_stage(s1).ok()
    # swap one pair inside one partition block: covering identity must fail
    from dblogic.construction import Transition, _check_partition
    bad_pi = (0b1010 ^ 0b0010 | 0b0001,)   # replace one point by a wrong one
    with pytest.raises(ConstructionError):
        _check_partition(s0, 0b1010, bad_pi, (0b0101,))


def test_ranks():
    s0 = new_stage0(["a"])
    s1 = advance(s0, 1)
    assert s1.rank(s1.embed(1)) == 0
    assert s1.rank(s1.embed(2)) == 0
    s0b = new_stage0(["a", "b"])
    s1b = advance(s0b, 0b1010)
    # a genuinely new element (half of one block) first occurs at stage 1
    blk = s1b.blocks[1]
    low = blk & -blk
    assert s1b.rank(low) == 1
    assert s1b.rank(s1b.embed(0b0110)) == 0


def test_canonical_assignment():
    s0 = new_stage0(["a"])
    assert canonical_assignment(s0) == {"a": 2}
    s1 = advance(s0, 1)
    assert canonical_assignment(s1) == {"a": 2}  # image of {v} is {(v,u)}


def test_targeted_build_one_advance():
    stage, _ = build_for_formulas(["a", "b"], [L2.parse("(b | a)")])
    assert stage.index == 1 and stage.size == 8
    h = canonical_assignment(stage)
    assert stage.apply_f(h["b"], h["a"]) is not None


def test_targeted_build_zero_advances_for_top():
    stage, _ = build_for_formulas(["a", "b"], [L2.parse("T")])
    assert stage.index == 0


def test_budget_exceeded_reports_blocker():
    deep = L2.parse("(a | ((b | a) | (a | b)))")
    with pytest.raises(BudgetExceeded):
        build_for_formulas(["a", "b"], [deep], max_atoms=8)


def test_coherence_rule_reuses_chain_orientation():
    s0 = new_stage0(["a", "b"])
    s1 = advance(s0, 0b1010)
    mu_b = s1.embed(0b1010)
    # asking for the complement is normalized back to the chain's side
    assert select_condition(s1, target=s1.complement(mu_b)) == mu_b


def test_faithful_two_atoms_within_budget():
    stages, halted = build_faithful(["a", "b"], max_atoms=32, verify=False)
    sizes = [s.size for s in stages]
    assert sizes[0] == 4 and all(x <= 32 for x in sizes)
    assert len(sizes) >= 3
    for s in stages[1:]:
        assert verify_stage(s).ok()


def test_dump_load_round_trip():
    stage, _ = build_for_formulas(["a", "b"], [L2.parse("(b | a)"), L2.parse("(a | b)")])
    text = dump_stage(stage)
    back = load_stage(text)
    assert back.size == stage.size
    assert back.theta == stage.theta
    h = canonical_assignment(stage)
    probes = [0, h["a"], h["b"], stage.full, 0b1011, stage.embed(3)]
    conds = [0, stage.full] + stage.defined_conditions()
    for a in conds:
        for b in probes:
            assert back.apply_f(b, a) == stage.apply_f(b, a)


def test_generating_partition_bound_single_atom():
    # conjunctions sigma /\ (sigma'|beta) /\ (sigma''|!beta) over the stage-1
    # model: the number of distinct nonempty values is bounded by the number
    # of points
    s1 = stage1_single_atom()
    h = canonical_assignment(s1)
    beta = s1.complement(h["a"])  # the chosen condition chain is {u} = "not a"
    values = set()
    sigmas = [h["a"], s1.complement(h["a"])]
    for s in sigmas:
        for s2 in sigmas:
            for s3 in sigmas:
                v1 = s1.apply_f(s2, beta)
                v2 = s1.apply_f(s3, s1.complement(beta))
                assert v1 is not None and v2 is not None
                values.add(s & v1 & v2)
    values.discard(0)
    assert len(values) <= s1.size
