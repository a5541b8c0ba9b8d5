"""Check the shipped theorem library and poke at the deduction systems.

Every derivation is rebuilt from axiom instances, CUT, STRUCT, classical
leaves and the admissible LK-style macros, then validated node by node.  The
bracketed side conditions (which symmetry axiom a proof needs) are recovered
from the actual axiom usage, never declared by hand.
"""

from dblogic import (
    DerivationError, System, check_derivation, library_language,
    theorem_library,
)
from dblogic.proof import apply_derived_rule, classical_leaf_check

lang = library_language()

print("== the library ==")
for e in theorem_library(lang):
    res = check_derivation(e.derivation, lang)
    flags = ",".join(sorted(res.flags)) or "-"
    print(f"{e.tid:12s} [{flags:18s}] {lang.format_sequent(e.statement, 'sugared')}")

print()
print("== system filtering ==")
from dblogic.proof import AxiomNode, Derivation
b5 = AxiomNode.make("b5", phi=lang.parse("x"), psi=lang.parse("y"))
check_derivation(Derivation(b5, System.DBL), lang)
print("b5 checks in the full system")
try:
    check_derivation(Derivation(b5, System.DBL_STAR), lang)
except DerivationError as e:
    print("b5 under the weak system is rejected:", e)

print()
print("== what stays classical and what does not ==")
print("single-succedent tautologies are leaves:",
      classical_leaf_check(lang.parse_sequent("x -> y |- z -> (x -> y)")))
try:
    classical_leaf_check(lang.parse_sequent("|- x, !x"))
except DerivationError as e:
    print("multi-succedent leaves are refused:", e)
try:
    apply_derived_rule("orL", [lang.parse_sequent("x |- y")])
except DerivationError as e:
    print("the disjunction-left rule is not derivable:", e)
