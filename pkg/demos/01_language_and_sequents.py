"""Tour of the language layer: core trees, sugar, sequents.

The conditional (psi | phi) is a first-class constructor, not an abbreviation;
everything else desugars into negation and implication at parse time.
"""

from dblogic import Language

lang = Language(["a", "b"])

print("== parsing ==")
for text in ["a -> b", "(b | a)", "a >< b", "T", "a /\\ b \\/ !a"]:
    f = lang.parse(text)
    print(f"{text:16s} core    -> {lang.format(f, 'core')}")
    print(f"{'':16s} sugared -> {lang.format(f, 'sugared')}")

print()
print("== the constants are fixed trees over the first atom ==")
print("T  ==", lang.format(lang.parse("T")))
print("F  ==", lang.format(lang.parse("F")))

print()
print("== independence is definitional sugar ==")
f = lang.parse("a >< b")
print("a >< b desugars to", lang.format(f, "core"))
assert f == lang.parse("((a | b) -> a) /\\ (a -> (a | b))")

print()
print("== sequents ==")
s = lang.parse_sequent("a -> b |- !a, (b | a)")
print("parsed:", lang.format_sequent(s, "sugared"))
print("empty sides are fine:", lang.format_sequent(lang.parse_sequent("|- a")))

print()
print("== round trips ==")
for text in ["!a -> b", "((b | a)) >< a", "!(a /\\ b)"]:
    f = lang.parse(text)
    assert lang.parse(lang.format(f, "core")) == f
    assert lang.parse(lang.format(f, "sugared")) == f
    print(f"{text!r} survives both printers")
