#!/usr/bin/env python3
"""Factor the controlled flip over the monotone binary shift into commuting
simply-supported pieces and print the certified profile data."""

from shiftlab.subshifts import ClopenSet, monotone_binary, word_pattern
from shiftlab.witness import witness_decompose


def main():
    spec = monotone_binary()
    trigger = ClopenSet.cylinder(spec, word_pattern("01"))
    wd = witness_decompose(spec, "01", trigger, ("1", "0"), n=5)
    print(f"recoded trigger letter: {wd.letter!r}")
    print(f"certified steps: {wd.steps}, window radius: {wd.window_radius}")
    for e in wd.entries:
        print(
            f"profile: shape={sorted(c[0] for c in e.shape)} marks={sorted(c[0] for c in e.marks)}"
            f" pattern-class size={e.class_size}"
        )
    for key in (
        "pairwise_disjoint",
        "factors_commute",
        "product_equals_controlled_map",
        "anchored_safety",
        "periodic_points_agree",
        "min_class_size",
    ):
        print(f"{key}: {wd.report[key]}")


if __name__ == "__main__":
    main()
