#!/usr/bin/env python3
"""Run the colony-merging process on the 6x5 three-symbol demo and print the
stable culture as an 18x8 ASCII window plus the verification report."""

from shiftlab.cultures import run_process, verify_stable
from shiftlab.render import ascii_render
from shiftlab.verify import demo_config


def main():
    spec, config = demo_config()
    result = run_process(spec, config)
    print(f"status: {result.status} after {result.steps} firing steps")
    print(ascii_render(result.culture, config, width=18, height=8, spec=spec))
    report = verify_stable(result.culture, config)
    print("verification:", "ok" if report.ok else report.failures)
    print("brain lattice:", [list(r) for r in report.brain_lattice.basis])
    print("colony size:", report.colony_size)
    print("matches true stabilizer:", report.matches_true_stabilizer)


if __name__ == "__main__":
    main()
