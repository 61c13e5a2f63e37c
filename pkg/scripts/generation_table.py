#!/usr/bin/env python3
"""Tabulate which factor-size triples let the two natural alternating-group
copies (on the left and right sub-products) generate the full alternating
group, and certify the all-binary exception as affine."""

import time

from shiftlab.perms import affine_certificate, triple_product_alt_check


def main():
    cases = [(a, b, c) for a in (1, 2, 3) for b in (1, 2, 3) for c in (1, 2, 3)]
    cases += [(4, 2, 2), (2, 2, 4)]
    print(f"{'sizes':>10} {'generates':>10} {'predicted':>10} {'agree':>6} {'time':>8}")
    for sizes in cases:
        t0 = time.monotonic()
        got, want, match = triple_product_alt_check(sizes)
        print(f"{str(sizes):>10} {str(got):>10} {str(want):>10} {str(match):>6} {time.monotonic()-t0:7.2f}s")
    print("all-binary case affine over the 3-bit space:", affine_certificate())


if __name__ == "__main__":
    main()
