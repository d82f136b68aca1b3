#!/usr/bin/env python3
"""Regenerate the shipped catalog of small Galois extensions.

Enumerates Eisenstein polynomials over coefficient windows, keeps the
candidates whose automorphism count equals the degree, dedupes by field
isomorphism (a defining polynomial of one field having a root in the
other), and freezes the result as JSON.  The expected counts per bucket
are the classical ones (they can be rederived by counting characters of
Q_p^x); the script aborts if a window misses a field, so enlarging the
window is always safe.

Usage: python tools/gen_catalog.py [-o src/padiclfc/data/catalog.json]
"""

import argparse
import itertools
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from padiclfc.errors import NotEisenstein, NotGalois  # noqa: E402
from padiclfc.galois import compute_automorphisms, eisenstein_roots  # noqa: E402
from padiclfc.lfc import working_field  # noqa: E402
from padiclfc.local_field import LocalField  # noqa: E402

PROBE_K = 2  # precision used while classifying candidates


def try_field(p, f, eis):
    try:
        L = working_field(LocalField(p, f, eis, 4 * len(eis) + 8), PROBE_K)
    except NotEisenstein:
        return None, None
    try:
        G = compute_automorphisms(L)
    except NotGalois:
        return None, None
    return L, G


def same_field(L1, entry2):
    """entry2's polynomial has a root in L1 (degrees already match)."""
    p, f, eis = entry2
    coeffs = [L1.from_unram((list(c) + [0] * L1.f)[:L1.f]) for c in eis]
    return len(eisenstein_roots(L1, coeffs)) > 0


def search(p, f, candidates, expected_total, bucket_name):
    found = []  # (eis, L, G)
    for eis in candidates:
        # dedupe against known fields first; root searches are cheaper
        # than full automorphism counts
        if any(
            len(eis) - 1 == Lf.e and same_field(Lf, (p, f, eis))
            for (_, Lf, _) in found
        ):
            continue
        L, G = try_field(p, f, eis)
        if L is None:
            continue
        found.append((eis, L, G))
    if len(found) != expected_total:
        raise SystemExit(
            f"{bucket_name}: found {len(found)} fields, expected "
            f"{expected_total}; enlarge the search window")
    out = []
    for eis, L, G in found:
        out.append({
            "p": p,
            "f": f,
            "e": L.e,
            "degree": L.degree * 1,
            "group": G.structure_name(),
            "eis": [list(c) for c in eis],
        })
    return out


def quadratic_candidates(p):
    if p == 2:
        for b in range(0, 16, 2):
            for c in (2, 6, 10, 14):
                yield [[c], [b], [1]]
    else:
        for b in (0, p, 2 * p):
            for c in range(p, p * p, p):
                if c % (p * p):
                    yield [[c], [b], [1]]


def cubic_candidates_p3():
    for a2 in (0, 3, 6):
        for a1 in (0, 3, 6):
            for a0 in (3, 6, 12, 15):
                yield [[a0], [a1], [a2], [1]]


def quartic_candidates_p2():
    # translating x by elements of 2 Z_2 shifts a3 by multiples of 8
    rng = range(0, 32, 2)
    for a3 in (0, 2, 4, 6):
        for a2 in rng:
            for a1 in rng:
                for a0 in range(2, 32, 4):
                    yield [[a0], [a1], [a2], [a3], [1]]


def relative_quadratic_candidates(p):
    """Eisenstein quadratics over the unramified quadratic layer."""
    if p == 2:
        units = range(0, 8, 2)
        consts = [
            [c0, c1]
            for c0 in range(0, 8, 2)
            for c1 in range(0, 8, 2)
            if (c0 % 4) or (c1 % 4)
        ]
    else:
        units = (0, p, 2 * p)
        consts = [
            [c0, c1]
            for c0 in range(0, 3 * p, p)
            for c1 in range(0, 3 * p, p)
            if (c0 % (p * p)) or (c1 % (p * p))
        ]
    for b0 in units:
        for b1 in units:
            for c in consts:
                yield [c, [b0, b1], [1, 0]]


def unramified_entry(p, n):
    return {
        "p": p,
        "f": n,
        "e": 1,
        "degree": n,
        "group": f"C{n}",
        "eis": [[-p] + [0] * (n - 1), [1] + [0] * (n - 1)],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("-o", "--out",
                    default=str(Path(__file__).resolve().parent.parent
                                / "src/padiclfc/data/catalog.json"))
    args = ap.parse_args()

    entries = []
    # degree 1: the base fields themselves
    for p in (2, 3):
        entries.append({"p": p, "f": 1, "e": 1, "degree": 1, "group": "C1",
                        "eis": [[-p], [1]]})
    # unramified extensions, degrees 2..4
    for p in (2, 3):
        for n in (2, 3, 4):
            if p == 3 and n == 3:
                continue  # ramified bucket below carries the C3 cubics too
            entries.append(unramified_entry(p, n))
    entries.append(unramified_entry(3, 3))

    # ramified quadratics: 6 over Q_2, 2 over Q_3
    entries += search(2, 1, quadratic_candidates(2), 6, "Q2 quadratics")
    entries += search(3, 1, quadratic_candidates(3), 2, "Q3 quadratics")
    # ramified C3 cubics over Q_3: 3
    entries += search(3, 1, cubic_candidates_p3(), 3, "Q3 cubics")
    # totally ramified quartics over Q_2: 8 C4 + 4 V4
    entries += search(2, 1, quartic_candidates_p2(), 12, "Q2 quartics e=4")
    # f=2, e=2 quartics: 3 C4 + 3 V4 over Q_2; 1 C4 + 1 V4 over Q_3
    entries += search(2, 2, relative_quadratic_candidates(2), 6,
                      "Q2 quartics f=2")
    entries += search(3, 2, relative_quadratic_candidates(3), 2,
                      "Q3 quartics f=2")
    # the S_3 sextic over Q_3: splitting field of x^3 - 3
    entries.append({"p": 3, "f": 1, "e": 6, "degree": 6, "group": "S3",
                    "eis": [[3], [0], [0], [0], [0], [0], [1]]})

    for i, entry in enumerate(entries):
        entry["label"] = (f"Q{entry['p']}.deg{entry['degree']}"
                          f".f{entry['f']}e{entry['e']}"
                          f".{entry['group']}.{i:02d}")
    with open(args.out, "w") as fh:
        json.dump({"entries": entries}, fh, indent=1, sort_keys=True)
    print(f"wrote {len(entries)} entries to {args.out}")
    by_group = {}
    for entry in entries:
        key = (entry["p"], entry["degree"], entry["group"])
        by_group[key] = by_group.get(key, 0) + 1
    for key in sorted(by_group):
        print(key, by_group[key])


if __name__ == "__main__":
    main()
