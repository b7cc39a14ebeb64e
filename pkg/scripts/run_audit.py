"""Audit the printed expansions, closed forms and validity thresholds of each family."""

from __future__ import annotations

import argparse

from fpdms.families import FAMILIES, FamilySpec, expansion_audit, closed_form_audit, validity_threshold


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", choices=("default", "certified"), default="certified")
    args = ap.parse_args(argv)

    for family in FAMILIES:
        spec = getattr(FamilySpec, args.preset)(family)
        app = expansion_audit(spec)
        cf = closed_form_audit(spec)
        print(f"== {family} {spec.describe()}")
        print(f"   validity threshold t0 ~ {validity_threshold(spec):.6f}")
        print(f"   closed forms: {cf.verdict}")
        for c in cf.components:
            if c.verdict != "match":
                print(f"     {c.name}: printed {c.printed:+.10f} solver {c.solver:+.10f} ({c.verdict})")
        bad = app.mismatches()
        print(f"   expansions: {len(app.distances) + len(app.coefficients) - len(bad)} ok, {len(bad)} mismatched")
        for c in bad:
            if hasattr(c, "pair"):
                print(f"     distance {c.pair}: printed {c.printed:.12g} solver {c.computed:.12g}")
            else:
                print(f"     {c.expression}: printed {c.printed_coefficient:+.8f} t^{c.printed_power}, "
                      f"fitted {c.fitted_coefficient:+.8f} (leading power {c.detected_power})")


if __name__ == "__main__":
    main()
