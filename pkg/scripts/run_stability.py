"""Continuity-region experiments: stability ratios, rotation sweeps, 4-point bound, type amplification."""

from __future__ import annotations

import argparse

from fpdms.embedding import PointConfig
from fpdms.families import FamilySpec, family_points
from fpdms.lemmas import (
    amplify_type,
    check_amplified,
    continuous_region_sweep,
    four_point_ratio,
    push_apex_dilate,
    sample_four_point_configs,
    stability_ratios,
)

BASE3 = PointConfig([[0, 0], [0.5, 0], [0.2, 0.4]])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    print("stability |rho' - rho| / h_ab along h = 2^-j")
    for row in stability_ratios(BASE3):
        print(f"  h {row.h:.3e}  ratio {row.ratio:.6f}  valid {row.valid}")

    for rot in ({0: 1}, {0: 1, 1: 1}, {0: 1, 1: 1, 2: 1}):
        sw = continuous_region_sweep(BASE3, rot, js=range(4, 17))
        print(f"rotation sweep {sw.cluster_type}: |rho_t - rho| =",
              " ".join(f"{abs(r - sw.limit_radius):.1e}" for _, _, r in sw.rows))

    configs = sample_four_point_configs(args.samples, seed=args.seed)
    print(f"4-point configs: {len(configs)}, max rho/diam {max(four_point_ratio(Y) for Y in configs):.4f}")

    Y2 = family_points(FamilySpec.certified("T21"), 2.0**-5)
    for label, Y1 in (("one point", Y2.points[:1]), ("cluster reps", Y2.points[[0, 3]])):
        res = push_apex_dilate(PointConfig(Y1), Y2)
        print(f"apex push, Y1 = {label}: crossing u {res.lower_threshold_actual:.8f}, "
              f"printed bound {res.lower_threshold_printed:.8f}")

    for seed, target in (("T4", "<5>"), ("T4", "<4,0>"), ("T21", "<2,1,0>"), ("T21", "<2,1,1>"), ("T30", "<3,0,0>")):
        amp = amplify_type(FamilySpec.certified(seed), target, [2.0**-j for j in range(5, 10)])
        got = {g for _, g, _ in check_amplified(amp)}
        valid = all(v for _, _, v in check_amplified(amp))
        print(f"amplify {seed} -> {target}: detected {sorted(got)}, all valid {valid}")


if __name__ == "__main__":
    main()
