"""Regenerate the synthetic stand-ins for the two real-data case studies.

The shipped CSVs under data/ mimic the class structure, feature ranges,
and correlations of the vertebral-column (310 patients, 6 features) and
red-wine-quality (1598 samples, 11 features) datasets without containing
any actual records. Generation is fully seeded; running this script
rewrites both files bit-identically.
"""

import csv
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from dppoison.rng import STAGE_FIXTURE, substream  # noqa: E402

HERE = os.path.dirname(os.path.abspath(__file__))
DATA_DIR = os.path.join(HERE, "..", "data")
SEED = 20260822


def make_vertebral(rng):
    """310 orthopaedic profiles: 210 Abnormal, 100 Normal.

    Pelvic incidence is the anatomical sum of pelvic tilt and sacral
    slope; lumbar lordosis tracks sacral slope; the spondylolisthesis
    grade is near zero for Normal and heavy-tailed for Abnormal.
    """
    rows = []
    for label, count, ss_mu, ss_sd, pt_mu, pt_sd, pr_mu, pr_sd in (
        ("Abnormal", 210, 45.0, 14.0, 19.0, 10.0, 115.0, 13.0),
        ("Normal", 100, 38.0, 9.0, 12.0, 6.0, 123.0, 9.0),
    ):
        ss = rng.normal(ss_mu, ss_sd, count)
        pt = rng.normal(pt_mu, pt_sd, count)
        pi = ss + pt + rng.normal(0.0, 1.5, count)
        ll = 0.7 * ss + 22.0 + rng.normal(0.0, 11.0, count)
        pr = rng.normal(pr_mu, pr_sd, count)
        if label == "Abnormal":
            sp = rng.gamma(shape=1.2, scale=30.0, size=count)
        else:
            sp = rng.normal(2.0, 6.0, count)
        for i in range(count):
            rows.append(
                [
                    round(pi[i], 2),
                    round(pt[i], 2),
                    round(ll[i], 2),
                    round(ss[i], 2),
                    round(pr[i], 2),
                    round(sp[i], 2),
                    label,
                ]
            )
    header = [
        "pelvic_incidence",
        "pelvic_tilt",
        "lumbar_lordosis_angle",
        "sacral_slope",
        "pelvic_radius",
        "degree_spondylolisthesis",
        "class",
    ]
    return header, rows


def make_wine(rng):
    """1598 red-wine records with integer quality scores in 3..8.

    Quality correlates positively with alcohol and negatively with
    volatile acidity, as in the real data.
    """
    n = 1598
    z_alc = rng.standard_normal(n)
    z_va = rng.standard_normal(n)
    alcohol = 10.4 + 1.1 * z_alc
    volatile = np.maximum(0.12, 0.53 + 0.18 * z_va)
    fixed = np.maximum(4.6, rng.normal(8.3, 1.7, n))
    citric = np.clip(rng.normal(0.27, 0.19, n), 0.0, 1.0)
    sugar = 0.9 + rng.gamma(shape=1.3, scale=1.2, size=n)
    chlorides = 0.04 + rng.gamma(shape=1.5, scale=0.03, size=n)
    free_so2 = 1.0 + rng.gamma(shape=2.2, scale=6.5, size=n)
    total_so2 = free_so2 + rng.gamma(shape=1.7, scale=18.0, size=n)
    density = 0.9967 + 0.0019 * rng.standard_normal(n) + 0.0004 * (fixed - 8.3) / 1.7
    ph = 3.31 + 0.15 * rng.standard_normal(n) - 0.05 * (fixed - 8.3) / 1.7
    sulphates = np.maximum(0.33, 0.66 + 0.17 * rng.standard_normal(n))
    quality = np.clip(
        np.round(5.6 + 0.5 * z_alc - 0.4 * z_va + rng.normal(0.0, 0.6, n)), 3, 8
    ).astype(int)
    header = [
        "fixed_acidity",
        "volatile_acidity",
        "citric_acid",
        "residual_sugar",
        "chlorides",
        "free_sulfur_dioxide",
        "total_sulfur_dioxide",
        "density",
        "pH",
        "sulphates",
        "alcohol",
        "quality",
    ]
    rows = []
    for i in range(n):
        rows.append(
            [
                round(fixed[i], 1),
                round(volatile[i], 3),
                round(citric[i], 2),
                round(sugar[i], 1),
                round(chlorides[i], 3),
                round(free_so2[i], 1),
                round(total_so2[i], 1),
                round(density[i], 5),
                round(ph[i], 2),
                round(sulphates[i], 2),
                round(alcohol[i], 1),
                int(quality[i]),
            ]
        )
    return header, rows


def write(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def main():
    os.makedirs(DATA_DIR, exist_ok=True)
    header, rows = make_vertebral(substream(SEED, STAGE_FIXTURE, 0))
    write(os.path.join(DATA_DIR, "vertebral_synthetic.csv"), header, rows)
    header, rows = make_wine(substream(SEED, STAGE_FIXTURE, 1))
    write(os.path.join(DATA_DIR, "winequality_synthetic.csv"), header, rows)


if __name__ == "__main__":
    main()
