"""Printed small-t expansions for the four counterexample families.

Each family carries two tables, transcribed as printed:

* squared pairwise distances, as ``(pairs, value(rho, s, t))``;
* tri-similarity expressions ``P^2 + Q^2 - R^2 - 1/2 P^2 Q^2`` written as
  ``(middle, outer1, outer2, power, coefficient(rho, s))`` where ``P`` and
  ``Q`` are the sides at ``middle`` and the printed value is
  ``coefficient * t^power + O(t^(power + 2))``.

Two printed expressions are malformed and are encoded by their evident
intent: the T21 triangle ADE line ``AD^2 + AE^2 - AE^2 - ...`` (read as
``- DE^2``), and the T111 triangle CDF line whose product term pairs
``DF^2`` with ``CF^2`` (read with middle vertex D).
"""

from __future__ import annotations

import math

SQ2 = math.sqrt(2.0)
SQ3 = math.sqrt(3.0)
SQ6 = math.sqrt(6.0)

DISTANCES = {
    "T4": [
        (("AB", "BC", "CA"), lambda r, s, t: 48 * t**2),
        (("DA", "DB", "DC", "EA", "EB", "EC"), lambda r, s, t: 25 * t**2),
        (("DE",), lambda r, s, t: 36 * t**2 - 36 * s**2 * t**4),
    ],
    "T30": [
        (("AE", "CE"), lambda r, s, t: 4 * r**2 + (1 + 4 * r * math.cos(s)) * t**2),
        (("BE", "DE"), lambda r, s, t: 4 * r**2 + (1 - 4 * r * math.cos(s)) * t**2),
        (("AB", "BC", "CD", "DA"), lambda r, s, t: 2 * t**2 + 2 * t**4),
        (("AC", "BD"), lambda r, s, t: 4 * t**2 - 4 * t**4),
    ],
    "T21": [
        (("AD",), lambda r, s, t: 4 * r**2),
        (("BD", "CD", "AE"), lambda r, s, t: 4 * r**2 + (4 - 4 * r) * t**2 + (1 + s**2) * t**4),
        (("BE", "CE"), lambda r, s, t: 4 * r**2 + (8 - 2 * SQ3 - 8 * r) * t**2 + 4 * t**4),
        (("AB", "AC", "DE"), lambda r, s, t: 4 * t**2 + (1 + s**2) * t**4),
        (("BC",), lambda r, s, t: 4 * t**2),
    ],
    "T111": [
        (("AC", "CE", "EA"), lambda r, s, t: 3 * r**2),
        (("AD", "AF"), lambda r, s, t: 3 * r**2 + (2 - SQ3 * r) * t**2 + t**4),
        (("BD", "BF"), lambda r, s, t: 3 * r**2 + (4 - 2 * SQ2 - (3 + SQ3) * r) * t**2 + (2 + s**2) * t**4),
        (("CB", "EB"), lambda r, s, t: 3 * r**2 + (2 - 3 * r) * t**2 + (1 + s**2) * t**4),
        (("CF", "ED"), lambda r, s, t: 3 * r**2 + (2 - 2 * SQ3 * r) * t**2 + t**4),
        (("DF",), lambda r, s, t: 3 * r**2 + (4 - 4 * SQ3 * r) * t**2 + 4 * t**4),
        (("AB",), lambda r, s, t: 2 * t**2 + (1 + s**2) * t**4),
        (("CD", "EF"), lambda r, s, t: 2 * t**2 + t**4),
    ],
}


def _k111(r, s):
    return 6 * r**2 - 4.5 * r**4


EXPRESSIONS = {
    "T4": [
        ("D", "A", "B", 2, lambda r, s: 2.0),
        ("A", "D", "B", 2, lambda r, s: 48.0),
        ("A", "D", "E", 2, lambda r, s: 14.0),
        ("D", "A", "E", 2, lambda r, s: 36.0),
    ],
    "T30": [
        ("B", "A", "C", 4, lambda r, s: 6.0),
        ("A", "B", "C", 2, lambda r, s: 4.0),
        ("E", "A", "C", 0, lambda r, s: 8 * r**2 - 8 * r**4),
        ("A", "E", "C", 2, lambda r, s: 4 - 8 * r**2),
        ("E", "B", "D", 0, lambda r, s: 4 * r**2 - 8 * r**4),
        ("B", "E", "D", 2, lambda r, s: 4 - 8 * r**2),
        ("E", "A", "B", 0, lambda r, s: 8 * r**2 - 8 * r**4),
        ("A", "E", "B", 2, lambda r, s: 2 + 8 * r * math.cos(s) - 4 * r**2),
        ("B", "E", "A", 2, lambda r, s: 2 - 8 * r * math.cos(s) - 4 * r**2),
    ],
    "T21": [
        ("A", "B", "C", 2, lambda r, s: 4.0),
        ("B", "A", "C", 2, lambda r, s: 4.0),
        ("D", "A", "B", 0, lambda r, s: 8 * r**2),
        ("A", "D", "B", 2, lambda r, s: 4 * r - 8 * r**2),
        ("B", "A", "D", 2, lambda r, s: 8 - 4 * r - 8 * r**2),
        ("E", "A", "B", 0, lambda r, s: 8 * r**2),
        ("B", "A", "E", 2, lambda r, s: 8 - 2 * SQ3 - 4 * r - 8 * r**2),
        ("A", "E", "B", 2, lambda r, s: 2 * SQ3 + 4 * r - 8 * r**2),
        ("D", "B", "C", 0, lambda r, s: 8 * r**2),
        ("C", "B", "D", 2, lambda r, s: 4 - 8 * r**2),
        ("E", "B", "C", 0, lambda r, s: 8 * r**2),
        ("C", "B", "E", 2, lambda r, s: 4 - 8 * r**2),
        ("A", "D", "E", 0, lambda r, s: 8 * r**2),
        ("D", "A", "E", 2, lambda r, s: 4 * r - 8 * r**2),
        ("E", "A", "D", 2, lambda r, s: 8 - 4 * r - 8 * r**2),
        ("B", "D", "E", 0, lambda r, s: 8 * r**2),
        ("D", "B", "E", 2, lambda r, s: 2 * SQ3 + 4 * r - 8 * r**2),
        ("E", "B", "D", 2, lambda r, s: 8 - 2 * SQ3 - 4 * r - 8 * r**2),
    ],
    "T111": [
        ("D", "B", "F", 0, _k111),
        ("F", "D", "B", 0, _k111),
        ("B", "F", "D", 0, _k111),
        ("C", "A", "B", 0, _k111),
        ("B", "A", "C", 2, lambda r, s: 4 - 3 * r - 3 * r**2),
        ("A", "C", "B", 2, lambda r, s: 3 * r - 3 * r**2),
        ("A", "C", "D", 0, _k111),
        ("C", "A", "D", 2, lambda r, s: SQ3 * r - 3 * r**2),
        ("D", "A", "C", 2, lambda r, s: 4 - SQ3 * r - 3 * r**2),
        ("B", "C", "D", 0, _k111),
        ("C", "B", "D", 2, lambda r, s: 2 * SQ2 + SQ3 * r - 3 * r**2),
        ("D", "B", "C", 2, lambda r, s: 4 - 2 * SQ2 - SQ3 * r - 3 * r**2),
        ("D", "A", "B", 0, _k111),
        ("A", "D", "B", 2, lambda r, s: 2 * SQ2 + 3 * r - 3 * r**2),
        ("B", "D", "A", 2, lambda r, s: 4 - 2 * SQ2 - 3 * r - 3 * r**2),
        ("E", "C", "D", 0, _k111),
        ("C", "D", "E", 2, lambda r, s: 2 * SQ3 * r - 3 * r**2),
        ("D", "C", "E", 2, lambda r, s: 4 - 2 * SQ3 * r - 3 * r**2),
        ("F", "C", "D", 0, _k111),
        ("C", "F", "D", 2, lambda r, s: 2 * SQ3 * r - 3 * r**2),
        ("D", "F", "C", 2, lambda r, s: 4 - 2 * SQ3 * r - 3 * r**2),
    ],
}


def expression_label(mid, a, b):
    p, q, r = f"{a}{mid}", f"{mid}{b}", f"{a}{b}"
    return f"{p}^2+{q}^2-{r}^2-1/2*{p}^2*{q}^2"
