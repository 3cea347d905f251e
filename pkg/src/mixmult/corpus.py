"""The regression corpus: small named setups with oracle-pinned expectations.

Every expected number shipped in data/corpus_expected.json was produced by
the brute-force oracle (see :mod:`mixmult.oracle`); the ``oracle-regen``
task rewrites that file, so expectation provenance is machine-checked, not
hand-entered.  Bounds: d <= 3, p <= 2, q <= 2, exponents <= 4.
"""

from __future__ import annotations

import json
from importlib import resources

from mixmult.engine import Setup

CORPUS_VERSION = 1

# term syntax: A entries are x-exponent vectors; F/E entries are (x-vector, component)
CORPUS_SPECS: dict[str, dict] = {
    "plane-samuel": {
        "d": 2, "p": 1,
        "F": [((1, 0), 1), ((0, 1), 1)],
        "E": [[((1, 0), 1), ((0, 1), 1)]],
        "note": "both modules are the maximal ideal of the plane",
    },
    "plane-two-gen": {
        "d": 2, "p": 1,
        "F": [((1, 0), 1), ((0, 1), 1)],
        "E": [[((2, 0), 1), ((0, 3), 1)]],
        "note": "classical two-generator ideal (x^2, y^3) against the maximal ideal",
    },
    "plane-pair": {
        "d": 2, "p": 1,
        "F": [((1, 0), 1), ((0, 1), 1)],
        "E": [[((1, 0), 1), ((0, 1), 1)], [((2, 0), 1), ((0, 3), 1)]],
        "note": "two I-modules at once (q = 2)",
    },
    "line-quotient": {
        "d": 2, "p": 1,
        "A": [(1, 0)],
        "F": [((1, 0), 1), ((0, 1), 1)],
        "E": [[((0, 1), 1)]],
        "note": "coefficient module R/(x); the I-module avoids the annihilator",
    },
    "fat-line": {
        "d": 2, "p": 1,
        "A": [(2, 0)],
        "F": [((1, 0), 1), ((0, 1), 1)],
        "E": [[((1, 0), 1), ((0, 1), 1)]],
        "note": "nonreduced coefficient module R/(x^2)",
    },
    "interfering-powers": {
        "d": 2, "p": 1,
        "F": [((1, 0), 1), ((0, 1), 1)],
        "E": [[((2, 0), 1)], [((1, 0), 1), ((0, 1), 1)]],
        "note": "I_1 = (x^2) interferes with x in I_2: a genuine fc1 failure lives here",
    },
    "curve-torsion": {
        "d": 2, "p": 1,
        "A": [(2, 1)],
        "F": [((1, 0), 1), ((0, 1), 1)],
        "E": [[((1, 0), 1), ((0, 1), 1)]],
        "note": "R/(x^2 y): every monomial candidate fails the weak conditions",
    },
    "rank-two-free": {
        "d": 2, "p": 2,
        "F": [((1, 0), 1), ((0, 1), 1), ((1, 0), 2), ((0, 1), 2)],
        "E": [[((1, 0), 1), ((0, 1), 1), ((1, 0), 2), ((0, 1), 2)]],
        "note": "the maximal ideal times a rank-two free module",
    },
    "rank-two-diagonal": {
        "d": 2, "p": 2,
        "F": [((1, 0), 1), ((0, 1), 1), ((1, 0), 2), ((0, 1), 2)],
        "E": [[((1, 0), 1), ((0, 1), 2)]],
        "note": "diagonal submodule (x e_1, y e_2); carries nonzero j > 0 entries",
    },
    "space-line": {
        "d": 3, "p": 1,
        "F": [((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1)],
        "E": [[((1, 0, 0), 1), ((0, 1, 0), 1)]],
        "note": "I = (x, y) has a one-dimensional zero locus in 3-space",
    },
}


def corpus_names() -> list[str]:
    return list(CORPUS_SPECS)


def build(name: str, kmax: int = 64) -> Setup:
    spec = CORPUS_SPECS[name]
    return Setup.build(
        spec["d"], spec["p"], spec.get("A", ()), spec["F"], spec.get("E", ()), kmax=kmax
    )


def load_expected() -> dict:
    text = resources.files("mixmult").joinpath("data/corpus_expected.json").read_text()
    return json.loads(text)
