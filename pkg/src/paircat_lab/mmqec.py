"""Multimode syndrome lattice, region decoding, and correctability certification.

Losses and gains shift the vector of nearest-neighbour photon-number
differences additively: a loss of one photon in mode m lowers difference
m-1 and raises difference m (edge modes touch a single difference).  For
three modes the single-loss shifts are a -> (1, 0), b -> (-1, 1),
c -> (0, -1), and the plane splits into three cones decoding loss-only
errors, or three lines decoding single-mode loss/gain errors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .codes import CodeSpace, kl_report


@dataclass(frozen=True)
class SyndromeLattice:
    """Additive shift map from per-mode error exponents to difference vectors."""

    modes: int

    def __post_init__(self):
        if self.modes < 2:
            raise ValueError("need at least two modes")

    def loss_shift(self, mode: int) -> np.ndarray:
        """Difference-vector shift of a single photon loss in the given mode."""
        if not 0 <= mode < self.modes:
            raise ValueError(f"mode {mode} out of range")
        shift = np.zeros(self.modes - 1, dtype=int)
        if mode >= 1:
            shift[mode - 1] -= 1
        if mode <= self.modes - 2:
            shift[mode] += 1
        return shift

    def syndrome_of(self, exponents) -> tuple[int, ...]:
        """Syndrome of a monomial error; positive exponents are losses, negative gains."""
        exps = [int(e) for e in exponents]
        if len(exps) != self.modes:
            raise ValueError(f"need {self.modes} exponents")
        out = np.zeros(self.modes - 1, dtype=int)
        for mode, e in enumerate(exps):
            out += e * self.loss_shift(mode)
        return tuple(int(x) for x in out)


@dataclass(frozen=True)
class DecodedError:
    """Per-mode net exponents recovered from a syndrome (losses > 0, gains < 0)."""

    exponents: tuple[int, ...]
    mode: str
    region: str

    def label(self) -> str:
        names = "abcdefgh"
        parts = []
        for m, e in enumerate(self.exponents):
            if e > 0:
                parts.append(f"{names[m]}^{e}" if e > 1 else names[m])
            elif e < 0:
                parts.append(f"{names[m]}+^{-e}" if e < -1 else f"{names[m]}+")
        return "*".join(parts) if parts else "1"


def syndrome_of(exponents, modes: int | None = None) -> tuple[int, ...]:
    exps = list(exponents)
    return SyndromeLattice(modes or len(exps)).syndrome_of(exps)


def decode_loss(syndrome, modes: int = 3) -> DecodedError:
    """Minimal loss-only error for a three-mode syndrome.

    The plane splits into three cones bounded by the single-loss rays; the
    decoded operators are a^(n+m) b^m, b^(-n) c^(-(n+m)), and a^n c^(-m).
    Boundary syndromes resolve to the first matching cone, which is
    unambiguous because they decode to single-mode errors either way.
    """
    if modes != 3:
        raise ValueError("region decoding is certified for three modes only")
    n, m = (int(x) for x in syndrome)
    if m >= 0 and n + m >= 0:
        return DecodedError((n + m, m, 0), "loss-only", "ab")
    if n <= 0 and n + m <= 0:
        return DecodedError((0, -n, -(n + m)), "loss-only", "bc")
    if n >= 0 and m <= 0:
        return DecodedError((n, 0, -m), "loss-only", "ac")
    raise AssertionError("the three cones cover the plane")


def decode_single_mode_loss_gain(syndrome, modes: int = 3) -> DecodedError | None:
    """Single-mode loss/gain decoding for a three-mode syndrome.

    Syndromes on the three single-mode lines decode to that mode's loss or
    gain power; anything off the lines is unused error space and returns
    None.
    """
    if modes != 3:
        raise ValueError("line decoding is certified for three modes only")
    n, m = (int(x) for x in syndrome)
    if n == 0 and m == 0:
        return DecodedError((0, 0, 0), "loss-gain", "origin")
    if m == 0:
        return DecodedError((n, 0, 0), "loss-gain", "a-line")
    if n == -m:
        return DecodedError((0, -n, 0), "loss-gain", "b-line")
    if n == 0:
        return DecodedError((0, 0, -m), "loss-gain", "c-line")
    return None


# ---------------------------------------------------------------------------
# correctability certification


def error_monomial(space, exponents):
    """Product of per-mode powers of lowering (exp > 0) or raising (exp < 0) operators."""
    from .fock import annihilation_op, creation_op, identity_op

    op = identity_op(space)
    for mode, e in enumerate(exponents):
        base = annihilation_op(space, mode) if e > 0 else creation_op(space, mode)
        for _ in range(abs(int(e))):
            op = op @ base
    return op


def weight(exponents) -> int:
    return sum(1 for e in exponents if e != 0)


def certify_correctability(code: CodeSpace, error_exponents: list,
                           tolerance: float = 1e-9) -> dict:
    """Exhaustive KL certification over a set of monomial errors.

    Pairs whose syndromes differ must give exactly zero logical components
    (orthogonal sectors); same-syndrome pairs are summarized by their
    diagonal-consistency ratio.  Returns a report dict with the KL table and
    the largest violation.
    """
    spc = code.space
    lattice = SyndromeLattice(spc.num_modes)
    labelled = {}
    syndromes = {}
    for exps in error_exponents:
        exps = tuple(int(e) for e in exps)
        dec = DecodedError(exps, "input", "")
        labelled[dec.label()] = error_monomial(spc, exps)
        syndromes[dec.label()] = lattice.syndrome_of(exps)
    report = kl_report(code, labelled, tolerance)
    cross_max = 0.0
    same_entries = []
    for entry in report.entries:
        sa, sb = syndromes[entry["error"]], syndromes[entry["error_prime"]]
        logical = max(
            abs(complex(entry["x"]["re"], entry["x"]["im"])),
            abs(complex(entry["y"]["re"], entry["y"]["im"])),
            abs(complex(entry["z"]["re"], entry["z"]["im"])),
        )
        if sa != sb:
            cross_max = max(cross_max, logical)
            entry["sector_pair"] = "cross"
        else:
            entry["sector_pair"] = "same"
            same_entries.append(entry)
    return {
        "code": {k: repr(v) if isinstance(v, complex) else v for k, v in code.metadata.items()},
        "tolerance": tolerance,
        "cross_sector_max_logical": cross_max,
        "cross_sector_exact": bool(cross_max == 0.0),
        "entries": report.entries,
    }


def lattice_report(syndrome, modes: int = 3) -> dict:
    """JSON-ready decoding report for one syndrome."""
    loss = decode_loss(syndrome, modes)
    lg = decode_single_mode_loss_gain(syndrome, modes)
    return {
        "syndrome": [int(x) for x in syndrome],
        "loss_only": {"region": loss.region, "exponents": list(loss.exponents), "label": loss.label()},
        "loss_gain": None
        if lg is None
        else {"region": lg.region, "exponents": list(lg.exponents), "label": lg.label()},
    }


def lattice_window_report(radius: int = 4, modes: int = 3) -> str:
    """Decoding of every syndrome in a square window, as JSON."""
    rows = []
    for n in range(-radius, radius + 1):
        for m in range(-radius, radius + 1):
            rows.append(lattice_report((n, m), modes))
    return json.dumps({"modes": modes, "radius": radius, "syndromes": rows}, indent=2)
