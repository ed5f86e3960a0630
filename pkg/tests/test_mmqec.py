import itertools
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from paircat_lab.codes import build_code, kl_decompose
from paircat_lab.fock import identity_op, space
from paircat_lab.mmqec import (DecodedError, SyndromeLattice, certify_correctability,
                               decode_loss, decode_single_mode_loss_gain, error_monomial,
                               lattice_report, lattice_window_report, syndrome_of)


def test_syndrome_examples():
    assert syndrome_of((0, 0, 0)) == (0, 0)
    assert syndrome_of((1, 1, 0)) == (0, 1)  # one loss in each of the first two modes
    assert syndrome_of((-1, 0, 0)) == (-1, 0)  # single gain in the first mode
    assert syndrome_of((1, 0, 0)) == (1, 0)
    assert syndrome_of((0, 1, 0)) == (-1, 1)
    assert syndrome_of((0, 0, 1)) == (0, -1)


@given(st.tuples(*[st.integers(-4, 4)] * 3), st.tuples(*[st.integers(-4, 4)] * 3))
def test_syndrome_additivity(e1, e2):
    lat = SyndromeLattice(3)
    combined = tuple(a + b for a, b in zip(e1, e2))
    assert lat.syndrome_of(combined) == tuple(
        x + y for x, y in zip(lat.syndrome_of(e1), lat.syndrome_of(e2)))


def test_decode_loss_examples():
    assert decode_loss((0, 0)).exponents == (0, 0, 0)
    assert decode_loss((2, 1)).exponents == (3, 1, 0)
    assert decode_loss((0, -2)).exponents == (0, 0, 2)


def test_decode_loss_unique_preimage_oracle():
    # brute-force: every weight <= 2 loss error with exponents <= 3 has a
    # unique syndrome among its peers, and the decoder returns exactly it
    lat = SyndromeLattice(3)
    errors = []
    for exps in itertools.product(range(4), repeat=3):
        if sum(1 for e in exps if e) <= 2:
            errors.append(exps)
    by_syndrome = {}
    for exps in errors:
        by_syndrome.setdefault(lat.syndrome_of(exps), []).append(exps)
    for syn, group in by_syndrome.items():
        # the same operator may appear with padding zeros; net exponents unique
        assert len({g for g in group}) == len(group)
        decoded = decode_loss(syn)
        assert decoded.exponents in group or sum(decoded.exponents) <= min(
            sum(g) for g in group)


def test_decode_loss_roundtrip_exhaustive():
    lat = SyndromeLattice(3)
    failures = 0
    for exps in itertools.product(range(4), repeat=3):
        if sum(1 for e in exps if e) > 2:
            continue
        decoded = decode_loss(lat.syndrome_of(exps))
        if lat.syndrome_of(decoded.exponents) != lat.syndrome_of(exps):
            failures += 1
    assert failures == 0


def test_decode_loss_gain_lines():
    assert decode_single_mode_loss_gain((3, 0)).exponents == (3, 0, 0)
    assert decode_single_mode_loss_gain((-2, 2)).exponents == (0, 2, 0)
    assert decode_single_mode_loss_gain((1, 1)) is None  # unused error space


def test_decode_loss_gain_exhaustive():
    lat = SyndromeLattice(3)
    for mode in range(3):
        for count in range(-3, 4):
            exps = [0, 0, 0]
            exps[mode] = count
            got = decode_single_mode_loss_gain(lat.syndrome_of(exps))
            assert got is not None
            assert got.exponents == tuple(exps)


def test_decoded_error_labels():
    assert DecodedError((3, 1, 0), "loss-only", "ab").label() == "a^3*b"
    assert DecodedError((0, 0, -2), "loss-gain", "c-line").label() == "c+^2"
    assert DecodedError((0, 0, 0), "loss-only", "ab").label() == "1"


# ---------------------------------------------------------------------------
# correctability certification on the three-mode code


@pytest.fixture(scope="module")
def code3():
    return build_code("multimode", gamma=1.2, modes=3, deltas=(0, 0), cutoff=6,
                      tail_tol=1e-5)


def test_certify_weight_two_losses(code3):
    errors = [e for e in itertools.product(range(3), repeat=3)
              if sum(e) <= 2 and sum(1 for x in e if x) <= 2]
    report = certify_correctability(code3, errors)
    assert report["cross_sector_exact"]
    same = [e for e in report["entries"] if e["sector_pair"] == "same"]
    for entry in same:
        assert complex(entry["x"]["re"], entry["x"]["im"]) == 0
        assert complex(entry["y"]["re"], entry["y"]["im"]) == 0


def test_undetectable_all_mode_loss(code3):
    abc = error_monomial(code3.space, (1, 1, 1))
    co = kl_decompose(code3, identity_op(code3.space), abc)
    gamma = 1.2
    assert abs(co.x) > 0.5 * gamma**3  # nonzero up to a normalization ratio
    assert abs(co.c) == 0


def test_spacing_one_detects_pair_loss():
    code = build_code("paircat", gamma=1.2, delta=0, cutoff=14)
    spaced = build_code("multimode", gamma=1.2, modes=2, deltas=(0,), spacing=1,
                        cutoff=14)
    ab = error_monomial(spaced.space, (1, 1))
    co = kl_decompose(spaced, identity_op(spaced.space), ab)
    assert co.x == 0 and co.y == 0 and co.z == 0
    # the unspaced code sees the same product as a logical flip
    ab0 = error_monomial(code.space, (1, 1))
    co0 = kl_decompose(code, identity_op(code.space), ab0)
    assert abs(co0.x) > 1.0


def test_lattice_report_json():
    rep = lattice_report((2, 1))
    assert rep["loss_only"]["label"] == "a^3*b"
    whole = json.loads(lattice_window_report(2))
    assert len(whole["syndromes"]) == 25
    assert all({"syndrome", "loss_only", "loss_gain"} <= set(r) for r in whole["syndromes"])
