import pytest

from helpers.errors import NotPPower, UnsupportedGroup
from modules.gamma import gamma_verdict, load_context


def test_context_is_cached():
    assert load_context("C2xC2", "2") is load_context("C2 x C2", "2")
    assert load_context("Q8", "2").family == "q8"
    assert load_context("C9", "3").family == "cyclic"


def test_bad_groups():
    with pytest.raises(UnsupportedGroup):
        load_context("S3", "2")
    with pytest.raises(NotPPower):
        load_context("C6", "2")


def test_q8_is_nontrivial(q8):
    verdict = gamma_verdict(q8)
    assert verdict.verdict == "nontrivial"
    assert verdict.witness.kind == "coboundary"
    assert verdict.witness.data["consistent"] is False


def test_c3_is_nontrivial(c3):
    verdict = gamma_verdict(c3)
    assert verdict.verdict == "nontrivial"
    assert verdict.witness.kind == "massey"
    assert verdict.witness.data["contains_zero"] is False


def test_rank_two_is_nontrivial(c2c2):
    verdict = gamma_verdict(c2c2)
    assert verdict.verdict == "nontrivial"
    assert verdict.witness.data["indeterminacy_dimension"] == 0


def test_c2_cubed_is_trivial(c2c2c2):
    verdict = gamma_verdict(c2c2c2)
    assert verdict.verdict == "trivial"
    assert verdict.witness.kind == "imap_f2"
    assert verdict.witness.data["nonzero_m"] == []


def test_cyclic_two_group_is_trivial(c4):
    verdict = gamma_verdict(c4, bound=3)
    assert verdict.verdict == "trivial"
    assert verdict.witness.data["degree_bound"] == 3
