import math

import pytest
from hypothesis import given, strategies as st

from etamu import (
    FadingBranch,
    FadingFormat,
    MrcChannel,
    ParameterOutOfRange,
    convert_format,
    db_to_linear,
    derive_constants,
    linear_to_db,
    validate_branch,
)

F1, F2 = FadingFormat.FORMAT1, FadingFormat.FORMAT2

eta1 = st.floats(1e-3, 1e3)
eta2 = st.floats(-0.999, 0.999)
mus = st.floats(0.05, 20.0)
snrs = st.floats(1e-3, 1e4)


@pytest.mark.parametrize("fmt,eta,mu", [(F1, 1.2, 1.0), (F2, 0.0, 0.5), (F2, -0.9, 3.0)])
def test_valid_branches_pass_through(fmt, eta, mu):
    br = FadingBranch(fmt, eta, mu, 1.0)
    assert validate_branch(br) is br


@pytest.mark.parametrize("fmt,eta,mu,snr,field", [
    (F1, -0.5, 1.0, 1.0, "eta"),
    (F1, 0.0, 1.0, 1.0, "eta"),
    (F2, 1.0, 1.0, 1.0, "eta"),
    (F2, -1.0, 1.0, 1.0, "eta"),
    (F1, 1.0, 0.0, 1.0, "mu"),
    (F1, 1.0, 1.0, -2.0, "mean_snr"),
    (F1, float("nan"), 1.0, 1.0, "eta"),
])
def test_out_of_range_names_the_field(fmt, eta, mu, snr, field):
    with pytest.raises(ParameterOutOfRange) as exc:
        validate_branch(FadingBranch(fmt, eta, mu, snr))
    assert exc.value.field == field


def test_format_parse():
    assert FadingFormat.parse("2") is F2
    with pytest.raises(ParameterOutOfRange):
        FadingFormat.parse(3)


def test_conversion_fixed_points():
    assert convert_format(FadingBranch(F1, 1.0, 1.0)).eta == 0.0
    br = convert_format(FadingBranch(F1, 1.2, 1.0))
    assert br.format is F2
    assert br.eta == pytest.approx(-0.0909091, abs=1e-7)


@given(eta1, mus)
def test_conversion_round_trip(eta, mu):
    br = FadingBranch(F1, eta, mu)
    back = convert_format(convert_format(br))
    assert back.format is F1
    assert back.eta == pytest.approx(eta, rel=1e-12)


def test_constants_symmetric_case():
    c = derive_constants(FadingBranch(F1, 1.0, 1.0, 1.0))
    assert (c.h, c.bigH) == (1.0, 0.0)
    assert c.a == pytest.approx(0.5) and c.b == pytest.approx(0.5)


def test_constants_eta_12_both_formats():
    c1 = derive_constants(FadingBranch(F1, 1.2, 1.0, 1.0))
    assert c1.h == pytest.approx(1.0083333, abs=1e-7)
    assert c1.bigH == pytest.approx(-0.0916667, abs=1e-7)
    assert c1.a == pytest.approx(0.4545455, abs=1e-7)
    assert c1.b == pytest.approx(0.5454545, abs=1e-7)
    c2 = derive_constants(FadingBranch(F2, -1.0 / 11.0, 1.0, 1.0))
    assert c2.h == pytest.approx(c1.h, rel=1e-14)
    assert c2.bigH == pytest.approx(c1.bigH, rel=1e-13)


@given(eta1, mus, snrs)
def test_mean_identity_format1(eta, mu, snr):
    c = derive_constants(FadingBranch(F1, eta, mu, snr))
    assert abs(c.bigH) < c.h
    assert mu * (c.a + c.b) == pytest.approx(snr, rel=1e-13)


@given(eta2, mus, snrs)
def test_mean_identity_format2(eta, mu, snr):
    c = derive_constants(FadingBranch(F2, eta, mu, snr))
    assert abs(c.bigH) < c.h
    assert mu * (c.a + c.b) == pytest.approx(snr, rel=1e-13)


@given(eta2, mus)
def test_formats_describe_the_same_branch(eta, mu):
    br = FadingBranch(F2, eta, mu, 2.0)
    c2 = derive_constants(br)
    c1 = derive_constants(convert_format(br))
    assert sorted([c1.a, c1.b]) == pytest.approx(sorted([c2.a, c2.b]), rel=1e-10)


def test_extreme_eta_stays_finite():
    c = derive_constants(FadingBranch(F1, 1e12, 1.0, 1.0))
    assert c.a > 0 and c.b == pytest.approx(1.0, rel=1e-10)


def test_channel_build_and_decomposition():
    ch = MrcChannel.build(1, 1.2, [1.0, 2.0], [1.0, 3.0])
    assert len(ch) == 2
    shapes, scales = ch.gamma_decomposition()
    assert shapes == [1.0, 1.0, 2.0, 2.0]
    assert math.fsum(k * t for k, t in zip(shapes, scales)) == pytest.approx(4.0)
    assert all(br.mean_snr == 7.0 for br in ch.with_mean_snr(7.0))


def test_channel_rejects_empty_and_mismatched():
    with pytest.raises(ParameterOutOfRange):
        MrcChannel(())
    with pytest.raises(ParameterOutOfRange):
        MrcChannel.build(1, [1.0, 2.0], [1.0, 1.0, 1.0])


def test_db_conversion():
    assert db_to_linear(10.0) == pytest.approx(10.0)
    assert linear_to_db(100.0) == pytest.approx(20.0)
