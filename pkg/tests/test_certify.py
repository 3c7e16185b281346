import numpy as np
import pytest
from numpy.testing import assert_allclose

from freqcert.certify import (
    CertificationQuery,
    Disk,
    best_rate,
    certify,
    circle_criterion,
    closed_form,
    gain_threshold,
    max_learning_rate,
    sector_disk,
)
from freqcert.operators import SectorParams
from freqcert.transfer import MethodSpec

SECTOR = SectorParams(mu=0.5, L=4.0)


def test_certify_tuned_gd():
    res = certify(CertificationQuery(MethodSpec("gd", eta=2 / 4.5), SECTOR, rho=0.9))
    assert res.certified
    assert_allclose(res.gain, (2 / 4.5) / 0.9, rtol=1e-12)
    assert_allclose(res.threshold, 2 / 3.5, rtol=1e-15)
    assert res.margin > 0


def test_certify_fails_below_the_gd_rate():
    # (L - mu)/(L + mu) = 0.7778 is the certification boundary
    res = certify(CertificationQuery(MethodSpec("gd", eta=2 / 4.5), SECTOR, rho=0.7))
    assert not res.certified


def test_certify_rejects_large_optimistic_steps():
    res = certify(
        CertificationQuery(MethodSpec("ogd", eta=0.7 / 4.0), SECTOR, rho=0.999)
    )
    assert not res.certified


def test_noisy_threshold_and_certification():
    noisy = SectorParams(mu=0.5, L=4.0, delta=0.1)
    assert_allclose(gain_threshold(noisy), 1.0 / 2.15, rtol=1e-15)
    res = certify(CertificationQuery(MethodSpec("gd", eta=0.25), noisy, rho=0.985))
    assert res.certified
    # the boundary 1 - kappa^{ -1} + delta is sharp
    res = certify(CertificationQuery(MethodSpec("gd", eta=0.25), noisy, rho=0.974))
    assert not res.certified


def test_unstable_loop_reports_without_gain():
    # the shifted gd loop at eta = 1/L has its pole at (1 - kappa^{-1})/2;
    # scaling below that magnitude destabilizes it
    res = certify(CertificationQuery(MethodSpec("gd", eta=0.25), SECTOR, rho=0.4))
    assert not res.stable_ok
    assert res.gain is None and res.margin is None
    assert not res.certified


def test_improper_methods_need_the_flag():
    q = CertificationQuery(MethodSpec("pp", eta=0.5), SECTOR, rho=0.9)
    assert not certify(q).certified
    assert not certify(q).proper_ok
    q2 = CertificationQuery(
        MethodSpec("pp", eta=0.5), SECTOR, rho=0.9, allow_non_strictly_proper=True
    )
    assert certify(q2).certified


def test_best_rate_matches_gd_theory():
    assert_allclose(
        best_rate(MethodSpec("gd", eta=2 / 4.5), SECTOR), 3.5 / 4.5, atol=1e-4
    )
    assert_allclose(best_rate(MethodSpec("gd", eta=0.25), SECTOR), 0.875, atol=1e-4)


def test_best_rate_pp():
    got = best_rate(MethodSpec("pp", eta=2 / 4.5), SECTOR, allow_improper=True)
    assert_allclose(got, 4.5 / 5.5, atol=1e-4)


def test_best_rate_ogd_beats_the_sufficient_bound():
    eps = 0.5
    eta = (2.0 / (3.0 * SECTOR.L)) * (1.0 - eps)
    bound = 1.0 - (2.0 / 3.0) * eps * (1.0 - eps) * SECTOR.kappa_inv
    got = best_rate(MethodSpec("ogd", eta=eta), SECTOR)
    assert got <= bound + 1e-4


def test_best_rate_uncertifiable():
    assert best_rate(MethodSpec("ogd", eta=0.7 / 4.0), SECTOR) is None


def test_max_learning_rate_ogd_tightness():
    sector = SectorParams(mu=1e-3, L=3.0)
    got = max_learning_rate(MethodSpec("ogd", eta=1.0), sector)
    assert 0.95 * (2 / 9) <= got <= 2 / 9


def test_max_learning_rate_hgd_matches_ogd():
    sector = SectorParams(mu=1e-3, L=3.0)
    ogd = max_learning_rate(MethodSpec("ogd", eta=1.0), sector)
    hgd = max_learning_rate(MethodSpec("hgd", eta=1.0, a=(2.0, -1.0)), sector)
    assert_allclose(hgd, ogd, atol=1e-5)


def test_max_learning_rate_gd_covers_the_tuned_point():
    got = max_learning_rate(MethodSpec("gd", eta=1.0), SECTOR)
    assert got >= 2 / 4.5
    # classical stability boundary 2/L for the plain gradient step
    assert_allclose(got, 2.0 / SECTOR.L, atol=1e-4)


def test_closed_form_regimes():
    assert_allclose(
        closed_form(MethodSpec("gd", eta=2 / 4.5), SECTOR), 3.5 / 4.5, rtol=1e-12
    )
    assert_allclose(closed_form(MethodSpec("gd", eta=0.25), SECTOR), 0.875, rtol=1e-12)
    assert_allclose(
        closed_form(MethodSpec("gogd", alpha=0.125, beta=0.0625), SECTOR),
        0.96875,
        rtol=1e-12,
    )
    assert_allclose(
        closed_form(MethodSpec("gogd", alpha=0.25, beta=0.0625), SECTOR),
        1.0 - 0.5 * 0.5 * 0.125 / 2.0,
        rtol=1e-12,
    )
    assert_allclose(
        closed_form(MethodSpec("pp", eta=2 / 4.5), SECTOR), 4.5 / 5.5, rtol=1e-12
    )
    eps = 0.3
    eta = (2.0 / (3.0 * SECTOR.L)) * (1.0 - eps)
    assert_allclose(
        closed_form(MethodSpec("ogd", eta=eta), SECTOR),
        1.0 - (2.0 / 3.0) * eps * (1.0 - eps) * 0.125,
        rtol=1e-12,
    )
    assert closed_form(MethodSpec("gd", eta=0.123), SECTOR) is None
    assert closed_form(MethodSpec("ogd", eta=1.0), SECTOR) is None


def test_closed_form_noisy_regimes():
    noisy = SectorParams(mu=0.5, L=4.0, delta=0.05)
    assert_allclose(
        closed_form(MethodSpec("gd", eta=0.25), noisy), 1 - 0.125 + 0.05, rtol=1e-12
    )
    ogd_noise = SectorParams(mu=0.5, L=4.0, delta=0.5 / 12.0)
    assert_allclose(
        closed_form(MethodSpec("ogd", eta=0.125), ogd_noise),
        1.0 - 0.125 / 4.0,
        rtol=1e-12,
    )
    too_noisy = SectorParams(mu=0.5, L=4.0, delta=0.2)
    assert closed_form(MethodSpec("gd", eta=0.25), too_noisy) is None


def test_oracle_agreement_with_the_pipeline():
    # certification succeeds just above every closed-form rate
    cases = [
        (MethodSpec("gd", eta=2 / 4.5), SECTOR, False),
        (MethodSpec("gd", eta=0.25), SECTOR, False),
        (MethodSpec("ogd", eta=(2 / 12) * 0.7), SECTOR, False),
        (MethodSpec("gogd", alpha=0.125, beta=0.0625), SECTOR, False),
        (MethodSpec("pp", eta=1.0), SECTOR, True),
        (MethodSpec("gd", eta=0.25), SectorParams(0.5, 4.0, delta=0.05), False),
    ]
    for method, sector, allow in cases:
        rho = closed_form(method, sector)
        assert rho is not None
        res = certify(
            CertificationQuery(method, sector, rho + 1e-3, allow_non_strictly_proper=allow)
        )
        assert res.certified, (method.family, rho)


def test_sharp_theorems_fail_below_their_rate():
    # regimes whose stated rate is exactly the certification boundary
    cases = [
        (MethodSpec("gd", eta=2 / 4.5), SECTOR, False),
        (MethodSpec("gd", eta=0.25), SECTOR, False),
        (MethodSpec("pp", eta=1.0), SECTOR, True),
        (MethodSpec("gd", eta=0.25), SectorParams(0.5, 4.0, delta=0.05), False),
    ]
    for method, sector, allow in cases:
        rho = closed_form(method, sector)
        res = certify(
            CertificationQuery(method, sector, rho - 1e-3, allow_non_strictly_proper=allow)
        )
        assert not res.certified, method.family


def test_noise_monotonicity():
    thresholds = [
        gain_threshold(SectorParams(0.5, 4.0, delta=d)) for d in (0.0, 0.05, 0.1, 0.2)
    ]
    assert all(a > b for a, b in zip(thresholds, thresholds[1:]))
    # a certificate at some delta survives any smaller delta
    for d_small, d_big in ((0.0, 0.05), (0.02, 0.05)):
        big = certify(
            CertificationQuery(
                MethodSpec("gd", eta=0.25), SectorParams(0.5, 4.0, delta=d_big), 0.95
            )
        )
        small = certify(
            CertificationQuery(
                MethodSpec("gd", eta=0.25), SectorParams(0.5, 4.0, delta=d_small), 0.95
            )
        )
        assert big.certified
        assert small.certified


def test_pid_certifies_identically_to_gogd():
    alpha, beta = 0.125, 0.0625
    for rho in (0.9, 0.97, 0.999):
        a = certify(
            CertificationQuery(MethodSpec("pid", kp=beta, ki=alpha, kd=-beta), SECTOR, rho)
        )
        b = certify(
            CertificationQuery(MethodSpec("gogd", alpha=alpha, beta=beta), SECTOR, rho)
        )
        assert a == b


def test_pid_certifies_identically_to_pp():
    eta = 0.5
    for rho in (0.85, 0.95):
        a = certify(
            CertificationQuery(
                MethodSpec("pid", kp=eta, ki=eta, kd=0.0), SECTOR, rho,
                allow_non_strictly_proper=True,
            )
        )
        b = certify(
            CertificationQuery(
                MethodSpec("pp", eta=eta), SECTOR, rho, allow_non_strictly_proper=True
            )
        )
        assert a == b


def test_circle_criterion_examples():
    passes, _ = circle_criterion(MethodSpec("ogd", eta=0.25 / 4.0), SECTOR)
    assert passes
    passes, samples = circle_criterion(MethodSpec("ogd", eta=0.7 / 4.0), SECTOR)
    assert not passes
    disk = sector_disk(SECTOR)
    assert any(not disk.contains(v) for _, v in samples)
    passes, samples = circle_criterion(MethodSpec("gd", eta=2 / 4.5), SECTOR)
    assert passes
    radii = [abs(v) for _, v in samples]
    assert_allclose(radii, 2 / 4.5, rtol=1e-12)  # constant magnitude eta


def test_circle_criterion_consistency_with_the_gain():
    from freqcert.gain import hinf_norm
    from freqcert.transfer import build_transfer, complementary_sensitivity

    for eta, expect in ((0.25 / 4, True), (0.5 / 4, True), (0.7 / 4, False)):
        method = MethodSpec("ogd", eta=eta)
        passes, _ = circle_criterion(method, SECTOR, n_points=4096)
        loop = complementary_sensitivity(build_transfer(method), 2.25)
        gain, _ = hinf_norm(loop)
        assert passes == (gain < gain_threshold(SECTOR)), eta
        assert passes == expect


def test_circle_criterion_sample_count_validation():
    with pytest.raises(ValueError):
        circle_criterion(MethodSpec("gd", eta=0.25), SECTOR, n_points=32)


def test_disk_geometry():
    d = sector_disk(SECTOR)
    assert d.center == 0.0
    assert_allclose(d.radius, 2 / 3.5, rtol=1e-15)
    assert d.contains(0.5)
    assert not d.contains(0.6)
    with pytest.raises(ValueError):
        Disk(center=0.0, radius=0.0)


def test_query_validation():
    with pytest.raises(ValueError):
        CertificationQuery(MethodSpec("gd", eta=0.1), SECTOR, rho=1.0)
    with pytest.raises(ValueError):
        CertificationQuery(MethodSpec("gd", eta=0.1), SECTOR, rho=0.0)
