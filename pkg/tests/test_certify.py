"""Certifier: anchors, certificates, replay, and the exact closed forms."""

import json
import random
from fractions import Fraction as F

from sparsehalves.certify import (
    FUNCTIONS,
    certify_sign,
    closed_form_checks,
    highprec_value,
    indep_triple_fraction,
    interval_eval,
    margin_one_pair,
    margin_one_pair_compact,
    margin_three_pairs,
    margin_two_pairs,
    margin_zero_pairs,
    replay,
)
from sparsehalves.intervals import Interval


def deg_box(*points):
    return tuple(Interval.from_fraction(F(p)) for p in points)


class TestAnchors:
    def test_g_quarter(self):
        assert indep_triple_fraction(F(1, 4)) == F(2, 3)
        iv = interval_eval(FUNCTIONS["g"], deg_box(F(1, 4)))
        assert iv.contains(F(2, 3)) and iv.hi - iv.lo < 1e-12

    def test_h_endpoint_window(self):
        exact = margin_three_pairs(F(297, 1000))
        assert F(1, 10000) < exact < F(3, 10000)
        iv = interval_eval(FUNCTIONS["h"], deg_box(F(297, 1000)))
        assert iv.contains(exact)
        assert iv.lo > 1e-4 and iv.hi < 3e-4
        mp = highprec_value("h", F(297, 1000))
        assert 1e-4 < mp < 3e-4
        assert iv.contains(F(str(mp)).limit_denominator(10 ** 30))

    def test_k_quarter_window(self):
        exact = margin_zero_pairs(F(1, 4))
        assert exact == F(-1, 180)
        assert F(-6, 1000) < exact < F(-5, 1000)
        mp = highprec_value("k", F(1, 4))
        assert -6e-3 < mp < -5e-3
        iv = interval_eval(FUNCTIONS["k"], deg_box(F(1, 4)))
        assert iv.contains(exact)

    def test_k_right_endpoint(self):
        assert margin_zero_pairs(F(5, 18)) < 0  # closed-interval extension

    def test_ell_anchor(self):
        assert margin_two_pairs(F(26, 100), F(1, 4)) > F(3, 1000)
        mp = highprec_value("ell", F(26, 100), F(1, 4))
        assert mp > 0.003

    def test_m_anchor(self):
        assert margin_one_pair(F(3, 4), F(28, 100)) > F(99, 1000)
        mp = highprec_value("m", F(3, 4), F(28, 100))
        assert mp > 0.099


def test_m_forms_identical_rationals():
    rng = random.Random(33)
    for _ in range(300):
        x = F(rng.randint(501, 2999), 3000)
        c = F(rng.randint(750, 999), 3000)
        if 1 - 2 * (indep_triple_fraction(c) - x) == 0:
            continue
        assert margin_one_pair(x, c) == margin_one_pair_compact(x, c)


def test_interval_soundness_fuzz():
    # 10^5 pointwise exact rational values, all landing inside the interval
    # extension on random boxes of every registered function
    rng = random.Random(7)
    checks = 0
    for fid, f in FUNCTIONS.items():
        for _ in range(25):
            box = []
            spans = []
            for lo, hi in f.domain:
                a = lo + (hi - lo) * F(rng.randint(0, 999), 1000)
                b = a + (hi - a) * F(rng.randint(1, 100), 1000)
                box.append(
                    Interval(
                        Interval.from_fraction(a).lo, Interval.from_fraction(b).hi
                    )
                )
                spans.append((a, b))
            iv = f.expr(*box)
            lo_f = F(iv.lo) if iv.lo != float("-inf") else None
            hi_f = F(iv.hi) if iv.hi != float("inf") else None
            for _ in range(800):
                points = [
                    a + (b - a) * F(rng.randint(0, 256), 256) for a, b in spans
                ]
                try:
                    exact = f.expr(*points)
                except ZeroDivisionError:
                    continue
                assert lo_f is None or lo_f <= exact, (fid, points)
                assert hi_f is None or exact <= hi_f, (fid, points)
                checks += 1
    assert checks >= 10 ** 5


class TestCertificates:
    def test_h_proved(self):
        cert = certify_sign("h")
        assert cert.proved and cert.sign == "positive"

    def test_k_proved_negative(self):
        cert = certify_sign("k")
        assert cert.proved and cert.sign == "negative"

    def test_ell_margin(self):
        cert = certify_sign("ell")
        assert cert.proved and cert.margin == F(3, 1000)
        # every recorded bound clears the margin
        assert all(b.bound > 0.003 for b in cert.boxes)

    def test_m_margin(self):
        cert = certify_sign("m")
        assert cert.proved and cert.margin == F(99, 1000)
        assert all(b.bound > 0.099 for b in cert.boxes)

    def test_budget_exhaustion_reported(self):
        cert = certify_sign("ell", budget=100)
        assert cert.status == "budget"
        assert cert.undecided

    def test_margin_too_high_fails_honestly(self):
        # min ell is about 0.00369; margin 0.004 cannot be certified, and the
        # run must stop (budget) rather than claim success
        cert = certify_sign("ell", margin=F(4, 1000), budget=3000)
        assert not cert.proved


class TestReplay:
    def test_round_trip(self, tmp_path):
        for fid in ("h", "k"):
            cert = certify_sign(fid)
            path = tmp_path / f"{fid}.cert.json"
            cert.save(path)
            report = replay(path)
            assert report["ok"], report["problems"]

    def test_tamper_detected(self, tmp_path):
        cert = certify_sign("k")
        path = tmp_path / "k.cert.json"
        cert.save(path)
        raw = json.loads(path.read_text())
        raw["regions"][0]["boxes"][0]["bound"] = (-1e-9).hex()
        assert not replay(raw)["ok"]

    def test_missing_box_detected(self, tmp_path):
        cert = certify_sign("h")
        path = tmp_path / "h.cert.json"
        cert.save(path)
        raw = json.loads(path.read_text())
        if len(raw["regions"][0]["boxes"]) > 1:
            raw["regions"][0]["boxes"].pop()
            report = replay(raw)
            assert not report["ok"]
            assert any("measure" in p for p in report["problems"])


def test_closed_forms():
    report = closed_form_checks()
    assert report["quadratic_minimum"]["at_8_13"] == "111/1024"
    assert abs(report["quadratic_minimum"]["value_float"] - 0.1084) < 1e-3
    assert report["cut_polynomial"]["root"] == "32/123"
    assert report["three_quarters_guard"]["g_at_5_18"] == "3/4"


def test_monotone_refinement():
    # splitting a box only tightens the certified enclosure
    f = FUNCTIONS["h"]
    box = (Interval(0.25, 0.29),)
    whole = f.expr(*box)
    mid = box[0].mid()
    lo_half = f.expr(Interval(0.25, mid))
    hi_half = f.expr(Interval(mid, 0.29))
    assert lo_half.lo >= whole.lo and hi_half.lo >= whole.lo
    assert lo_half.hi <= whole.hi and hi_half.hi <= whole.hi
