import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hnilm import simgen
from hnilm.core import PowerSeries
from hnilm.disagg import ApplianceModel, DisaggResult, co_disaggregate
from hnilm.errors import MissingTruth, NoOverlap, ZeroEnergy
from hnilm.metrics import MetricReport, evaluate, f_score, f_score_from_states, nep

from oracles import nep_oracle

ON, OFF = 100.0, 0.0
powers = st.lists(st.floats(0, 5000, allow_nan=False), min_size=1, max_size=50)


def series(xs, start=0):
    return PowerSeries(start, 30, xs)


class TestFScore:
    def test_perfect(self):
        r = f_score(series([ON, OFF, ON]), series([ON, OFF, ON]))
        assert r.f == 1.0

    def test_worked(self):
        r = f_score(series([ON, ON, OFF, OFF]), series([ON, OFF, OFF, OFF]))
        assert (r.precision, r.recall, r.f) == (1.0, 0.5, 2 / 3)
        assert (r.counts.tp, r.counts.fp, r.counts.fn, r.counts.tn) == (1, 0, 1, 2)

    def test_all_off(self):
        assert f_score(series([OFF] * 3), series([OFF] * 3)).f == 0.0

    def test_threshold_is_strict(self):
        assert f_score(series([10.0]), series([10.0]), 10).counts.tn == 1

    def test_missing_excluded(self):
        r = f_score(series([ON, np.nan, ON]), series([ON, ON, np.nan]))
        assert r.counts.tp == 1 and sum(vars(r.counts).values()) == 1

    def test_misaligned(self):
        with pytest.raises(NoOverlap):
            f_score(series([ON]), series([ON], start=300))

    @given(powers, powers)
    def test_bounds_and_formula(self, a, b):
        n = min(len(a), len(b))
        r = f_score(series(a[:n]), series(b[:n]))
        assert 0 <= r.f <= 1
        if r.precision + r.recall:
            assert r.f == pytest.approx(2 * r.precision * r.recall / (r.precision + r.recall))

    @given(powers, powers)
    def test_monotone_transform(self, a, b):
        n = min(len(a), len(b))
        a, b = np.array(a[:n]), np.array(b[:n])
        # g preserves which side of 10 W each sample is on
        g = lambda x: 10 * (x / 10) ** 3
        assert f_score(series(a), series(b)).counts == f_score(series(g(a)), series(g(b)), 10).counts


class TestNEP:
    def test_identity(self):
        assert nep(series([1, 2, 3]), series([1, 2, 3])) == 0.0

    def test_worked(self):
        assert nep(series([100, 100, 0]), series([100, 0, 0])) == 0.5

    def test_all_unassigned(self):
        assert nep(series([100, 50]), series([0, 0])) == 1.0

    def test_above_one(self):
        assert nep(series([100, 0, 0]), series([0, 100, 100])) == 3.0

    def test_zero_energy(self):
        with pytest.raises(ZeroEnergy):
            nep(series([0, 0]), series([1, 1]))

    @given(powers, powers, st.floats(1e-3, 1e3))
    def test_scale_invariance(self, a, b, c):
        n = min(len(a), len(b))
        a, b = np.array(a[:n]), np.array(b[:n])
        if a.sum() <= 1e-6:
            return
        assert nep(series(c * a), series(c * b)) == pytest.approx(nep(series(a), series(b)), rel=1e-12, abs=1e-12)

    @given(powers, powers)
    def test_zero_iff_equal(self, a, b):
        n = min(len(a), len(b))
        a, b = a[:n], b[:n]
        if sum(a) <= 1e-6:
            return
        assert (nep(series(a), series(b)) == 0) == (a == b)
        assert nep(series(a), series(b)) >= 0


def _result(preds):
    names = tuple(preds)
    states = {n: (preds[n].values > 10).astype(np.int64) for n in names}
    first = preds[names[0]]
    return DisaggResult(names, preds, states, first.with_values(np.zeros(len(first))))


class TestEvaluate:
    def test_perfect(self):
        truth = {"a": series([ON, OFF, ON]), "b": series([OFF, 50.0, 50.0])}
        rep = evaluate(truth, _result(truth))
        for s in rep.scores.values():
            assert s.f_score == 1.0 and s.nep == 0.0

    def test_consistency(self):
        t, p = series([ON, ON, OFF, OFF]), series([ON, OFF, OFF, OFF])
        s = evaluate({"a": t}, _result({"a": p}))["a"]
        assert s.f_score == f_score(t, p).f and s.nep == nep(t, p)

    def test_missing_truth(self):
        with pytest.raises(MissingTruth):
            evaluate({}, _result({"a": series([ON])}))

    def test_state_mode(self):
        a = ApplianceModel("a", [0, 5])
        r = co_disaggregate(series([5, 0, 5]), [a])
        truth = {"a": series([5, 0, 5])}
        # 5 W never exceeds the 10 W power threshold, but state 1 is ON
        assert evaluate(truth, r, on_threshold=4)["a"].f_score == 1.0
        assert evaluate(truth, r, mode="state", on_threshold=4)["a"].f_score == 1.0
        assert evaluate(truth, r)["a"].f_score == 0.0

    def test_serialization(self):
        t = {"a": series([ON, ON, OFF, OFF])}
        rep = evaluate(t, _result({"a": series([ON, OFF, OFF, OFF])}))
        assert rep.to_csv() == "appliance,f_score,nep,tp,fp,fn,tn\na,0.6666666666666666,0.5,1,0,1,2\n"
        assert MetricReport.from_json(rep.to_json()) == rep
        assert json.loads(rep.to_json())["a"]["tp"] == 1

    def test_corruption_scenario(self):
        spec = simgen.campus_preset(seed=0, span_days=4)
        h = simgen.simulate_building(spec)
        truth = h.series("ahu_1")
        start = truth.start_time + 86400  # day 2 of 4 in local time
        ts = truth.timestamps
        day2 = (ts >= start) & (ts < start + 86400)
        pred = truth.with_values(np.where(day2 & (truth.values > 10), 0.0, truth.values))
        rep = evaluate({"ahu_1": truth}, _result({"ahu_1": pred}))
        expected = nep_oracle(truth.values.tolist(), pred.values.tolist())
        assert expected > 0
        assert abs(rep["ahu_1"].nep - expected) <= 1e-9
