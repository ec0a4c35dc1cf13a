import math

import numpy as np
import pytest

import sigdet


def two_groups(n=20, p=3, shift=0.0, seed=0):
    rng = np.random.default_rng(seed)
    y = np.repeat([0, 1], n // 2)
    x = rng.standard_normal((n, p)) + shift * y[:, None]
    return x, y.tolist()


def test_catalog():
    names = sigdet.catalog_names()
    assert len(names) == 22
    assert names[:5] == ["Oracle", "Hotelling", "Hotelling.shrink", "Goeman", "sd"]
    assert sigdet.basic_battery() == names[:11]
    assert "fig1a" in sigdet.preset_names()


def test_goeman_matches_numpy():
    x, y = two_groups(shift=0.5)
    y_arr = np.array(y)
    d = x[y_arr == 1].mean(axis=0) - x[y_arr == 0].mean(axis=0)
    expect = 10 * 10 / 20 * d @ d
    assert sigdet.statistic("Goeman", x, y) == pytest.approx(expect, rel=1e-12)


def test_hotelling_hand_value():
    x = np.array([[0.0], [2.0], [1.0], [3.0]])
    assert sigdet.statistic("Hotelling", x, [0, 0, 1, 1]) == pytest.approx(0.5)


def test_permutation_test():
    x, y = two_groups(shift=3.0)
    res = sigdet.permutation_test(x, y, ["Hotelling", "lda.CV.1"], r=99, seed=4)
    assert res["Hotelling"]["p_value"] == 0.0
    assert res["Hotelling"]["p_value_add_one"] == pytest.approx(0.01)
    again = sigdet.permutation_test(x, y, ["Hotelling", "lda.CV.1"], r=99, seed=4, threads=2)
    assert again == res


def test_fit_separates():
    x, y = two_groups(shift=6.0, seed=1)
    for family in ["lda", "dlda", "sdlda", "hdrda", "linear_svm"]:
        w, b = sigdet.fit(x, y, family=family, cost=10.0)
        pred = (x @ w + b >= 0).astype(int)
        assert pred.tolist() == y


def test_covariance_and_draw():
    s = sigdet.make_covariance("ar1", 23)
    assert s[0, 2] == pytest.approx(0.36)
    x, y = sigdet.draw("fig1b", 0.5, seed=3)
    assert x.shape == (40, 23)
    assert sum(y) == 20


def test_run_and_csv():
    rows = sigdet.run("fig1b", seed=2, reps=2, perms=19, effects=[0.0])
    assert [r["statistic"] for r in rows] == sigdet.basic_battery()
    for r in rows:
        assert r["replications"] == 2
        assert math.isclose(r["power"], r["rejections"] / 2)
    text = sigdet.power_csv(rows)
    assert text.startswith("scenario,statistic,effect,replications,rejections,power,mc_se,seed\n")
    assert text.count("\n") == 12


def test_errors():
    with pytest.raises(sigdet.SigdetError, match="ConfigError"):
        sigdet.run("fig99")
    with pytest.raises(sigdet.SigdetError, match="EmptyClass"):
        sigdet.statistic("Hotelling", np.zeros((4, 2)), [0, 0, 0, 0])
    with pytest.raises(sigdet.SigdetError):
        sigdet.statistic("nope", np.zeros((4, 2)), [0, 0, 1, 1])
