import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from wsauc.errors import InputError
from wsauc.estimator import WSAUCRanker, datasets_from_labels
from wsauc.data import Role
from wsauc.scenarios import PopulationSpec, corrupt_noisy, sample_clean

POP = PopulationSpec([1.8, 0.0], 1.0, [-1.8, 0.0], 1.0)


def _labeled(n_per_class=150, seed=0):
    xp, xn = sample_clean(POP, n_per_class, n_per_class, seed)
    x = np.vstack([xp.features, xn.features])
    y = np.concatenate([np.ones(n_per_class, dtype=int), -np.ones(n_per_class, dtype=int)])
    return x, y


def test_sklearn_params_roundtrip():
    est = WSAUCRanker(alpha=0.2, outer_rounds=5)
    params = est.get_params()
    assert params["alpha"] == 0.2 and params["outer_rounds"] == 5
    cloned = clone(est)
    assert cloned.get_params() == params
    est.set_params(beta=0.1)
    assert est.beta == 0.1


def test_fit_predict_clean():
    x, y = _labeled()
    est = WSAUCRanker(outer_rounds=15, inner_rounds=5, batch_a=32, batch_b=32,
                      learning_rate=0.05, random_state=3)
    assert est.fit(x, y) is est
    xt, yt = _labeled(seed=9)
    assert est.score(xt, yt) >= 0.99
    preds = est.predict(xt)
    assert set(np.unique(preds)) <= {-1, 1}
    assert est.n_features_in_ == 2


def test_not_fitted_error():
    with pytest.raises(NotFittedError):
        WSAUCRanker().decision_function([[0.0, 0.0]])


def test_label_validation():
    x, y = _labeled(20)
    with pytest.raises(InputError):
        WSAUCRanker(outer_rounds=2).fit(x, np.full(len(x), 2))
    with pytest.raises(InputError):
        WSAUCRanker(scenario="ssl", outer_rounds=2).fit(x, y)  # no unlabeled rows
    with pytest.raises(InputError):
        WSAUCRanker(scenario="nope").fit(x, y)


def test_noisy_scenario_with_trimming():
    xp, xn = sample_clean(POP, 200, 200, seed=4)
    with pytest.warns(UserWarning):  # warn-only sum bound
        split = corrupt_noisy(xp, xn, 0.3, 0.3, seed=5)
    x = np.vstack([split.noisy_pos.features, split.noisy_neg.features])
    y = np.concatenate([np.ones(len(split.noisy_pos), dtype=int),
                        -np.ones(len(split.noisy_neg), dtype=int)])
    est = WSAUCRanker(scenario="noisy", alpha=0.3, beta=0.3, warmup_rounds=3,
                      outer_rounds=15, inner_rounds=5, batch_a=32, batch_b=32,
                      learning_rate=0.05, random_state=6)
    est.fit(x, y)
    xt, yt = _labeled(seed=10)
    assert est.score(xt, yt) >= 0.97


def test_pu_scenario():
    xp, xn = sample_clean(POP, 300, 300, seed=11)
    from wsauc.scenarios import make_pu

    split = make_pu(xp, xn, 0.2, seed=12)
    x = np.vstack([split.labeled_pos.features, split.unlabeled.features])
    y = np.concatenate([np.ones(len(split.labeled_pos), dtype=int),
                        np.zeros(len(split.unlabeled), dtype=int)])
    est = WSAUCRanker(scenario="pu", outer_rounds=10, inner_rounds=5,
                      batch_a=32, batch_b=32, learning_rate=0.05, random_state=13)
    est.fit(x, y)
    xt, yt = _labeled(seed=14)
    assert est.score(xt, yt) >= 0.97


def test_mil_scenario_and_bag_scores():
    from wsauc.scenarios import make_mil

    xp, xn = sample_clean(POP, 400, 600, seed=15)
    mil = make_mil(xp, xn, 20, 20, 5, 0.6, seed=16)
    x = np.vstack([mil.union_pos.features, mil.union_neg.features])
    y = np.concatenate([np.ones(len(mil.union_pos), dtype=int),
                        -np.ones(len(mil.union_neg), dtype=int)])
    bags = np.concatenate([mil.union_pos.bag_ids, mil.union_neg.bag_ids])
    est = WSAUCRanker(scenario="mil", outer_rounds=10, inner_rounds=5,
                      batch_a=32, batch_b=32, learning_rate=0.05, random_state=17)
    est.fit(x, y, bag_ids=bags)
    ids, scores = est.bag_decision_function(x, bags)
    assert ids.size == 40 and scores.size == 40
    # bag score equals max member score
    member_scores = est.decision_function(x)
    for b, s in zip(ids, scores):
        assert s == pytest.approx(float(member_scores[bags == b].max()), abs=1e-12)


def test_mil_requires_bag_ids():
    x, y = _labeled(20)
    with pytest.raises(InputError):
        WSAUCRanker(scenario="mil", outer_rounds=2).fit(x, y)


def test_datasets_from_labels_roles():
    x, y = _labeled(10)
    sets = datasets_from_labels("ssl", np.vstack([x, x[:4]]),
                                np.concatenate([y, np.zeros(4, dtype=int)]))
    assert set(sets) == {Role.P, Role.N, Role.U}
    assert len(sets[Role.U]) == 4


def test_deterministic_given_random_state():
    x, y = _labeled(60)
    kw = dict(outer_rounds=4, inner_rounds=3, batch_a=16, batch_b=16, random_state=21)
    a = WSAUCRanker(**kw).fit(x, y)
    b = WSAUCRanker(**kw).fit(x, y)
    assert np.array_equal(a.model_.params, b.model_.params)
