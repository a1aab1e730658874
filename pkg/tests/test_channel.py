import json

import numpy as np
import pytest
from scipy.optimize import linprog

from conftest import random_joint
from leakcap import AuxChain, ChannelError, Dmbc, JointPmf, OuterChain, blackwell, classify, entropy, induce_joint
from leakcap.channel import from_marginals, load_channel, output_map, random_channel, save_channel
from leakcap.pmf import binary_entropy, conditional_entropy, mutual_information


def degradable_by_lp(c: Dmbc) -> bool:
    """Oracle: is there a stochastic T with P(y1,y2|x) = P(y1|x) T(y2|y1)? (LP feasibility)"""
    n1, n2 = c.y1_size, c.y2_size
    p1 = c.y1_kernel()
    rows, rhs = [], []
    for x in range(c.x_size):
        for a in range(n1):
            for b in range(n2):
                r = np.zeros(n1 * n2)
                r[a * n2 + b] = p1[x, a]
                rows.append(r)
                rhs.append(c.kernel[x, a, b])
    for a in range(n1):
        r = np.zeros(n1 * n2)
        r[a * n2:(a + 1) * n2] = 1.0
        rows.append(r)
        rhs.append(1.0)
    res = linprog(np.zeros(n1 * n2), A_eq=np.array(rows), b_eq=np.array(rhs), bounds=[(0, None)] * (n1 * n2),
                  method="highs")
    return res.status == 0


def test_blackwell_is_deterministic():
    cls = classify(blackwell())
    assert cls.deterministic and cls.semi_deterministic


def test_validation_names_row():
    k = np.array(blackwell().kernel)
    k[1, 1, 0] = 0.9
    with pytest.raises(ChannelError, match="x=1"):
        Dmbc(k)
    k = np.array(blackwell().kernel)
    k[0, 0, 0], k[0, 0, 1] = -0.1, 1.1
    with pytest.raises(ChannelError, match="negative"):
        Dmbc(k)


def test_degraded_construction_is_detected():
    q1 = np.eye(2)
    t = np.array([[0.9, 0.1], [0.1, 0.9]])
    c = from_marginals(q1, t)
    assert classify(c).physically_degraded
    assert not classify(c).deterministic


def test_classify_matches_lp_oracle():
    rng = np.random.default_rng(11)
    for kind in ("general", "sd", "det"):
        for _ in range(30):
            c = random_channel(rng, int(rng.integers(2, 4)), 2, int(rng.integers(2, 4)), kind=kind)
            assert classify(c).physically_degraded == degradable_by_lp(c)
    noisy = random_channel(np.random.default_rng(2), 3, 2, 2)
    cls = classify(noisy)
    assert not (cls.deterministic or cls.semi_deterministic or cls.physically_degraded)


def test_induce_joint_examples():
    c = blackwell()
    point = JointPmf([("X", 3)], [0, 1, 0])
    j = induce_joint(point, c)
    np.testing.assert_allclose(j.marginal(["Y1", "Y2"]), c.kernel[1])
    u = JointPmf([("X", 3)], np.full(3, 1 / 3))
    j = induce_joint(u, c)
    assert j.marginal(["Y1"])[1] == pytest.approx(1 / 3, abs=1e-12)


def test_blackwell_entropies():
    c = blackwell()
    for a, b in [(1 / 3, 1 / 3), (0.2, 0.5), (0.6, 0.1), (0.0, 0.5)]:
        j = induce_joint(JointPmf([("X", 3)], [a, b, 1 - a - b]), c)
        assert entropy(j, ["Y1"]) == pytest.approx(binary_entropy(b), abs=1e-12)
        assert entropy(j, ["Y2"]) == pytest.approx(binary_entropy(a), abs=1e-12)
        chain = binary_entropy(a) + (1 - a) * binary_entropy(b / (1 - a))
        assert entropy(j, ["Y1", "Y2"]) == pytest.approx(chain, abs=1e-12)


def test_blackwell_mutual_information_oracle():
    j = induce_joint(JointPmf([("X", 3)], np.full(3, 1 / 3)), blackwell())
    mi = mutual_information(j, ["Y1"], ["Y2"])
    assert mi == pytest.approx(0.251630, abs=1e-6)
    assert mi == pytest.approx(binary_entropy(1 / 3) - (2 / 3) * binary_entropy(0.5), abs=1e-12)


def test_induce_joint_is_valid_and_consistent():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        nx = int(rng.integers(2, 4))
        c = random_channel(rng, nx, int(rng.integers(2, 4)), int(rng.integers(2, 4)))
        aux = random_joint(rng, ("U0", "U1", "U2", "X"), (2, 2, 2, nx))
        j = induce_joint(AuxChain(aux), c)
        assert j.tensor.min() >= 0 and abs(j.tensor.sum() - 1) < 1e-12
        np.testing.assert_allclose(j.marginal(aux.names), aux.tensor, atol=1e-12)


def test_deterministic_channel_has_no_output_noise():
    rng = np.random.default_rng(8)
    for _ in range(50):
        c = random_channel(rng, 3, 2, 3, kind="det")
        j = induce_joint(random_joint(rng, ("X",), (3,)), c)
        assert conditional_entropy(j, ["Y1", "Y2"], ["X"]) == pytest.approx(0.0, abs=1e-9)


def test_induce_joint_size_mismatch():
    with pytest.raises(ValueError, match="size"):
        induce_joint(JointPmf([("X", 2)], [0.5, 0.5]), blackwell())


def test_outer_chain_rejects_markov_violation():
    rng = np.random.default_rng(0)
    bad = random_joint(rng, ("W", "U", "V", "X"), (2, 2, 2, 3))
    with pytest.raises(ValueError, match="Markov"):
        OuterChain(bad)
    # X drawn from (U, V) only
    puv = rng.dirichlet(np.ones(8)).reshape(2, 2, 2)
    px = rng.dirichlet(np.ones(3), size=(2, 2))
    OuterChain.from_tensor(puv[..., None] * px[None])


def test_output_map():
    c = blackwell()
    assert output_map(c, 1).tolist() == [0, 1, 0]
    assert output_map(c, 2).tolist() == [1, 0, 0]
    with pytest.raises(ChannelError):
        output_map(random_channel(np.random.default_rng(1)), 1)


def test_channel_file_round_trip(tmp_path):
    p = tmp_path / "c.json"
    save_channel(blackwell(), p)
    np.testing.assert_array_equal(load_channel(p).kernel, blackwell().kernel)
    data = json.loads(p.read_text())
    data["kernel"][0] = 0.5
    p.write_text(json.dumps(data))
    with pytest.raises(ChannelError, match="kernel"):
        load_channel(p)
    p.write_text("{not json")
    with pytest.raises(ChannelError, match="invalid JSON"):
        load_channel(p)
