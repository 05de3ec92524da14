import math

import sftlab


def test_census():
    c = sftlab.vertex_census_counts()
    assert c["total"] == 248
    assert c["center_dot"] == 90
    assert c["center_cross"] == 90
    assert c["center_straight"] == 36
    assert c["center_corner"] == 32


def test_constants():
    assert abs(sftlab.beta_star() - math.log(1 + math.sqrt(2))) < 1e-12
    for q in (2, 3, 4):
        assert abs(sftlab.beta_critical_potts(q) - math.log(math.sqrt(q) + 1) / 2) < 1e-12
        assert abs(sftlab.ell_critical(q) - (math.sqrt(q) + 1)) < 1e-12
    assert abs(sftlab.beta_n(3, 0.5) - 2 * math.log(3)) < 1e-12


def test_loops_and_bound():
    count, bound = sftlab.encircling_loops(8)
    assert count == 2
    assert count <= bound
    assert sftlab.trace_m_alpha_pow(4) == 35  # (1+r2)^4 + (1-r2)^4 + 1
    assert sftlab.spectrum_check() < 1e-12
    assert sftlab.peierls_bound(2.0, 12) < sftlab.peierls_bound(2.0, 8)


def test_htop_identity():
    rows = sftlab.htop_identity(2, 2, [2, 3])
    for _, lifted, base in rows:
        assert abs(lifted - base) < 1e-10


def test_verify_roundtrip():
    code, csv = sftlab.verify_potts("lemma", 2, 2, cases=3, seed=7)
    assert code == 0
    assert '"pass":true' in csv


def test_cli_census():
    code, out, err = sftlab.run_cli(["census", "--model", "vertex"])
    assert code == 0
    assert "allowed_crosses,248,248,yes" in out
