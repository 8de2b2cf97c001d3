import itertools

import numpy as np
import pytest

from corpus import CORPUS

from wavecls.manifold import (decide_equivalence, estimate_dimension,
                              export_csv, sample_cloud)


P1P2 = [n for n, (_, _, t) in CORPUS.items() if t in ("P1", "P2")]
P3 = [n for n, (_, _, t) in CORPUS.items() if t == "P3"]


def test_cloud_shapes_and_guards(reports):
    for name in P1P2:
        c = sample_cloud(reports[name], n=150, seed=2)
        assert len(c.base) == 150
        assert c.base.shape[1] == 4
        assert np.isfinite(c.values).all()
        assert c.var_names == ("x", "u", "u_x", "v_x")
        assert c.attempted >= 150


def test_dimension_bounds(reports):
    for name in P1P2:
        c = sample_cloud(reports[name], n=150, seed=2)
        rho = estimate_dimension(c, reports[name])
        assert 1 <= rho <= 4, (name, rho)
    for name in P3:
        c = sample_cloud(reports[name], n=150, seed=2)
        rho = estimate_dimension(c, reports[name])
        assert rho <= 1, (name, rho)


def test_symmetry_dimension_note_consistent(reports):
    for name in P1P2:
        c = sample_cloud(reports[name], n=150, seed=2)
        rho = estimate_dimension(c, reports[name])
        assert 6 - rho >= 2, name


def test_no_cloud_for_decided_subclasses(reports):
    with pytest.raises(ValueError):
        sample_cloud(reports["p4_exp"])
    with pytest.raises(ValueError):
        sample_cloud(reports["p5_unit"])


def test_csv_export(tmp_path, reports):
    c = sample_cloud(reports["p2_expxu"], n=60, seed=0)
    path = tmp_path / "cloud.csv"
    export_csv(c, str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "x,u,u_x,v_x,L1,L2,L3,L4"
    assert len(lines) == 61
    row = [float(t) for t in lines[1].split(",")]
    assert len(row) == 8


def test_cross_tag_pairs_never_equivalent(reports):
    names = list(CORPUS)
    for a, b in itertools.combinations(names, 2):
        if CORPUS[a][2] != CORPUS[b][2]:
            v = decide_equivalence(reports[a], reports[b])
            assert v.status == "Inequivalent", (a, b)


def test_decision_symmetric(reports):
    pairs = [("p4_exp", "p4_sq"), ("p3_rat", "p3_shift"),
             ("p5_unit", "p5_double"), ("p1_exp", "p1_ux"),
             ("p2_expxu", "p2_swapped"), ("p4_cube", "p4_invcube")]
    for a, b in pairs:
        ab = decide_equivalence(reports[a], reports[b], n=200)
        ba = decide_equivalence(reports[b], reports[a], n=200)
        assert ab.status == ba.status, (a, b)


def test_p1_p2_positive_overlap_is_capped(reports):
    for name in ("p1_exp", "p2_expxu"):
        v = decide_equivalence(reports[name], reports[name], n=200)
        assert v.status == "ConsistentUnknown", name


def test_contact_invariance_of_p3_curve(reports):
    """A pure translation in u is a contact transformation; it must leave
    the classifying curve, and hence the verdict, unchanged."""
    v = decide_equivalence(reports["p3_rat"], reports["p3_shift"])
    assert v.status == "Equivalent"
    w = decide_equivalence(reports["p3_rat"], reports["p3_quartic"])
    assert w.status == "Inequivalent"
