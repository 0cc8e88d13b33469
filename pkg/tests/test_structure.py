"""Submodule closure, simplicity evidence, and the subquotient inventory."""

import pytest

from weylmod.derham import partial_span, pi_image, pi_kernel
from weylmod.errors import ArgumentError
from weylmod.indices import TruncationBox
from weylmod.structure import (
    ClosureEngine,
    GeneratorSet,
    closure,
    evidence_simplicity,
    subquotient_inventory,
)
from weylmod.weightmod import (
    FVector,
    WeightModuleP,
    make_hw_module,
    make_wedge_module,
    sn_act,
)


def test_default_generator_set():
    gens = GeneratorSet.default(2)
    assert len(gens) > 0
    names = gens.names()
    assert "L[1,2;(0,0)]" in names
    # default shifts stay within one step per coordinate
    for g in gens.members:
        assert all(-1 <= s <= 1 for s in g.shift)


def test_closure_of_constants_is_a_line():
    n = 2
    A = WeightModuleP.polynomial(n)
    triv = make_wedge_module(n, 0)
    box = TruncationBox((0, 0), (5, 5), margin=2)
    gens = GeneratorSet.default(n)
    report = closure([FVector.basis(A, triv, (0, 0), 0)], gens, box)
    assert report.classification == "trivial-line"
    assert report.dims[(0, 0)] == 1
    assert report.total_dim() == 1


def test_closure_from_t1_fills_inner_box():
    n = 2
    A = WeightModuleP.polynomial(n)
    triv = make_wedge_module(n, 0)
    box = TruncationBox((0, 0), (5, 5), margin=2)
    gens = GeneratorSet.default(n)
    report = closure([FVector.basis(A, triv, (1, 0), 0)], gens, box)
    assert report.classification == "full-in-inner-box"
    # the closure walks down to the constants as well
    assert report.dims[(0, 0)] == 1


def test_closure_in_twisted_module_misses_corner():
    n = 2
    AF = WeightModuleP.twisted(n)
    triv = make_wedge_module(n, 0)
    box = TruncationBox((-6, -6), (-1, -1), margin=2)
    gens = GeneratorSet.default(n)
    report = closure([FVector.basis(AF, triv, (-2, -1), 0)], gens, box)
    delta = partial_span(AF, box)
    for w in box.keys():
        assert report.dims[w] == delta.dim_at(w), w
    assert report.dims[(-1, -1)] == 0


def test_closure_rejects_empty_seed_list():
    box = TruncationBox((0, 0), (5, 5), margin=2)
    with pytest.raises(ArgumentError):
        closure([], GeneratorSet.default(2), box)


def test_closure_monotone_and_idempotent():
    n = 2
    A = WeightModuleP.polynomial(n)
    triv = make_wedge_module(n, 0)
    box = TruncationBox((0, 0), (4, 4), margin=1)
    gens = GeneratorSet.default(n)
    engine = ClosureEngine(A, triv, gens, box)
    small = closure([FVector.basis(A, triv, (2, 2), 0)], gens, box, engine=engine)
    seeds = [FVector.basis(A, triv, (2, 2), 0), FVector.basis(A, triv, (1, 0), 0)]
    big = closure(seeds, gens, box, engine=engine)
    for w in box.keys():
        assert small.dims[w] <= big.dims[w]
    # idempotence: reclosing from a spanning set of the closure changes nothing
    again = closure(seeds, gens, box, engine=engine)
    assert again.dims == big.dims


def test_boundary_soundness_under_box_shrink():
    n = 2
    A = WeightModuleP.polynomial(n)
    triv = make_wedge_module(n, 0)
    gens = GeneratorSet.default(n)
    big_box = TruncationBox((0, 0), (6, 6), margin=2)
    small_box = TruncationBox((0, 0), (5, 5), margin=2)
    seed_key = (2, 1)
    big = closure([FVector.basis(A, triv, seed_key, 0)], gens, big_box)
    small = closure([FVector.basis(A, triv, seed_key, 0)], gens, small_box)
    for w in small_box.keys():
        assert small.dims[w] <= big.dims[w]


def test_submodule_certificates():
    # canonical subspaces are closed under every in-box generator application
    n = 2
    A = WeightModuleP.polynomial(n)
    box = TruncationBox((0, 0), (5, 5), margin=2)
    gens = GeneratorSet.default(n)
    image = pi_image(A, 1, box)
    kernel = pi_kernel(A, 1, box)
    delta = partial_span(A, box)
    for subspace in (image, kernel, delta):
        for w in box.keys():
            for vec in subspace.basis_vectors(w):
                for g in gens.members:
                    target = tuple(a + b for a, b in zip(w, g.shift))
                    if not box.contains(target):
                        continue
                    out = sn_act(g.field, vec)
                    if not out.is_zero():
                        assert subspace.contains(out), (w, g.name)


def test_closure_stays_inside_image_submodule():
    # non-simplicity witness: a seed inside the de Rham image never leaves it
    n = 2
    A = WeightModuleP.polynomial(n)
    box = TruncationBox((0, 0), (5, 5), margin=2)
    gens = GeneratorSet.default(n)
    image = pi_image(A, 1, box)
    seed = image.basis_vectors((2, 2))[0]
    report = closure([seed], gens, box)
    for w in box.keys():
        assert report.dims[w] <= image.dim_at(w)
    assert report.classification == "proper"


def test_evidence_simplicity_full_module_fails_for_wedge1():
    n = 2
    A = WeightModuleP.polynomial(n)
    wedge1 = make_wedge_module(n, 1)
    box = TruncationBox((0, 0), (5, 5), margin=2)
    report = evidence_simplicity(A, wedge1, "F", box)
    assert not report["pass"]
    failing = [s for s in report["seeds"] if not s["pass"]]
    assert failing
    # the witnesses are exactly the de Rham image seeds
    assert all(s["kind"] == "submodule-row" for s in failing)


def test_evidence_simplicity_adjoint_module_passes():
    n = 2
    A = WeightModuleP.polynomial(n)
    M = make_hw_module((2,), n)
    box = TruncationBox((0, 0), (5, 5), margin=2)
    report = evidence_simplicity(A, M, "F", box)
    assert report["pass"], [s for s in report["seeds"] if not s["pass"]][:3]


def test_evidence_simplicity_delta_twisted():
    n = 2
    AF = WeightModuleP.twisted(n)
    box = TruncationBox((-6, -6), (-1, -1), margin=2)
    report = evidence_simplicity(AF, None, "deltaP", box)
    assert report["pass"]


def test_evidence_simplicity_quotient_of_wedge1():
    # F(A_2, wedge^1)/kernel is the simple quotient picture at n = 2
    n = 2
    A = WeightModuleP.polynomial(n)
    box = TruncationBox((0, 0), (5, 5), margin=2)
    report = evidence_simplicity(A, None, "quotient", box, r=1)
    assert report["pass"]


def test_inventory_A2_r0():
    A = WeightModuleP.polynomial(2)
    box = TruncationBox((0, 0), (4, 4))
    report = subquotient_inventory(A, 0, box)
    assert report["nontrivial"] == ["P/constants"]
    assert report["pass"]
    const = [l for l in report["layers"] if l["name"] == "constants"][0]
    assert const["totalDim"] == 1


def test_inventory_twisted_r0():
    AF = WeightModuleP.twisted(2)
    box = TruncationBox((-4, -4), (-1, -1))
    report = subquotient_inventory(AF, 0, box)
    assert report["nontrivial"] == ["deltaP"]
    assert report["pass"]
    gap = [l for l in report["layers"] if l["name"] == "P/deltaP"][0]
    assert gap["totalDim"] == 1 and gap["trivial"]


def test_inventory_laurent_r0_is_simple_picture():
    P = WeightModuleP.laurent(2)
    box = TruncationBox((-3, -3), (3, 3))
    report = subquotient_inventory(P, 0, box)
    # deltaP = P: a single nontrivial layer covering everything
    assert report["nontrivial"] == ["deltaP"]
    layers = {l["name"]: l for l in report["layers"]}
    assert "P/deltaP" not in layers
    assert report["pass"]


def test_inventory_A2_r1():
    A = WeightModuleP.polynomial(2)
    box = TruncationBox((0, 0), (4, 4))
    report = subquotient_inventory(A, 1, box)
    # both nontrivial layers are the P/constants picture (n = 2, r = n-1)
    assert report["nontrivial"] == ["P/constants", "P/constants (shifted)"]
    assert report["pass"]


def test_inventory_A3_r1():
    A = WeightModuleP.polynomial(3)
    box = TruncationBox((0, 0, 0), (3, 3, 3))
    report = subquotient_inventory(A, 1, box)
    assert report["nontrivial"] == ["P/constants", "image(2)"]
    assert report["pass"]


def test_inventory_A3_r2():
    A = WeightModuleP.polynomial(3)
    box = TruncationBox((0, 0, 0), (3, 3, 3))
    report = subquotient_inventory(A, 2, box)
    assert report["nontrivial"] == ["P/constants (shifted)", "image(2)"]
    assert report["pass"]
