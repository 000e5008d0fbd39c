from pathlib import Path

import numpy as np
import pytest

from lazard.crossedmod import check_axioms, crossed_zoo, exp_crossed
from lazard.io import (
    MalformedInput,
    crossed_from_doc,
    dumps_crossed,
    dumps_ring,
    dumps_triple,
    load_object,
    loads,
    read,
    ring_from_doc,
)
from lazard.liering import NilLieRing, abelian, free_nilpotent, heisenberg
from lazard.triples import GroupTriple, LieTriple, exp_triple, log_triple, triple_zoo

DATA = Path(__file__).resolve().parents[1] / "data"

RING = """[ring]
p = 5
basis = ["x", "y", "z"]
orders = [5, 5, 5]

[brackets]
"x,y" = { z = 1 }
"""


@pytest.mark.parametrize("L", [heisenberg(5), abelian(5, (1, 2)), free_nilpotent(2, 3, 5), heisenberg(7, 2)],
                         ids=["heis5", "ab12", "free23", "heis7e2"])
def test_ring_round_trip(L):
    text = dumps_ring(L)
    assert ring_from_doc(loads(text)) == L
    assert dumps_ring(ring_from_doc(loads(text))) == text


@pytest.mark.parametrize("T", triple_zoo((5,)), ids=lambda T: T.name)
def test_triple_round_trip(T):
    text = dumps_triple(T)
    back = load_object(loads(text))
    assert isinstance(back, LieTriple) and back == T


@pytest.mark.parametrize("X", crossed_zoo(5), ids=lambda X: X.name)
def test_crossed_round_trip(X):
    text = dumps_crossed(X)
    assert crossed_from_doc(loads(text)) == X


def test_group_side_files_agree_with_exp():
    lie = crossed_from_doc(read(DATA / "crossed_heis_center.toml")[0])
    grp = crossed_from_doc(read(DATA / "crossed_heis_center_group.toml")[0])
    assert check_axioms(grp).ok
    assert grp == exp_crossed(lie)


def test_group_side_triple():
    T = load_object(read(DATA / "heis_jordan5.toml")[0])
    doc = loads(dumps_triple(T).replace("[module]", '[module]\nside = "group"').replace("x = [[0, 1], [0, 0]]", "x = [[1, 1], [0, 1]]"))
    G = load_object(doc)
    assert isinstance(G, GroupTriple)
    # phi(exp x) = 1 + E_12 is exp of the nilpotent psi(x) = E_12
    assert log_triple(G) == T and exp_triple(T) == G


@pytest.mark.parametrize("path", sorted(DATA.glob("*.toml")), ids=lambda p: p.name)
def test_shipped_files_load(path):
    doc, raw = read(path)
    obj = crossed_from_doc(doc) if "crossed" in doc else load_object(doc)
    assert obj is not None and raw


def test_antisymmetry_filled_in():
    L = ring_from_doc(loads(RING))
    assert np.array_equal(L.bracket([0, 1, 0], [1, 0, 0]), [0, 0, 4])


BAD = {
    "toml": "[ring\np = 5",
    "no ring": "[other]\nx = 1",
    "order": RING.replace("[5, 5, 5]", "[5, 6, 5]"),
    "lengths": RING.replace("[5, 5, 5]", "[5, 5]"),
    "label": RING.replace('"x,y"', '"x,w"'),
    "twice": RING + '"x, y" = { z = 2 }\n',
    "antisym": RING + '"y,x" = { z = 1 }\n',
    "jacobi": RING.replace('"x,y" = { z = 1 }', '"x,y" = { z = 1 }\n"y,z" = { x = 1 }'),
    "coef": RING.replace("z = 1", 'z = "one"'),
    "module order": RING + "[module]\norders = [7]\n",
    "action shape": RING + "[module]\norders = [5, 5]\n[action]\nx = [[0, 1]]\n",
    "action label": RING + "[module]\norders = [5]\n[action]\nw = [[0]]\n",
    "not a rep": RING + "[module]\norders = [5, 5]\n[action]\nx = [[0, 1], [0, 0]]\ny = [[0, 0], [1, 0]]\n",
    "side": RING + '[module]\norders = [5]\nside = "left"\n',
}


@pytest.mark.parametrize("key", sorted(BAD))
def test_malformed(key):
    with pytest.raises(MalformedInput):
        load_object(loads(BAD[key]))


def test_malformed_crossed():
    doc = read(DATA / "crossed_cyclic1.toml")[0]
    doc["crossed"]["mu"] = [[1, 2]]
    with pytest.raises(MalformedInput, match="mu must be"):
        crossed_from_doc(doc)
    doc = read(DATA / "crossed_cyclic1.toml")[0]
    doc["g1"]["ring"]["p"] = 7
    doc["g1"]["ring"]["orders"] = [7]
    with pytest.raises(MalformedInput, match="different primes"):
        crossed_from_doc(doc)


def test_non_utf8(tmp_path):
    f = tmp_path / "bad.toml"
    f.write_bytes(b"\xff\xfe[ring]")
    with pytest.raises(MalformedInput, match="UTF-8"):
        read(f)


def test_empty_ring_allowed():
    L = ring_from_doc(loads("[ring]\np = 5\nbasis = []\norders = []\n"))
    assert isinstance(L, NilLieRing) and L.rank == 0
