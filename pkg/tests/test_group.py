import pytest

from parhom.errors import GroupTooLarge, InvalidCayleyTable, NotASubgroup
from parhom.group import check_subgroup, cyclic, dihedral, make_group, product, symmetric

ALL = [cyclic(1), cyclic(2), cyclic(3), cyclic(4), cyclic(6), dihedral(3), dihedral(4),
       symmetric(3), symmetric(4), product(cyclic(2), cyclic(2)),
       product(cyclic(2), cyclic(2), cyclic(2)), product(cyclic(2), symmetric(3))]


@pytest.mark.parametrize("G", ALL, ids=lambda G: G.label)
def test_group_axioms(G):
    for x in G.elements:
        assert G.mul(0, x) == x == G.mul(x, 0)
        assert G.mul(x, G.inv[x]) == 0 == G.mul(G.inv[x], x)
    if G.order <= 12:
        for a in G.elements:
            for b in G.elements:
                for c in G.elements:
                    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert len(set(G.names)) == G.order


def test_constructor_examples():
    C2 = make_group(("cyclic", 2))
    assert C2.order == 2 and C2.mul(1, 1) == 0
    S3 = make_group({"kind": "symmetric", "n": 3})
    assert S3.order == 6 and not S3.is_abelian()
    assert S3.names[0] == "123" and S3.names == ("123", "132", "213", "231", "312", "321")
    C2c = make_group(("product", ("cyclic", 2), ("cyclic", 2), ("cyclic", 2)))
    assert C2c.order == 8 and C2c.exponent() == 2
    assert cyclic(5).exponent() == 5
    assert product(cyclic(2), cyclic(3)).order == 6
    D3 = dihedral(3)
    assert D3.names == ("1", "r", "r^2", "s", "rs", "r^2s")
    r, s = 1, 3
    assert D3.prod(s, r, s) == D3.inv[r]
    assert cyclic(3).names == ("1", "g", "g^2")


def test_table_validation():
    with pytest.raises(InvalidCayleyTable):
        make_group(("table", [[0, 1], [1, 1]]))
    with pytest.raises(InvalidCayleyTable):
        make_group(("table", [[1, 0], [0, 1]]))
    # a Latin square with identity that is not associative
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(InvalidCayleyTable, match="associativity"):
        make_group(("table", bad))
    G = make_group({"kind": "table", "table": [[0, 1], [1, 0]], "names": ["e", "t"]})
    assert G.names == ("e", "t")
    with pytest.raises(GroupTooLarge):
        product(cyclic(5), cyclic(5))


def test_subgroups():
    S = check_subgroup(cyclic(4), [0, 2])
    assert S.index == 2 and S.coset_representatives() == [0, 1]
    assert S.as_group().order == 2 and S.as_group().mul(1, 1) == 0
    S3 = symmetric(3)
    T = check_subgroup(S3, [0, 1])
    assert T.order == 2
    with pytest.raises(NotASubgroup):
        check_subgroup(cyclic(4), [0, 1])
    with pytest.raises(NotASubgroup):
        check_subgroup(cyclic(4), [1, 3])
    A3 = check_subgroup(S3, [0, 3, 4])
    assert A3.as_group().is_abelian() and A3.index == 2
    for coset in A3.left_cosets():
        assert coset[0] == min(coset)
