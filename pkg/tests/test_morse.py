import pytest

from squarebraid.errors import DomainError
from squarebraid.grid import build_grid, enumerate_cells
from squarebraid.homology import homology
from squarebraid.morse import (DEFAULT_TREE, TREE_CANDIDATES, build_tree, gradient_field, morse_homology,
                               predict_critical, select_tree)

PAIRS = [(3, 3), (4, 3), (5, 3), (6, 3), (4, 4), (5, 4), (5, 5)]


def test_comb_tree_deletes_upper_horizontals():
    g = build_grid(4, 3)
    t = build_tree(g, "comb", "ll")
    assert len(t.deleted) == 6
    assert all(a[1] == b[1] and a[1] >= 2 for a, b in t.deleted)


@pytest.mark.parametrize("kind,corner", TREE_CANDIDATES)
def test_every_candidate_spans(kind, corner):
    g = build_grid(5, 4)
    t = build_tree(g, kind, corner)
    assert len(t.parent) == 19 and len(t.deleted) == len(g.edges) - 19


def test_tree_rejects_transposed_grid():
    with pytest.raises(DomainError):
        build_tree(build_grid(3, 4))


@pytest.mark.parametrize("p,q", PAIRS)
def test_default_tree_census_and_morse_homology(p, q):
    g = build_grid(p, q)
    c = enumerate_cells(g, p * q - 2)
    f = gradient_field(c, build_tree(g, *DEFAULT_TREE))
    assert all(f.checks.values())
    assert f.census == predict_critical(p, q)
    assert morse_homology(f, c) == homology(c)


def test_comb_census_mismatch_is_reported():
    tree, attempts = select_tree(3, 3)
    comb = attempts[0]
    assert (comb.kind, comb.corner) == ("comb", "ll")
    assert comb.census == (6, 19, 9) and not comb.matches
    assert tree is not None and (tree.kind, attempts[-1].corner) == DEFAULT_TREE


@pytest.mark.parametrize("kind", ["comb", "row_comb", "col_snake"])
def test_other_trees_still_give_valid_fields(kind):
    g = build_grid(4, 3)
    c = enumerate_cells(g, 10)
    f = gradient_field(c, build_tree(g, kind, "ll"))
    assert all(f.checks.values())
    assert morse_homology(f, c) == homology(c)


@pytest.mark.parametrize("p,q", [(3, 3), (4, 3), (4, 4)])
def test_wedge_complex_field(p, q):
    g = build_grid(p, q)
    c = enumerate_cells(g, p * q - 1)
    f = gradient_field(c, build_tree(g))
    assert f.census == (1, (p - 1) * (q - 1))


def test_square_ingredients_refused():
    g = build_grid(3, 3)
    with pytest.raises(DomainError):
        gradient_field(enumerate_cells(g, 4), build_tree(g))
