from __future__ import annotations

import pytest

from heytica.catalog import (
    Catalog,
    algebras_up_to,
    algebras_with_at_most,
    embeddings_between,
    enumerate_posets,
)
from heytica.errors import FormatError, SizeError
from heytica.heyting import B4, C3, TWO, HAlg
from heytica.poset import canonical_form, count_upsets

from oracles import heyting_embeddings_brute, poset_classes


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 5), (4, 16), (5, 63)])
def test_counts(n, count):
    assert len(enumerate_posets(n)) == count == poset_classes(n)


def test_size_bound():
    with pytest.raises(SizeError):
        enumerate_posets(0)
    with pytest.raises(SizeError):
        enumerate_posets(8)


def test_two_embeds_once_everywhere():
    for h in algebras_up_to(3):
        assert len(embeddings_between(TWO, h)) == 1


def test_c3_into_c3_only_identity():
    assert len(embeddings_between(C3, C3)) == 1


def test_dual_search_matches_direct_search():
    algs = algebras_up_to(3)
    for a in algs:
        for b in algs:
            dual = {tuple(e(x) for x in a.elements) for e in embeddings_between(a, b)}
            assert dual == heyting_embeddings_brute(a, b)


def test_c3_into_grid_matches_direct_search():
    from heytica.amalgam import Diagram, superamalgamate
    from heytica.heyting import Hom
    from heytica.poset import PMorphism

    e = Hom(TWO, C3, PMorphism(C3.dual, TWO.dual, (0, 0)))
    grid = superamalgamate(Diagram.of(e, e)).result
    assert grid.size() == 6
    dual = {tuple(f(x) for x in C3.elements) for f in embeddings_between(C3, grid)}
    assert dual == heyting_embeddings_brute(C3, grid)


def test_small_algebras_by_element_count():
    algs = algebras_with_at_most(6)
    sizes = sorted(h.size() for h in algs)
    # 2, 3, 4 (chain), 4 (square), 5 x 3, 6 x 4 ... every size appears
    assert sizes[:2] == [2, 3]
    assert all(count_upsets(h.dual) <= 6 for h in algs)
    codes = [canonical_form(h.dual) for h in algs]
    assert len(set(codes)) == len(codes)


def test_save_load_round_trip(tmp_path):
    cat = Catalog.build(5)
    path = tmp_path / "cat.txt"
    cat.save(path)
    again = Catalog.load(path)
    assert again.counts() == [1, 2, 5, 16, 63]
    path2 = tmp_path / "cat2.txt"
    again.save(path2)
    assert path.read_bytes() == path2.read_bytes()
    assert b"\r" not in path.read_bytes()


def test_truncated_file_reports_line(tmp_path):
    text = Catalog.build(3).dumps()
    lines = text.splitlines()
    lines[4] = lines[4][: len(lines[4]) // 2] + ";x"
    with pytest.raises(FormatError) as exc:
        Catalog.loads("\n".join(lines) + "\n")
    assert exc.value.line == 5


def test_duplicate_class_rejected():
    text = Catalog.build(2).dumps()
    first = text.splitlines()[0]
    with pytest.raises(FormatError):
        Catalog.loads(text + first + "\n")


def test_algebras_are_materialized_lazily():
    h = algebras_up_to(3)[0]
    assert isinstance(h, HAlg)
    assert B4.size() == 4
