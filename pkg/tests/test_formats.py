import hashlib

import pytest

from rbox.errors import FormatError
from rbox.formats import (
    dumps_hg,
    dumps_rbox,
    loads_hg,
    loads_rbox,
    read_rbox,
    write_rbox,
)
from rbox.relation import Relation

from conftest import random_relation

TRIPLE = Relation.from_tuples((2, 2), [(0, 0), (0, 1), (1, 0)])


class TestRboxRoundTrip:
    def test_triple(self):
        text = dumps_rbox(TRIPLE)
        assert text == "RBOX 1\n2 2 2 3\n0 0\n0 1\n1 0\n"
        assert loads_rbox(text) == TRIPLE

    def test_empty_relation(self):
        rel = Relation((3, 4, 5), ())
        assert loads_rbox(dumps_rbox(rel)) == rel

    def test_hash_stable_round_trip(self):
        for seed in range(20):
            rel = random_relation(seed, (4, 3, 2), 0.5)
            text = dumps_rbox(rel)
            again = dumps_rbox(loads_rbox(text))
            assert hashlib.sha256(text.encode()).hexdigest() == hashlib.sha256(again.encode()).hexdigest()

    def test_file_round_trip(self, tmp_path):
        rel = random_relation(3, (5, 5), 0.4)
        path = tmp_path / "x.rbox"
        write_rbox(rel, path)
        assert read_rbox(path) == rel


class TestRboxErrors:
    def test_bad_header(self):
        with pytest.raises(FormatError, match=":1:"):
            loads_rbox("RBOX 2\n1 2 0\n")

    def test_bad_size_line(self):
        with pytest.raises(FormatError, match=":2:"):
            loads_rbox("RBOX 1\n2 2 2\n")

    def test_out_of_order(self):
        with pytest.raises(FormatError, match=":4: tuples not in lexicographic order"):
            loads_rbox("RBOX 1\n2 2 2 2\n1 0\n0 0\n")

    def test_duplicate(self):
        with pytest.raises(FormatError, match=":4: duplicate"):
            loads_rbox("RBOX 1\n2 2 2 2\n0 0\n0 0\n")

    def test_out_of_bounds(self):
        with pytest.raises(FormatError, match=":3: index 2 out of bounds"):
            loads_rbox("RBOX 1\n2 2 2 1\n0 2\n")

    def test_count_mismatch(self):
        with pytest.raises(FormatError, match="size line says 2"):
            loads_rbox("RBOX 1\n2 2 2 2\n0 0\n")

    def test_non_integer(self):
        with pytest.raises(FormatError, match=":3: not an integer row"):
            loads_rbox("RBOX 1\n2 2 2 1\n0 x\n")

    def test_wrong_arity_row(self):
        with pytest.raises(FormatError, match=":3: row has 3 fields"):
            loads_rbox("RBOX 1\n2 2 2 1\n0 0 0\n")


class TestHg:
    def test_round_trip(self):
        edges = ((0, 1, 2), (0, 1, 3), (1, 2, 3))
        text = dumps_hg(edges, 4, 3)
        got_edges, n, r = loads_hg(text)
        assert got_edges == edges and n == 4 and r == 3

    def test_not_increasing(self):
        with pytest.raises(FormatError, match="strictly increasing"):
            loads_hg("HG 1\n3 4 1\n0 2 1\n")

    def test_duplicate_edge(self):
        with pytest.raises(FormatError, match="duplicate edge"):
            loads_hg("HG 1\n3 4 2\n0 1 2\n0 1 2\n")

    def test_vertex_out_of_range(self):
        with pytest.raises(FormatError, match="out of range"):
            loads_hg("HG 1\n3 4 1\n0 1 9\n")

    def test_bad_header(self):
        with pytest.raises(FormatError, match=":1:"):
            loads_hg("HGX\n3 4 0\n")
