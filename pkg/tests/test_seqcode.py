import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crrarith import seqcode as sq
from crrarith.errors import Malformed
from crrarith.natnum import bitlen

element = st.integers(min_value=0, max_value=1 << 200)


def test_encode_examples():
    assert sq.encode([]) == sq.SeqCode(0, 0)
    assert sq.encode([5, 1]) == sq.SeqCode(227, 2)
    assert sq.encode([0, 0, 0]) == sq.SeqCode(21, 3)


def test_decode_examples():
    assert sq.decode(sq.SeqCode(0, 0)) == []
    assert sq.decode(sq.SeqCode(227, 2)) == [5, 1]
    assert sq.decode(sq.SeqCode(21, 3)) == [0, 0, 0]


def test_trailing_zero_elements():
    for items in ([5, 0], [1, 0, 0], [0, 5], [0], [0, 0, 7, 0]):
        assert sq.decode(sq.encode(items)) == items


@given(st.lists(element, max_size=12))
@settings(max_examples=300, deadline=None)
def test_round_trip(items):
    assert sq.decode(sq.encode(items)) == items


@given(st.lists(element, max_size=12))
@settings(max_examples=300, deadline=None)
def test_size_bound(items):
    sc = sq.encode(items)
    assert bitlen(sc.code) <= 2 * sum(max(1, bitlen(x)) for x in items)


def test_malformed():
    with pytest.raises(Malformed):
        sq.decode(sq.SeqCode(5, 0))  # nonempty code, zero length
    with pytest.raises(Malformed):
        sq.decode(sq.SeqCode(2, 1))  # payload only, no ruler
    with pytest.raises(Malformed):
        sq.decode(sq.SeqCode(0b100, 1))  # ruler does not start at 0
    with pytest.raises(Malformed):
        sq.decode(sq.SeqCode(227, 3))  # declared length disagrees with ruler


def test_bytes_golden():
    data = sq.to_bytes(sq.encode([5, 1]))
    assert data == b"CRRSEQ1\n" + (2).to_bytes(8, "little") + (1).to_bytes(4, "little") + b"\xe3"
    assert sq.from_bytes(data) == sq.SeqCode(227, 2)
    empty = sq.to_bytes(sq.encode([]))
    assert empty == b"CRRSEQ1\n" + bytes(8) + bytes(4)


def test_bytes_malformed():
    with pytest.raises(Malformed):
        sq.from_bytes(b"WRONGMAGIC")
    ok = sq.to_bytes(sq.encode([5, 1]))
    with pytest.raises(Malformed):
        sq.from_bytes(ok[:-1])


def test_file_round_trip(tmp_path, rng):
    items = [rng.getrandbits(rng.randrange(0, 128)) for _ in range(9)]
    path = tmp_path / "seq.bin"
    sq.write_file(path, items)
    assert sq.read_file(path) == items
