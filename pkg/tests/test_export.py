import numpy as np
import pytest

from photonwave import export
from photonwave.export import SnapshotError


def test_snapshot_survives_disk(tmp_path, complex_state):
    later = complex_state.with_psi(complex_state.psi, 1.25)
    path = export.write_snapshot(later, tmp_path / "a.snap")
    restored = export.read_snapshot(path)
    assert restored.box == complex_state.box
    assert restored.time == 1.25
    assert np.array_equal(restored.psi, complex_state.psi)


def test_snapshot_layout_is_point_major(complex_state):
    content = export.snapshot_bytes(complex_state)
    offset = len(export.SNAPSHOT_MAGIC) + export.HEADER_DTYPE.itemsize
    first = np.frombuffer(content, dtype="<f8", count=12, offset=offset)
    expected = complex_state.psi[:, 0, 0, 0]
    np.testing.assert_array_equal(first[0::2], expected.real)
    np.testing.assert_array_equal(first[1::2], expected.imag)


def test_snapshot_validation(complex_state):
    content = export.snapshot_bytes(complex_state)
    assert export.validate_snapshot(content) == (True, None)
    ok, message = export.validate_snapshot(b"NOTASNAP" + content[8:])
    assert not ok and "snapshot" in message
    ok, message = export.validate_snapshot(content[:-8])
    assert not ok and "bytes" in message


def test_truncated_header_is_rejected():
    with pytest.raises(SnapshotError):
        export.parse_snapshot(export.SNAPSHOT_MAGIC + b"\x00" * 4)


def test_table_round_trip(tmp_path):
    path = export.write_table(tmp_path / "t.csv", ("n", "value"), [(1, 0.1), (2, 1 / 3)])
    rows = export.read_table(path)
    assert [row["n"] for row in rows] == ["1", "2"]
    assert float(rows[1]["value"]) == 1 / 3
    assert path.read_text().splitlines()[0] == "n,value"
